"""Comparison of tangent analytic half-disks.

Given two series-backed half-disks with the same vanishing order mu and equal
(touching) or opposite (meeting) tangent vectors, produce the holomorphic
reparametrization psi(zeta) = zeta + O(zeta^2), the contact exponent nu > mu
and the remainder w with

    u2(+/-zeta) - u1(psi(zeta)) = zeta^nu * w(zeta),

where w(0) is orthogonal to the common tangent v0 (or w vanishes identically
and u2 is a reparametrization of u1).  The construction is the exact-series
recursion: as long as the leading remainder coefficient is parallel to v0 it
can be absorbed into psi by a monomial correction a*zeta^m with

    mu * a * v0 = (parallel part of w_k(0)),    m = nu_k - mu + 1,

which strictly increases the contact order, except for the final step that
strips a mixed coefficient's parallel part and leaves the orthogonal one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .normal_form import HalfDiskMap, normal_form
from .series import TruncatedSeries, _is_zero_scalar


class ContactBeyondTruncation(ValueError):
    """The recursion ran out of valid coefficients before terminating."""


@dataclass(frozen=True)
class ComparisonResult:
    psi: TruncatedSeries          # scalar, real coefficients, psi'(0) = 1
    nu: int | None                # None for reparametrizations
    w: TruncatedSeries            # dim 2, real coefficients
    kind: str                     # "touching" | "meeting" | "reparametrization"
    mu: int = 1
    sign: int = 1                 # parameter substitution: compare u2(sign*zeta)

    @property
    def w0(self):
        return self.w.coeffs[0]

    def residual(self, u1: HalfDiskMap, u2: HalfDiskMap) -> TruncatedSeries:
        """u2(sign*zeta) - u1(psi) - zeta^nu w; identically zero up to truncation."""
        s2 = u2.series if self.sign > 0 else _negate_parameter(u2.series)
        lhs = s2 - u1.series.compose(self.psi)
        if self.nu is not None:
            lhs = lhs - self.w.shift_up(self.nu).truncate(lhs.order)
        return lhs


def _negate_parameter(s: TruncatedSeries) -> TruncatedSeries:
    rows = tuple(tuple(x if k % 2 == 0 else -x for x in row)
                 for k, row in enumerate(s.coeffs))
    return TruncatedSeries(rows, s.order, s.dim, s.clipped)


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def compare(u1: HalfDiskMap, u2: HalfDiskMap) -> ComparisonResult:
    """Run the comparison recursion on two tangent series-backed half-disks."""
    if not (u1.is_series and u2.is_series):
        raise ValueError("comparison needs series-backed maps")
    n1, n2 = normal_form(u1), normal_form(u2)
    if n1.mu != n2.mu:
        raise ValueError(f"vanishing orders differ: {n1.mu} != {n2.mu}")
    mu = n1.mu
    v1, v2 = n1.v0, n2.v0
    same = all(not _nonzero(a - b, u1.series) for a, b in zip(v1, v2))
    opp = all(not _nonzero(a + b, u1.series) for a, b in zip(v1, v2))
    if not (same or opp):
        raise ValueError("tangent vectors are neither equal nor opposite; "
                         "normalize the pair first")
    kind = "touching" if same else "meeting"
    sign = 1 if same else -1
    s1 = u1.series
    s2 = u2.series if same else _negate_parameter(u2.series)
    order = min(s1.order, s2.order)
    exact = s1.exact and s2.exact

    psi = TruncatedSeries.variable(order=order, exact=exact)
    nu_prev = None

    def monomial_bump(a, m):
        if m > order:
            raise ContactBeyondTruncation("contact beyond truncation order")
        return TruncatedSeries.from_coeffs([(0,)] * m + [(a,)], order=order,
                                           exact=exact)

    while True:
        diff = s2 - s1.compose(psi)
        nu = diff.vanishing_order()
        if nu is None:
            return ComparisonResult(psi=psi, nu=None,
                                    w=TruncatedSeries.zero(2, order, exact),
                                    kind="reparametrization", mu=mu, sign=sign)
        if nu_prev is not None and nu <= nu_prev:
            raise ContactBeyondTruncation("contact order failed to increase")
        w = diff.shift_down(nu)
        w0 = w.coeffs[0]
        par = _dot(w0, v1) / _dot(v1, v1)
        perp = (w0[0] - par * v1[0], w0[1] - par * v1[1])
        if not _nonzero_pair(perp, diff):
            # w(0) parallel to v0: absorb into psi and repeat at higher order
            psi = psi + monomial_bump(par / mu, nu - mu + 1)
            nu_prev = nu
            continue
        if _nonzero_scalar(par, diff):
            # mixed leading coefficient: one last bump strips the parallel
            # part and leaves the orthogonal one at the same order
            psi = psi + monomial_bump(par / mu, nu - mu + 1)
            diff = s2 - s1.compose(psi)
            nu = diff.vanishing_order()
            w = diff.shift_down(nu)
        if nu <= mu:
            raise ValueError("contact exponent must exceed the vanishing order; "
                             "inputs are not a tangent pair in normalized form")
        if not (psi.is_real() and w.is_real()):
            raise AssertionError("reality of psi/w violated; inputs were not "
                                 "real-coefficient half-disks")
        return ComparisonResult(psi=psi, nu=nu, w=w, kind=kind, mu=mu,
                                sign=sign)


def _nonzero(x, ref: TruncatedSeries) -> bool:
    s = ref._scale() if not ref.exact else 0.0
    return not _is_zero_scalar(x, s)


def _nonzero_scalar(x, ref: TruncatedSeries) -> bool:
    return _nonzero(x, ref)


def _nonzero_pair(p, ref: TruncatedSeries) -> bool:
    return _nonzero(p[0], ref) or _nonzero(p[1], ref)

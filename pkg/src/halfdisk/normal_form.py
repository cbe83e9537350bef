"""Vanishing order, tangent vector and polynomial part of attached half-disks.

A series-backed half-disk map u: (upper half-disk, edge, 0) -> (C^2, R^2, 0)
with real coefficients decomposes as

    u(zeta) = zeta^mu * P(zeta) + zeta^(2mu-1) * v(zeta)

with mu the vanishing order, P a real-coefficient polynomial jet of degree
<= mu-1 with P(0) = v0 != 0 (the tangent vector), and v the remainder.  The
order of tangency d of two immersed half-disks is read off by turning both
into graphs over the first coordinate axis and comparing Taylor coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rational import QC
from .series import TruncatedSeries
from .structures import StructureField


class VanishesToTruncation(ValueError):
    """All coefficients are below the zero threshold up to the valid order."""


@dataclass(frozen=True)
class HalfDiskMap:
    """Half-disk attached to R^2, backed by a series jet or a grid snapshot."""

    series: TruncatedSeries | None = None
    grid: object | None = None
    structure: StructureField | None = None

    def __post_init__(self):
        if (self.series is None) == (self.grid is None):
            raise ValueError("exactly one of series/grid must be given")
        if self.series is not None:
            s = self.series
            if s.dim != 2:
                raise ValueError("half-disk series must have dim 2")
            if not s.is_real():
                raise ValueError("half-disk series must have real coefficients "
                                 "(edge values in R^2)")
            if s.vanishing_order() == 0:
                raise ValueError("half-disk must be based at the origin: u(0) = 0")
        if self.structure is None:
            dom = "disk" if self.series is not None else "space"
            object.__setattr__(self, "structure", StructureField.standard(dom))

    @classmethod
    def from_coeffs(cls, coeffs, order=None, exact=None,
                    structure: StructureField | None = None) -> "HalfDiskMap":
        return cls(series=TruncatedSeries.from_coeffs(coeffs, order=order,
                                                      exact=exact),
                   structure=structure)

    @property
    def is_series(self) -> bool:
        return self.series is not None

    def __call__(self, z):
        if self.series is None:
            raise ValueError("grid-backed map is not pointwise evaluable here")
        return self.series(z)


@dataclass(frozen=True)
class NormalForm:
    mu: int
    v0: tuple                 # nonzero real 2-vector (backend scalars)
    P: TruncatedSeries        # degree <= mu-1, real coefficients, P(0) = v0
    remainder: TruncatedSeries

    @property
    def v0_array(self) -> np.ndarray:
        return np.array([complex(x).real for x in self.v0])

    def recompose(self, order: int | None = None) -> TruncatedSeries:
        """zeta^mu * P + zeta^(2mu-1) * remainder, the original jet."""
        n = order if order is not None else min(self.P.order + self.mu,
                                                self.remainder.order + 2 * self.mu - 1)
        main = self.P.truncate(n).shift_up(self.mu) if self.mu <= n else None
        rest = self.remainder.truncate(n).shift_up(2 * self.mu - 1)
        return (main + rest) if main is not None else rest


def normal_form(u: HalfDiskMap) -> NormalForm:
    """Extract (mu, v0, P, remainder) from a series-backed half-disk."""
    s = u.series
    if s is None:
        raise ValueError("normal form needs a series-backed map")
    mu = s.vanishing_order()
    if mu is None:
        raise VanishesToTruncation("map vanishes to truncation order")
    v0 = s.coeffs[mu]
    deg = mu - 1
    p_rows = [s.coeffs[mu + k] for k in range(0, deg + 1) if mu + k <= s.order]
    P = TruncatedSeries.from_coeffs(p_rows, order=s.order - mu, exact=s.exact)
    # zeta^mu * P owns orders mu .. 2mu-1, so the remainder v has v(0) = 0 and
    # v_k = u_{2mu-1+k} for k >= 1
    start = 2 * mu - 1
    zero_row = tuple(x * 0 for x in v0)
    if start + 1 <= s.order:
        rem_rows = [zero_row] + list(s.coeffs[start + 1:])
        rem = TruncatedSeries.from_coeffs(rem_rows, order=s.order - start,
                                          exact=s.exact)
    else:
        rem = TruncatedSeries.from_coeffs([zero_row], order=0, exact=s.exact)
    return NormalForm(mu=mu, v0=v0, P=P, remainder=rem)


def series_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g with f(g(zeta)) = zeta, for f(0)=0, f'(0)!=0.

    Solved order by order: the zeta^k defect of f(g) is linear in the unknown
    g_k with factor f'(0).
    """
    if f.dim != 1:
        raise ValueError("series inverse is defined for scalar series")
    s = f._scale() if not f.exact else 0.0
    from .series import _is_zero_scalar
    if not _is_zero_scalar(f.coeffs[0][0], s):
        raise ValueError("f(0) != 0")
    f1 = f.coeffs[1][0]
    if _is_zero_scalar(f1, s):
        raise ValueError("f'(0) = 0: not invertible as a reparametrization")
    n = f.order
    one = QC(1) if f.exact else 1.0 + 0j
    g_rows = [f.coeffs[0][0] * 0, one / f1]
    for k in range(2, n + 1):
        g = TruncatedSeries.from_coeffs([(c,) for c in g_rows], order=k,
                                        exact=f.exact)
        defect = f.truncate(k).compose(g)
        g_rows.append(-defect.coeffs[k][0] / f1)
    return TruncatedSeries.from_coeffs([(c,) for c in g_rows], order=n,
                                       exact=f.exact)


@dataclass(frozen=True)
class TangencyResult:
    d: int | None
    kind: str                  # "touching" | "meeting"
    infinite: bool = False     # graphs agree up to truncation order

    @property
    def transverse(self) -> bool:
        return self.d == 1


def _align_first_axis(u: HalfDiskMap, v0) -> tuple:
    """Real 2x2 complex-linear change sending v0 to a positive multiple of e1.

    Uses the rational rotation [[a, b], [-b, a]] so exact coefficients stay
    exact; the image of v0 is (a^2+b^2) e1.
    """
    a, b = v0
    rows = [[a, b], [-b, a]]
    return rows


def apply_real_linear(s: TruncatedSeries, M) -> TruncatedSeries:
    """Apply a real 2x2 matrix (complex-linear on C^2) to a dim-2 series."""
    (m00, m01), (m10, m11) = M
    rows = tuple((m00 * row[0] + m01 * row[1], m10 * row[0] + m11 * row[1])
                 for row in s.coeffs)
    return TruncatedSeries(rows, s.order, s.dim, s.clipped)


def graph_over_first_axis(s: TruncatedSeries) -> TruncatedSeries:
    """For an immersed dim-2 series with nonvanishing first component slope,
    return the scalar series phi with s ~ (z1, phi(z1)) as a graph."""
    f = s.component(0)
    g = s.component(1)
    inv = series_inverse(f)
    return g.compose(inv)


def tangency_order(u1: HalfDiskMap, u2: HalfDiskMap) -> TangencyResult:
    """Order of first Taylor disagreement of the graphs over the common axis.

    Both maps must be immersed (mu = 1).  The ambient plane is rotated so the
    first map runs along e1; the second map must then be a graph over the same
    axis, i.e. its rotated first component must keep a nonzero slope -- the
    collinearity/transversality condition.  The traversal direction of that
    slope separates touching (same direction on the edge) from meeting.
    """
    n1, n2 = normal_form(u1), normal_form(u2)
    if n1.mu != 1 or n2.mu != 1:
        raise ValueError("order of tangency is defined for immersed maps (mu = 1)")
    M = _align_first_axis(u1, n1.v0)
    s1 = apply_real_linear(u1.series, M)
    s2 = apply_real_linear(u2.series, M)
    from .series import _is_zero_scalar
    sc = s2._scale() if not s2.exact else 0.0
    slope = s2.coeffs[1][0]
    if _is_zero_scalar(slope, sc):
        raise ValueError("not tangent: second map is orthogonal to the "
                         "common axis at 0")
    slope_sign = complex(slope).real
    kind = "touching" if slope_sign > 0 else "meeting"
    phi1 = graph_over_first_axis(s1)
    phi2 = graph_over_first_axis(s2)
    diff = phi2 - phi1
    d = diff.vanishing_order()
    if d is None:
        return TangencyResult(d=None, kind=kind, infinite=True)
    return TangencyResult(d=d, kind=kind)


def compose_map(u: HalfDiskMap, psi: TruncatedSeries) -> HalfDiskMap:
    return HalfDiskMap(series=u.series.compose(psi), structure=u.structure)

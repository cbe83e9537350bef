"""Boundary intersection index of two half-disks attached to R^2.

Two independent routes:

* the series route reads the index off the comparison recursion as the contact
  exponent nu (equivalently the order of tangency of the graphs);
* the linking route samples the curves' traces on a small sphere around the
  base point, projects stereographically and evaluates the Gauss linking
  number of the two closed polylines.

For transverse pairs the index is 1; tangent non-reparametrization pairs give
nu >= 2.  The perturbation splitter deforms the second curve by real monomial
terms of descending order until the graph difference has only simple real
roots near 0 -- as many as the index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .comparison import compare
from .normal_form import (HalfDiskMap, apply_real_linear,
                          graph_over_first_axis, normal_form)
from .rational import QC
from .roots import count_real_roots, durand_kerner, symmetrize_real
from .series import TruncatedSeries, _is_zero_scalar


class CurvesCoincide(ValueError):
    """index undefined: curves coincide (mutual reparametrizations)."""


class LinkingPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class IndexReport:
    index: int
    method: str                       # "series" | "linking"
    transverse: bool
    nu: int | None = None             # series route
    sphere_radius: float | None = None  # linking route
    residual: float | None = None     # |raw - round| for the linking route
    kind: str | None = None

    def to_json(self) -> dict:
        out = {"index": self.index, "method": self.method,
               "transverse": self.transverse}
        if self.nu is not None:
            out["nu"] = self.nu
        if self.sphere_radius is not None:
            out["sphere_radius"] = self.sphere_radius
        if self.residual is not None:
            out["residual"] = self.residual
        if self.kind is not None:
            out["kind"] = self.kind
        return out


# -- pair normalization ------------------------------------------------------

def _collinearity(v1, v2, ref: TruncatedSeries):
    """Return t with v2 = t*v1 (real), or None when not collinear."""
    if ref.exact:
        s = 0.0
    else:
        s = max(abs(complex(x)) for x in v1) * max(abs(complex(x)) for x in v2)
    cross = v1[0] * v2[1] - v1[1] * v2[0]
    if not _is_zero_scalar(cross, s):
        return None
    mags = [abs(complex(x)) for x in v1]
    i = 0 if mags[0] >= mags[1] else 1
    return v2[i] / v1[i]


def normalize_pair(u1: HalfDiskMap, u2: HalfDiskMap):
    """Rotate the ambient plane and rescale parameters so both tangent
    vectors become (+-1, 0).  All maps applied are real complex-linear
    (rectification changes) or real parameter dilations, so the index is
    unchanged.  Requires collinear tangents."""
    n1, n2 = normal_form(u1), normal_form(u2)
    if n1.mu != 1 or n2.mu != 1:
        raise ValueError("boundary index requires immersed maps (mu = 1)")
    t = _collinearity(n1.v0, n2.v0, u1.series)
    if t is None:
        raise ValueError("tangent vectors not collinear")
    a, b = n1.v0
    M = [[a, b], [-b, a]]   # sends v0 to (a^2+b^2) e1; rational when a, b are
    s1 = apply_real_linear(u1.series, M)
    s2 = apply_real_linear(u2.series, M)
    c1 = s1.coeffs[1][0]
    lam1 = 1 / c1
    s1 = _dilate(s1, lam1)
    c2 = s2.coeffs[1][0]
    mag = c2 if complex(c2).real > 0 else -c2
    s2 = _dilate(s2, 1 / mag)
    return HalfDiskMap(series=s1, structure=u1.structure), \
        HalfDiskMap(series=s2, structure=u2.structure)


def _dilate(s: TruncatedSeries, lam) -> TruncatedSeries:
    """Precompose with zeta -> lam * zeta (lam real positive)."""
    rows = []
    p = lam ** 0
    for row in s.coeffs:
        rows.append(tuple(p * x for x in row))
        p = p * lam
    return TruncatedSeries(tuple(rows), s.order, s.dim, s.clipped)


# -- series route ------------------------------------------------------------

def boundary_index_series(u1: HalfDiskMap, u2: HalfDiskMap) -> IndexReport:
    n1, n2 = normal_form(u1), normal_form(u2)
    if n1.mu != 1 or n2.mu != 1:
        raise ValueError("boundary index requires immersed maps (mu = 1)")
    t = _collinearity(n1.v0, n2.v0, u1.series)
    if t is None:
        # transverse intersection: index 1
        return IndexReport(index=1, method="series", transverse=True, nu=1)
    v1, v2 = normalize_pair(u1, u2)
    r = compare(v1, v2)
    if r.kind == "reparametrization":
        raise CurvesCoincide("index undefined: curves coincide")
    return IndexReport(index=r.nu, method="series", transverse=(r.nu == 1),
                       nu=r.nu, kind=r.kind)


# -- linking route -----------------------------------------------------------

def _poly_eval(series: TruncatedSeries, z: np.ndarray) -> np.ndarray:
    return series.as_float()(z)


def convergence_radius_proxy(u: HalfDiskMap) -> float:
    """Largest R <= 1 where the linear term still dominates the tail."""
    s = u.series.as_float()
    v0 = abs(complex(s.coeffs[1][0])) + abs(complex(s.coeffs[1][1]))
    tails = [(k, abs(complex(x)))
             for k in range(2, len(s.coeffs)) for x in s.coeffs[k]]
    if not any(c for _, c in tails):
        return 1.0

    def tail_at(R):
        return sum(c * R ** k for k, c in tails)

    lo, hi = 0.0, 1.0
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if tail_at(mid) <= 0.5 * v0 * mid:
            lo = mid
        else:
            hi = mid
    return max(lo, 1e-3)


def sphere_trace(u: HalfDiskMap, r: float, samples: int) -> np.ndarray:
    """Points of u~(Delta) on the sphere |z| = r, one per angle sample.

    For each angle the radius is found by bisection of |u(rho e^{i theta})|,
    which is strictly increasing near 0 for immersed maps.
    """
    s = u.series.as_float()
    thetas = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    e = np.exp(1j * thetas)

    def norms(rho):
        vals = _poly_eval(s, rho * e)
        return np.linalg.norm(vals, axis=-1)

    hi = np.full(samples, 1e-3)
    for _ in range(60):
        grow = norms(hi) < r
        if not grow.any():
            break
        hi[grow] *= 1.5
        if np.max(hi) > 1e3:
            raise LinkingPreconditionError("sphere radius unreachable; "
                                           "radius too large")
    lo = np.zeros(samples)
    for _ in range(70):
        mid = 0.5 * (lo + hi)
        inside = norms(mid) < r
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    rho = 0.5 * (lo + hi)
    return _poly_eval(s, rho * e)


def _to_r4(pts: np.ndarray) -> np.ndarray:
    return np.stack([pts[:, 0].real, pts[:, 0].imag,
                     pts[:, 1].real, pts[:, 1].imag], axis=1)


def _stereographic(P: np.ndarray, pole: np.ndarray) -> np.ndarray:
    """Project unit vectors from the pole onto its orthogonal R^3.

    The basis orientation is normalized so that a transverse touching pair
    links to +1 (matching the series route on (z, 0) vs (z, az)).
    """
    cols = [pole / np.linalg.norm(pole)]
    for v in np.eye(4):
        w = v - sum(np.dot(v, c) * c for c in cols)
        n = np.linalg.norm(w)
        if n > 1e-8:
            cols.append(w / n)
        if len(cols) == 4:
            break
    B = np.stack(cols[1:], axis=0)
    if np.linalg.det(np.stack(cols, axis=0)) < 0:
        B[2] = -B[2]
    B[2] = -B[2]   # orientation convention pinned by the transverse case
    t = P @ pole
    if np.max(t) > 1.0 - 1e-9:
        raise LinkingPreconditionError("projection pole touches a curve")
    X = (P - t[:, None] * pole[None, :]) / (1.0 - t[:, None])
    return X @ B.T


def _pick_pole(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    cands = [np.array(v, dtype=float) for v in
             [(0, 0, 1, 0), (0, 0, -1, 0), (0, 0, 0, 1), (0, 0, 0, -1),
              (0, 1, 0, 0), (0, -1, 0, 0),
              (0, 0.7071067811865476, 0.7071067811865476, 0)]]
    best, bestd = None, -1.0
    for q in cands:
        q = q / np.linalg.norm(q)
        d = min(np.min(np.linalg.norm(g1 - q, axis=1)),
                np.min(np.linalg.norm(g2 - q, axis=1)))
        if d > bestd:
            best, bestd = q, d
    if bestd < 0.05:
        raise LinkingPreconditionError("no projection pole clear of the curves")
    return best


def _separation_ok(x1: np.ndarray, x2: np.ndarray, r: float) -> bool:
    """Trace clouds must be farther apart than the polyline sagitta allows."""
    sep = kernels.min_pairwise_dist(x1, x2)
    chord = max(np.max(np.linalg.norm(np.roll(x1, -1, 0) - x1, axis=1)),
                np.max(np.linalg.norm(np.roll(x2, -1, 0) - x2, axis=1)))
    sagitta = chord ** 2 / (2.0 * r)
    return sep > 4.0 * sagitta


def boundary_index_linking(u1: HalfDiskMap, u2: HalfDiskMap,
                           r: float | None = None, samples: int = 512,
                           residual_guard: float = 0.2,
                           max_halvings: int = 6) -> IndexReport:
    if r is None:
        r = 0.3 * min(convergence_radius_proxy(u1), convergence_radius_proxy(u2))
    for attempt in range(max_halvings + 1):
        try:
            p1 = _to_r4(sphere_trace(u1, r, samples))
            p2 = _to_r4(sphere_trace(u2, r, samples))
            q1 = _to_r4(sphere_trace(u1, r / 2, samples))
            q2 = _to_r4(sphere_trace(u2, r / 2, samples))
        except LinkingPreconditionError:
            r *= 0.5
            continue
        # the extensions must meet only at the base point: their traces on
        # the test sphere and on the half-radius sphere stay separated
        if not (_separation_ok(p1, p2, r) and _separation_ok(q1, q2, r / 2)):
            samples = min(4096, samples * 2)
            if attempt >= 2:
                r *= 0.5
            continue
        g1, g2 = p1 / r, p2 / r
        pole = _pick_pole(g1, g2)
        x1 = _stereographic(g1, pole)
        x2 = _stereographic(g2, pole)
        raw = kernels.linking_sum(x1, x2)
        idx = int(round(raw))
        residual = abs(raw - idx)
        if residual > residual_guard:
            samples = min(4096, samples * 2)
            r *= 0.5
            continue
        return IndexReport(index=idx, method="linking", transverse=(idx == 1),
                           sphere_radius=r, residual=residual)
    raise LinkingPreconditionError(
        "radius too large / refine sampling: preconditions failed after "
        f"{max_halvings} halvings")


# -- perturbation splitting ---------------------------------------------------

@dataclass(frozen=True)
class SplitResult:
    perturbed: HalfDiskMap
    roots: list
    rounds: int
    index: int

    def to_json(self) -> dict:
        return {"roots": [float(x) for x in self.roots],
                "rounds": self.rounds, "index": self.index}


def split_to_transverse(u1: HalfDiskMap, u2: HalfDiskMap, epsilon=None,
                        local_radius: float = 0.1,
                        max_rounds: int = 8) -> SplitResult:
    """Perturb u2 by real monomials so all nearby intersections with u1
    become simple and real; their count equals the boundary index.

    Works on the graph difference h(z1) over the common tangent axis: round k
    adds eps_k z1^(nu-k), with the epsilon ladder eps_{k+1} = eps_k eps_1/8^k
    keeping consecutive split roots a factor ~8 apart so they stay real and
    never collapse below resolution.  Root simplicity is certified two ways:
    Durand-Kerner locations (numeric) and a Sturm-chain count of distinct
    real roots in (-local_radius, local_radius) (exact, when coefficients
    are exact).
    """
    if epsilon is None:
        epsilon = Fraction(1, 100)
    report = boundary_index_series(u1, u2)
    nu = report.index
    n1, n2 = normal_form(u1), normal_form(u2)
    if _collinearity(n1.v0, n2.v0, u1.series) is None:
        # transverse pair: the base point is already a simple intersection
        return SplitResult(perturbed=u2, roots=[0.0], rounds=0, index=1)
    v1, v2 = normalize_pair(u1, u2)
    phi1 = graph_over_first_axis(v1.series)
    phi2 = graph_over_first_axis(v2.series)
    h = phi2 - phi1
    exact = h.exact
    if exact:
        epsilon = QC(Fraction(epsilon) if not isinstance(epsilon, QC) else epsilon)
    rounds = 0
    eps_k = epsilon
    added = TruncatedSeries.zero(1, h.order, exact)
    # bumps have degree nu-1 down to 1; the base point stays an intersection.
    # eps_{k+1} = eps_k * eps_1 / 8^k keeps consecutive split roots a factor
    # ~8 apart, so they stay real and never collapse below resolution.
    for k in range(1, min(nu - 1, max_rounds) + 1):
        ok, roots = _roots_certified(h + added, nu, local_radius)
        if ok:
            break
        bump = TruncatedSeries.from_coeffs([(0,)] * (nu - k) + [(eps_k,)],
                                           order=h.order, exact=exact)
        added = added + bump
        rounds += 1
        shrink = (QC(Fraction(1, 8 ** k)) if exact else 8.0 ** -k)
        eps_k = eps_k * epsilon * shrink
    h_final = h + added
    ok, roots = _roots_certified(h_final, nu, local_radius)
    if not ok:
        raise ValueError("roots failed to separate within the round budget")
    # perturbed curve as a graph in the normalized frame
    pert_series = TruncatedSeries.bundle([
        TruncatedSeries.variable(order=h.order, exact=exact),
        phi2 + added])
    perturbed = HalfDiskMap(series=pert_series, structure=u2.structure)
    return SplitResult(perturbed=perturbed, roots=sorted(roots),
                       rounds=rounds, index=nu)


def _roots_certified(h: TruncatedSeries, nu: int, local_radius: float):
    """Check h has exactly nu simple real roots in the local interval."""
    coeffs_f = [complex(row[0]) for row in h.coeffs]
    all_roots = durand_kerner(coeffs_f)
    local = [z for z in symmetrize_real(all_roots) if abs(z) < local_radius]
    real_local = [z.real for z in local if z.imag == 0.0]
    numeric_ok = (len(local) == nu and len(real_local) == nu
                  and _distinct(real_local))
    if not numeric_ok:
        return False, real_local
    if h.exact:
        frac_coeffs = [row[0].re for row in h.coeffs]
        lr = Fraction(local_radius).limit_denominator(10 ** 6)
        exact_count = count_real_roots(frac_coeffs, -lr, lr)
        if exact_count != nu:
            return False, real_local
    return True, real_local


def _distinct(xs, rel: float = 1e-7) -> bool:
    xs = sorted(xs)
    scale = max([abs(x) for x in xs], default=1.0) or 1.0
    return all(b - a > rel * scale for a, b in zip(xs, xs[1:]))

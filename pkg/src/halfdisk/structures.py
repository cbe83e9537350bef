"""Almost complex structure fields on R^4 and their reflection/Cayley calculus.

Conventions.  R^4 carries coordinates (x1, y1, x2, y2) identified with C^2 via
z_j = x_j + i*y_j.  The standard structure J_st is multiplication by i, the
totally real plane is R^2 = {y1 = y2 = 0}, and tau = diag(1,-1,1,-1) is complex
conjugation.  A structure field maps a point of its domain (the parameter disk
for pulled-back bundle structures, or R^4 itself for ambient ones) to a real
4x4 matrix J with J^2 = -Id.

The Cayley transform pairs tamed structures J with J_st-antilinear strict
contractions W:

    L(J) = -(J - J_st)(J + J_st)^{-1},      K(W) = J_st (Id + W)(Id - W)^{-1},

mutually inverse on their stated domains.  Blending two structures through
their W-images along a sphere-level cutoff produces the cone-matched field
used for meeting pairs of half-disks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

JST = np.array([[0.0, -1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0, 0.0]])

TAU = np.diag([1.0, -1.0, 1.0, -1.0])

STRUCTURE_TOL = 1e-10
COND_LIMIT = 1e12


class TamingError(ValueError):
    """J + J_st (or Id - W) is numerically singular."""


class ReflectionError(ValueError):
    """Structure fails to be standard where the reflection hypothesis needs it."""


def vec4(z) -> np.ndarray:
    """C^2 point -> (x1, y1, x2, y2)."""
    z = np.asarray(z, dtype=complex).reshape(2)
    return np.array([z[0].real, z[0].imag, z[1].real, z[1].imag])


def from_vec4(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(4)
    return np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]])


def cmul_matrix(c: complex) -> np.ndarray:
    """Real 4x4 matrix of componentwise multiplication by the scalar c on C^2."""
    a, b = c.real, c.imag
    blk = np.array([[a, -b], [b, a]])
    out = np.zeros((4, 4))
    out[:2, :2] = blk
    out[2:, 2:] = blk
    return out


def antilinear_matrix(A: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix of v -> A conj(v) for a complex 2x2 matrix A."""
    A = np.asarray(A, dtype=complex)
    out = np.zeros((4, 4))
    for j in range(2):
        for k in range(2):
            a, b = A[j, k].real, A[j, k].imag
            out[2 * j:2 * j + 2, 2 * k:2 * k + 2] = np.array([[a, b], [b, -a]])
    return out


def check_structure(J: np.ndarray, tol: float = STRUCTURE_TOL) -> None:
    if np.max(np.abs(J @ J + np.eye(4))) > tol:
        raise ValueError("matrix is not an almost complex structure: J^2 != -Id")


@dataclass(frozen=True)
class AntiLinearContraction:
    """J_st-antilinear matrix W with Id - W^t W positive definite."""

    matrix: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", W)
        if np.max(np.abs(W @ JST + JST @ W)) > 1e-9:
            raise ValueError("W does not anticommute with J_st")
        eigs = np.linalg.eigvalsh(np.eye(4) - W.T @ W)
        if eigs.min() <= 0:
            raise TamingError("Id - W^t W is not positive definite")

    @property
    def operator_norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True)
class StructureField:
    """Pointwise almost complex structure, on the disk or on R^4.

    ``domain`` is "disk" for bundle structures J(zeta) over the parameter disk
    and "space" for ambient fields J(z), z in R^4.  ``rectified`` asserts
    J = J_st along the totally real plane (disk fields: along the real axis).
    """

    eval_fn: Callable[[object], np.ndarray]
    domain: str = "space"
    regularity_tag: str = "lipschitz"
    lipschitz_bound: float | None = None
    rectified: bool = True
    name: str = "custom"
    eval_many_fn: Callable | None = None

    def __call__(self, point) -> np.ndarray:
        J = np.asarray(self.eval_fn(point), dtype=float)
        return J

    def eval_many(self, points) -> np.ndarray:
        """Stacked evaluation: points (m,) complex for disk fields or (m, 2)
        complex for space fields; returns (m, 4, 4)."""
        pts = np.asarray(points)
        if self.eval_many_fn is not None:
            return np.asarray(self.eval_many_fn(pts), dtype=float)
        return np.stack([self(p) for p in pts])

    def check_at(self, point, tol: float = STRUCTURE_TOL) -> None:
        check_structure(self(point), tol)

    # -- standard examples -------------------------------------------------

    @classmethod
    def standard(cls, domain: str = "space") -> "StructureField":
        return cls(lambda p: JST.copy(), domain=domain, regularity_tag="constant",
                   lipschitz_bound=0.0, name="standard",
                   eval_many_fn=lambda pts: np.broadcast_to(
                       JST, (len(pts), 4, 4)).copy())

    @classmethod
    def eta_example(cls, domain: str = "disk", scale: float = 1.0) -> "StructureField":
        """Real-analytic field with linear off-block entries eta at rows 3, 4.

        On the disk the parameter is eta = Im zeta; on R^4 it is eta = y1.
        Reflecting the disk field across the edge flips eta's sign, so the
        extended field carries |eta| and is only Lipschitz.
        """
        def J_of_eta(eta: float) -> np.ndarray:
            J = JST.copy()
            J[2, 1] = scale * eta
            J[3, 0] = scale * eta
            return J

        def etas(pts: np.ndarray) -> np.ndarray:
            if domain == "disk":
                return np.imag(pts.reshape(len(pts)))
            return np.imag(pts.reshape(len(pts), 2)[:, 0])

        def many(pts: np.ndarray) -> np.ndarray:
            e = etas(np.asarray(pts, dtype=complex))
            out = np.broadcast_to(JST, (len(e), 4, 4)).copy()
            out[:, 2, 1] = scale * e
            out[:, 3, 0] = scale * e
            return out

        if domain == "disk":
            fn = lambda zeta: J_of_eta(np.imag(complex(zeta)))
        else:
            fn = lambda z: J_of_eta(vec4(z)[1])
        return cls(fn, domain=domain, regularity_tag="lipschitz",
                   lipschitz_bound=abs(scale), name="eta_example",
                   eval_many_fn=many)

    @classmethod
    def from_contraction_field(cls, W_fn: Callable[[object], np.ndarray],
                               domain: str = "space",
                               lipschitz_bound: float | None = None,
                               name: str = "cayley") -> "StructureField":
        """J(p) = K(W(p)) for an antilinear contraction field W."""
        return cls(lambda p: cayley_k_matrix(W_fn(p)), domain=domain,
                   lipschitz_bound=lipschitz_bound, name=name)

    @classmethod
    def tamed_perturbation(cls, eps: float, seed: int = 0,
                           domain: str = "space") -> "StructureField":
        """Random rectified Lipschitz field with ||J - J_st|| = O(eps).

        Built through the Cayley transform from W(p) = s(p) * W_dir, where the
        scalar s vanishes on the totally real locus, so J is automatically a
        structure and standard along R^2 (resp. the edge).
        """
        rng = np.random.default_rng(seed)
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        A *= eps / max(1.0, np.linalg.norm(A, 2))
        Wd = antilinear_matrix(A)
        if domain == "disk":
            def s(p):
                return float(np.imag(complex(p)))

            def s_many(pts):
                return np.imag(pts.reshape(len(pts)))
        else:
            def s(p):
                v = vec4(p)
                return float(v[1] + 0.7 * v[3])

            def s_many(pts):
                pts = pts.reshape(len(pts), 2)
                return np.imag(pts[:, 0]) + 0.7 * np.imag(pts[:, 1])

        def many(pts):
            sv = np.clip(s_many(np.asarray(pts, dtype=complex)), -1.0, 1.0)
            W = sv[:, None, None] * Wd
            eye = np.broadcast_to(np.eye(4), W.shape)
            return np.einsum("ab,nbc->nac", JST,
                             np.matmul(eye + W, np.linalg.inv(eye - W)))

        return cls(lambda p: cayley_k_matrix(np.clip(s(p), -1.0, 1.0) * Wd),
                   domain=domain, lipschitz_bound=2 * eps,
                   name=f"tamed_perturbation({eps},{seed})",
                   eval_many_fn=many)


# -- reflection ------------------------------------------------------------

def _reflect_matrix(J: np.ndarray) -> np.ndarray:
    return -TAU @ J @ TAU


def reflect_structure(J: StructureField, edge_samples: int = 17,
                      tol: float = 1e-9) -> StructureField:
    """Extend a disk-domain field from the upper half-disk to the full disk.

    The lower half gets J~(zeta)[v] = -conj(J(conj zeta)[conj v]).  Requires
    J = J_st along the edge; validated at sample points of (-1, 1).
    """
    if J.domain != "disk":
        raise ValueError("reflect_structure expects a disk-domain field")
    for x in np.linspace(-0.96, 0.96, edge_samples):
        if np.max(np.abs(J(complex(x, 0.0)) - JST)) > tol:
            raise ReflectionError("J != J_st on the edge; reflection hypothesis fails")

    def fn(zeta):
        zeta = complex(zeta)
        if zeta.imag >= 0:
            return J(zeta)
        return _reflect_matrix(J(np.conj(zeta)))

    return StructureField(fn, domain="disk", regularity_tag="lipschitz",
                          lipschitz_bound=J.lipschitz_bound,
                          name=f"reflect({J.name})")


def minus_structure(J: StructureField) -> StructureField:
    """J^-(z)[v] = -conj(J(conj z)[conj v]) on R^4."""
    if J.domain != "space":
        raise ValueError("minus_structure expects a space-domain field")

    def fn(z):
        zc = np.conj(np.asarray(z, dtype=complex).reshape(2))
        return _reflect_matrix(J(zc))

    return StructureField(fn, domain="space", regularity_tag=J.regularity_tag,
                          lipschitz_bound=J.lipschitz_bound,
                          name=f"minus({J.name})")


# -- Cayley calculus ---------------------------------------------------------

def _guarded_inv(M: np.ndarray, what: str) -> np.ndarray:
    if np.linalg.cond(M) > COND_LIMIT:
        raise TamingError(f"{what} is numerically singular (taming violated)")
    return np.linalg.inv(M)


def cayley_l_matrix(J: np.ndarray) -> np.ndarray:
    J = np.asarray(J, dtype=float)
    return -(J - JST) @ _guarded_inv(J + JST, "J + J_st")


def cayley_k_matrix(W: np.ndarray) -> np.ndarray:
    W = np.asarray(W, dtype=float)
    return JST @ (np.eye(4) + W) @ _guarded_inv(np.eye(4) - W, "Id - W")


def cayley_l(J: StructureField, at) -> AntiLinearContraction:
    return AntiLinearContraction(cayley_l_matrix(J(at)))


def cayley_k(W: AntiLinearContraction) -> np.ndarray:
    J = cayley_k_matrix(W.matrix)
    check_structure(J)
    return J


# -- cone blending -----------------------------------------------------------

def smoothstep(t: float) -> float:
    t = min(1.0, max(0.0, t))
    return t * t * (3.0 - 2.0 * t)


def cone_cutoff(z, cone_constant: float) -> float:
    """Sphere-level cutoff: 1 on the upper cone y1 > C|y2|, 0 on the mirror cone.

    Radially constant; transitions by a smoothstep in lambda = y1 / (C |y2|).
    """
    v = vec4(z)
    y1, y2 = v[1], v[3]
    denom = cone_constant * abs(y2)
    if denom == 0.0:
        if y1 > 0:
            return 1.0
        if y1 < 0:
            return 0.0
        return 0.5
    lam = y1 / denom
    return smoothstep(0.5 * (lam + 1.0))


def blend_cones(J: StructureField, cone_constant: float = 1.0) -> StructureField:
    """Conjugation-invariant field equal to J on the upper cone and to J^- on
    the lower one, interpolated through the Cayley images."""
    if J.domain != "space":
        raise ValueError("blend_cones expects a space-domain field")
    Jm = minus_structure(J)

    def fn(z):
        chi = cone_cutoff(z, cone_constant)
        Wp = cayley_l_matrix(J(z))
        Wm = cayley_l_matrix(Jm(z))
        W = chi * Wp + (1.0 - chi) * Wm
        out = cayley_k_matrix(W)
        check_structure(out, 1e-8)
        return out

    lip = None if J.lipschitz_bound is None else \
        J.lipschitz_bound * (3.0 + 2.0 / max(cone_constant, 1e-6))
    return StructureField(fn, domain="space", regularity_tag="lipschitz",
                          lipschitz_bound=lip,
                          name=f"blend:{J.name}:C={cone_constant}")


def structure_from_json(data: dict) -> StructureField:
    """Registered closed-form fields by name, or a raw sampled field.

    Raw fields carry {"points": [[re1,im1,re2,im2], ...], "matrices":
    [[...4x4...], ...]} and evaluate by nearest sample point.
    """
    name = data.get("name", "sampled")
    domain = data.get("domain", "space")
    if name == "standard":
        return StructureField.standard(domain)
    if name == "eta_example":
        return StructureField.eta_example(domain, scale=data.get("scale", 1.0))
    if name == "tamed_perturbation":
        return StructureField.tamed_perturbation(
            data.get("eps", 0.05), seed=data.get("seed", 0), domain=domain)
    if name.startswith("blend:"):
        base = structure_from_json(dict(data, name=name[len("blend:"):]))
        return blend_cones(base, data.get("cone_constant", 1.0))
    if "points" in data and "matrices" in data:
        pts = np.asarray(data["points"], dtype=float)
        mats = np.asarray(data["matrices"], dtype=float)
        if len(pts) != len(mats):
            raise ValueError("points and matrices must pair up")
        for M in mats:
            check_structure(M, 1e-8)

        def fn(z):
            v = vec4(z) if domain == "space" else np.array(
                [np.real(complex(z)), np.imag(complex(z)), 0.0, 0.0])
            i = int(np.argmin(np.sum((pts - v) ** 2, axis=1)))
            return mats[i]

        return StructureField(fn, domain=domain, regularity_tag="sampled",
                              name="sampled")
    raise ValueError(f"unknown structure {name!r}")


def structure_to_json(J: StructureField) -> dict:
    return {"name": J.name, "domain": J.domain,
            "regularity_tag": J.regularity_tag,
            "lipschitz_bound": J.lipschitz_bound}


def measure_lipschitz(J: StructureField, samples: int = 200, seed: int = 1,
                      radius: float = 0.8) -> float:
    """Finite-difference estimate of the Lipschitz constant on random pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        if J.domain == "disk":
            p = (rng.uniform(-radius, radius) + 1j * rng.uniform(-radius, radius))
            q = p + (rng.normal() + 1j * rng.normal()) * 1e-3
            dist = abs(q - p)
        else:
            p = rng.uniform(-radius, radius, size=4)
            q = p + rng.normal(size=4) * 1e-3
            dist = float(np.linalg.norm(q - p))
            p, q = from_vec4(p), from_vec4(q)
        dj = np.max(np.abs(J(q) - J(p)))
        if dist > 0:
            worst = max(worst, dj / dist)
    return worst

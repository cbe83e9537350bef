"""Uniform Cartesian grids on the disk and half-disk, and fields on them.

Nodes sit at integer multiples of h = 1/N covering [-1, 1]^2, so the lattice
is symmetric under conjugation (row flip) and contains the origin and the full
edge row y = 0 exactly.  Fields are complex scalar (ny, nx) or C^2-vector
(ny, nx, 2) arrays masked to the disk; matrix fields are (ny, nx, 4, 4) real
stacks acting on the (x1, y1, x2, y2) realification.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .series import TruncatedSeries


@lru_cache(maxsize=16)
def _lattice(N: int):
    h = 1.0 / N
    idx = np.arange(-N, N + 1)
    X, Y = np.meshgrid(idx * h, idx * h)
    Z = X + 1j * Y
    mask = np.abs(Z) <= 1.0 + 1e-12
    return Z, mask


@dataclass(frozen=True)
class DiskGrid:
    """Lattice of spacing h = 1/N on [-1,1]^2 masked to the unit disk."""

    N: int
    half: str = "full"    # "full" | "upper"

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def nodes(self) -> np.ndarray:
        return _lattice(self.N)[0]

    @property
    def mask(self) -> np.ndarray:
        Z, mask = _lattice(self.N)
        if self.half == "upper":
            return mask & (Z.imag >= -1e-12)
        return mask

    @property
    def shape(self):
        return (2 * self.N + 1, 2 * self.N + 1)

    @property
    def origin(self):
        return (self.N, self.N)

    def full(self) -> "DiskGrid":
        return DiskGrid(self.N, "full")

    def edge_row(self) -> int:
        return self.N


@dataclass(frozen=True)
class GridField:
    """Sampled field over a DiskGrid; values outside the mask are zeroed."""

    grid: DiskGrid
    values: np.ndarray
    domain_radius: float = 1.0   # parameter rescale carried by solver output

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        m = self.grid.mask
        if v.ndim == 3:
            v = np.where(m[..., None], v, 0.0)
        else:
            v = np.where(m, v, 0.0)
        object.__setattr__(self, "values", v)

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 3

    @classmethod
    def from_series(cls, s: TruncatedSeries, grid: DiskGrid,
                    scale: float = 1.0) -> "GridField":
        """Sample a series on grid nodes (optionally of the dilated parameter
        scale*zeta)."""
        z = grid.nodes * scale
        vals = s.as_float()(z)
        if s.dim == 1:
            vals = vals[..., 0]
        return cls(grid, vals)

    @classmethod
    def constant(cls, value, grid: DiskGrid) -> "GridField":
        value = np.asarray(value, dtype=complex)
        if value.ndim == 0:
            return cls(grid, np.full(grid.shape, complex(value)))
        vals = np.broadcast_to(value, grid.shape + (len(value),)).copy()
        return cls(grid, vals)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "GridField") -> "GridField":
        return GridField(self.grid, self.values + other.values,
                         self.domain_radius)

    def __sub__(self, other: "GridField") -> "GridField":
        return GridField(self.grid, self.values - other.values,
                         self.domain_radius)

    def scale(self, c) -> "GridField":
        return GridField(self.grid, self.values * c, self.domain_radius)

    def pointwise_mul(self, scalar_field: np.ndarray) -> "GridField":
        if self.is_vector:
            return GridField(self.grid, self.values * scalar_field[..., None],
                             self.domain_radius)
        return GridField(self.grid, self.values * scalar_field,
                         self.domain_radius)

    def sup_norm(self, interior_radius: float | None = None) -> float:
        m = self.grid.mask.copy()
        if interior_radius is not None:
            m &= np.abs(self.grid.nodes) <= interior_radius
        v = self.values[m]
        if v.size == 0:
            return 0.0
        return float(np.max(np.abs(v)))

    def at_origin(self):
        j, i = self.grid.origin
        return self.values[j, i].copy()

    # -- conjugation symmetry -----------------------------------------------

    def conj_reflect(self) -> "GridField":
        """Field zeta -> conj(self(conj zeta)): row flip plus conjugation."""
        return GridField(self.grid, np.conj(self.values[::-1]),
                         self.domain_radius)

    def symmetrize_real(self) -> "GridField":
        return GridField(self.grid,
                         0.5 * (self.values + np.conj(self.values[::-1])),
                         self.domain_radius)

    def reality_defect(self) -> float:
        return float(np.max(np.abs(self.values - np.conj(self.values[::-1]))))

    # -- finite differences ---------------------------------------------------

    def deriv(self, axis: str, edge_onesided: bool = False) -> "GridField":
        """Second-order finite difference along xi (axis='x') or eta ('y').

        Falls back to one-sided stencils where neighbors leave the mask.
        With ``edge_onesided`` the eta-derivative on the edge row y = 0 is
        taken from the upper side only (fields assembled from reflected data
        are merely piecewise smooth across the edge).
        """
        ax = 1 if axis == "x" else 0
        h = self.grid.h
        m = self.grid.mask
        v = self.values
        vm = np.where(m[..., None], v, 0.0) if self.is_vector else np.where(m, v, 0.0)

        def sh(a, k):
            out = np.zeros_like(a)
            if ax == 1:
                if k > 0:
                    out[:, k:] = a[:, :-k]
                elif k < 0:
                    out[:, :k] = a[:, -k:]
                else:
                    out = a.copy()
            else:
                if k > 0:
                    out[k:, :] = a[:-k, :]
                elif k < 0:
                    out[:k, :] = a[-k:, :]
                else:
                    out = a.copy()
            return out

        def shm(a, k):
            return sh(a.astype(float), k) > 0.5

        mp, mm = shm(m, -1), shm(m, 1)
        mp2, mm2 = shm(m, -2), shm(m, 2)
        if edge_onesided and ax == 0:
            # treat the lower neighbor of the edge row as missing
            edge = self.grid.edge_row()
            mm[edge, :] = False
        vp, vmn = sh(vm, -1), sh(vm, 1)
        vp2, vm2 = sh(vm, -2), sh(vm, 2)

        cen = mp & mm
        fwd = (~cen) & mp & mp2
        bwd = (~cen) & (~fwd) & mm & mm2
        f1 = (~cen) & (~fwd) & (~bwd) & mp
        b1 = (~cen) & (~fwd) & (~bwd) & (~f1) & mm

        def pick(cond, expr):
            c = cond[..., None] if self.is_vector else cond
            return np.where(c, expr, 0.0)

        d = (pick(cen, (vp - vmn) / (2 * h))
             + pick(fwd, (-3 * vm + 4 * vp - vp2) / (2 * h))
             + pick(bwd, (3 * vm - 4 * vmn + vm2) / (2 * h))
             + pick(f1, (vp - vm) / h)
             + pick(b1, (vm - vmn) / h))
        return GridField(self.grid, d, self.domain_radius)

    def dbar(self) -> "GridField":
        """Half Cauchy-Riemann operator (d_xi + i d_eta)/2 componentwise."""
        return GridField(self.grid,
                         0.5 * (self.deriv("x").values
                                + 1j * self.deriv("y").values),
                         self.domain_radius)

    def to_json(self) -> dict:
        m = self.grid.mask
        if self.is_vector:
            vals = [[[z.real, z.imag] for z in self.values[j, i]]
                    for j, i in zip(*np.where(m))]
        else:
            vals = [[self.values[j, i].real, self.values[j, i].imag]
                    for j, i in zip(*np.where(m))]
        return {"h": self.grid.h, "half": self.grid.half,
                "domain_radius": self.domain_radius, "values": vals}


# -- realification helpers ----------------------------------------------------

def to_real4(values: np.ndarray) -> np.ndarray:
    """(..., 2) complex -> (..., 4) real, ordering (x1, y1, x2, y2)."""
    return np.stack([values[..., 0].real, values[..., 0].imag,
                     values[..., 1].real, values[..., 1].imag], axis=-1)


def from_real4(r: np.ndarray) -> np.ndarray:
    return np.stack([r[..., 0] + 1j * r[..., 1],
                     r[..., 2] + 1j * r[..., 3]], axis=-1)


def apply_matrix_field(M: np.ndarray, f: GridField) -> GridField:
    """Apply a (ny, nx, 4, 4) real matrix stack to a vector field."""
    out = from_real4(np.einsum("yxab,yxb->yxa", M, to_real4(f.values)))
    return GridField(f.grid, out, f.domain_radius)


def cmul_field(c: np.ndarray) -> np.ndarray:
    """(ny, nx) complex scalars -> stacked real matrices of multiplication."""
    a, b = c.real, c.imag
    out = np.zeros(c.shape + (4, 4))
    out[..., 0, 0] = a
    out[..., 0, 1] = -b
    out[..., 1, 0] = b
    out[..., 1, 1] = a
    out[..., 2:, 2:] = out[..., :2, :2]
    return out


# -- boundary extension --------------------------------------------------------

def extend_l1p(u: GridField) -> GridField:
    """Extend a half-disk field across the edge by the two-point reflection

        u~(x, y) = -3 u(x, -y) + 4 u(x, -y/2)         for y < 0,

    which matches value and first derivative at the edge.  Half-index points
    -y/2 are filled by quadratic interpolation in the row direction, so
    polynomials in y up to degree 2 extend exactly.
    """
    if u.grid.half != "upper":
        raise ValueError("extend_l1p expects a field on the upper half grid")
    grid_full = u.grid.full()
    N = u.grid.N
    v = u.values
    out = v.copy()
    mask_full = grid_full.mask

    def row_at(jf: float) -> np.ndarray:
        """Row of u at y = jf * h via 3-point Lagrange interpolation."""
        base = int(min(max(round(jf) - 1, 0), N - 2))
        t = jf - base
        r0, r1, r2 = v[N + base], v[N + base + 1], v[N + base + 2]
        l0 = 0.5 * (t - 1.0) * (t - 2.0)
        l1 = t * (2.0 - t)
        l2 = 0.5 * t * (t - 1.0)
        return l0 * r0 + l1 * r1 + l2 * r2

    for j in range(1, N + 1):           # y = -j*h rows
        mirrored = v[N + j]             # u(x, +j h)
        half = row_at(j / 2.0)          # u(x, +j h / 2)
        out[N - j] = -3.0 * mirrored + 4.0 * half
    if out.ndim == 3:
        out = np.where(mask_full[..., None], out, 0.0)
    else:
        out = np.where(mask_full, out, 0.0)
    return GridField(grid_full, out, u.domain_radius)

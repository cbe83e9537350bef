"""Discrete Cauchy-Green operator on the disk grid and the Neumann right
inverse for perturbed Cauchy-Riemann operators.

The integral

    (T f)(z) = -(1/pi) * integral over the disk of f(zeta)/(zeta - z) dA

is discretized by one exact kernel integral per lattice cell: the weight for
offset d is the closed-form integral of 1/zeta over the h-square centered at
d (zero for the singular cell by symmetry), so no special-casing of the
singularity is needed and the scheme keeps first-order accuracy up to the
boundary and better inside.  Application is an FFT convolution.

T(1) = conj(z) on the disk; d/d(conj z) T f = f.  In the operator convention
used by the solver, D_st = d_xi + J_st d_eta = 2 d/d(conj z), so the base
right inverse is T/2 normalized to vanish at the origin.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.signal import fftconvolve

from .grid import GridField, apply_matrix_field
from .structures import JST


class ContractionError(RuntimeError):
    """Neumann series terms stopped decreasing: perturbation too large."""


@lru_cache(maxsize=8)
def cell_kernel(N: int) -> np.ndarray:
    """Exact integrals of 1/zeta over h-cells at all lattice offsets.

    Offsets d = (i + 1j*j) * h for i, j in [-2N, 2N].  The corner
    antiderivative F(z) = z (Log z - 1) evaluates the cell integral; the row
    that straddles the branch cut (j = 0, i < 0) is recovered from the central
    antisymmetry w(-d) = -w(d), and the singular cell integrates to zero over
    the symmetric square.
    """
    h = 1.0 / N
    n = 2 * N
    idx = np.arange(-n, n + 1)
    X, Y = np.meshgrid(idx * h, idx * h)
    a, b = X - h / 2, X + h / 2
    c, d = Y - h / 2, Y + h / 2

    def F(zr, zi):
        z = zr + 1j * zi
        out = np.zeros_like(z)
        nz = z != 0
        out[nz] = z[nz] * (np.log(z[nz]) - 1.0)
        return out

    w = -1j * (F(b, d) - F(b, c) - F(a, d) + F(a, c))
    j0 = n
    w[j0, :n] = -w[j0, :n:-1]
    w[j0, n] = 0.0
    return w


def cauchy_green(f: GridField) -> GridField:
    """Discrete T f; componentwise for vector fields."""
    grid = f.grid
    K = cell_kernel(grid.N)
    m = grid.mask

    def one(comp: np.ndarray) -> np.ndarray:
        g = np.where(m, comp, 0.0)
        # kernel argument is source minus target; w is odd, so convolving
        # with w(t - s) flips the sign of the defining -(1/pi) factor
        return fftconvolve(g, K, mode="same") / np.pi

    if f.is_vector:
        out = np.stack([one(f.values[..., 0]), one(f.values[..., 1])], axis=-1)
    else:
        out = one(f.values)
    return GridField(grid, out, f.domain_radius)


def right_inverse_base(f: GridField) -> GridField:
    """T0 with D_st T0 ~ Id and (T0 f)(0) = 0."""
    v = cauchy_green(f).scale(0.5)
    shift = v.at_origin()
    if f.is_vector:
        out = v.values - shift[None, None, :]
    else:
        out = v.values - shift
    m = f.grid.mask
    out = np.where(m[..., None] if f.is_vector else m, out, 0.0)
    return GridField(f.grid, out, f.domain_radius)


def dbar_operator(J: np.ndarray, R: np.ndarray | None, w: GridField,
                  edge_onesided: bool = False) -> GridField:
    """D_{J,R} w = d_xi w + J d_eta w + R w for stacked matrix fields."""
    dx = w.deriv("x", edge_onesided=edge_onesided)
    dy = w.deriv("y", edge_onesided=edge_onesided)
    out = dx + apply_matrix_field(J, dy)
    if R is not None:
        out = out + apply_matrix_field(R, w)
    return out


def neumann_inverse(J: np.ndarray, R: np.ndarray | None, f: GridField,
                    tol: float = 1e-10, max_terms: int = 80,
                    ratio_limit: float = 1.0) -> GridField:
    """Right inverse of D_{J,R} built as the perturbation series around D_st.

    Iterates g_{k+1} = -[(J - J_st) d_eta + R] T0 g_k, accumulating w = sum
    T0 g_k, and stops when the term norm drops below tol.  Term norms must
    decrease: a ratio >= ratio_limit (measured once past the first terms)
    raises ContractionError.
    """
    dJ = J - JST[None, None, :, :]
    scale = max(1.0, f.sup_norm())
    g = f
    w = None
    prev_norm = None
    for term in range(max_terms + 1):
        piece = right_inverse_base(g)
        norm = piece.sup_norm()
        if prev_norm is not None and prev_norm > 0 and term >= 2 \
                and norm / prev_norm >= ratio_limit:
            raise ContractionError(
                f"perturbation too large: term ratio "
                f"{norm / prev_norm:.3f} at term {term}")
        w = piece if w is None else w + piece
        if norm < tol * scale:
            return w
        corr = apply_matrix_field(dJ, piece.deriv("y"))
        if R is not None:
            corr = corr + apply_matrix_field(R, piece)
        g = corr.scale(-1.0)
        prev_norm = norm
    raise ContractionError("Neumann series did not reach tolerance "
                           f"within {max_terms} terms")


def series_tail_norm(J: np.ndarray, R: np.ndarray | None, f: GridField,
                     w: GridField) -> float:
    """Residual of the integral-form equation w = T0[f - ((J-J_st) d_eta + R) w].

    This is the quantity the Neumann series drives to zero; the
    finite-difference residual of D_{J,R} w - f is limited separately by the
    quadrature/stencil consistency, O(h^2) at field scale.
    """
    dJ = J - JST[None, None, :, :]
    rhs = f - apply_matrix_field(dJ, w.deriv("y"))
    if R is not None:
        rhs = rhs - apply_matrix_field(R, w)
    return (w - right_inverse_base(rhs)).sup_norm()

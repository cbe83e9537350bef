import numpy as np
import pytest

from halfdisk.cauchy import (ContractionError, cauchy_green, cell_kernel,
                             dbar_operator, neumann_inverse,
                             right_inverse_base, series_tail_norm)
from halfdisk.grid import DiskGrid, GridField
from halfdisk.structures import JST, StructureField


def grid_field(fn, N, vector=False):
    g = DiskGrid(N)
    if vector:
        v = np.stack([fn(g.nodes), fn(g.nodes)], axis=-1)
    else:
        v = fn(g.nodes)
    return GridField(g, v.astype(complex))


class TestCellKernel:
    def test_matches_brute_quadrature(self):
        N = 8
        h = 1.0 / N
        K = cell_kernel(N)
        rng = np.random.default_rng(0)
        m = 220
        xs = (np.arange(m) + 0.5) / m * h - h / 2
        X, Y = np.meshgrid(xs, xs)
        for i, j in [(1, 0), (-3, 0), (0, -2), (2, 5), (-4, -1)]:
            d = complex(i * h, j * h)
            brute = np.sum(1.0 / ((X + d.real) + 1j * (Y + d.imag))) * (h / m) ** 2
            assert abs(K[j + 2 * N, i + 2 * N] - brute) < 1e-6

    def test_singular_cell_zero(self):
        K = cell_kernel(8)
        assert K[16, 16] == 0.0

    def test_antisymmetry(self):
        K = cell_kernel(8)
        assert np.max(np.abs(K + K[::-1, ::-1])) < 1e-13


class TestCauchyGreen:
    def test_zero_maps_to_zero(self):
        f = grid_field(lambda z: np.zeros_like(z), 16)
        assert cauchy_green(f).sup_norm() == 0.0

    def test_pompeiu_constant(self):
        # T(1) = conj(z) on the disk
        for N, cap in ((16, 5 / 16), (32, 5 / 32), (64, 5 / 64)):
            f = grid_field(lambda z: np.ones_like(z), N)
            T1 = cauchy_green(f)
            err = np.abs(T1.values - np.conj(f.grid.nodes))[f.grid.mask]
            assert err.max() < cap

    def test_dbar_inverts_with_order(self):
        errs = []
        for N in (16, 32, 64):
            f = grid_field(lambda z: np.exp(0.3 * z) * np.conj(z) ** 2 + 1, N)
            Tf = cauchy_green(f)
            r = Tf.dbar() - f
            errs.append(r.sup_norm(0.85))
        order1 = np.log2(errs[0] / errs[1])
        order2 = np.log2(errs[1] / errs[2])
        assert order1 >= 0.9 and order2 >= 0.9

    def test_componentwise_on_vectors(self):
        f = grid_field(lambda z: np.ones_like(z), 16, vector=True)
        T = cauchy_green(f)
        assert np.allclose(T.values[..., 0], T.values[..., 1])


class TestRightInverseBase:
    def test_vanishes_at_origin(self):
        f = grid_field(lambda z: np.exp(z), 16, vector=True)
        v = right_inverse_base(f)
        assert np.max(np.abs(v.at_origin())) == 0.0

    def test_half_factor_against_full_operator(self):
        # D_st T0 f = f with D_st = d_xi + J_st d_eta = 2 dbar
        g = DiskGrid(32)
        f = GridField(g, np.stack([np.exp(0.2 * g.nodes), 0.5 + 0 * g.nodes],
                                  axis=-1))
        v = right_inverse_base(f)
        J = np.broadcast_to(JST, g.shape + (4, 4)).copy()
        r = dbar_operator(J, None, v) - f
        assert r.sup_norm(0.85) < 0.02 * max(1.0, f.sup_norm())


class TestNeumannInverse:
    def test_zero_rhs(self):
        g = DiskGrid(16)
        J = np.broadcast_to(JST, g.shape + (4, 4)).copy()
        f = GridField(g, np.zeros(g.shape + (2,)))
        w = neumann_inverse(J, None, f)
        assert w.sup_norm() == 0.0

    def test_standard_structure_reduces_to_base(self):
        g = DiskGrid(16)
        J = np.broadcast_to(JST, g.shape + (4, 4)).copy()
        f = GridField(g, np.stack([np.ones(g.shape), np.zeros(g.shape)],
                                  axis=-1))
        w = neumann_inverse(J, None, f)
        base = right_inverse_base(f)
        assert (w - base).sup_norm() < 1e-12
        # base case equals the normalized Cauchy transform: 2*T0(1) = zbar
        err = np.abs(2 * w.values[..., 0] - np.conj(g.nodes))[g.mask]
        assert err.max() < 5 * g.h

    def test_perturbed_structure_converges(self):
        g = DiskGrid(24)
        Jf = StructureField.tamed_perturbation(0.05, seed=3, domain="disk")
        stack = Jf.eval_many(g.nodes.reshape(-1)).reshape(g.shape + (4, 4))
        rng = np.random.default_rng(5)
        f = GridField(g, rng.normal(size=g.shape + (2,))
                      + 1j * rng.normal(size=g.shape + (2,)))
        w = neumann_inverse(stack, None, f, tol=1e-8)
        # the integral-form residual is the series tail; it must be tiny
        tail = series_tail_norm(stack, None, f, w)
        assert tail < 1e-6 * max(1.0, f.sup_norm())

    def test_contraction_failure_raises(self):
        g = DiskGrid(12)
        # gross perturbation: taming margin nearly exhausted
        Jf = StructureField.tamed_perturbation(0.95, seed=1, domain="disk")
        bad = Jf.eval_many(g.nodes.reshape(-1)).reshape(g.shape + (4, 4))
        rng = np.random.default_rng(2)
        f = GridField(g, rng.normal(size=g.shape + (2,))
                      + 1j * rng.normal(size=g.shape + (2,)))
        with pytest.raises(ContractionError):
            neumann_inverse(bad, None, f, max_terms=30)

    def test_thirty_terms_suffice_at_five_percent(self):
        g = DiskGrid(24)
        Jf = StructureField.tamed_perturbation(0.05, seed=7, domain="disk")
        stack = Jf.eval_many(g.nodes.reshape(-1)).reshape(g.shape + (4, 4))
        f = GridField(g, np.stack([np.exp(0.1 * g.nodes),
                                   np.conj(g.nodes)], axis=-1))
        w = neumann_inverse(stack, None, f, tol=1e-8, max_terms=30)
        assert series_tail_norm(stack, None, f, w) < 1e-6 * f.sup_norm()

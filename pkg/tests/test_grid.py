import numpy as np
import pytest

from halfdisk.grid import (DiskGrid, GridField, apply_matrix_field, cmul_field,
                           extend_l1p, from_real4, to_real4)
from halfdisk.series import TruncatedSeries
from halfdisk.structures import JST


class TestGrid:
    def test_edge_row_exact(self):
        g = DiskGrid(8, "upper")
        assert np.all(g.nodes[g.edge_row()].imag == 0.0)
        assert g.mask[g.edge_row()].any()

    def test_conjugation_pairing(self):
        g = DiskGrid(8)
        f = GridField(g, g.nodes ** 2 + 1j * g.nodes)
        r = f.conj_reflect()
        j, i = 10, 5
        z = g.nodes[j, i]
        zc = np.conj(z)
        jc = np.where(np.isclose(g.nodes.imag, zc.imag))[0][0]
        assert np.isclose(r.values[j, i], np.conj(f.values[jc, i]))

    def test_symmetrize_real_fixes_reality(self):
        g = DiskGrid(8)
        rng = np.random.default_rng(0)
        f = GridField(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
        s = f.symmetrize_real()
        assert s.reality_defect() < 1e-14

    def test_fd_derivative_exact_on_quadratics(self):
        g = DiskGrid(16)
        Z = g.nodes
        f = GridField(g, Z ** 2)
        dx = f.deriv("x")
        interior = g.mask & (np.abs(Z) < 0.8)
        assert np.max(np.abs(dx.values - 2 * Z)[interior]) < 1e-12

    def test_dbar_of_holomorphic_vanishes(self):
        g = DiskGrid(16)
        f = GridField(g, g.nodes ** 2)
        assert f.dbar().sup_norm(0.8) < 1e-12

    def test_real4_round_trip(self):
        rng = np.random.default_rng(1)
        v = rng.normal(size=(3, 3, 2)) + 1j * rng.normal(size=(3, 3, 2))
        assert np.allclose(from_real4(to_real4(v)), v)

    def test_cmul_field_matches_scalar_multiplication(self):
        g = DiskGrid(4)
        c = g.nodes
        M = cmul_field(c)
        rng = np.random.default_rng(2)
        v = rng.normal(size=g.shape + (2,)) + 1j * rng.normal(size=g.shape + (2,))
        f = GridField(g, v)
        lhs = apply_matrix_field(M, f).values
        rhs = np.where(g.mask[..., None], v * c[..., None], 0.0)
        assert np.allclose(lhs, rhs)

    def test_jst_stack_acts_as_i(self):
        g = DiskGrid(4)
        M = np.broadcast_to(JST, g.shape + (4, 4)).copy()
        v = GridField(g, np.ones(g.shape + (2,), dtype=complex))
        out = apply_matrix_field(M, v)
        assert np.allclose(out.values[g.mask], 1j)


class TestExtendAcrossEdge:
    def field(self, fn, N=16):
        g = DiskGrid(N, "upper")
        vals = fn(g.nodes.real, g.nodes.imag).astype(complex)
        return GridField(g, vals)

    def test_constants_preserved(self):
        u = self.field(lambda x, y: np.ones_like(x))
        e = extend_l1p(u)
        assert np.allclose(e.values[e.grid.mask], 1.0)

    def test_linear_preserved(self):
        u = self.field(lambda x, y: y)
        e = extend_l1p(u)
        Z = e.grid.nodes
        m = e.grid.mask & (np.abs(Z) < 0.9)
        assert np.max(np.abs(e.values - Z.imag)[m]) < 1e-12

    def test_quadratic_flips_sign_doubled(self):
        u = self.field(lambda x, y: y ** 2)
        e = extend_l1p(u)
        Z = e.grid.nodes
        lower = e.grid.mask & (Z.imag < 0) & (np.abs(Z) < 0.9)
        assert np.max(np.abs(e.values[lower] + 2 * Z.imag[lower] ** 2)) < 1e-12

    def test_c1_matching_at_edge(self):
        # one-sided slope gap across the edge is pure truncation, so it must
        # shrink linearly with h
        gaps = []
        for N in (16, 32, 64):
            u = self.field(lambda x, y: np.exp(x) * (1 + y + 3 * y ** 2), N=N)
            e = extend_l1p(u)
            g = e.grid
            edge = g.edge_row()
            above = (e.values[edge + 1] - e.values[edge]) / g.h
            below = (e.values[edge] - e.values[edge - 1]) / g.h
            sel = (g.mask[edge] & g.mask[edge + 1] & g.mask[edge - 1]
                   & (np.abs(g.nodes[edge]) < 0.9))
            gaps.append(np.max(np.abs(above - below)[sel]))
        assert gaps[1] < 0.6 * gaps[0]
        assert gaps[2] < 0.6 * gaps[1]

    def test_requires_upper_grid(self):
        g = DiskGrid(8)
        with pytest.raises(ValueError):
            extend_l1p(GridField(g, np.zeros(g.shape)))


class TestSeriesSampling:
    def test_vector_series_on_grid(self):
        s = TruncatedSeries.from_coeffs([(0, 0), (1, 0), (0, 1)], order=4,
                                        exact=False)
        g = DiskGrid(8)
        f = GridField.from_series(s, g)
        z = g.nodes[10, 12]
        assert np.isclose(f.values[10, 12, 0], z)
        assert np.isclose(f.values[10, 12, 1], z ** 2)

    def test_real_series_reflection_compatible(self):
        s = TruncatedSeries.from_coeffs([(0, 0), (1, 0), (0.5, 0.25)], order=4,
                                        exact=False)
        f = GridField.from_series(s, DiskGrid(8))
        assert f.reality_defect() < 1e-14

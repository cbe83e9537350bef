import numpy as np
import pytest

from halfdisk.adjunction import (CurveConfig,
                                 InconsistentConfig, SectionZeroData,
                                 apply_forward_move, check_adjunction,
                                 doubled_chern_count, embedded_seed,
                                 forward_moves_available, maslov_from_zeros,
                                 maslov_sum, maslov_tangent,
                                 move_boundary_surgery, move_cusp_to_nodes,
                                 move_node_to_handle, random_singular_config)


class TestMaslovFromZeros:
    def test_no_zeros(self):
        assert maslov_from_zeros(SectionZeroData((), ())) == 0

    def test_weighting(self):
        assert maslov_from_zeros(SectionZeroData((1,), (1,))) == 3

    def test_orientable_boundary_even(self):
        z = SectionZeroData((1, 1, -1), ())
        m = maslov_from_zeros(z)
        assert m == 2 and m % 2 == 0

    def test_doubling_consistency(self):
        # without boundary zeros the index equals the doubled Chern count
        z = SectionZeroData((1, -1, 1, 1), ())
        assert maslov_from_zeros(z) == doubled_chern_count(z)

    def test_sign_validation(self):
        with pytest.raises(ValueError):
            SectionZeroData((2,), ())


class TestMaslovTangent:
    @pytest.mark.parametrize("g,sigma,expect", [
        (0, 1, 2), (1, 2, -4), (0, 2, 0),
        (0, 3, -2), (1, 1, -2), (1, 3, -6),
        (2, 1, -6), (2, 2, -8), (2, 3, -10),
    ])
    def test_table(self, g, sigma, expect):
        assert maslov_tangent(g, sigma) == expect

    def test_sum(self):
        assert maslov_sum(2, 0) == 2
        assert maslov_sum(-4, 4) == 0

    def test_total_assembly(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            g, sigma = int(rng.integers(0, 4)), int(rng.integers(1, 4))
            n = int(rng.integers(-8, 9))
            cfg = CurveConfig(g=g, sigma=sigma, normal_maslov=n, double_sq=n)
            assert cfg.maslov_total == maslov_sum(n, maslov_tangent(g, sigma))


class TestCheckAdjunction:
    def test_embedded_equal_for_every_normal_maslov(self):
        for m in range(-8, 9):
            v = check_adjunction(embedded_seed(0, 1, m))
            assert v.equal

    def test_negative_configuration(self):
        # a boundary node claimed without the compensating bookkeeping
        cfg = CurveConfig(g=0, sigma=1, delta_b=1, normal_maslov=3,
                          double_sq=3)
        v = check_adjunction(cfg)
        assert not v.equal and v.gap == 1
        assert not cfg.double_consistent()

    def test_parity_rejection(self):
        cfg = CurveConfig(g=0, sigma=1, normal_maslov=0, double_sq=1)
        with pytest.raises(InconsistentConfig):
            check_adjunction(cfg)


class TestMoves:
    def seed(self):
        return CurveConfig(g=1, sigma=2, delta_b=2, delta_i=2, kappa_i=2,
                           normal_maslov=4,
                           double_sq=4 + 4 * (2 + 2) + 2 * 2)

    def test_cusp_to_nodes(self):
        cfg = self.seed()
        out = move_cusp_to_nodes(cfg, 2)
        assert (out.kappa_i, out.delta_i) == (0, 4)
        assert out.normal_maslov == cfg.normal_maslov
        assert out.double_sq == cfg.double_sq
        assert out.maslov_total == cfg.maslov_total
        assert check_adjunction(out).equal == check_adjunction(cfg).equal

    def test_cusp_identity_move(self):
        cfg = self.seed()
        assert move_cusp_to_nodes(cfg, 0) == cfg

    def test_node_to_handle(self):
        cfg = self.seed()
        out = move_node_to_handle(cfg)
        assert (out.g, out.delta_i) == (2, 1)
        assert out.normal_maslov == cfg.normal_maslov + 4
        assert out.maslov_total == cfg.maslov_total
        assert out.double_sq == cfg.double_sq
        assert out.double_consistent() == cfg.double_consistent()

    def test_boundary_surgery_split(self):
        cfg = self.seed()
        out = move_boundary_surgery(cfg, "split")
        assert (out.delta_b, out.sigma, out.g) == (1, 3, 1)
        assert out.double_sq == cfg.double_sq
        assert out.maslov_total == cfg.maslov_total
        assert out.euler_char_image == cfg.euler_char_image
        assert check_adjunction(out).equal

    def test_boundary_surgery_merge(self):
        cfg = self.seed()
        out = move_boundary_surgery(cfg, "merge")
        assert (out.delta_b, out.sigma, out.g) == (1, 1, 2)
        assert out.double_sq == cfg.double_sq
        assert out.maslov_total == cfg.maslov_total
        assert out.euler_char_image == cfg.euler_char_image
        assert check_adjunction(out).equal

    def test_insufficient_counts(self):
        cfg = embedded_seed(0, 1, 0)
        with pytest.raises(InconsistentConfig):
            move_node_to_handle(cfg)
        with pytest.raises(InconsistentConfig):
            move_boundary_surgery(cfg)
        with pytest.raises(InconsistentConfig):
            move_cusp_to_nodes(cfg, 1)


class TestClosure:
    def test_thousand_random_sequences(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            cfg = random_singular_config(rng)
            assert check_adjunction(cfg).equal
            assert cfg.double_consistent()
            guard = 0
            while not cfg.embedded and guard < 50:
                name = rng.choice(forward_moves_available(cfg))
                cfg = apply_forward_move(cfg, name, rng)
                assert check_adjunction(cfg).equal
                assert cfg.double_consistent()
                if cfg.kappa_i == 0 and cfg.delta_b == 0:
                    assert cfg.double_sq == cfg.normal_maslov + 4 * cfg.delta_i
                guard += 1
            assert cfg.embedded
            assert cfg.double_sq == cfg.normal_maslov

    def test_double_sq_never_moves(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            cfg = random_singular_config(rng)
            start = cfg.double_sq
            while not cfg.embedded:
                name = rng.choice(forward_moves_available(cfg))
                cfg = apply_forward_move(cfg, name, rng)
            assert cfg.double_sq == start

from fractions import Fraction

import numpy as np

from halfdisk.roots import (count_real_roots, durand_kerner, is_squarefree,
                            symmetrize_real)


class TestDurandKerner:
    def test_quadratic(self):
        # z^2 + z = z(z+1)
        roots = sorted(durand_kerner([0, 1, 1]), key=lambda z: z.real)
        assert np.allclose(roots, [-1.0, 0.0], atol=1e-10)

    def test_complex_pair_symmetrized(self):
        # z^2 + 1
        roots = symmetrize_real(durand_kerner([1, 0, 1]))
        assert sorted(z.imag for z in roots) == sorted([1.0, -1.0]) or \
            np.allclose(sorted(z.imag for z in roots), [-1.0, 1.0], atol=1e-10)

    def test_degree_five_with_clustered_roots(self):
        rs = [-0.5, -0.01, 0.0, 0.3, 2.0]
        c = np.poly(rs)[::-1]
        roots = sorted(symmetrize_real(durand_kerner(c)), key=lambda z: z.real)
        assert np.allclose([z.real for z in roots], rs, atol=1e-8)
        assert all(z.imag == 0.0 for z in roots)

    def test_leading_zeros_stripped(self):
        roots = durand_kerner([0, 1, 0, 0])
        assert len(roots) == 1 and abs(roots[0]) < 1e-12


class TestSturm:
    def test_simple_counts(self):
        # z(z+1)(z-2): roots -1, 0, 2
        p = [0, -2, -1, 1]
        assert count_real_roots(p, -10, 10) == 3
        assert count_real_roots(p, -Fraction(1, 2), 10) == 2
        assert count_real_roots(p, Fraction(1, 2), Fraction(3, 2)) == 0

    def test_no_real_roots(self):
        assert count_real_roots([1, 0, 1], -100, 100) == 0

    def test_multiple_root_counts_once(self):
        # z^2 (distinct roots in the Sturm sense)
        assert count_real_roots([0, 0, 1], -1, 1) == 1

    def test_rational_endpoints_exact(self):
        # root exactly at 1/3 is excluded at the open lower endpoint
        p = [-Fraction(1, 3), 1]
        assert count_real_roots(p, Fraction(1, 3), 1) == 0
        assert count_real_roots(p, 0, Fraction(1, 3)) == 1


class TestSquarefree:
    def test_squarefree(self):
        assert is_squarefree([0, -2, -1, 1])

    def test_not_squarefree(self):
        # (z-1)^2 = 1 - 2z + z^2
        assert not is_squarefree([1, -2, 1])

    def test_constant(self):
        assert is_squarefree([5])

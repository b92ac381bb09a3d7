from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from collatz_paths.oracle import brute_force_min_follower
from collatz_paths.paths import Path, apply_path, follows, iter_paths_upto
from collatz_paths.solver import (
    NotCoprime,
    characteristic_solution,
    diophantine_residual,
    mod_inverse,
    smallest_follower,
    smallest_follower_any_end,
    solve_c,
)


def P(n, k, *r):
    return Path(n, k, r)


def ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def inverse_oracle(a, m):
    g, x, _ = ext_gcd(a % m, m)
    assert g == 1
    return x % m


class TestModInverse:
    def test_example(self):
        assert inverse_oracle(128, 27) == 23
        assert mod_inverse(128, 27) == 23
        assert 128 * 23 % 27 == 1

    def test_trivial(self):
        assert mod_inverse(1, 3) == 1

    def test_not_coprime(self):
        with pytest.raises(NotCoprime):
            mod_inverse(2, 4)

    @settings(max_examples=200)
    @given(st.integers(0, 60), st.integers(1, 40))
    def test_against_ext_gcd(self, e2, e3):
        a, m = 2**e2, 3**e3
        assert mod_inverse(a, m) == inverse_oracle(a, m)


def c_by_scan(path, i):
    ri = path.r[i - 1]
    big = 2 ** (path.length + 1)
    small = 2 ** (ri + i - 1)
    return next(c for c in range(3**ri) if (c * big + small) % 3**ri == 0)


class TestSolveC:
    def test_published_constants(self):
        path = P(4, 2, 3, 4)
        assert solve_c(path, 1).c == 5
        assert solve_c(path, 2).c == 20

    def test_zero_divisor_exponent(self):
        cr = solve_c(P(1, 1, 0), 1)
        assert c_by_scan(P(1, 1, 0), 1) == 0
        assert (cr.c, cr.t) == (0, 1)

    def test_index_range(self):
        with pytest.raises(IndexError):
            solve_c(P(1, 1, 0), 2)

    def test_canonical_against_scan(self):
        for path in iter_paths_upto(9):
            for i in range(1, path.k + 1):
                cr = solve_c(path, i)
                ri = path.r[i - 1]
                assert 0 <= cr.c < 3**ri
                assert cr.c == c_by_scan(path, i)
                assert cr.c * 2 ** (path.length + 1) + 2 ** (ri + i - 1) == cr.p * 3**ri
                assert cr.t == cr.p


class TestCharacteristicSolution:
    @pytest.mark.parametrize(
        "path,residue,modulus,minimum",
        [
            (P(4, 2, 3, 4), 71, 128, 71),
            (P(1, 1, 0), 6, 8, 6),
            (P(4, 0), 31, 32, 31),
        ],
    )
    def test_examples(self, path, residue, modulus, minimum):
        sol = characteristic_solution(path)
        assert (sol.x_residue, sol.x_modulus, sol.min_follower) == (residue, modulus, minimum)

    def test_single_horizontal_then_three_halvings(self):
        assert characteristic_solution(P(1, 3, 1, 1, 1)).min_follower == 5

    def test_residue_formulas(self):
        for path in iter_paths_upto(8):
            sol = characteristic_solution(path)
            assert (sol.x_residue + 1 + sum(c.t for c in sol.c)) % sol.x_modulus == 0
            lam_sum = sum(c.c * 3 ** (path.n - ri) for c, ri in zip(sol.c, path.r))
            assert (sol.lambda_residue + 1 + lam_sum) % sol.lambda_modulus == 0
            assert 0 <= sol.x_residue < sol.x_modulus and 0 <= sol.lambda_residue < sol.lambda_modulus

    def test_m_minus_c_sum(self):
        sol = characteristic_solution(P(1, 1, 1))
        assert sol.x_residue == 1
        assert sol.m_minus_c_sum(1) == Fraction(1, 3)
        assert sol.m_minus_c_sum(9) == Fraction(4, 3)
        with pytest.raises(ValueError):
            sol.m_minus_c_sum(2)


class TestSmallestFollower:
    def test_examples(self):
        assert smallest_follower(P(1, 3, 1, 1, 1)) == 5
        assert smallest_follower(P(1, 1, 0)) == 6
        assert smallest_follower(P(4, 2, 3, 4)) == 71

    @pytest.mark.parametrize("n", range(1, 11))
    def test_alternating_path_of_one(self, n):
        assert smallest_follower(Path(n, n, tuple(range(1, n + 1)))) == 1

    def test_pure_horizontal(self):
        for n in range(1, 13):
            assert smallest_follower(P(n, 0)) == 2 ** (n + 1) - 1

    def test_any_end(self):
        assert smallest_follower_any_end(P(1, 1, 0)) == 2
        assert smallest_follower_any_end(P(1, 3, 1, 1, 1)) == 5

    def test_matches_brute_force(self):
        for path in iter_paths_upto(8):
            bound = 2 ** (path.length + 2)
            assert smallest_follower(path) == brute_force_min_follower(path, True, bound), path
            assert smallest_follower_any_end(path) == brute_force_min_follower(path, False, bound), path


class TestResidual:
    def test_derived_example(self):
        path = P(1, 1, 0)
        assert apply_path(6, path) == 5
        assert diophantine_residual(path, 6, 2) == 0

    def test_published_minimum(self):
        path = P(4, 2, 3, 4)
        lam = (apply_path(71, path) - 1) // 2
        assert diophantine_residual(path, 71, lam) == 0

    def test_perturbed(self):
        # -3*(5+1) + 8*(2+1) - 3 by hand; each unit step in x0 moves the residual by -3^n
        assert diophantine_residual(P(1, 1, 0), 5, 2) == 3
        assert diophantine_residual(P(1, 1, 0), 7, 2) == -3

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 8).flatmap(lambda s: st.sampled_from(list(iter_paths_upto(s)))), st.integers(-500, 500), st.integers(-500, 500))
    def test_linearity(self, path, x0, lam):
        shifted = diophantine_residual(path, x0 + 2 ** (path.length + 1), lam + 3**path.n)
        assert shifted == diophantine_residual(path, x0, lam)

    def test_lambda_consistency(self):
        for path in iter_paths_upto(9):
            sol = characteristic_solution(path)
            x0 = smallest_follower(path)
            assert follows(x0, path)
            lam = (apply_path(x0, path) - 1) // 2
            assert diophantine_residual(path, x0, lam) == 0
            assert (lam - sol.lambda_residue) % sol.lambda_modulus == 0

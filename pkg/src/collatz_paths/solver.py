"""Residue-class solution of the characteristic Diophantine equation.

For a path ``(n, k, r)`` the start values whose walk ends on an odd value
``2*lam + 1`` are the solutions of

    -3^n (x0 + 1) + 2^(n+k+1) (lam + 1) = sum_i 3^(n - r_i) 2^(r_i + i - 1)

Each summand is made integral through an auxiliary constant ``c_i`` with
``3^(r_i) | c_i 2^(n+k+1) + 2^(r_i+i-1)``; the canonical ``c_i`` is the least
nonnegative one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .paths import Path, apply_path, follows


class NotCoprime(ValueError):
    pass


class VerificationFailed(RuntimeError):
    """The solver produced a value that does not survive simulation."""


@dataclass(frozen=True)
class CResult:
    i: int
    c: int
    p: int
    t: int


@dataclass(frozen=True)
class CharacteristicSolution:
    path: Path
    c: tuple[CResult, ...]
    x_modulus: int
    x_residue: int
    lambda_modulus: int
    lambda_residue: int
    min_follower: int

    def m_minus_c_sum(self, x0: int) -> Fraction:
        """Exact ``m - sum c_i / 3^(r_i)`` for the representative ``x0``.

        ``m`` is the free integer of the general solution; it is only defined
        when ``x0`` lies in the solution class.
        """
        if (x0 - self.x_residue) % self.x_modulus:
            raise ValueError(f"{x0} is not in the class {self.x_residue} mod {self.x_modulus}")
        m = (x0 + 1 + sum(cr.t for cr in self.c)) // self.x_modulus
        return m - sum((Fraction(cr.c, 3**ri) for cr, ri in zip(self.c, self.path.r)), Fraction(0))


def mod_inverse(a: int, m: int) -> int:
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotCoprime(f"gcd({a}, {m}) != 1") from None


def solve_c(path: Path, i: int) -> CResult:
    if not 1 <= i <= path.k:
        raise IndexError(f"i={i} outside [1, {path.k}]")
    ri = path.r[i - 1]
    mod = 3**ri
    big = 1 << (path.length + 1)
    small = 1 << (ri + i - 1)
    c = (-small * mod_inverse(big, mod)) % mod
    p, rem = divmod(c * big + small, mod)
    assert rem == 0
    return CResult(i=i, c=c, p=p, t=p)


def characteristic_solution(path: Path) -> CharacteristicSolution:
    cs = tuple(solve_c(path, i) for i in range(1, path.k + 1))
    x_mod = 1 << (path.length + 1)
    lam_mod = 3**path.n
    x_res = (-1 - sum(cr.t for cr in cs)) % x_mod
    lam_res = (-1 - sum(cr.c * 3 ** (path.n - ri) for cr, ri in zip(cs, path.r))) % lam_mod
    return CharacteristicSolution(
        path=path,
        c=cs,
        x_modulus=x_mod,
        x_residue=x_res,
        lambda_modulus=lam_mod,
        lambda_residue=lam_res,
        min_follower=x_res if x_res > 0 else x_res + x_mod,
    )


def smallest_follower(path: Path) -> int:
    x0 = characteristic_solution(path).min_follower
    if not follows(x0, path) or apply_path(x0, path) % 2 == 0:
        raise VerificationFailed(f"solver value {x0} does not end odd on path {path}")
    return x0


def smallest_follower_any_end(path: Path) -> int:
    """Smallest follower without the odd-end restriction.

    The odd-end class mod 2^(n+k+1) halves the full follower class mod 2^(n+k).
    """
    mod = 1 << path.length
    x0 = characteristic_solution(path).x_residue % mod or mod
    if not follows(x0, path):
        raise VerificationFailed(f"solver value {x0} does not follow path {path}")
    return x0


def diophantine_residual(path: Path, x0: int, lam: int) -> int:
    n, k = path.n, path.k
    rhs = sum(3 ** (n - ri) << (ri + i - 1) for i, ri in enumerate(path.r, start=1))
    return -(3**n) * (x0 + 1) + (1 << (n + k + 1)) * (lam + 1) - rhs

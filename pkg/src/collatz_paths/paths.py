"""Path encoding and the closed-form path map of the accelerated Collatz map.

A path ``(n, k, r)`` schedules ``n`` horizontal moves ``x -> (3x+1)/2`` and
``k`` vertical moves ``x -> x/2``; ``r[i]`` counts the horizontal moves that
precede the ``(i+1)``-th vertical move.  Every value here is a Python int, so
nothing overflows regardless of path length.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence


class PathError(ValueError):
    """Raised for a malformed path tuple."""


class LengthMismatch(PathError):
    pass


class NotMonotone(PathError):
    pass


class OutOfRange(PathError):
    pass


class DoesNotFollow(ValueError):
    """Raised when a start value's parities do not realize a path."""


class Move(str, enum.Enum):
    HORIZONTAL = "H"
    VERTICAL = "V"

    def __str__(self) -> str:
        return self.value


H = Move.HORIZONTAL
V = Move.VERTICAL


@dataclass(frozen=True, order=True)
class Path:
    n: int
    k: int
    r: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", tuple(self.r))
        _check(self.n, self.k, self.r)

    @property
    def length(self) -> int:
        return self.n + self.k

    def literal(self) -> str:
        return f"{self.n}:{self.k}:" + ",".join(str(v) for v in self.r)

    def __str__(self) -> str:
        return self.literal()


@dataclass(frozen=True)
class GridPoint:
    n: int
    k: int


@dataclass(frozen=True)
class AffineForm:
    """The map ``x -> (mul*x + add) / div``."""

    mul: int
    add: int
    div: int

    def __call__(self, x: int) -> int:
        num = self.mul * x + self.add
        if num % self.div:
            raise DoesNotFollow(f"{self.div} does not divide {num}")
        return num // self.div


@dataclass(frozen=True)
class Trajectory:
    values: tuple[int, ...]
    moves: tuple[Move, ...]
    grid: tuple[GridPoint, ...]

    @property
    def final(self) -> int:
        return self.values[-1]


def _check(n: int, k: int, r: Sequence[int]) -> None:
    if n < 0 or k < 0:
        raise OutOfRange(f"n and k must be nonnegative, got n={n}, k={k}")
    if len(r) != k:
        raise LengthMismatch(f"expected {k} entries in r, got {len(r)}")
    prev = 0
    for i, ri in enumerate(r, start=1):
        if ri < 0 or ri > n:
            raise OutOfRange(f"r_{i}={ri} outside [0, {n}]")
        if ri < prev:
            raise NotMonotone(f"r_{i}={ri} < r_{i - 1}={prev}")
        prev = ri


def validate_path(n: int, k: int, r: Sequence[int]) -> Path:
    return Path(n, k, tuple(r))


def parse_path(text: str) -> Path:
    """Parse the ``"n:k:r1,...,rk"`` literal (``"4:0:"`` for an empty r)."""
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise PathError(f"path literal must look like N:K:R, got {text!r}")
    try:
        n, k = int(parts[0]), int(parts[1])
        r = [int(v) for v in parts[2].split(",")] if parts[2].strip() else []
    except ValueError as exc:
        raise PathError(f"non-integer field in path literal {text!r}") from exc
    return validate_path(n, k, r)


def move_sequence(path: Path) -> list[Move]:
    out: list[Move] = []
    i = 0
    for j in range(path.n + 1):
        while i < path.k and path.r[i] == j:
            out.append(V)
            i += 1
        if j < path.n:
            out.append(H)
    return out


def path_from_moves(moves: Sequence[Move]) -> Path:
    n = 0
    r = []
    for mv in moves:
        if mv == H:
            n += 1
        else:
            r.append(n)
    return Path(n, len(r), tuple(r))


def collatz_step(x: int) -> tuple[Move, int]:
    if x & 1:
        return H, (3 * x + 1) >> 1
    return V, x >> 1


def simulate(x0: int, num_moves: int) -> Trajectory:
    if x0 < 1:
        raise ValueError(f"x0 must be positive, got {x0}")
    values = [x0]
    moves: list[Move] = []
    grid = [GridPoint(0, 0)]
    x, n, k = x0, 0, 0
    for _ in range(num_moves):
        mv, x = collatz_step(x)
        if mv is H:
            n += 1
        else:
            k += 1
        values.append(x)
        moves.append(mv)
        grid.append(GridPoint(n, k))
    return Trajectory(tuple(values), tuple(moves), tuple(grid))


def iter_values(x0: int) -> Iterator[int]:
    x = x0
    while True:
        yield x
        x = (3 * x + 1) >> 1 if x & 1 else x >> 1


def follows(x0: int, path: Path) -> bool:
    x = x0
    for mv in move_sequence(path):
        if (x & 1) != (mv is H):
            return False
        x = (3 * x + 1) >> 1 if x & 1 else x >> 1
    return True


def trajectory_path(x0: int, num_moves: int) -> Path:
    return path_from_moves(simulate(x0, num_moves).moves)


def coefficient_a(path: Path) -> int:
    n, k = path.n, path.k
    total = 3**n - (1 << (n + k))
    for i, ri in enumerate(path.r, start=1):
        total += 3 ** (n - ri) << (ri + i - 1)
    return total


def coefficient_a_recurrence(path: Path) -> int:
    # horizontal at grid (n', k'): a <- 3a + 2^(n'+k'); vertical leaves a alone
    a = n = k = 0
    for mv in move_sequence(path):
        if mv is H:
            a = 3 * a + (1 << (n + k))
            n += 1
        else:
            k += 1
    return a


def affine_form(path: Path) -> AffineForm:
    return AffineForm(3**path.n, coefficient_a(path), 1 << path.length)


def apply_path(x0: int, path: Path) -> int:
    """Closed-form value reached from ``x0`` after walking ``path``.

    Raises :class:`DoesNotFollow` unless ``x0`` actually realizes the path;
    divisibility of the closed form alone does not guarantee that.
    """
    if x0 < 1 or not follows(x0, path):
        raise DoesNotFollow(f"{x0} does not follow path {path}")
    return affine_form(path)(x0)


def grid_points(path: Path) -> list[GridPoint]:
    pts = [GridPoint(0, 0)]
    n = k = 0
    for mv in move_sequence(path):
        if mv is H:
            n += 1
        else:
            k += 1
        pts.append(GridPoint(n, k))
    return pts


def iter_paths(length: int) -> Iterator[Path]:
    """All valid paths with ``n + k == length``, in canonical (n, k, r) order."""
    for n in range(length + 1):
        k = length - n
        yield from (Path(n, k, r) for r in _nondecreasing(k, 0, n))


def _nondecreasing(k: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for first in range(lo, hi + 1):
        for rest in _nondecreasing(k - 1, first, hi):
            yield (first,) + rest


def iter_paths_upto(max_length: int) -> Iterator[Path]:
    for s in range(max_length + 1):
        yield from iter_paths(s)

"""Brute-force ground truth by direct simulation."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .paths import Path, move_sequence, path_from_moves


class ReachStatus(str, enum.Enum):
    REACHED_ONE = "ReachedOne"
    ENTERED_CYCLE = "EnteredCycle"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ReachOutcome:
    status: ReachStatus
    moves: Optional[int] = None
    period: Optional[int] = None


def _walk(x: int, moves) -> Optional[int]:
    # final value if x realizes the move list, else None
    for mv in moves:
        odd = x & 1
        if odd != (mv == "H"):
            return None
        x = (3 * x + 1) >> 1 if odd else x >> 1
    return x


def followers_in_range(path: Path, lo: int, hi: int, require_odd_end: bool = False) -> list[int]:
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    moves = [mv.value for mv in move_sequence(path)]
    out = []
    for x0 in range(max(lo, 1), hi + 1):
        end = _walk(x0, moves)
        if end is None or (require_odd_end and not end & 1):
            continue
        out.append(x0)
    return out


def brute_force_min_follower(path: Path, require_odd_end: bool, bound: int) -> Optional[int]:
    hits = followers_in_range(path, 1, bound, require_odd_end)
    return hits[0] if hits else None


def follower_table(length: int, hi: int, require_odd_end: bool = False) -> dict[Path, list[int]]:
    """Group every ``x0`` in ``[1, hi]`` by the length-``length`` path it walks.

    One pass over the start values replaces a per-path scan; paths never hit
    in the range are absent from the result.
    """
    table: dict[Path, list[int]] = defaultdict(list)
    for x0 in range(1, hi + 1):
        x = x0
        moves = []
        for _ in range(length):
            if x & 1:
                moves.append("H")
                x = (3 * x + 1) >> 1
            else:
                moves.append("V")
                x >>= 1
        if require_odd_end and not x & 1:
            continue
        table[path_from_moves(moves)].append(x0)
    return dict(table)


def reaches_one(x0: int, move_cap: int) -> ReachOutcome:
    """Decide within ``move_cap`` moves whether ``x0`` hits 1 or a cycle."""
    if x0 < 1:
        raise ValueError(f"x0 must be positive, got {x0}")
    seen = {x0: 0}
    x = x0
    for m in range(move_cap + 1):
        if x == 1:
            return ReachOutcome(ReachStatus.REACHED_ONE, moves=m)
        if m == move_cap:
            break
        x = (3 * x + 1) >> 1 if x & 1 else x >> 1
        if x in seen and x != 1:
            return ReachOutcome(ReachStatus.ENTERED_CYCLE, period=m + 1 - seen[x])
        seen[x] = m + 1
    return ReachOutcome(ReachStatus.UNDETERMINED)

import pytest

from collatz_paths.oracle import (
    ReachOutcome,
    ReachStatus,
    brute_force_min_follower,
    follower_table,
    followers_in_range,
    reaches_one,
)
from collatz_paths.paths import Path, iter_paths, simulate


def P(n, k, *r):
    return Path(n, k, r)


class TestFollowers:
    def test_any_end(self):
        assert followers_in_range(P(1, 1, 0), 1, 16, False) == [2, 6, 10, 14]

    def test_odd_end(self):
        assert followers_in_range(P(1, 1, 0), 1, 16, True) == [6, 14]

    def test_empty_path(self):
        assert followers_in_range(P(0, 0), 1, 3, False) == [1, 2, 3]

    def test_bad_range(self):
        with pytest.raises(ValueError):
            followers_in_range(P(0, 0), 5, 4)


@pytest.mark.parametrize(
    "path,odd,expected",
    [(P(4, 2, 3, 4), True, 71), (P(1, 1, 0), False, 2), (P(1, 3, 1, 1, 1), True, 5)],
)
def test_brute_force_min(path, odd, expected):
    assert brute_force_min_follower(path, odd, 512) == expected


def test_brute_force_none():
    assert brute_force_min_follower(P(4, 0), True, 16) is None


def test_follower_table_agrees_with_per_path_scan():
    for s in range(7):
        hi = 2 ** (s + 3)
        table = follower_table(s, hi)
        odd = follower_table(s, hi, require_odd_end=True)
        for path in iter_paths(s):
            assert table.get(path, []) == followers_in_range(path, 1, hi)
            assert odd.get(path, []) == followers_in_range(path, 1, hi, True)


class TestReachesOne:
    def test_one(self):
        assert reaches_one(1, 10) == ReachOutcome(ReachStatus.REACHED_ONE, moves=0)

    def test_power_of_two(self):
        assert reaches_one(2**10, 20) == ReachOutcome(ReachStatus.REACHED_ONE, moves=10)

    def test_27(self):
        out = reaches_one(27, 10**4)
        # pinned: 111 standard steps with 41 odd steps folded in
        assert out.status is ReachStatus.REACHED_ONE and out.moves == 70
        assert simulate(27, 70).final == 1

    def test_cap_too_small(self):
        assert reaches_one(27, 69).status is ReachStatus.UNDETERMINED

    def test_cap_monotone(self):
        for x in range(1, 300):
            out = reaches_one(x, 500)
            assert out.status is ReachStatus.REACHED_ONE
            assert reaches_one(x, out.moves) == out
            assert reaches_one(x, out.moves + 37) == out

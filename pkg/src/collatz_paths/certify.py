"""Certified comparison of the Rhin lower bound against the log-correction term.

Both sides are enclosed in outward-rounded intervals (mpmath's ``iv``
context).  A comparison is only reported when the enclosures are disjoint.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass

from mpmath import iv, mp, mpf, nstr

RHIN_CONSTANT = 457
# exponent 13.3 taken as the exact rational 133/10
RHIN_EXP_NUM = 133
RHIN_EXP_DEN = 10

# iv precision is process-global state
_lock = threading.Lock()


class PrecisionInsufficient(ArithmeticError):
    """Interval enclosures overlap at the requested precision."""


class LogBase(str, enum.Enum):
    NATURAL = "natural"
    BASE10 = "base10"
    BASE2 = "base2"


@dataclass(frozen=True)
class Comparison:
    """Certified enclosures ``[bound_lo, bound_hi]`` of L(n) and ``[gap_lo, gap_hi]`` of R(n)."""

    n: int
    holds: bool
    bound_lo: mpf
    bound_hi: mpf
    gap_lo: mpf
    gap_hi: mpf

    def as_record(self, digits: int = 25) -> dict:
        with mp.workdps(digits + 5):
            return {
                "n": self.n,
                "holds": self.holds,
                "bound_lo": nstr(self.bound_lo, digits),
                "bound_hi": nstr(self.bound_hi, digits),
                "gap_lo": nstr(self.gap_lo, digits),
                "gap_hi": nstr(self.gap_hi, digits),
            }


def working_dps(n: int, precision_digits: int) -> int:
    # 1 - 1/(2*2^n) loses about n*log10(2) digits to cancellation
    return precision_digits + math.ceil(n * math.log10(2)) + 10


def enclosures(n: int, base: LogBase | str = LogBase.NATURAL, precision_digits: int = 60):
    """Return interval enclosures ``(L(n), R(n))`` as mpmath ``iv`` values."""
    base = LogBase(base)
    with _lock:
        saved = iv.dps
        iv.dps = working_dps(n, precision_digits)
        try:
            return _evaluate(n, base)
        finally:
            iv.dps = saved


def _evaluate(n: int, base: LogBase):
    one = iv.mpf(1)
    exponent = iv.mpf(RHIN_EXP_NUM) / RHIN_EXP_DEN
    bound = one / (RHIN_CONSTANT * iv.exp(exponent * iv.log(n)))
    gap = iv.log(one - one / (2 * iv.mpf(3) ** n)) - iv.log(one - one / (2 * iv.mpf(2) ** n))
    if base is LogBase.BASE10:
        gap = gap / iv.log(10)
    elif base is LogBase.BASE2:
        gap = gap / iv.log(2)
    return bound, gap


def compare(n: int, base: LogBase | str = LogBase.NATURAL, precision_digits: int = 60) -> Comparison:
    """Certify the sign of ``1/(457 n^13.3) - [log(1-1/(2*3^n)) - log(1-1/(2*2^n))]``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if precision_digits < 1:
        raise ValueError(f"precision_digits must be positive, got {precision_digits}")
    bound, gap = enclosures(n, base, precision_digits)
    b_lo, b_hi = (mp.make_mpf(v) for v in bound._mpi_)
    g_lo, g_hi = (mp.make_mpf(v) for v in gap._mpi_)
    if b_lo > g_hi:
        holds = True
    elif b_hi < g_lo:
        holds = False
    else:
        raise PrecisionInsufficient(
            f"enclosures overlap at n={n} with {precision_digits} digits; raise the precision"
        )
    return Comparison(n, holds, b_lo, b_hi, g_lo, g_hi)

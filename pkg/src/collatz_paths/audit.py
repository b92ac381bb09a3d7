"""Executable checks of the path-algebra claims over explicit finite domains.

Every check returns a :class:`ClaimResult`.  Counterexamples are plain dicts
of named integers (plus the path literal) ordered canonically by path and
then start value, so reports are identical for any worker count.
"""

from __future__ import annotations

import datetime
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from . import certify
from .certify import LogBase
from .oracle import ReachStatus, follower_table, reaches_one
from .paths import (
    Path,
    apply_path,
    coefficient_a,
    coefficient_a_recurrence,
    iter_paths,
    iter_paths_upto,
    parse_path,
    simulate,
    trajectory_path,
)
from .report import AuditReport, ClaimResult, Verdict
from .solver import (
    VerificationFailed,
    characteristic_solution,
    diophantine_residual,
    smallest_follower,
)

DEFAULT_CAP = 100


def descent_condition(path: Path) -> bool:
    return (1 << path.length) > 3**path.n


def escape_constraints(path: Path) -> bool:
    if not 3**path.n > 1 << path.length:
        return False
    return all(3**ri > 1 << (ri + i) for i, ri in enumerate(path.r, start=1))


def _path_key(path: Path) -> tuple:
    return (path.length, path.n, path.k, path.r)


def _finish(
    claim_id: str,
    domain: str,
    instances: int,
    violations: list[dict],
    cap: int,
    details: Optional[dict] = None,
    clean_verdict: Verdict = Verdict.HOLDS,
) -> ClaimResult:
    verdict = Verdict.REFUTED if violations else clean_verdict
    return ClaimResult(
        claim_id=claim_id,
        domain_description=domain,
        instances_tested=instances,
        verdict=verdict,
        counterexamples=violations[:cap],
        counterexamples_found=len(violations),
        details=details or {},
    )


def _chunks(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    size = max(1, -(-(hi - lo + 1) // parts))
    return [(a, min(hi, a + size - 1)) for a in range(lo, hi + 1, size)]


def _fan_out(fn: Callable, jobs: list[tuple], workers: int) -> list:
    """Run ``fn(*job)`` for every job and return results in job order."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


# -- closed form --------------------------------------------------------------


def _closed_form_chunk(lo: int, hi: int, max_moves: int) -> tuple[int, list[dict]]:
    checked = 0
    bad = []
    for x0 in range(lo, hi + 1):
        traj = simulate(x0, max_moves)
        for m in range(max_moves + 1):
            path = trajectory_path(x0, m)
            closed = apply_path(x0, path)
            checked += 1
            if closed != traj.values[m]:
                bad.append({"x0": x0, "path": path.literal(), "closed_form": closed, "simulated": traj.values[m]})
    return checked, bad


def audit_closed_form(max_moves: int, x_bound: int, *, workers: int = 1, cap: int = DEFAULT_CAP) -> ClaimResult:
    """Closed-form path map against simulation, plus closed-form ``a`` against its recurrence."""
    jobs = [(lo, hi, max_moves) for lo, hi in _chunks(1, x_bound, max(1, workers))] if x_bound >= 1 else []
    checked = 0
    bad: list[dict] = []
    for n_checked, chunk_bad in _fan_out(_closed_form_chunk, jobs, workers):
        checked += n_checked
        bad.extend(chunk_bad)
    paths_checked = 0
    for path in iter_paths_upto(max_moves):
        paths_checked += 1
        a, a_rec = coefficient_a(path), coefficient_a_recurrence(path)
        if a != a_rec:
            bad.append({"path": path.literal(), "closed_form_a": a, "recurrence_a": a_rec})
    bad.sort(key=lambda d: (_path_key(parse_path(d["path"])), d.get("x0", 0)))
    return _finish(
        "lemma-2.1",
        f"x0 in [1, {x_bound}], moves in [0, {max_moves}]; coefficient recurrence over all paths with n+k <= {max_moves}",
        checked + paths_checked,
        bad,
        cap,
        {"trajectory_instances": checked, "paths_checked": paths_checked},
    )


# -- one odd value per horizontal column --------------------------------------


def odd_points_per_column(x0: int, horizontal_budget: int) -> list[int]:
    """Count odd-valued grid points in each column ``n0 < horizontal_budget``."""
    counts = [0] * horizontal_budget
    x, n = x0, 0
    while n < horizontal_budget:
        if x & 1:
            counts[n] += 1
            x = (3 * x + 1) >> 1
            n += 1
        else:
            x >>= 1
    return counts


def audit_unique_odd_per_column(x_bound: int, horizontal_budget: int, *, cap: int = DEFAULT_CAP) -> ClaimResult:
    bad = []
    instances = 0
    for x0 in range(1, x_bound + 1):
        for n0, count in enumerate(odd_points_per_column(x0, horizontal_budget)):
            instances += 1
            if count != 1:
                bad.append({"x0": x0, "n0": n0, "odd_points": count})
    return _finish(
        "lemma-2.3",
        f"x0 in [1, {x_bound}], columns n0 in [0, {horizontal_budget})",
        instances,
        bad,
        cap,
    )


# -- characteristic solution --------------------------------------------------


def _progression(start: int, step: int, hi: int) -> list[int]:
    return list(range(start, hi + 1, step))


def check_characteristic_path(path: Path, any_end: list[int], odd_end: list[int], hi: int) -> list[dict]:
    """Compare the solver against brute-force follower lists over ``[1, hi]``."""
    lit = path.literal()
    s = path.length
    sol = characteristic_solution(path)
    bad = []
    try:
        x_min = smallest_follower(path)
    except VerificationFailed:
        return [{"path": lit, "check": "verification", "solver_min": sol.min_follower}]
    oracle_min = odd_end[0] if odd_end else None
    if oracle_min != x_min:
        bad.append({"path": lit, "check": "minimum", "solver_min": x_min, "oracle_min": oracle_min})
    lam = (apply_path(x_min, path) - 1) // 2
    residual = diophantine_residual(path, x_min, lam)
    if residual != 0:
        bad.append({"path": lit, "check": "residual", "x0": x_min, "lambda": lam, "residual": residual})
    if (lam - sol.lambda_residue) % sol.lambda_modulus:
        bad.append({"path": lit, "check": "lambda_class", "lambda": lam, "lambda_residue": sol.lambda_residue})
    if odd_end != _progression(x_min, 1 << (s + 1), hi):
        bad.append({"path": lit, "check": "odd_end_class", "solver_min": x_min, "oracle_count": len(odd_end)})
    start = sol.x_residue % (1 << s) or (1 << s)
    if any_end != _progression(start, 1 << s, hi):
        bad.append({"path": lit, "check": "any_end_class", "predicted_start": start, "oracle_count": len(any_end)})
    return bad


def _characteristic_length(s: int) -> tuple[int, list[dict]]:
    hi = 1 << (s + 3)
    any_end = follower_table(s, hi)
    bad = []
    count = 0
    for path in iter_paths(s):
        followers = any_end.get(path, [])
        odd_end = [x for x in followers if apply_path(x, path) & 1]
        bad.extend(check_characteristic_path(path, followers, odd_end, hi))
        count += 1
    return count, bad


def audit_diophantine_solution(max_moves: int, *, workers: int = 1, cap: int = DEFAULT_CAP) -> ClaimResult:
    """Solver minimum, residual, and residue classes against brute force for every path."""
    jobs = [(s,) for s in range(max_moves + 1)]
    paths = 0
    bad: list[dict] = []
    for count, chunk_bad in _fan_out(_characteristic_length, jobs, workers):
        paths += count
        bad.extend(chunk_bad)
    bad.sort(key=lambda d: (_path_key(parse_path(d["path"])), d["check"]))
    return _finish(
        "thm-2.3",
        f"all paths with n+k <= {max_moves}; followers brute-forced over [1, 2^(n+k+3)]",
        paths,
        bad,
        cap,
    )


# -- descent lemma ------------------------------------------------------------


def descent_violation(x0: int, path: Path) -> Optional[dict]:
    """Return a violation record if ``f < x0`` disagrees with the descent condition."""
    f = apply_path(x0, path)
    cond = descent_condition(path)
    if (f < x0) == cond:
        return None
    rec = {
        "x0": x0,
        "path": path.literal(),
        "f": f,
        "descent_condition": cond,
        "decreased": f < x0,
        "direction": "condition-without-decrease" if cond else "decrease-without-condition",
        "m_minus_c_sum": None,
    }
    if f & 1:
        q = characteristic_solution(path).m_minus_c_sum(x0)
        rec["m_minus_c_sum"] = f"{q.numerator}/{q.denominator}"
    return rec


def _descent_chunk(lo: int, hi: int, max_moves: int) -> tuple[int, list[dict]]:
    checked = 0
    bad = []
    for x0 in range(lo, hi + 1):
        traj = simulate(x0, max_moves)
        for m in range(max_moves + 1):
            path = trajectory_path(x0, m)
            checked += 1
            cond = descent_condition(path)
            if (traj.values[m] < x0) != cond:
                bad.append(descent_violation(x0, path))
    return checked, bad


def audit_descent_lemma(max_moves: int, x_bound: int, *, workers: int = 1, cap: int = DEFAULT_CAP) -> ClaimResult:
    jobs = [(lo, hi, max_moves) for lo, hi in _chunks(1, x_bound, max(1, workers))] if x_bound >= 1 else []
    checked = 0
    bad: list[dict] = []
    for n_checked, chunk_bad in _fan_out(_descent_chunk, jobs, workers):
        checked += n_checked
        bad.extend(chunk_bad)
    bad.sort(key=lambda d: (_path_key(parse_path(d["path"])), d["x0"]))
    directions = {"condition-without-decrease": 0, "decrease-without-condition": 0}
    for rec in bad:
        directions[rec["direction"]] += 1
    return _finish(
        "lemma-3.1",
        f"(x0, path) with x0 in [1, {x_bound}] following a path with n+k <= {max_moves}",
        checked,
        bad,
        cap,
        {"violations_by_direction": directions},
    )


# -- exact inequality behind the descent lemma ----------------------------------


def minimal_descent_k(n: int, pow3: Optional[int] = None) -> int:
    """Smallest ``k >= 0`` with ``2^(n+k) > 3^n``."""
    p = 3**n if pow3 is None else pow3
    # 2^(n+k) > 3^n  <=>  n + k >= bit_length(3^n), as 3^n is a power of two only at n = 0
    return p.bit_length() - n


def descent_inequality_holds(n: int, k: int, pow3: Optional[int] = None) -> bool:
    p = 3**n if pow3 is None else pow3
    return (((1 << (n + 1)) - 1) << k) > 2 * p - 1


def audit_descent_inequality(n_max: int, *, cap: int = DEFAULT_CAP) -> ClaimResult:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    bad = []
    spot = []
    p = 1
    for n in range(1, n_max + 1):
        p *= 3
        k = minimal_descent_k(n, p)
        if not descent_inequality_holds(n, k, p):
            bad.append({"n": n, "k": k})
        if n <= 5:
            spot.append({"n": n, "k": k, "lhs": ((1 << (n + 1)) - 1) << k, "rhs": 2 * p - 1})
    return _finish(
        "descent-inequality-exact",
        f"n in [1, {n_max}] with the minimal k such that 2^(n+k) > 3^n",
        n_max,
        bad,
        cap,
        {"spot_values": spot},
    )


# -- Rhin bound crossover -----------------------------------------------------

RHIN_CLAIM_FROM = 96


def audit_rhin_crossover(
    n_lo: int,
    n_hi: int,
    log_base: LogBase | str = LogBase.NATURAL,
    precision_digits: int = 60,
    *,
    cap: int = DEFAULT_CAP,
) -> ClaimResult:
    """Certify ``1/(457 n^13.3) > log(1-1/(2*3^n)) - log(1-1/(2*2^n))`` across ``[n_lo, n_hi]``.

    Only ``n >= 96`` is part of the claim; smaller ``n`` are scanned to locate
    the crossover.  Raises :class:`certify.PrecisionInsufficient` when an
    enclosure overlap prevents a certified answer.
    """
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError(f"bad range [{n_lo}, {n_hi}]")
    if precision_digits < 40:
        raise ValueError(f"precision_digits must be >= 40, got {precision_digits}")
    log_base = LogBase(log_base)
    comps = [certify.compare(n, log_base, precision_digits) for n in range(n_lo, n_hi + 1)]
    crossover = None
    for c in reversed(comps):
        if not c.holds:
            break
        crossover = c.n
    bad = [c.as_record() for c in comps if c.n >= RHIN_CLAIM_FROM and not c.holds]
    for rec in bad:
        rec.update(log_base=log_base.value, precision_digits=precision_digits)
    in_claim = sum(1 for c in comps if c.n >= RHIN_CLAIM_FROM)
    details = {
        "log_base": log_base.value,
        "precision_digits": precision_digits,
        "crossover_n": crossover,
        "first_holding_n": next((c.n for c in comps if c.holds), None),
        "claimed_from_n": RHIN_CLAIM_FROM,
        "comparisons_in_claim": in_claim,
        "boundary": [c.as_record() for c in comps if abs(c.n - RHIN_CLAIM_FROM) <= 1],
    }
    return _finish(
        "rhin-crossover",
        f"n in [{n_lo}, {n_hi}], {log_base.value} log, {precision_digits} certified digits; claim covers n >= {RHIN_CLAIM_FROM}",
        len(comps),
        bad,
        cap,
        details,
        clean_verdict=Verdict.HOLDS if in_claim else Verdict.UNDETERMINED,
    )


# -- escape-path growth -------------------------------------------------------


def _min_escape_r(i: int) -> int:
    r = 0
    while not 3**r > 1 << (r + i):
        r += 1
    return r


def iter_escape_paths(length: int) -> Iterator[Path]:
    """Paths with ``n + k == length`` satisfying the escape constraints, pruned depth-first."""
    for n in range(1, length + 1):
        k = length - n
        if not 3**n > 1 << length:
            continue
        floors = [_min_escape_r(i) for i in range(1, k + 1)]
        if floors and floors[-1] > n:
            continue
        yield from (Path(n, k, r) for r in _escape_r(floors, 0, n))


def _escape_r(floors: list[int], lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    if not floors:
        yield ()
        return
    for first in range(max(lo, floors[0]), hi + 1):
        for rest in _escape_r(floors[1:], first, hi):
            yield (first,) + rest


def escape_growth_table(moves_max: int) -> list[dict]:
    rows = []
    for s in range(1, moves_max + 1):
        best = None
        count = 0
        for path in iter_escape_paths(s):
            count += 1
            x = smallest_follower(path)
            if best is None or x < best[0]:
                best = (x, path)
        if best is None:
            continue
        x, path = best
        rows.append(
            {
                "total_moves": s,
                "n": path.n,
                "k": path.k,
                "r_list": ",".join(str(v) for v in path.r),
                "min_follower": x,
                "escape_paths": count,
            }
        )
    return rows


def audit_escape_growth(moves_max: int, *, cap: int = DEFAULT_CAP) -> ClaimResult:
    """Growth of the smallest follower over escape paths; the limit claim stays Undetermined."""
    rows = escape_growth_table(moves_max)
    bad = []
    for prev, cur in zip(rows, rows[1:]):
        if cur["min_follower"] < prev["min_follower"]:
            bad.append(
                {
                    "total_moves": cur["total_moves"],
                    "path": f"{cur['n']}:{cur['k']}:{cur['r_list']}",
                    "min_follower": cur["min_follower"],
                    "previous_total_moves": prev["total_moves"],
                    "previous_min_follower": prev["min_follower"],
                }
            )
    return _finish(
        "lemma-3.3",
        f"escape paths with n+k <= {moves_max}; nondecreasing check on the minimal follower per length",
        sum(r["escape_paths"] for r in rows),
        bad,
        cap,
        {"growth_table": rows, "nondecreasing": not bad, "limit_claim": Verdict.UNDETERMINED.value},
        clean_verdict=Verdict.UNDETERMINED,
    )


# -- bounded convergence scan -------------------------------------------------


def stopping_moves(x_bound: int, move_cap: int) -> tuple[list[Optional[int]], list[dict]]:
    """Accelerated move counts to reach 1 for every ``x0 <= x_bound``.

    Values are scanned upward; a walk stops as soon as it drops below its
    start, reusing the already-known count of the smaller value.  Entry ``x``
    is None when 1 is not reached within ``move_cap``.  The second result lists
    cycles that avoid 1.
    """
    moves: list[Optional[int]] = [None] * (x_bound + 1)
    cycles = []
    if x_bound >= 1:
        moves[1] = 0
    for x0 in range(2, x_bound + 1):
        x = x0
        steps = 0
        seen = {x0}
        while True:
            x = (3 * x + 1) >> 1 if x & 1 else x >> 1
            steps += 1
            if x < x0:
                below = moves[x]
                total = None if below is None else steps + below
                moves[x0] = total if total is not None and total <= move_cap else None
                break
            if x in seen:
                cycles.append({"x0": x0})
                break
            if steps >= move_cap:
                break
            seen.add(x)
    return moves, cycles


def audit_convergence_scan(x_bound: int, move_cap: int, *, cap: int = DEFAULT_CAP) -> ClaimResult:
    moves, cycles = stopping_moves(x_bound, move_cap)
    for rec in cycles:
        out = reaches_one(rec["x0"], move_cap)
        rec["period"] = out.period
    undetermined = [x for x in range(1, x_bound + 1) if moves[x] is None and not any(c["x0"] == x for c in cycles)]
    finite = [(m, x) for x, m in enumerate(moves) if x >= 1 and m is not None]
    details = {"move_cap": move_cap, "undetermined": len(undetermined)}
    if finite:
        m, x = max(finite, key=lambda t: (t[0], -t[1]))
        details.update(max_moves=m, max_moves_x0=x)
    clean = Verdict.HOLDS if not undetermined else Verdict.UNDETERMINED
    return _finish(
        "thm-3.4",
        f"x0 in [1, {x_bound}] reaching 1 within {move_cap} accelerated moves",
        x_bound,
        cycles,
        cap,
        details,
        clean_verdict=clean,
    )


# -- replay -------------------------------------------------------------------


def replay(claim_id: str, record: dict) -> bool:
    """Re-execute a counterexample record; True iff the violation reproduces."""
    if claim_id == "lemma-2.1":
        path = parse_path(record["path"])
        if "x0" in record:
            return apply_path(record["x0"], path) != simulate(record["x0"], path.length).final
        return coefficient_a(path) != coefficient_a_recurrence(path)
    if claim_id == "lemma-2.3":
        return odd_points_per_column(record["x0"], record["n0"] + 1)[record["n0"]] != 1
    if claim_id == "thm-2.3":
        path = parse_path(record["path"])
        hi = 1 << (path.length + 3)
        any_end = follower_table(path.length, hi).get(path, [])
        odd_end = [x for x in any_end if apply_path(x, path) & 1]
        return any(r["check"] == record["check"] for r in check_characteristic_path(path, any_end, odd_end, hi))
    if claim_id == "lemma-3.1":
        return descent_violation(record["x0"], parse_path(record["path"])) is not None
    if claim_id == "descent-inequality-exact":
        n = record["n"]
        return record["k"] == minimal_descent_k(n) and not descent_inequality_holds(n, record["k"])
    if claim_id == "rhin-crossover":
        c = certify.compare(record["n"], record["log_base"], record["precision_digits"])
        return not c.holds
    if claim_id == "lemma-3.3":
        rows = {r["total_moves"]: r["min_follower"] for r in escape_growth_table(record["total_moves"])}
        return rows.get(record["total_moves"]) == record["min_follower"] and (
            rows.get(record["previous_total_moves"]) == record["previous_min_follower"]
            and record["min_follower"] < record["previous_min_follower"]
        )
    if claim_id == "thm-3.4":
        return reaches_one(record["x0"], 10**6).status is ReachStatus.ENTERED_CYCLE
    raise KeyError(f"unknown claim {claim_id!r}")


# -- configuration and the full run -------------------------------------------

CLAIM_IDS = (
    "lemma-2.1",
    "lemma-2.3",
    "thm-2.3",
    "lemma-3.1",
    "descent-inequality-exact",
    "rhin-crossover",
    "lemma-3.3",
    "thm-3.4",
)


@dataclass
class AuditConfig:
    """Per-claim domain bounds; ``None`` overrides fall back to the claim's default."""

    max_moves: Optional[int] = None
    x_bound: Optional[int] = None
    n_lo: Optional[int] = None
    n_hi: Optional[int] = None
    log_base: LogBase = LogBase.NATURAL
    precision_digits: int = 60
    horizontal_budget: int = 6
    move_cap: int = 10_000
    counterexample_cap: int = DEFAULT_CAP
    workers: int = field(default=1, compare=False)

    def resolved(self, claim_id: str) -> dict:
        d = DEFAULTS[claim_id]
        pick = lambda name: getattr(self, name) if getattr(self, name) is not None else d[name]  # noqa: E731
        if claim_id in ("lemma-2.1", "lemma-3.1"):
            return {"max_moves": pick("max_moves"), "x_bound": pick("x_bound")}
        if claim_id == "lemma-2.3":
            return {"x_bound": pick("x_bound"), "horizontal_budget": self.horizontal_budget}
        if claim_id in ("thm-2.3", "lemma-3.3"):
            return {"max_moves": pick("max_moves")}
        if claim_id == "descent-inequality-exact":
            return {"n_hi": pick("n_hi")}
        if claim_id == "rhin-crossover":
            return {
                "n_lo": pick("n_lo"),
                "n_hi": pick("n_hi"),
                "log_base": LogBase(self.log_base).value,
                "precision_digits": self.precision_digits,
            }
        if claim_id == "thm-3.4":
            return {"x_bound": pick("x_bound"), "move_cap": self.move_cap}
        raise KeyError(claim_id)


DEFAULTS: dict[str, dict] = {
    "lemma-2.1": {"max_moves": 10, "x_bound": 4096},
    "lemma-2.3": {"x_bound": 2048},
    "thm-2.3": {"max_moves": 8},
    "lemma-3.1": {"max_moves": 6, "x_bound": 65536},
    "descent-inequality-exact": {"n_hi": 10_000},
    "rhin-crossover": {"n_lo": 1, "n_hi": 1000},
    "lemma-3.3": {"max_moves": 20},
    "thm-3.4": {"x_bound": 100_000},
}


def run_claim(claim_id: str, config: AuditConfig) -> ClaimResult:
    p = config.resolved(claim_id)
    cap = config.counterexample_cap
    w = config.workers
    if claim_id == "lemma-2.1":
        return audit_closed_form(p["max_moves"], p["x_bound"], workers=w, cap=cap)
    if claim_id == "lemma-2.3":
        return audit_unique_odd_per_column(p["x_bound"], p["horizontal_budget"], cap=cap)
    if claim_id == "thm-2.3":
        return audit_diophantine_solution(p["max_moves"], workers=w, cap=cap)
    if claim_id == "lemma-3.1":
        return audit_descent_lemma(p["max_moves"], p["x_bound"], workers=w, cap=cap)
    if claim_id == "descent-inequality-exact":
        return audit_descent_inequality(p["n_hi"], cap=cap)
    if claim_id == "rhin-crossover":
        return audit_rhin_crossover(p["n_lo"], p["n_hi"], p["log_base"], p["precision_digits"], cap=cap)
    if claim_id == "lemma-3.3":
        return audit_escape_growth(p["max_moves"], cap=cap)
    if claim_id == "thm-3.4":
        return audit_convergence_scan(p["x_bound"], p["move_cap"], cap=cap)
    raise KeyError(f"unknown claim {claim_id!r}")


def run_audit(claims: Iterable[str], config: Optional[AuditConfig] = None) -> AuditReport:
    config = config or AuditConfig()
    claims = list(claims)
    for c in claims:
        if c not in CLAIM_IDS:
            raise KeyError(f"unknown claim {c!r}")
    results = [run_claim(c, config) for c in claims]
    configuration = {
        "claims": {c: config.resolved(c) for c in claims},
        "counterexample_cap": config.counterexample_cap,
        "log_base": LogBase(config.log_base).value,
        "precision_digits": config.precision_digits,
    }
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return AuditReport(results=results, configuration=configuration, timestamp=stamp)

"""Command-line front end.

Exit codes: 0 success, 1 an audit found a refutation, 2 usage error,
3 internal verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional, Sequence

from . import audit
from .certify import LogBase, PrecisionInsufficient
from .oracle import ReachStatus, brute_force_min_follower, reaches_one
from .paths import DoesNotFollow, Path, PathError, affine_form, apply_path, coefficient_a_recurrence, parse_path, simulate
from .report import dumps, encode, growth_table_csv, render_text, summary_csv
from .solver import VerificationFailed, characteristic_solution, smallest_follower, smallest_follower_any_end

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_VERIFICATION = 3


@dataclass
class CommandOutcome:
    exit_code: int
    payload: str = ""
    # file the payload was written to; None means standard output
    destination: Optional[str] = None


class UsageError(Exception):
    pass


def _path_arg(text: str) -> Path:
    try:
        return parse_path(text)
    except PathError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, metavar="FILE")

    parser = _Parser(prog="collatz-paths", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="walk the accelerated map from x0")
    p.add_argument("x0", type=_positive)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--moves", type=_nonnegative)
    mode.add_argument("--until-one", action="store_true")
    p.add_argument("--cap", type=_positive, default=10_000)

    p = sub.add_parser("apply", parents=[common], help="closed-form value of a path at x0")
    p.add_argument("x0", type=_positive)
    p.add_argument("--path", type=_path_arg, required=True)

    p = sub.add_parser("coeff", parents=[common], help="affine form (3^n x + a) / 2^(n+k)")
    p.add_argument("--path", type=_path_arg, required=True)

    p = sub.add_parser("solve", parents=[common], help="residue-class solution for a path")
    p.add_argument("--path", type=_path_arg, required=True)

    p = sub.add_parser("min-follower", parents=[common], help="smallest start value following a path")
    p.add_argument("--path", type=_path_arg, required=True)
    p.add_argument("--oracle", action="store_true", help="brute force instead of the solver")
    p.add_argument("--bound", type=_positive)
    p.add_argument("--any-end", action="store_true", help="drop the odd-final-value restriction")

    p = sub.add_parser("audit", parents=[common], help="run claim audits")
    p.add_argument("claim", choices=list(audit.CLAIM_IDS) + ["all"])
    p.add_argument("--max-moves", type=_nonnegative)
    p.add_argument("--x-bound", type=_positive)
    p.add_argument("--n-lo", type=_positive)
    p.add_argument("--n-hi", type=_positive)
    p.add_argument("--log-base", choices=[b.value for b in LogBase], default=LogBase.NATURAL.value)
    p.add_argument("--precision", type=_positive, default=60)

    p = sub.add_parser("scan", parents=[common], help="bounded reach-1 scan")
    p.add_argument("--x-bound", type=_positive, required=True)
    p.add_argument("--cap", type=_positive, required=True)
    return parser


# -- renderers ----------------------------------------------------------------


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: row[c] for c in columns})
    return buf.getvalue()


def _emit(fmt: str, doc: dict, text: str, rows: Optional[list[dict]] = None, columns=None) -> str:
    if fmt == "json":
        return dumps(encode(doc))
    if fmt == "csv":
        return _csv(rows if rows is not None else [doc], columns or list(doc))
    return text if text.endswith("\n") else text + "\n"


def _cmd_simulate(args, fmt: str) -> CommandOutcome:
    if args.until_one:
        out = reaches_one(args.x0, args.cap)
        doc = {"x0": args.x0, "status": out.status.value, "moves": out.moves, "period": out.period}
        values = list(simulate(args.x0, out.moves).values) if out.status is ReachStatus.REACHED_ONE else []
        doc["values"] = values
        if out.status is ReachStatus.REACHED_ONE:
            text = f"{out.status.value} after {out.moves} moves\n" + " ".join(map(str, values))
        elif out.status is ReachStatus.ENTERED_CYCLE:
            text = f"{out.status.value} with period {out.period}"
        else:
            text = f"{out.status.value} within {args.cap} moves"
        rows = [{"step": i, "value": v} for i, v in enumerate(values)]
        return CommandOutcome(EXIT_OK, _emit(fmt, doc, text, rows, ["step", "value"]))
    traj = simulate(args.x0, args.moves)
    doc = {
        "x0": args.x0,
        "values": list(traj.values),
        "moves": "".join(m.value for m in traj.moves),
        "grid": [[g.n, g.k] for g in traj.grid],
        "final": traj.final,
    }
    text = " ".join(map(str, traj.values)) + "\n" + ("".join(m.value for m in traj.moves) or "-")
    rows = [
        {"step": i, "value": v, "move": traj.moves[i - 1].value if i else "", "n": g.n, "k": g.k}
        for i, (v, g) in enumerate(zip(traj.values, traj.grid))
    ]
    return CommandOutcome(EXIT_OK, _emit(fmt, doc, text, rows, ["step", "value", "move", "n", "k"]))


def _cmd_apply(args, fmt: str) -> CommandOutcome:
    value = apply_path(args.x0, args.path)
    doc = {"x0": args.x0, "path": args.path.literal(), "value": value}
    return CommandOutcome(EXIT_OK, _emit(fmt, doc, str(value)))


def _cmd_coeff(args, fmt: str) -> CommandOutcome:
    form = affine_form(args.path)
    doc = {
        "path": args.path.literal(),
        "a": form.add,
        "a_recurrence": coefficient_a_recurrence(args.path),
        "mul": form.mul,
        "div": form.div,
    }
    return CommandOutcome(EXIT_OK, _emit(fmt, doc, str(form.add)))


def solution_document(path: Path) -> dict:
    sol = characteristic_solution(path)
    return {
        "path": path.literal(),
        "c": [cr.c for cr in sol.c],
        "p": [cr.p for cr in sol.c],
        "t": [cr.t for cr in sol.c],
        "x_modulus": sol.x_modulus,
        "x_residue": sol.x_residue,
        "lambda_modulus": sol.lambda_modulus,
        "lambda_residue": sol.lambda_residue,
        "min_follower": sol.min_follower,
    }


def _cmd_solve(args, fmt: str) -> CommandOutcome:
    smallest_follower(args.path)  # raises VerificationFailed on a solver bug
    doc = solution_document(args.path)
    text = (
        f"path {doc['path']}\n"
        f"c = [{', '.join(map(str, doc['c']))}]\n"
        f"x0 = {doc['x_residue']} (mod {doc['x_modulus']})\n"
        f"lambda = {doc['lambda_residue']} (mod {doc['lambda_modulus']})\n"
        f"min follower = {doc['min_follower']}"
    )
    if fmt == "csv":
        flat = {k: (",".join(map(str, v)) if isinstance(v, list) else v) for k, v in doc.items()}
        return CommandOutcome(EXIT_OK, _csv([flat], list(flat)))
    return CommandOutcome(EXIT_OK, _emit(fmt, doc, text))


def _cmd_min_follower(args, fmt: str) -> CommandOutcome:
    path = args.path
    if args.oracle:
        bound = args.bound or 1 << (path.length + 2)
        value = brute_force_min_follower(path, not args.any_end, bound)
        method = "oracle"
    else:
        value = smallest_follower_any_end(path) if args.any_end else smallest_follower(path)
        method = "solver"
    doc = {"path": path.literal(), "min_follower": value, "method": method, "odd_end": not args.any_end}
    return CommandOutcome(EXIT_OK, _emit(fmt, doc, "none" if value is None else str(value)))


def _audit_outcome(report, fmt: str) -> CommandOutcome:
    code = EXIT_REFUTED if report.refuted else EXIT_OK
    if fmt == "json":
        return CommandOutcome(code, dumps(report.to_document()))
    if fmt == "csv":
        if len(report.results) == 1 and report.results[0].claim_id == "lemma-3.3":
            return CommandOutcome(code, growth_table_csv(report.results[0].details["growth_table"]))
        return CommandOutcome(code, summary_csv(report))
    return CommandOutcome(code, render_text(report))


def _cmd_audit(args, fmt: str) -> CommandOutcome:
    config = audit.AuditConfig(
        max_moves=args.max_moves,
        x_bound=args.x_bound,
        n_lo=args.n_lo,
        n_hi=args.n_hi,
        log_base=LogBase(args.log_base),
        precision_digits=args.precision,
    )
    claims = audit.CLAIM_IDS if args.claim == "all" else (args.claim,)
    return _audit_outcome(audit.run_audit(claims, config), fmt)


def _cmd_scan(args, fmt: str) -> CommandOutcome:
    config = audit.AuditConfig(x_bound=args.x_bound, move_cap=args.cap)
    return _audit_outcome(audit.run_audit(["thm-3.4"], config), fmt)


COMMANDS = {
    "simulate": _cmd_simulate,
    "apply": _cmd_apply,
    "coeff": _cmd_coeff,
    "solve": _cmd_solve,
    "min-follower": _cmd_min_follower,
    "audit": _cmd_audit,
    "scan": _cmd_scan,
}


def run(argv: Sequence[str]) -> CommandOutcome:
    """Parse ``argv`` and execute one subcommand; diagnostics go to stderr."""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return CommandOutcome(EXIT_USAGE)
    except SystemExit as exc:  # --help
        return CommandOutcome(exc.code if isinstance(exc.code, int) else EXIT_USAGE)
    fmt = getattr(args, "format", "text")
    try:
        outcome = COMMANDS[args.command](args, fmt)
    except DoesNotFollow as exc:
        print(f"DoesNotFollow: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_USAGE)
    except (PathError, ValueError, PrecisionInsufficient) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_USAGE)
    except VerificationFailed as exc:
        print(f"VerificationFailed: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_VERIFICATION)
    out = getattr(args, "out", None)
    if out:
        _write_atomic(out, outcome.payload)
        outcome.destination = out
    return outcome


def _write_atomic(target: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(target))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".collatz-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    outcome = run(argv)
    if outcome.payload and outcome.destination is None:
        sys.stdout.write(outcome.payload)
    return outcome.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

Exit codes: 0 success, 1 an inequality is violated or an identity misses
its tolerance, 2 bad input or usage, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .certify import (
    DEFAULT_TOL,
    EQUALITY_TOL,
    certify_pair,
    certify_single,
    random_symmetric_measure,
)
from .errors import (
    CapacityError,
    DomainError,
    IndeterminateError,
    InputError,
    NotACauchyTransform,
    SymmetryError,
)
from .experiments import (
    CLT_COLUMNS,
    IDENTITY_TOL,
    RATE_COLUMNS,
    _parallel_map,
    clt_table,
    de_bruijn_residual,
    entropic_rate_scan,
)
from .functionals import relative_report
from .measure import MERGE_TOL, AtomicMeasure, boolean_cumulants, measure_to_dict, parse_measure
from .serialize import CSV_DIGITS, JSON_DIGITS, csv_text, dumps
from .transform import boolean_convolve, boolean_power, heat_flow, ou_flow

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
FUZZ_THETAS = (0.0, 0.3, 0.5, 0.7, 1.0)
REPORT_COLUMNS = (
    "gamma",
    "gamma_rel",
    "gamma_star",
    "gamma_star_rel",
    "psi",
    "psi_rel",
    "psi_star",
    "psi_star_rel",
    "d_star",
    "m2",
    "m4",
    "m_neg2",
    "w2_to_b_sym",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


@dataclass(frozen=True)
class CliConfig:
    tol: float = DEFAULT_TOL
    quad_tol: float = 1e-8
    merge_tol: float = MERGE_TOL
    format: str = "json"
    output_path: Optional[str] = None
    jobs: int = 1

    def __post_init__(self) -> None:
        for name in ("tol", "quad_tol", "merge_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")


@dataclass
class Result:
    json_obj: object
    csv_columns: Sequence[str]
    csv_rows: Sequence[dict]
    code: int = EXIT_OK


# -- helpers ------------------------------------------------------------------


def _load(path: str, cfg: CliConfig) -> AtomicMeasure:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_measure(text, merge_tol=cfg.merge_tol)


def _measure_result(mu: AtomicMeasure) -> Result:
    return Result(measure_to_dict(mu), ("x", "w"), [{"x": x, "w": w} for x, w in mu])


def _report_dict(mu: AtomicMeasure) -> dict:
    rep = relative_report(mu, strict=False).as_dict()
    rep["symmetric"] = mu.is_symmetric()
    rep["cumulants"] = list(boolean_cumulants(mu).as_tuple())
    return rep


def _slack_code(slacks) -> int:
    return EXIT_VIOLATION if any(s.violated for s in slacks) else EXIT_OK


# -- subcommands -------------------------------------------------------------------


def cmd_info(args, cfg: CliConfig) -> Result:
    mu = _load(args.measure, cfg)
    rep = _report_dict(mu)
    row = {k: rep[k] for k in REPORT_COLUMNS}
    return Result(rep, REPORT_COLUMNS, [row])


def cmd_convolve(args, cfg: CliConfig) -> Result:
    return _measure_result(boolean_convolve(_load(args.a, cfg), _load(args.b, cfg)))


def cmd_power(args, cfg: CliConfig) -> Result:
    return _measure_result(boolean_power(_load(args.measure, cfg), args.n))


def cmd_clt(args, cfg: CliConfig) -> Result:
    mu = _load(args.measure, cfg)
    rows = clt_table(mu, args.n_max, jobs=cfg.jobs)
    dicts = [r.as_dict() for r in rows]
    code = EXIT_OK
    if any(r.failed for r in rows):
        code = EXIT_NUMERIC
    elif any(r.violations(cfg.tol) for r in rows):
        code = EXIT_VIOLATION
    return Result(dicts, CLT_COLUMNS, dicts, code)


def cmd_flow(args, cfg: CliConfig) -> Result:
    mu = _load(args.measure, cfg)
    if not args.t >= 0:
        raise InputError("--t must be non-negative")
    if args.grid is not None and args.grid < 1:
        raise InputError("--grid must be at least 1")
    step = heat_flow if args.kind == "heat" else ou_flow
    times = [args.t] if args.grid is None else [args.t * k / args.grid for k in range(args.grid + 1)]
    rows, out = [], []
    for t in times:
        mu_t = step(mu, t)
        rep = _report_dict(mu_t)
        row = {"t": t, **{k: rep[k] for k in REPORT_COLUMNS}}
        rows.append(row)
        out.append({"t": t, "measure": measure_to_dict(mu_t), "report": rep})
    return Result({"kind": args.kind, "rows": out}, ("t",) + REPORT_COLUMNS, rows)


def cmd_certify(args, cfg: CliConfig) -> Result:
    mu = _load(args.measure, cfg)
    if args.pair is None:
        slacks = certify_single(mu, cfg.tol)
    else:
        nu = _load(args.pair, cfg)
        slacks = certify_pair(mu, nu, args.theta, cfg.tol)
    dicts = [s.as_dict() for s in slacks]
    return Result(dicts, ("name", "lhs", "rhs", "slack", "satisfied"), dicts, _slack_code(slacks))


def cmd_debruijn(args, cfg: CliConfig) -> Result:
    mu = _load(args.measure, cfg)
    micro, nm = de_bruijn_residual(mu, args.t, cfg.quad_tol)
    micro_tol = max(100 * cfg.quad_tol, 1e-6)
    row = {
        "t": args.t,
        "quad_tol": cfg.quad_tol,
        "micro_residual": micro,
        "nm_residual": nm,
        "micro_ok": micro <= micro_tol,
        "nm_ok": nm <= 1e-12,
    }
    code = EXIT_OK if row["micro_ok"] and row["nm_ok"] else EXIT_VIOLATION
    return Result(row, tuple(row), [row], code)


def cmd_rates(args, cfg: CliConfig) -> Result:
    mu = _load(args.measure, cfg)
    try:
        n_list = [int(s) for s in args.n_list.split(",") if s.strip()]
    except ValueError:
        raise InputError("--n-list must be comma-separated integers") from None
    if not n_list:
        raise InputError("--n-list is empty")
    rows = entropic_rate_scan(mu, n_list)
    dicts = [r.as_dict() for r in rows]
    bad = any(
        r.entropic_hsi_slack < -cfg.tol
        or r.fisher_rate_slack < -IDENTITY_TOL
        or r.psi_star_residual > IDENTITY_TOL
        or r.gamma_star_residual > IDENTITY_TOL
        for r in rows
    )
    return Result(dicts, RATE_COLUMNS, dicts, EXIT_VIOLATION if bad else EXIT_OK)


@dataclass(frozen=True)
class _FuzzCase:
    index: int
    seed: int
    pairs: int
    next_seed: int
    next_pairs: int
    tol: float

    def __call__(self) -> dict:
        mu = random_symmetric_measure(self.seed, self.pairs)
        nu = random_symmetric_measure(self.next_seed, self.next_pairs)
        slacks = list(certify_single(mu, self.tol))
        for theta in FUZZ_THETAS:
            slacks += certify_pair(mu, nu, theta, self.tol, EQUALITY_TOL)
        finite = [s.slack for s in slacks if s.slack is not None and not s.equality]
        return {
            "index": self.index,
            "seed": self.seed,
            "pairs": self.pairs,
            "checks": len(slacks),
            "indeterminate": sum(1 for s in slacks if s.indeterminate),
            "min_slack": min(finite) if finite else None,
            "violations": [s.name for s in slacks if s.violated],
        }


def _run_case(case: _FuzzCase) -> dict:
    return case()


def cmd_fuzz(args, cfg: CliConfig) -> Result:
    if args.count < 1:
        raise InputError("--count must be at least 1")
    if not 1 <= args.pairs <= 6:
        raise InputError("--pairs must lie in 1..6")
    seeds = [int(s) for s in np.random.SeedSequence(args.seed).generate_state(args.count + 1, dtype=np.uint32)]
    sizes = [1 + s % args.pairs for s in seeds]
    cases = [_FuzzCase(i, seeds[i], sizes[i], seeds[i + 1], sizes[i + 1], cfg.tol) for i in range(args.count)]
    results = _parallel_map(_run_case, cases, cfg.jobs)
    failing = [r for r in results if r["violations"]]
    summary = {
        "seed": args.seed,
        "count": args.count,
        "pairs": args.pairs,
        "checks": sum(r["checks"] for r in results),
        "indeterminate": sum(r["indeterminate"] for r in results),
        "min_slack": min((r["min_slack"] for r in results if r["min_slack"] is not None), default=None),
        "violations": failing,
    }
    rows = [{**r, "violations": ";".join(r["violations"])} for r in results]
    columns = ("index", "seed", "pairs", "checks", "indeterminate", "min_slack", "violations")
    return Result(summary, columns, rows, EXIT_VIOLATION if failing else EXIT_OK)


# -- parser ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="absolute slack tolerance")
    common.add_argument("--quad-tol", type=float, default=1e-8, help="quadrature tolerance for debruijn")
    common.add_argument("--merge-tol", type=float, default=MERGE_TOL, help="atom merge tolerance for inputs")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for clt and fuzz")

    parser = _Parser(prog="boolean-info", description="Boolean probability calculus on atomic measures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", parents=[common], help="all functionals of a measure")
    p.add_argument("measure")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("convolve", parents=[common], help="Boolean convolution of two measures")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("power", parents=[common], help="Boolean convolution power")
    p.add_argument("measure")
    p.add_argument("--n", type=_positive_int, required=True)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("clt", parents=[common], help="CLT table for n = 1..n-max")
    p.add_argument("measure")
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("flow", parents=[common], help="heat or Ornstein-Uhlenbeck flow")
    p.add_argument("measure")
    p.add_argument("--kind", choices=("heat", "ou"), required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--grid", type=int, default=None, help="emit K+1 equally spaced times in [0, t]")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("certify", parents=[common], help="inequality certificates")
    p.add_argument("measure")
    p.add_argument("--pair", default=None, help="second measure for the two-measure certificates")
    p.add_argument("--theta", type=float, default=0.5)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("debruijn", parents=[common], help="de Bruijn identity residuals")
    p.add_argument("measure")
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(func=cmd_debruijn)

    p = sub.add_parser("rates", parents=[common], help="entropic and Fisher CLT rates")
    p.add_argument("measure")
    p.add_argument("--n-list", required=True)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("fuzz", parents=[common], help="random certification campaign (CI gate)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--pairs", type=int, default=6)
    p.set_defaults(func=cmd_fuzz)
    return parser


def _render(result: Result, cfg: CliConfig) -> str:
    if cfg.format == "csv":
        return csv_text(result.csv_columns, result.csv_rows, digits=CSV_DIGITS)
    return dumps(result.json_obj, digits=JSON_DIGITS)


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        cfg = CliConfig(args.tol, args.quad_tol, args.merge_tol, args.format, args.output, args.jobs)
        result = args.func(args, cfg)
        text = _render(result, cfg)
        if cfg.output_path:
            with open(cfg.output_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return result.code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, SymmetryError, DomainError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotACauchyTransform, CapacityError, IndeterminateError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

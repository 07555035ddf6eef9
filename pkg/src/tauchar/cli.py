"""Command-line surface for the verification workbench.

Subcommands map one-to-one onto library workflows:

  verify          exact identity suite + factorization route checks
  constants       certified main-term constants for a modulus
  trace           summatory values against main terms along checkpoints
  short-interval  exact short-window sum and double-count decomposition
  near-curve      full range scan with derivative-test bound shapes
  rh-diagnostic   growth-envelope ratios for the no-main-term branch

Output is CSV by default: '#'-prefixed metadata and summary lines, then a
mandatory header row, then data rows.  --format json nests the same content
under {"metadata", "rows", "summary"}.  Floats are serialized with 17
significant digits (JSON uses the shortest round-trip form, which is never
coarser); exact integers stay integers; exact rationals appear as "num/den"
strings.  With --no-timestamp, identical configurations produce
byte-identical output.

Exit codes: 0 all checks pass / report produced; 1 mathematical mismatch;
2 usage error; 3 resource or precision budget exceeded.

Heavy subcommands print `# progress ...` lines to stderr at most once per
second.  --jobs is recorded in the metadata; the pipelines themselves are
single-process (documented; sieve passes are memory-bound).
"""

import argparse
import csv
import json
import os
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction

from . import KERNEL_BACKEND, __version__, _kernels
from .constants import Branch, classify, main_term_params
from .curves import ShortIntervalInstance, decompose_short_interval, range_scan
from .dirichlet import verify_factorization
from .errors import (
    ArgumentError,
    OverflowHardError,
    PrecisionError,
    ResourceLimitError,
    TaucharError,
    UndecidablePointError,
)
from .summatory import (
    cube_root_identity_scan,
    fifth_power_identity_scan,
    rh_diagnostic,
    square_root_identity_scan,
    trace,
)

EXIT_PASS = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_KIND_BY_BRANCH = {
    Branch.PM1_MOD8: "x_log_x",
    Branch.PM11_MOD24: "sqrt_x",
    Branch.Q_EQUALS_3: "exact_cuberoot",
    Branch.PM5_MOD24: "upper_bound_only",
}


def _int_like(s: str) -> int:
    """Integer argument, allowing float-style spellings like 1e7."""
    try:
        return int(s)
    except ValueError:
        pass
    try:
        f = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    if f != int(f):
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    return int(f)


def _rational(s: str) -> Fraction:
    """Exact rational argument: '3/4', '100', '2.5', '1e6' all work."""
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {s!r}")


def _int_list(s: str) -> tuple[int, ...]:
    return tuple(_int_like(part) for part in s.split(",") if part.strip())


def _float_list(s: str) -> tuple[float, ...]:
    return tuple(float(part) for part in s.split(",") if part.strip())


def _cell(v) -> str:
    """One CSV cell; deterministic, locale-free."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


def _json_value(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return [_json_value(t) for t in v]
    return v


class _Progress:
    """Rate-limited machine-readable progress lines on the diagnostic stream."""

    def __init__(self, label: str, interval: float = 1.0):
        self.label = label
        self.interval = interval
        self.t0 = time.monotonic()
        self.last = self.t0

    def __call__(self, stage: str, done: int, total: int) -> None:
        now = time.monotonic()
        if now - self.last < self.interval:
            return
        self.last = now
        print(
            f"# progress cmd={self.label} stage={stage} done={done} "
            f"total={total} elapsed={now - self.t0:.1f}s",
            file=sys.stderr,
            flush=True,
        )


def _metadata(args, config: dict) -> dict:
    md = {
        "subcommand": args.cmd,
        "version": __version__,
        "kernel_backend": KERNEL_BACKEND,
        "jobs": args.jobs,
        "format": args.format,
    }
    md.update(config)
    if not args.no_timestamp:
        md["timestamp"] = datetime.now(timezone.utc).isoformat()
    return md


def _emit(args, meta: dict, header: list[str], rows: list, summary: dict | None):
    def write(out):
        if args.format == "json":
            doc = {
                "metadata": {k: _json_value(v) for k, v in meta.items()},
                "rows": [
                    {k: _json_value(v) for k, v in zip(header, row)} for row in rows
                ],
            }
            if summary is not None:
                doc["summary"] = {k: _json_value(v) for k, v in summary.items()}
            json.dump(doc, out, indent=2)
            out.write("\n")
            return
        for k, v in meta.items():
            out.write(f"# meta {k}={_cell(v)}\n")
        if summary is not None:
            for k, v in summary.items():
                out.write(f"# summary {k}={_cell(v)}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(c) for c in row])

    if args.output:
        with open(args.output, "w", newline="") as f:
            write(f)
    else:
        write(sys.stdout)


def _odd_primes_up_to(bound: int) -> list[int]:
    return [int(p) for p in _kernels.primes_up_to(bound) if p > 2]


def _cmd_verify(args) -> int:
    if (args.q is None) == (args.all_q is None):
        raise ArgumentError("pass exactly one of --q or --all-q")
    qs = [args.q] if args.q is not None else _odd_primes_up_to(args.all_q)
    if not qs:
        raise ArgumentError(f"no odd prime moduli at or below {args.all_q}")
    for q in qs:
        classify(q)  # validates before any heavy run
    progress = _Progress("verify")

    rows = []
    scans = [
        ("square_root_floor", "", square_root_identity_scan),
        ("cube_root_floor", 3, cube_root_identity_scan),
        ("fifth_power_mobius_floor", 5, fifth_power_identity_scan),
    ]
    for i, (name, q_tag, fn) in enumerate(scans):
        miss = fn(args.limit)
        rows.append([name, q_tag, args.limit, miss is None, miss])
        progress("identity", i + 1, len(scans))
    for i, q in enumerate(qs):
        rep = verify_factorization(q, args.limit)
        for route in rep.routes:
            rows.append([route.name, q, args.limit, route.ok, route.first_mismatch])
        progress("factorization", i + 1, len(qs))

    all_ok = all(r[3] for r in rows)
    meta = _metadata(
        args,
        {
            "q": args.q,
            "all_q": args.all_q,
            "limit": args.limit,
        },
    )
    _emit(
        args,
        meta,
        ["check", "q", "limit", "ok", "first_mismatch"],
        rows,
        {"all_pass": all_ok, "checks": len(rows)},
    )
    return EXIT_PASS if all_ok else EXIT_MISMATCH


def _cmd_constants(args) -> int:
    if (args.q is None) == (args.all_q is None):
        raise ArgumentError("pass exactly one of --q or --all-q")
    qs = [args.q] if args.q is not None else _odd_primes_up_to(args.all_q)
    if not qs:
        raise ArgumentError(f"no odd prime moduli at or below {args.all_q}")
    for q in qs:
        classify(q)
    progress = _Progress("constants")

    rows = []
    for i, q in enumerate(qs):
        params = main_term_params(
            q, prime_cutoff=args.prime_cutoff, tol=args.tolerance
        )
        case = params.case
        lead = params.leading_coefficient
        bracket = params.bracket_constant
        if case.branch is Branch.Q_EQUALS_3:
            lead_v, lead_e = 1.0, 0.0
        elif lead is not None:
            lead_v, lead_e = lead.value, lead.error
        else:
            lead_v = lead_e = None
        rows.append(
            [
                q,
                case.branch.value,
                case.sub.value if case.sub else None,
                case.log_factor_start
                if case.log_factor_start is not None
                else case.sqrt_factor_start,
                _KIND_BY_BRANCH[case.branch],
                lead_v,
                lead_e,
                bracket.value if bracket else None,
                bracket.error if bracket else None,
            ]
        )
        progress("modulus", i + 1, len(qs))

    meta = _metadata(
        args,
        {
            "q": args.q,
            "all_q": args.all_q,
            "prime_cutoff": args.prime_cutoff,
            "tolerance": args.tolerance,
        },
    )
    _emit(
        args,
        meta,
        [
            "q",
            "branch",
            "sub_branch",
            "first_exponent",
            "main_kind",
            "leading_coefficient",
            "leading_error",
            "bracket_constant",
            "bracket_error",
        ],
        rows,
        None,
    )
    return EXIT_PASS


def _cmd_trace(args) -> int:
    progress = _Progress("trace")
    tr = trace(
        args.q,
        args.checkpoints,
        args.alphas,
        limit=args.max,
        prime_cutoff=args.prime_cutoff,
        progress=progress,
    )
    header = ["x", "value", "main", "residual", "normalized"]
    header += [f"normalized{j + 1}" for j in range(1, len(tr.alphas))]
    header.append("main_error")
    rows = []
    for j, x in enumerate(tr.checkpoints):
        row = [x, tr.values[j], tr.main_values[j], tr.residuals[j]]
        row += [tr.normalized[i][j] for i in range(len(tr.alphas))]
        row.append(tr.main_errors[j])
        rows.append(row)
    meta = _metadata(
        args,
        {
            "q": args.q,
            "max": args.max,
            "checkpoints": ",".join(str(c) for c in tr.checkpoints),
            "alphas": ",".join(format(a, ".17g") for a in tr.alphas),
            "prime_cutoff": args.prime_cutoff,
        },
    )
    summary = {
        "main_kind": tr.kind,
        "fitted_exponent": tr.fitted_exponent,
    }
    _emit(args, meta, header, rows, summary)
    return EXIT_PASS


def _interval_instance(args) -> ShortIntervalInstance:
    return ShortIntervalInstance(args.x, args.y, args.c3)


def _scan_rows(rep, with_shapes: bool):
    rows = []
    for r in rep.rows:
        row = [
            r.window_base,
            r.n_lo,
            r.n_hi,
            r.delta,
            r.window_double,
            r.near_curve_count,
        ]
        if with_shapes:
            row += [r.shape, r.shape_value, r.ratio, r.ft_condition_ok]
        rows.append(row)
    return rows


def _scan_summary(rep, with_shapes: bool) -> dict:
    summary = {
        "short_sum": rep.short_sum,
        "total_double": rep.total_double,
        "small_n_double": rep.small_n_double,
        "trivial_bound": rep.trivial_bound,
        "n_min": rep.n_min,
        "n_max": rep.n_max,
        "y_within_11_20": rep.y_within_11_20,
        "y_within_19_36": rep.y_within_19_36,
    }
    if with_shapes:
        summary["assembled_bound"] = rep.assembled_bound
        summary["ratio_short_to_assembled"] = rep.ratio_short_to_assembled
    return summary


_SCAN_HEADER = ["window_base", "n_lo", "n_hi", "delta", "window_double", "near_curve_count"]


def _cmd_short_interval(args) -> int:
    rep = decompose_short_interval(_interval_instance(args))
    meta = _metadata(args, {"x": args.x, "y": args.y, "c3": args.c3})
    _emit(args, meta, list(_SCAN_HEADER), _scan_rows(rep, False), _scan_summary(rep, False))
    return EXIT_PASS


def _cmd_near_curve(args) -> int:
    rep = range_scan(_interval_instance(args))
    meta = _metadata(args, {"x": args.x, "y": args.y, "c3": args.c3})
    header = _SCAN_HEADER + ["shape", "shape_value", "ratio", "ft_condition_ok"]
    _emit(args, meta, header, _scan_rows(rep, True), _scan_summary(rep, True))
    return EXIT_PASS


def _cmd_rh_diagnostic(args) -> int:
    progress = _Progress("rh-diagnostic")
    diag = rh_diagnostic(
        args.q,
        args.checkpoints,
        eps=args.eps,
        c=args.c,
        limit=args.max,
        progress=progress,
    )
    rows = [
        [x, diag.values[j], diag.ratio_unconditional[j], diag.ratio_conditional[j]]
        for j, x in enumerate(diag.checkpoints)
    ]
    meta = _metadata(
        args,
        {
            "q": args.q,
            "max": args.max,
            "checkpoints": ",".join(str(c) for c in diag.checkpoints),
            "eps": args.eps,
            "c": args.c,
        },
    )
    _emit(
        args,
        meta,
        ["x", "value", "ratio_unconditional", "ratio_conditional"],
        rows,
        None,
    )
    return EXIT_PASS


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )
    common.add_argument("--output", default=None, help="write to a file, not stdout")
    common.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit the timestamp so identical configs give identical bytes",
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="parallelism degree recorded in metadata (pipelines run "
        "single-process)",
    )

    p = argparse.ArgumentParser(
        prog="tauchar",
        description="verification workbench for divisor-count character sums",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    pv = sub.add_parser(
        "verify", parents=[common], help="identity suite + factorization routes"
    )
    pv.add_argument("--q", type=_int_like, default=None, help="one odd prime modulus")
    pv.add_argument(
        "--all-q", type=_int_like, default=None, help="every odd prime up to this"
    )
    pv.add_argument(
        "--limit", type=_int_like, default=10**4, help="coefficient range checked"
    )
    pv.set_defaults(func=_cmd_verify)

    pc = sub.add_parser(
        "constants", parents=[common], help="certified main-term constants"
    )
    pc.add_argument("--q", type=_int_like, default=None)
    pc.add_argument("--all-q", type=_int_like, default=None)
    pc.add_argument(
        "--prime-cutoff",
        type=_int_like,
        default=None,
        help="prime product cutoff (default: per-branch documented defaults)",
    )
    pc.add_argument("--tolerance", type=float, default=1e-4)
    pc.set_defaults(func=_cmd_constants)

    pt = sub.add_parser(
        "trace", parents=[common], help="summatory values along checkpoints"
    )
    pt.add_argument("--q", type=_int_like, required=True)
    pt.add_argument(
        "--max", type=_int_like, default=10**8, help="largest checkpoint"
    )
    pt.add_argument(
        "--checkpoints",
        type=_int_list,
        default=None,
        help="comma-separated explicit checkpoints (default: powers of two)",
    )
    pt.add_argument(
        "--alphas",
        type=_float_list,
        default=None,
        help="comma-separated normalization exponents (default: per branch)",
    )
    pt.add_argument("--prime-cutoff", type=_int_like, default=None)
    pt.set_defaults(func=_cmd_trace)

    psi = sub.add_parser(
        "short-interval",
        parents=[common],
        help="exact short-window sum + double-count decomposition",
    )
    psi.add_argument("--x", type=_rational, required=True)
    psi.add_argument("--y", type=_rational, required=True)
    psi.add_argument("--c3", type=_rational, default=Fraction(1, 4))
    psi.set_defaults(func=_cmd_short_interval)

    pnc = sub.add_parser(
        "near-curve",
        parents=[common],
        help="range scan with derivative-test bound shapes",
    )
    pnc.add_argument("--x", type=_rational, required=True)
    pnc.add_argument("--y", type=_rational, required=True)
    pnc.add_argument("--c3", type=_rational, default=Fraction(1, 4))
    pnc.set_defaults(func=_cmd_near_curve)

    pr = sub.add_parser(
        "rh-diagnostic",
        parents=[common],
        help="growth-envelope ratios (no-main-term branch only)",
    )
    pr.add_argument("--q", type=_int_like, required=True)
    pr.add_argument("--max", type=_int_like, default=10**8)
    pr.add_argument("--checkpoints", type=_int_list, default=None)
    pr.add_argument("--eps", type=float, default=0.01)
    pr.add_argument("--c", type=float, default=0.2)
    pr.set_defaults(func=_cmd_rh_diagnostic)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ArgumentError as e:
        print(f"tauchar: argument error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (
        ResourceLimitError,
        PrecisionError,
        OverflowHardError,
        UndecidablePointError,
    ) as e:
        print(f"tauchar: resource/precision error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except TaucharError as e:
        print(f"tauchar: mathematical inconsistency: {e}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())

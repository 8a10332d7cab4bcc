"""pdelaunay command-line application.

This is the main application module that:
- Parses the construct / certify / diagram / scan subcommands
- Configures logging (stderr, one JSON line per run)
- Loads settings and configuration
- Maps errors to exit codes (0 certified, 1 refuted, 2 usage or resource error)
"""
import argparse
import logging
import sys
from typing import Callable, List, Optional

from pdelaunay import __version__
from pdelaunay.app.dependencies import AppState, init_app_state
from pdelaunay.app.schemas import FamilyName
from pdelaunay.app.services import (
    build_vertex_set,
    diagram_csv,
    dump_json,
    run_certify,
    run_scan,
    vertex_set_document,
    write_atomic,
)
from pdelaunay.core.errors import ErrorCode, ExitCode, PerfectDelaunayError
from pdelaunay.core.logging import structured_logger
from pdelaunay.core.polytopes import Normalization
from pdelaunay.metrics.prometheus import export_metrics

logger = logging.getLogger(__name__)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _configure_logging(level_name: str) -> None:
    level = getattr(logging, level_name.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr)
    logging.getLogger("pdelaunay").setLevel(level)


def cmd_construct(args: argparse.Namespace, state: AppState) -> ExitCode:
    vs = build_vertex_set(FamilyName(args.family), args.d, args.s, args.k, Normalization(args.normalization))
    if args.format == "json":
        text = dump_json(vertex_set_document(vs), state.config.output.indent)
    else:
        text = vs.to_csv()
    _emit(text, args.out)
    summary = {"family": vs.meta.family.value, "count": len(vs), "affine_dim": vs.affine_dim}
    if args.out:
        sys.stdout.write(dump_json(summary, state.config.output.indent))
    else:
        logger.info(f"Constructed {summary['family']}: count={summary['count']} affine_dim={summary['affine_dim']}")
    return ExitCode.CERTIFIED


def cmd_certify(args: argparse.Namespace, state: AppState) -> ExitCode:
    outcome = run_certify(
        FamilyName(args.family),
        args.d,
        args.s,
        args.k,
        oracle=args.oracle,
        node_budget=state.node_budget(args.node_budget),
    )
    _emit(dump_json(outcome.document, state.config.output.indent), args.out)
    return outcome.exit_code


def cmd_diagram(args: argparse.Namespace, state: AppState) -> ExitCode:
    approx = args.approx if args.approx is not None else state.config.output.approx_columns
    _emit(diagram_csv(args.d, args.k, args.s, approx), args.out)
    return ExitCode.CERTIFIED


def cmd_scan(args: argparse.Namespace, state: AppState) -> ExitCode:
    scan = state.config.scan
    report, code = run_scan(
        d_max=args.d_max,
        s_max=args.s_max,
        k_max=args.k_max,
        d_min=args.d_min if args.d_min is not None else scan.d_min,
        jobs=state.jobs(args.jobs),
        oracle=args.oracle if args.oracle is not None else scan.oracle,
        perfection=args.perfection if args.perfection is not None else scan.perfection,
        node_budget=state.node_budget(args.node_budget),
        timings=args.timings if args.timings is not None else scan.timings,
    )
    _emit(dump_json(report, state.config.output.indent), args.out)
    summary = report["summary"]
    logger.info(
        f"Scan finished: {summary['certified']} certified, {summary['failed']} failed, "
        f"{summary['skipped']} skipped, {summary['errors']} errors"
    )
    return code


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdelaunay",
        description="Exact construction and certification of perfect Delaunay polytopes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="YAML configuration (default: config.yaml)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    def family_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", choices=[f.value for f in FamilyName], required=True)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--s", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--out", default=None, help="Output file (default: stdout)")

    construct = sub.add_parser("construct", help="Write a vertex set")
    family_flags(construct)
    construct.add_argument(
        "--normalization", choices=[n.value for n in Normalization], default=Normalization.HALF.value
    )
    construct.add_argument("--format", choices=["csv", "json"], default="csv")
    construct.set_defaults(handler=cmd_construct)

    certify = sub.add_parser("certify", help="Delaunay and perfection certificates")
    family_flags(certify)
    certify.add_argument("--oracle", action="store_true", help="Also run the brute force oracle")
    certify.add_argument("--node-budget", type=_positive_int, default=None)
    certify.add_argument("--metrics-out", default=None, help="Write Prometheus metrics to this file")
    certify.set_defaults(handler=cmd_certify)

    diag = sub.add_parser("diagram", help="Write the (phi1, phi2) diagram of M as CSV")
    diag.add_argument("--d", type=int, required=True)
    diag.add_argument("--k", type=int, required=True)
    diag.add_argument("--s", type=int, default=None, help="Mark the points on the supporting line")
    diag.add_argument("--approx", action=argparse.BooleanOptionalAction, default=None)
    diag.add_argument("--out", default=None)
    diag.set_defaults(handler=cmd_diagram)

    scan = sub.add_parser("scan", help="Certify a grid of (d, s, k) cells")
    scan.add_argument("--d-max", type=int, required=True)
    scan.add_argument("--s-max", type=int, required=True)
    scan.add_argument("--k-max", type=int, required=True)
    scan.add_argument("--d-min", type=int, default=None)
    scan.add_argument("--jobs", type=_positive_int, default=None)
    scan.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=None)
    scan.add_argument("--perfection", action=argparse.BooleanOptionalAction, default=None)
    scan.add_argument("--timings", action=argparse.BooleanOptionalAction, default=None)
    scan.add_argument("--node-budget", type=_positive_int, default=None)
    scan.add_argument("--metrics-out", default=None)
    scan.add_argument("--out", default=None)
    scan.set_defaults(handler=cmd_scan)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else int(ExitCode.USAGE)

    handler: Callable[[argparse.Namespace, AppState], ExitCode] = args.handler
    try:
        state = init_app_state(args.config)
        _configure_logging(args.log_level or state.settings.log_level)
        code = handler(args, state)
    except PerfectDelaunayError as exc:
        code = ExitCode.from_error_code(exc.code)
        structured_logger.log_run(
            command=args.command,
            family=getattr(args, "family", None),
            d=getattr(args, "d", None),
            s=getattr(args, "s", None),
            k=getattr(args, "k", None),
            outcome="error" if code is ExitCode.USAGE else "refuted",
            error_code=exc.code.value,
            level="ERROR",
        )
        sys.stderr.write(dump_json(exc.to_dict()))
    except OSError as exc:
        code = ExitCode.USAGE
        sys.stderr.write(dump_json({"error_code": ErrorCode.USAGE_ERROR.value, "message": str(exc)}))

    metrics_out = getattr(args, "metrics_out", None)
    if metrics_out:
        export_metrics(metrics_out)
    return int(code)


if __name__ == "__main__":
    raise SystemExit(main())

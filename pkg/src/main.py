from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any

import structlog
from dotenv import load_dotenv

from src.bench.runner import load_bench_spec, render_markdown, run_bench
from src.config import Settings, build_solver_config, get_settings
from src.core.problem import validate_problem
from src.core.schema import load_point, load_problem_document
from src.exceptions import SQCQPError
from src.generators.metrics import metrics
from src.generators.registry import FAMILIES, generate
from src.logging_config import configure_logging
from src.services.metrics import start_metrics_server
from src.solver.initial_point import InitialPointStrategy, make_initial_point, strategy_from_name
from src.solver.snsqp import snsqp_solve
from src.stationary.equations import verify_p_stationarity

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def _emit(text: str, output: str | None) -> None:
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _default_tau(meta: dict[str, Any], given: float | None) -> float | None:
    if given is not None:
        return given
    value = meta.get("recommended_tau")
    return float(value) if value is not None else None


def metrics_port(args: argparse.Namespace, settings: Settings) -> int | None:
    """Port for the Prometheus endpoint: ``solve --metrics-port`` wins, then
    METRICS_PORT when METRICS_ENABLED is set."""
    port = getattr(args, "metrics_port", None)
    if port:
        return port
    return settings.metrics_port if settings.metrics_enabled else None


def cmd_solve(args: argparse.Namespace, settings: Settings) -> int:
    doc = load_problem_document(args.input)
    p = doc.to_problem()
    validate_problem(p)
    config = build_solver_config(
        tau=_default_tau(doc.meta, args.tau),
        eps=args.eps,
        max_iter=args.max_iter,
        rho=args.rho,
        sigma=args.sigma,
        seed=args.seed,
    )

    if args.init == "file":
        if not args.init_file:
            raise SQCQPError("--init file needs --init-file PATH")
        strategy = InitialPointStrategy.given(load_point(args.init_file, p).x)
    else:
        strategy = strategy_from_name(args.init, doc.meta)
    Y0 = make_initial_point(p, strategy, config)

    report = snsqp_solve(p, Y0, config)
    record = metrics(report.x, doc.x_star, p, solve_time=report.wall_time, meta=doc.meta)
    stationarity = verify_p_stationarity(p, report.final_point, config.tau, 10.0 * config.eps)

    payload = report.to_dict()
    payload["metrics"] = record.to_dict()
    payload["stationarity"] = stationarity.to_dict()
    _emit(json.dumps(payload, indent=2) + "\n", args.output)
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_generate(args: argparse.Namespace, settings: Settings) -> int:
    bundle = generate(
        args.family,
        n=args.n,
        s=args.s,
        seed=args.seed,
        d=args.d,
        k=args.k,
        m=args.m,
        box_kind=args.box_kind,
        snr_db=args.snr_db,
        n_y=args.n_y,
        samples=args.samples,
    )
    _emit(bundle.to_json(), args.output)
    logger.info("instance_written", family=args.family, n=bundle.problem.n, output=args.output or "<stdout>")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, settings: Settings) -> int:
    spec = load_bench_spec(args.spec)
    table = run_bench(spec, workers=args.workers or settings.bench_workers, output=args.output)
    sys.stdout.write(render_markdown(table))
    return EXIT_OK


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    doc = load_problem_document(args.input)
    p = doc.to_problem()
    validate_problem(p)
    Y = load_point(args.point, p)
    tau = _default_tau(doc.meta, args.tau) or 1.0
    result = verify_p_stationarity(p, Y, tau, args.tol)
    sys.stdout.write(json.dumps(result.to_dict(), indent=2) + "\n")
    if result.passed:
        sys.stdout.write("PASS\n")
        return EXIT_OK
    sys.stdout.write(f"FAIL: {result.which.replace('-', ' ')}\n")
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snsqp", description="Semismooth Newton solver for sparse QCQPs")
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Solve an instance file")
    solve.add_argument("input")
    solve.add_argument("--tau", type=float, default=None)
    solve.add_argument("--eps", type=float, default=None)
    solve.add_argument("--max-iter", type=int, default=None)
    solve.add_argument("--rho", type=float, default=None)
    solve.add_argument("--sigma", type=float, default=None)
    solve.add_argument("--init", default="sparse", choices=["zeros", "sparse", "relax", "spectral", "file"])
    solve.add_argument("--init-file", default=None, help="Point file used with --init file")
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--output", default=None)
    solve.add_argument("--metrics-port", type=int, default=None)
    solve.set_defaults(handler=cmd_solve)

    gen = sub.add_parser("generate", help="Write a generated instance")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--n", type=int, required=True, help="Dimension (n_x for scca-synth)")
    gen.add_argument("--s", type=int, required=True)
    gen.add_argument("--d", type=int, default=None)
    gen.add_argument("--k", type=int, default=0)
    gen.add_argument("--m", type=int, default=0)
    gen.add_argument("--box-kind", default="free", choices=["free", "box22", "nonneg"])
    gen.add_argument("--snr-db", type=float, default=math.inf)
    gen.add_argument("--n-y", type=int, default=None)
    gen.add_argument("--samples", type=int, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", default=None)
    gen.set_defaults(handler=cmd_generate)

    bench = sub.add_parser("bench", help="Run a benchmark sweep")
    bench.add_argument("spec")
    bench.add_argument("--output", default=None, help="CSV path; overrides the spec")
    bench.add_argument("--workers", type=int, default=None)
    bench.set_defaults(handler=cmd_bench)

    check = sub.add_parser("check", help="Check P-stationarity of a point")
    check.add_argument("input")
    check.add_argument("point")
    check.add_argument("--tau", type=float, default=None)
    check.add_argument("--tol", type=float, default=1e-6)
    check.set_defaults(handler=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    settings = get_settings()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.log_level, settings.log_file)

    port = metrics_port(args, settings)
    if port:
        start_metrics_server(settings.metrics_host, port)

    try:
        return args.handler(args, settings)
    except SQCQPError as e:
        logger.error("command_failed", command=args.command, error=str(e), error_type=type(e).__name__)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

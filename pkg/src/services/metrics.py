from __future__ import annotations

from prometheus_client import Counter, Gauge, Histogram, start_http_server

solves_counter = Counter(
    "snsqp_solves_total", "Finished solves by terminal status", ["status"]
)
newton_fallback_counter = Counter(
    "snsqp_newton_fallbacks_total", "Newton steps that used the regularized system"
)
line_search_failures_counter = Counter(
    "snsqp_line_search_failures_total", "Line searches that hit the backtrack cap"
)
backtracks_histogram = Histogram(
    "snsqp_line_search_backtracks",
    "Backtracking trials per accepted step",
    buckets=[0, 1, 2, 4, 8, 16, 32, 64],
)
solve_time_histogram = Histogram(
    "snsqp_solve_seconds",
    "Wall-clock time spent inside the Newton loop",
    buckets=[0.001, 0.01, 0.1, 0.5, 1, 5, 30],
)
iterations_histogram = Histogram(
    "snsqp_iterations",
    "Newton iterations per solve",
    buckets=[1, 2, 5, 10, 20, 50, 100, 1000, 10000],
)
residual_gauge = Gauge("snsqp_final_residual", "Residual norm of the last finished solve")


def start_metrics_server(host: str, port: int) -> None:
    start_http_server(port, addr=host)


def record_solve(status: str, iterations: int, wall_time: float, residual: float) -> None:
    solves_counter.labels(status=status).inc()
    iterations_histogram.observe(iterations)
    solve_time_histogram.observe(wall_time)
    residual_gauge.set(residual)


def record_newton_fallback() -> None:
    newton_fallback_counter.inc()


def record_line_search(backtracks: int, accepted: bool) -> None:
    backtracks_histogram.observe(backtracks)
    if not accepted:
        line_search_failures_counter.inc()

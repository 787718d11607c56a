from src.services.metrics import (
    record_line_search,
    record_newton_fallback,
    record_solve,
    start_metrics_server,
)

__all__ = ["record_line_search", "record_newton_fallback", "record_solve", "start_metrics_server"]

from src.generators.bundle import InstanceBundle
from src.generators.metrics import CCAMetrics, MetricsRecord, cca_metrics, metrics, relerr, rsnr
from src.generators.portfolio import gen_sps_synthetic
from src.generators.recovery import gen_recovery_qcqp, gen_recovery_simplex
from src.generators.scca import gen_scca_synthetic, normalize_samples, scca_from_csv
from src.generators.registry import FAMILIES, generate

__all__ = [
    "FAMILIES",
    "CCAMetrics",
    "InstanceBundle",
    "MetricsRecord",
    "cca_metrics",
    "gen_recovery_qcqp",
    "gen_recovery_simplex",
    "gen_scca_synthetic",
    "gen_sps_synthetic",
    "generate",
    "metrics",
    "normalize_samples",
    "relerr",
    "rsnr",
    "scca_from_csv",
]

from __future__ import annotations

import math

from src.exceptions import BadDimensions
from src.generators.bundle import InstanceBundle
from src.generators.portfolio import gen_sps_synthetic
from src.generators.recovery import gen_recovery_qcqp, gen_recovery_simplex
from src.generators.scca import gen_scca_synthetic

FAMILIES = ("recovery-simplex", "recovery-qcqp", "scca-synth", "sps-synth")


def generate(
    family: str,
    *,
    n: int,
    s: int,
    seed: int,
    d: int | None = None,
    k: int = 0,
    m: int = 0,
    box_kind: str = "free",
    snr_db: float = math.inf,
    n_y: int | None = None,
    samples: int | None = None,
) -> InstanceBundle:
    """Dispatch on the family name. For scca-synth ``n`` is n_x."""
    if family == "recovery-simplex":
        return gen_recovery_simplex(n, d if d is not None else n, s, snr_db, seed)
    if family == "recovery-qcqp":
        return gen_recovery_qcqp(n, d if d is not None else n + 5, k, m, s, box_kind, seed)
    if family == "scca-synth":
        return gen_scca_synthetic(n, n_y if n_y is not None else n, samples or 100, s, seed)
    if family == "sps-synth":
        return gen_sps_synthetic(n, s, seed)
    raise BadDimensions(f"unknown family '{family}', expected one of {FAMILIES}")

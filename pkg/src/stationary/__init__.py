from src.stationary.equations import (
    BLOCK_ORDER,
    ResidualVector,
    StationarityReport,
    assemble_F,
    merit,
    verify_p_stationarity,
)

__all__ = [
    "BLOCK_ORDER",
    "ResidualVector",
    "StationarityReport",
    "assemble_F",
    "merit",
    "verify_p_stationarity",
]

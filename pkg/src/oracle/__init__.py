from src.oracle.brute_force import (
    OracleResult,
    RestrictedSolution,
    SupportResult,
    brute_force_solve,
    restricted_solve,
)

__all__ = ["OracleResult", "RestrictedSolution", "SupportResult", "brute_force_solve", "restricted_solve"]

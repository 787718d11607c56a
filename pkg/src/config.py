from __future__ import annotations

from typing import Any

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.exceptions import InvalidConfig


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    environment: str = "development"
    log_level: str = "INFO"
    log_file: str | None = Field(default=None, description="Optional plain-text log file")

    # Metrics
    metrics_enabled: bool = Field(default=False, description="Expose Prometheus metrics")
    metrics_host: str = "0.0.0.0"
    metrics_port: int = 9305

    # Benchmarks
    bench_workers: int = Field(default=4, ge=1, description="Worker threads for bench cells")


class SolverConfig(BaseSettings):
    """Knobs of the semismooth Newton iteration.

    Values can be overridden through ``SNSQP_*`` environment variables, e.g.
    ``SNSQP_TAU=3``.
    """

    model_config = SettingsConfigDict(env_prefix="SNSQP_", extra="ignore", frozen=True)

    tau: float = Field(default=1.0, gt=0.0, description="Support-selection step tau")
    eps: float = Field(default=1e-8, gt=0.0, description="Stopping tolerance on ||F||")
    max_iter: int = Field(default=10000, ge=1, description="Iteration cap")
    rho: float = Field(default=0.5, gt=0.0, lt=1.0, description="Backtracking factor")
    sigma: float = Field(default=0.45, gt=0.0, lt=0.5, description="Armijo parameter")
    kappa0: float = Field(default=0.01, gt=0.0, description="Regularization base kappa_l = kappa0/l")
    max_backtracks: int = Field(default=64, ge=1, description="Line-search trial cap")
    seed: int = Field(default=0, ge=0, description="Seed for randomized initial points")

    # Stall policy
    max_failed_searches: int = Field(default=5, ge=1)
    stall_window: int = Field(default=20, ge=1)


def build_solver_config(**overrides: Any) -> SolverConfig:
    """Build a SolverConfig, turning pydantic range errors into InvalidConfig."""
    clean = {key: value for key, value in overrides.items() if value is not None}
    try:
        return SolverConfig(**clean)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise InvalidConfig(problems) from e


_settings: Settings | None = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings

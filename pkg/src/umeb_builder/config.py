import os
import sys
from dataclasses import dataclass
from typing import Callable, Optional, TypeVar


ENV_PREFIX = "UMEB_BUILDER_"

DEFAULT_TOL = 1e-9
DEFAULT_ORACLE_MARGIN = 1e-6
DEFAULT_ORACLE_RESTARTS = 64
DEFAULT_ORACLE_ITERS = 2000
DEFAULT_GENERIC_TRIALS = 64
DEFAULT_SEED = 0
DEFAULT_UPB_RESTARTS = 200
DEFAULT_UPB_TOL = 1e-6
DEFAULT_WORKERS = 1

# Structural unextendibility needs at least this many generic-rank samples.
MIN_GENERIC_TRIALS = 50

T = TypeVar("T", int, float)


def _resolve(
    name: str,
    explicit: Optional[T],
    default: T,
    parse: Callable[[str], T],
    valid: Callable[[T], bool],
) -> T:
    """
    Determine one configuration value.

    Priority:
    1. Explicit argument (if provided).
    2. Environment variable UMEB_BUILDER_<NAME>.
    3. Built-in default.
    """
    if explicit is not None:
        return explicit

    env_name = ENV_PREFIX + name
    env_value = os.environ.get(env_name)
    if env_value:
        try:
            value = parse(env_value)
        except ValueError:
            value = None
        if value is not None and valid(value):
            return value
        sys.stderr.write(
            f"Warning: ignoring invalid {env_name}={env_value!r}; using default {default}.\n"
        )
        sys.stderr.flush()

    return default


@dataclass(frozen=True)
class VerifyConfig:
    tol: float = DEFAULT_TOL
    oracle_margin: float = DEFAULT_ORACLE_MARGIN
    oracle_restarts: int = DEFAULT_ORACLE_RESTARTS
    oracle_iters: int = DEFAULT_ORACLE_ITERS
    generic_trials: int = DEFAULT_GENERIC_TRIALS
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0 (got {self.tol})")
        if not self.oracle_margin > 0:
            raise ValueError(f"oracle_margin must be > 0 (got {self.oracle_margin})")
        if self.oracle_restarts < 1:
            raise ValueError(f"oracle_restarts must be >= 1 (got {self.oracle_restarts})")
        if self.oracle_iters < 1:
            raise ValueError(f"oracle_iters must be >= 1 (got {self.oracle_iters})")
        if self.generic_trials < MIN_GENERIC_TRIALS:
            raise ValueError(
                f"generic_trials must be >= {MIN_GENERIC_TRIALS} (got {self.generic_trials})"
            )
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1 (got {self.workers})")


def resolve_verify_config(
    tol: Optional[float] = None,
    oracle_margin: Optional[float] = None,
    oracle_restarts: Optional[int] = None,
    oracle_iters: Optional[int] = None,
    generic_trials: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> VerifyConfig:
    """Build a VerifyConfig from explicit values, environment overrides and defaults."""
    positive_float = lambda v: v > 0  # noqa: E731
    positive_int = lambda v: v >= 1  # noqa: E731
    return VerifyConfig(
        tol=_resolve("TOL", tol, DEFAULT_TOL, float, positive_float),
        oracle_margin=_resolve(
            "ORACLE_MARGIN", oracle_margin, DEFAULT_ORACLE_MARGIN, float, positive_float
        ),
        oracle_restarts=_resolve(
            "ORACLE_RESTARTS", oracle_restarts, DEFAULT_ORACLE_RESTARTS, int, positive_int
        ),
        oracle_iters=_resolve("ORACLE_ITERS", oracle_iters, DEFAULT_ORACLE_ITERS, int, positive_int),
        generic_trials=_resolve(
            "GENERIC_TRIALS",
            generic_trials,
            DEFAULT_GENERIC_TRIALS,
            int,
            lambda v: v >= MIN_GENERIC_TRIALS,
        ),
        seed=_resolve("SEED", seed, DEFAULT_SEED, int, lambda v: v >= 0),
        workers=_resolve("WORKERS", workers, DEFAULT_WORKERS, int, positive_int),
    )


@dataclass(frozen=True)
class UpbConfig:
    restarts: int = DEFAULT_UPB_RESTARTS
    tol: float = DEFAULT_UPB_TOL
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1 (got {self.restarts})")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0 (got {self.tol})")


def resolve_upb_config(
    restarts: Optional[int] = None,
    tol: Optional[float] = None,
    seed: Optional[int] = None,
) -> UpbConfig:
    """Settings of the product-set search; only UPB_RESTARTS, UPB_TOL and SEED are read from the environment."""
    return UpbConfig(
        restarts=_resolve("UPB_RESTARTS", restarts, DEFAULT_UPB_RESTARTS, int, lambda v: v >= 1),
        tol=_resolve("UPB_TOL", tol, DEFAULT_UPB_TOL, float, lambda v: v > 0),
        seed=_resolve("SEED", seed, DEFAULT_SEED, int, lambda v: v >= 0),
    )

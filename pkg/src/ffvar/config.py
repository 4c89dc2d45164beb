"""Runtime configuration shared by the library and the CLI.

Every experiment record echoes the configuration it ran under, so results
are self-describing. Caps exist to make exponential enumerations fail
loudly instead of hanging.
"""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

from .errors import CapExceededError

DEFAULT_CACHE_DIR = ".ffvar-cache"
CACHE_DIR_ENV = "FFVAR_CACHE_DIR"


@dataclass(frozen=True)
class RunConfig:
    """Knobs for caps, calibrated constants and reproducibility.

    The calibrated constants below are empirical bounds tuned against the
    brute-force oracles shipped with the test suite; they are not claims
    about the underlying error terms.
    """

    enumeration_cap: int = 100_000_000   # max number of polynomials enumerated
    phi_cap: int = 1_000_000             # max unit-group size
    table_cap: int = 256                 # max q for field lookup tables
    batch_threshold: int = 512           # character families above this use numpy
    small_range_constant: float = 8.0    # calibrated C for the small-range residual
    trace_vs_g_constant: float = 4.0     # calibrated C for the trace-moment gap
    truncation_degree: int = 6           # default D for singular-series products
    jsum_rel_tol: float = 1e-6           # tolerance for the two J-sum routes
    rh_tol: float = 1e-8                 # tolerance for |alpha| = sqrt(q)
    root_tol: float = 1e-12              # residual tolerance of the root finder
    seed: int = 1
    workers: int = 1                     # accepted for CLI parity; results are
                                         # scheduling-independent by construction
    output_format: str = "json"
    cache_dir: str | None = None
    use_cache: bool = False

    def as_dict(self) -> dict:
        return asdict(self)

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)


DEFAULT = RunConfig()


def cfg(config: RunConfig | None) -> RunConfig:
    return DEFAULT if config is None else config


def require_enumeration(count: int, config: RunConfig | None = None) -> None:
    c = cfg(config)
    if count > c.enumeration_cap:
        raise CapExceededError(
            f"enumeration of {count} polynomials exceeds cap {c.enumeration_cap}"
        )


def require_phi(phi: int, config: RunConfig | None = None) -> None:
    c = cfg(config)
    if phi > c.phi_cap:
        raise CapExceededError(f"unit group of size {phi} exceeds cap {c.phi_cap}")


def resolve_cache_dir(config: RunConfig | None = None) -> str:
    c = cfg(config)
    if c.cache_dir:
        return c.cache_dir
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return env
    return DEFAULT_CACHE_DIR

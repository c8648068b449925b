"""Environment-based configuration for the numerics, sampler and oracle."""

import dataclasses
import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

load_dotenv()  # before the dataclass defaults read os.environ


def _env_bool(name: str, default: str = "") -> bool:
    return os.environ.get(name, default).lower() in ("1", "true", "yes")


def _env_optional_int(name: str) -> int | None:
    value = os.environ.get(name, "").strip()
    return int(value) if value else None


@dataclass(frozen=True)
class NumericsConfig:
    n_angles: int = field(
        default_factory=lambda: int(os.environ.get("CYLSEP_N_ANGLES", "40"))
    )
    lp_eps: float = field(
        default_factory=lambda: float(os.environ.get("CYLSEP_LP_EPS", "1e-7"))
    )
    sep_tol: float = field(
        default_factory=lambda: float(os.environ.get("CYLSEP_SEP_TOL", "0"))
    )
    radius_precision: float = field(
        default_factory=lambda: float(os.environ.get("CYLSEP_RADIUS_PREC", "1e-5"))
    )
    r_precision: float = field(
        default_factory=lambda: float(os.environ.get("CYLSEP_R_PREC", "1e-4"))
    )


@dataclass(frozen=True)
class SamplerConfig:
    eta: float = field(
        default_factory=lambda: float(os.environ.get("CYLSEP_ETA", "1e-3"))
    )
    # None means "derive from eta" (see state_spaces.angles_for_margin)
    n_angles: int | None = field(
        default_factory=lambda: _env_optional_int("CYLSEP_SAMPLER_ANGLES")
    )
    threads: int = field(
        default_factory=lambda: int(
            os.environ.get("CYLSEP_THREADS", str(os.cpu_count() or 1))
        )
    )
    debug: bool = field(default_factory=lambda: _env_bool("CYLSEP_DEBUG"))
    cache: bool = field(default_factory=lambda: _env_bool("CYLSEP_CACHE", "true"))
    lp_eps: float = field(
        default_factory=lambda: float(os.environ.get("CYLSEP_LP_EPS", "1e-7"))
    )


@dataclass(frozen=True)
class OracleConfig:
    max_pure_qubits: int = field(
        default_factory=lambda: int(os.environ.get("CYLSEP_ORACLE_PURE", "12"))
    )
    max_mixed_qubits: int = field(
        default_factory=lambda: int(os.environ.get("CYLSEP_ORACLE_MIXED", "8"))
    )


@dataclass(frozen=True)
class RunConfig:
    """Effective configuration of one CLI invocation, echoed into its artifacts."""

    command: str = ""
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    knobs: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        data = dataclasses.asdict(self)
        # threads only changes scheduling, never results
        data["sampler"].pop("threads", None)
        return data

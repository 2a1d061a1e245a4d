# encoding: utf-8
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.config.appconfig import env_config


class Settings(BaseSettings):
    """
    Numerical defaults shared by every service module.

    Every field can be overridden from the environment with the
    ``MTRIPLET_`` prefix, e.g. ``MTRIPLET_QUAD_THETA=128``.
    """

    model_config = SettingsConfigDict(env_prefix="MTRIPLET_", extra="ignore")

    PROJECT_NAME: str = "Monopole Triplet Lab"
    VERSION: str = "0.1.0"
    SCHEMA_VERSION: int = 1

    # finite differences (radians)
    FD_STEP: float = 1e-5
    FD_NESTED_STEP: float = 1e-4
    POLE_GUARD: float = 1e-6

    # gauge fields
    GAUGE_FD_STEP: float = 1e-6
    STRING_GUARD: float = 1e-6

    # sphere quadrature
    QUAD_THETA: int = 96
    QUAD_PHI: int = 96
    PROJECTION_ORDER: int = 64

    # radial grid and integrator
    R_MIN: float = 1e-3
    R_MAX: float = 20.0
    RADIAL_POINTS: int = 400
    ODE_TOL: float = 1e-10

    # shooting
    MATCH_RADIUS: float = 1.0
    MATCH_ACCEPT: float = 1e-5
    SCAN_POINTS: int = 61
    INDICIAL_TOL: float = 1e-10
    DECAY_TOL: float = 1e-8

    # structural thresholds
    INCONSISTENCY_THRESHOLD: float = 1e-3
    COMMUTES_TOL: float = 1e-12
    ZERO_FACTOR_TOL: float = 1e-12

    # sampling for randomized property checks
    SEED: int = 20240607
    if env_config.env == "development":
        SAMPLES: int = 100
    else:
        SAMPLES: int = 200


settings = Settings()

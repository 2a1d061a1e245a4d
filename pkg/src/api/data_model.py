from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config.settings import settings
from src.utilities.helpers import parse_complex

SUITES = ("wigner", "algebra", "gauges", "discrete", "radial", "matelem")

MatrixSpec = Union[str, List[List[Union[str, float, int]]]]


class RunConfig(BaseModel):
    command: Literal["verify", "spectrum", "matelem", "gauge-table"]
    profile: str = "trivial"
    twoj: int = Field(default=3, ge=1)
    twom: int = 1
    delta: Literal[-1, 1] = 1
    A: str = "0"
    B: str = "0"
    alpha: Optional[str] = None  # overrides e^{iA} in verify --suite discrete
    case: Optional[str] = None
    epsilon: float = 0.5
    mass: float = Field(default=1.0, ge=0.0)
    kappa: float = 0.0
    eps_min: Optional[float] = None
    eps_max: Optional[float] = None
    tol: float = Field(default=1e-8, gt=0.0)
    quad_theta: int = Field(default=settings.QUAD_THETA, ge=4)
    quad_phi: int = Field(default=settings.QUAD_PHI, ge=4)
    radial_points: int = Field(default=settings.RADIAL_POINTS, ge=8)
    observables: Optional[str] = None
    out: Optional[str] = None  # commands fall back to OUTPUT_DIR
    format: Literal["csv", "json"] = "csv"
    suite: List[str] = Field(default_factory=lambda: list(SUITES))

    @field_validator("A", "B", "alpha")
    @classmethod
    def check_complex(cls, value):
        if value is not None:
            parse_complex(value)
        return value

    @field_validator("suite")
    @classmethod
    def check_suite(cls, value):
        unknown = [name for name in value if name not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
        return value

    @model_validator(mode="after")
    def check_quantum_numbers(self):
        if self.twoj % 2 == 0:
            raise ValueError(f"2j={self.twoj} must be odd: the triplet carries half-integer j")
        if abs(self.twom) > self.twoj or (self.twoj - self.twom) % 2:
            raise ValueError(f"2m={self.twom} is not a projection of 2j={self.twoj}")
        return self

    @property
    def A_value(self) -> complex:
        return parse_complex(self.A)

    @property
    def B_value(self) -> complex:
        return parse_complex(self.B)

    @property
    def alpha_value(self) -> Optional[complex]:
        return None if self.alpha is None else parse_complex(self.alpha)

    model_config = ConfigDict(
        use_enum_values=True,
        json_schema_extra={
            "example": {
                "command": "spectrum",
                "profile": "bps:1",
                "twoj": 1,
                "twom": 1,
                "delta": 1,
                "A": "0",
                "B": "0",
                "eps_min": -0.9,
                "eps_max": 0.9,
                "out": "outputs",
                "format": "csv",
            }
        },
    )


class ObservableSpec(BaseModel):
    """
    One demonstration kernel G = iso ⊗ bispinor × radial. Matrices are given
    by name (``t3``, ``gamma0`` ...) or as nested rows of ``a+bi`` strings.
    """

    name: str
    iso: MatrixSpec = "I3"
    bispinor: MatrixSpec = "I4"
    radial: Literal["one", "r", "inverse_r"] = "one"
    hermitian: bool = False

    @field_validator("iso", "bispinor")
    @classmethod
    def check_rows(cls, value):
        if isinstance(value, str):
            return value
        width = {len(row) for row in value}
        if len(width) != 1:
            raise ValueError("matrix rows have unequal lengths")
        for row in value:
            for entry in row:
                parse_complex(entry)
        return value

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "name": "pseudoscalar",
                "iso": "I3",
                "bispinor": "gamma5",
                "radial": "one",
                "hermitian": True,
            }
        }
    )

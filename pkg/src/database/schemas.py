from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.config.settings import settings


class OutputHeader(BaseModel):
    schema_version: int = Field(default_factory=lambda: settings.SCHEMA_VERSION)
    command: str
    config_hash: str
    tolerances: Dict[str, float] = Field(default_factory=dict)

    def comment_lines(self) -> List[str]:
        return [
            f"# schema: {self.schema_version}",
            f"# command: {self.command}",
            f"# config_hash: {self.config_hash}",
            "# tolerances: " + ", ".join(f"{k}={v:g}" for k, v in sorted(self.tolerances.items())),
        ]


class CheckRow(BaseModel):
    suite: str
    name: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""


class ModeRecord(BaseModel):
    epsilon: float
    matching: float
    ode_residual: float
    norm: float


class MatElemRow(BaseModel):
    observable: str
    J: str
    J_p: str
    delta: int
    delta_p: int
    omega: Optional[int]
    factor_re: float
    factor_im: float
    value_re: float
    value_im: float
    verdict: str
    growth: Optional[float] = None  # |e^{i(A−A*)}| for complex A

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "observable": "pseudoscalar",
                "J": "3/2",
                "J_p": "3/2",
                "delta": 1,
                "delta_p": -1,
                "omega": 1,
                "factor_re": 0.0,
                "factor_im": 0.0,
                "value_re": 1.2e-13,
                "value_im": -4.0e-14,
                "verdict": "forbidden",
            }
        }
    )


class GaugeRow(BaseModel):
    r: float
    theta: float
    phi: float
    frame: str
    deviation: float
    radial_field: float


class ModesDocument(BaseModel):
    header: OutputHeader
    case: str
    j: str
    delta: int
    scan: List[Dict[str, Any]]
    modes: List[ModeRecord]

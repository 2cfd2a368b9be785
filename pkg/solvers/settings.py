import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models import ConstitutiveModel, g_prime_range
from utils.errors import ScenarioError


class SolverConfig(BaseModel):
    """Physics, bounds and tolerances of one Picard run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    nu: float = Field(1.0, gt=0, description="viscosity")
    dt: float = Field(5e-4, gt=0, description="time step")
    s: float = Field(3.0, description="Sobolev order, must exceed 5/2")
    delta_bar: float = Field(2.0, gt=0, description="bound on sup_t ||eta||_{H^s}")
    M: float = Field(5.0, gt=0, description="bound on sup_t ||eta_t||_{H^s}")
    delta: float = Field(0.5, gt=0, description="strain bound on ||v_x||_inf")
    theta_floor: float = Field(0.1, gt=0, description="ellipticity floor for g'(eta_x)")
    K1_bound: Optional[float] = Field(None, gt=0, description="defaults to sup_{|z|<=delta} g'(z)")
    T0: float = Field(1.0, gt=0)
    fp_tol: float = Field(1e-10, gt=0)
    max_picard_iters: int = Field(60, ge=1)
    no_contraction_patience: int = Field(3, ge=1)
    mean_zero_tol: Optional[float] = Field(None, gt=0)
    strict_smallness: bool = False
    initial_guess: Literal["ramp", "constant"] = "ramp"

    @field_validator("s")
    @classmethod
    def _sobolev_order(cls, value: float) -> float:
        if not value > 2.5:
            raise ValueError(f"Sobolev order must exceed 5/2, got {value}")
        return value

    @model_validator(mode="after")
    def _finite_delta(self) -> "SolverConfig":
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")
        return self

    def check_against(self, model: ConstitutiveModel) -> None:
        limit = model.delta_max
        if math.isfinite(limit) and not self.delta < limit:
            raise ScenarioError(
                f"strain bound delta={self.delta} must be below {limit:.12g} for {model.kind.value}"
            )

    def k1(self, model: ConstitutiveModel) -> float:
        if self.K1_bound is not None:
            return self.K1_bound
        return g_prime_range(model, self.delta)[1]

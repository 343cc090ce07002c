import enum
import math
from typing import List

from pydantic import Field, model_validator

from .base import BaseSchema
from .cbf import CbfParams
from .controller import Gains
from .vessel import VesselParams, VesselState


class SimMode(str, enum.Enum):
    REFERENCE = "reference"  # apply tau_ref directly
    QP = "qp"  # apply tau_ref + X from the safety filter


class TrajectorySegment(BaseSchema):
    duration: float = Field(..., gt=0, description="s")
    u_ld: float = Field(..., description="reference speed, m/s")
    psi_ld_dot: float = Field(0.0, description="reference course rate, rad/s (0 = straight)")


class TrajectorySpec(BaseSchema):
    x0: float = Field(100.0, description="m")
    y0: float = Field(30.0, description="m")
    psi0: float = Field(0.0, description="rad")
    segments: List[TrajectorySegment] = Field(
        default_factory=lambda: [
            TrajectorySegment(duration=60.0, u_ld=5.0, psi_ld_dot=0.0),
            TrajectorySegment(duration=240.0, u_ld=5.0, psi_ld_dot=-0.05),
        ],
        min_length=1,
    )

    @property
    def total_duration(self) -> float:
        return sum(segment.duration for segment in self.segments)


class ScenarioConfig(BaseSchema):
    """A complete closed-loop experiment; defaults reproduce the towing-circle scenario"""

    name: str = "towing_circle"
    params: VesselParams = Field(default_factory=VesselParams)
    gains: Gains = Field(default_factory=Gains)
    cbf: CbfParams = Field(default_factory=CbfParams)
    mode: SimMode = SimMode.QP
    dt: float = Field(0.01, gt=0, description="integration and control step, s")
    duration: float = Field(300.0, ge=0, description="s")
    filter_mu: float = Field(0.125, gt=0, le=1, description="low-pass coefficient for the acceleration rates")
    initial_state: VesselState = Field(
        default_factory=lambda: VesselState(x=90.0, y=25.0, psi=math.radians(30.0), u=1.0, v=0.0, r=0.0)
    )
    trajectory: TrajectorySpec = Field(default_factory=TrajectorySpec)

    @model_validator(mode="after")
    def check_horizon(self) -> "ScenarioConfig":
        if self.trajectory.total_duration < self.duration:
            raise ValueError(
                f"trajectory segments cover {self.trajectory.total_duration:g} s "
                f"but the run lasts {self.duration:g} s"
            )
        if self.initial_state.u <= 0.0:
            raise ValueError("initial surge velocity must be positive")
        return self

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.duration / self.dt + 1e-9))

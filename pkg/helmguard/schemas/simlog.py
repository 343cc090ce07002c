import enum
from typing import List, Optional

from pydantic import Field

from .base import BaseSchema
from .cbf import Branch
from .polar import PolarBundle
from .qp import QpStatus
from .scenario import SimMode
from .vessel import ControlInput, VesselState


class Outcome(str, enum.Enum):
    COMPLETED = "completed"
    BREAKDOWN = "breakdown"


class StepRecord(BaseSchema):
    t: float
    state: VesselState
    bundle: PolarBundle
    x_d: float
    y_d: float
    psi_ld: float
    u_ld: float = 0.0
    psi_ld_dot: float = 0.0
    psi_le: float
    e_ul: float
    e_rl: float
    tau_ref: ControlInput
    tau: ControlInput
    X: ControlInput
    h_cc1: float
    h_cc2: float
    branch: Branch
    cc1_row_active: bool = True
    feasible_at_zero: bool = True
    qp_status: QpStatus = QpStatus.DISABLED
    slack: float = 0.0
    V2: float = 0.0

    # proximity flags
    near_sp1: bool = False
    near_cc2: bool = False
    small_pe: bool = False


class SimLog(BaseSchema):
    scenario: str
    mode: SimMode
    dt: float
    duration: float
    records: List[StepRecord] = Field(default_factory=list)
    outcome: Outcome = Outcome.COMPLETED
    breakdown_t: Optional[float] = None
    breakdown_reason: Optional[str] = None
    min_cd: Optional[float] = None

    @property
    def last(self) -> Optional[StepRecord]:
        return self.records[-1] if self.records else None


class EventKind(str, enum.Enum):
    SP1_PROXIMITY = "sp1_proximity"
    SURGE_MARGIN = "surge_margin"
    SMALL_POSITION_ERROR = "small_position_error"
    BRANCH_FLIP = "branch_flip"
    QP_ACTIVATION = "qp_activation"
    QP_RELAXED = "qp_relaxed"


class Event(BaseSchema):
    kind: EventKind
    t: float
    t_end: Optional[float] = None
    value: Optional[float] = None

    def within(self, t: float, window: float) -> bool:
        """True when t lies within +-window of the event (or its interval)"""
        end = self.t_end if self.t_end is not None else self.t
        return self.t - window <= t <= end + window

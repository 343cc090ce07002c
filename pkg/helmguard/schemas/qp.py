import enum
from typing import List

from pydantic import Field

from .base import BaseSchema


class QpStatus(str, enum.Enum):
    UNCONSTRAINED = "unconstrained"
    ACTIVE_SET = "active_set"
    INFEASIBLE_RELAXED = "infeasible_relaxed"
    DISABLED = "disabled"  # reference-only runs never call the solver


class QpSolution(BaseSchema):
    X: List[float] = Field(default_factory=lambda: [0.0, 0.0])
    status: QpStatus = QpStatus.UNCONSTRAINED
    active_rows: List[int] = Field(default_factory=list)
    multipliers: List[float] = Field(default_factory=list)
    slack_used: float = Field(0.0, ge=0)

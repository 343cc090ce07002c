from typing import Dict, List, Optional

from pydantic import Field

from .base import BaseSchema
from .scenario import SimMode
from .simlog import Outcome


class RunReport(BaseSchema):
    scenario: str
    mode: SimMode
    outcome: Outcome
    breakdown_t: Optional[float] = None
    breakdown_reason: Optional[str] = None
    steps: int = 0
    final_p_e: Optional[float] = None
    final_psi_le: Optional[float] = None
    steady_p_e: Optional[float] = None
    steady_u: Optional[float] = None
    qp_activation_fraction: float = 0.0
    min_u: Optional[float] = None
    event_counts: Dict[str, int] = Field(default_factory=dict)
    files: List[str] = Field(default_factory=list)


class CompareReport(BaseSchema):
    scenario: str
    runs: List[RunReport]

import enum
import math
from typing import List, Optional

from pydantic import Field, model_validator

from .base import BaseSchema


class Branch(str, enum.Enum):
    FORWARD = "forward"  # cos(psi_l - psi_b) >= 0, barrier cos(.) - eps_psi
    REVERSE = "reverse"  # cos(psi_l - psi_b) < 0, barrier -cos(.) - eps_psi


class EcbfForm(str, enum.Enum):
    EXACT = "exact"
    PRINTED = "printed"


class CbfParams(BaseSchema):
    eps_psi: float = Field(math.radians(15.0), gt=0, description="CC-1 margin on |cos(psi_l - psi_b)|")
    eps_u: float = Field(0.5, gt=0, description="CC-2 margin on surge speed, m/s")
    alpha1: float = Field(0.01, gt=0, description="ECBF gain on h, 1/s^2")
    alpha2: float = Field(0.3, gt=0, description="ECBF gain on h_dot, 1/s")
    k_class_k: float = Field(1.0, gt=0, description="linear class-K gain for CC-2, 1/s")
    activation_margin: float = Field(
        0.05, gt=0, description="CC-1 row is enforced only while its barrier value is below this"
    )
    ecbf_form: EcbfForm = EcbfForm.EXACT


class CbfDiagnostics(BaseSchema):
    c1: float = 0.0
    c2: float = 0.0
    M: float = 0.0
    h: float = 0.0
    h_dot: float = 0.0
    drift_term: float = 0.0  # right-hand side of the unshifted CC-1 row, before -alpha1*eps_psi
    active: bool = True


class ConstraintRow(BaseSchema):
    """One inequality a . X <= b over the correction X = tau - tau_ref"""

    a: List[float]
    b: float
    rhs_tau: Optional[float] = None  # same row written over tau instead of X
    label: str = ""


class ConstraintSet(BaseSchema):
    A: List[List[float]]
    b: List[float]
    branch: Branch
    diagnostics: CbfDiagnostics
    h_cc2: float = 0.0

    @model_validator(mode="after")
    def check_shape(self) -> "ConstraintSet":
        if len(self.A) != len(self.b) or any(len(row) != 2 for row in self.A):
            raise ValueError("constraint matrix must be m x 2 with m right-hand sides")
        return self

    def satisfied_at_zero(self) -> bool:
        return all(value >= 0.0 for value in self.b)

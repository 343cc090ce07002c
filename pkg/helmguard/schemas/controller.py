import math

from pydantic import Field

from .base import BaseSchema


class Gains(BaseSchema):
    """Backstepping gains, weighting factors and towing distance"""

    k_p: float = Field(1.0, gt=0)
    k_psi: float = Field(6.0, gt=0)
    k_u: float = Field(3.0, gt=0)
    k_r: float = Field(1.0, gt=0)
    gamma_psi: float = Field(1.0, gt=0)
    gamma_u: float = Field(1.0, gt=0)
    gamma_r: float = Field(1.0, gt=0)
    c_d: float = Field(6.0, gt=0, description="towing distance, m")


class ErrorState(BaseSchema):
    p_e: float = Field(..., ge=0, description="m")
    psi_le: float = Field(..., ge=-math.pi, lt=math.pi, description="rad, wrapped")
    e_ul: float = Field(0.0, description="alpha_ul - u_l, m/s")
    e_rl: float = Field(0.0, description="alpha_rl - r_l, rad/s")


class ReferencePoint(BaseSchema):
    """A sample of the reference trajectory and its analytic rates"""

    x_d: float
    y_d: float
    psi_ld: float = Field(..., description="reference course, rad (continuous)")
    u_ld: float = Field(..., description="reference speed, m/s")
    u_ld_dot: float = 0.0
    psi_ld_dot: float = 0.0

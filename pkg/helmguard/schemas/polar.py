from typing import Tuple

from pydantic import Field

from .base import BaseSchema

Triple = Tuple[float, float, float]


class PolarBundle(BaseSchema):
    """Quantities derived from the velocity and position-error polar transformations"""

    # velocity transformation
    u_l: float = Field(..., ge=0, description="total speed, m/s")
    psi_a: float = Field(..., description="sideslip angle, rad")
    psi_a_dot: float = 0.0
    psi_a_ddot: float = 0.0
    psi_l: float = Field(..., description="course angle psi + psi_a, rad (continuous)")
    r_l: float = Field(..., description="course rate, rad/s")

    # position-error transformation
    p_e: float = Field(..., ge=0, description="distance to the reference point, m")
    psi_b: float = Field(..., description="azimuth angle to the reference point, rad")
    psi_b_dot: float = 0.0
    p_e_dot: float = 0.0

    # transformed dynamics
    f_ul: float = 0.0
    f_rl: float = 0.0
    b_ul: float = 0.0
    eps_ra: float = 0.0
    b_r: float = 0.0


class FilterState(BaseSchema):
    """First-order low-pass estimate of the body acceleration rates"""

    nu_ddot_est: Triple = (0.0, 0.0, 0.0)
    prev_nu_dot: Triple = (0.0, 0.0, 0.0)
    mu: float = Field(0.125, gt=0, le=1, description="filter coefficient")
    initialized: bool = False

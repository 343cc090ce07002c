import numpy as np
from pydantic import Field, field_validator

from .base import BaseSchema


class VesselState(BaseSchema):
    """Pose in the navigation frame and body-fixed velocities; psi is kept unwrapped"""

    x: float = Field(0.0, description="position, m")
    y: float = Field(0.0, description="position, m")
    psi: float = Field(0.0, description="yaw angle, rad (continuous)")
    u: float = Field(0.0, description="surge velocity, m/s")
    v: float = Field(0.0, description="sway velocity, m/s")
    r: float = Field(0.0, description="yaw rate, rad/s")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.psi, self.u, self.v, self.r], dtype=float)

    @classmethod
    def from_array(cls, values) -> "VesselState":
        x, y, psi, u, v, r = (float(value) for value in values)
        return cls(x=x, y=y, psi=psi, u=u, v=v, r=r)


class StateDerivative(BaseSchema):
    dx: float = 0.0
    dy: float = 0.0
    dpsi: float = 0.0
    du: float = 0.0
    dv: float = 0.0
    dr: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.dpsi, self.du, self.dv, self.dr], dtype=float)

    @property
    def nu_dot(self):
        """Body acceleration triple (u_dot, v_dot, r_dot)"""
        return (self.du, self.dv, self.dr)


class ControlInput(BaseSchema):
    """Surge force and yaw moment; also used for tau_ref and the correction X"""

    tau_u: float = Field(0.0, description="surge force, N")
    tau_r: float = Field(0.0, description="yaw moment, N*m")

    def as_array(self) -> np.ndarray:
        return np.array([self.tau_u, self.tau_r], dtype=float)

    @classmethod
    def from_array(cls, values) -> "ControlInput":
        return cls(tau_u=float(values[0]), tau_r=float(values[1]))

    def plus(self, other: "ControlInput") -> "ControlInput":
        return ControlInput(tau_u=self.tau_u + other.tau_u, tau_r=self.tau_r + other.tau_r)

    def norm(self) -> float:
        return float(np.hypot(self.tau_u, self.tau_r))


class Drift(BaseSchema):
    """Input-free part (f_u, f_v, f_r) of the body-frame accelerations"""

    f_u: float = 0.0
    f_v: float = 0.0
    f_r: float = 0.0


class VesselParams(BaseSchema):
    """Three-DOF surface vessel coefficients (surge, sway, yaw)"""

    m11: float = Field(1.2e5, gt=0, description="surge inertia incl. added mass, kg")
    m22: float = Field(1.779e5, gt=0, description="sway inertia incl. added mass, kg")
    m33: float = Field(6.36e7, gt=0, description="yaw inertia incl. added mass, kg*m^2")
    d_u: float = Field(2.152e4, ge=0, description="linear surge damping, kg/s")
    d_v: float = Field(1.47e5, ge=0, description="linear sway damping, kg/s")
    d_r: float = Field(8.02e6, ge=0, description="linear yaw damping, kg*m^2/s")
    d_u2: float = Field(0.2 * 2.152e4, ge=0, description="quadratic surge damping")
    d_u3: float = Field(0.1 * 2.152e4, ge=0, description="cubic surge damping")
    d_v2: float = Field(0.2 * 1.47e5, ge=0, description="quadratic sway damping")
    d_v3: float = Field(0.1 * 1.47e5, ge=0, description="cubic sway damping")
    d_r2: float = Field(0.2 * 8.02e6, ge=0, description="quadratic yaw damping")
    d_r3: float = Field(0.1 * 8.02e6, ge=0, description="cubic yaw damping")
    b_u: float = Field(1.0 / 1.2e5, description="surge input gain, 1/kg")
    b_r: float = Field(1.0 / 6.36e7, description="yaw input gain, 1/(kg*m^2)")
    eps_r: float = Field(0.0, description="lift effect of the yaw moment on sway, 1/(kg*m)")

    @field_validator("b_u", "b_r")
    @classmethod
    def gain_nonzero(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("input gain must be nonzero")
        return value

    @classmethod
    def from_displacement_defaults(
        cls,
        m11: float = 1.2e5,
        m22: float = 1.779e5,
        m33: float = 6.36e7,
        d_u: float = 2.152e4,
        d_v: float = 1.47e5,
        d_r: float = 8.02e6,
        quadratic_ratio: float = 0.2,
        cubic_ratio: float = 0.1,
        eps_r: float = 0.0,
    ) -> "VesselParams":
        """Build a plant whose higher-order damping is a fixed ratio of the linear terms"""
        return cls(
            m11=m11, m22=m22, m33=m33,
            d_u=d_u, d_v=d_v, d_r=d_r,
            d_u2=quadratic_ratio * d_u, d_u3=cubic_ratio * d_u,
            d_v2=quadratic_ratio * d_v, d_v3=cubic_ratio * d_v,
            d_r2=quadratic_ratio * d_r, d_r3=cubic_ratio * d_r,
            b_u=1.0 / m11, b_r=1.0 / m33,
            eps_r=eps_r,
        )

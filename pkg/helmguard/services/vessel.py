import logging
from typing import Optional

import numpy as np

from ..exceptions import IntegrationError
from ..schemas.vessel import ControlInput, Drift, StateDerivative, VesselParams, VesselState

logger = logging.getLogger(__name__)


def _drift(u: float, v: float, r: float, p: VesselParams):
    f_u = (-p.d_u * u + p.m22 * v * r - p.d_u2 * abs(u) * u - p.d_u3 * u ** 3) / p.m11
    f_v = (-p.d_v * v - p.m11 * u * r - p.d_v2 * abs(v) * v - p.d_v3 * v ** 3) / p.m22
    f_r = (-p.d_r * r + (p.m11 - p.m22) * u * r - p.d_r2 * abs(r) * r - p.d_r3 * r ** 3) / p.m33
    return f_u, f_v, f_r


def _rates(values: np.ndarray, tau_u: float, tau_r: float, p: VesselParams) -> np.ndarray:
    """Right-hand side over the packed state (x, y, psi, u, v, r)"""
    _, _, psi, u, v, r = values
    f_u, f_v, f_r = _drift(u, v, r, p)
    c, s = np.cos(psi), np.sin(psi)
    return np.array([
        u * c - v * s,
        u * s + v * c,
        r,
        f_u + p.b_u * tau_u,
        f_v + p.eps_r * tau_r,
        f_r + p.b_r * tau_r,
    ])


def drift_terms(s: VesselState, p: VesselParams) -> Drift:
    """Damping, Coriolis and centripetal accelerations with zero input"""
    f_u, f_v, f_r = _drift(s.u, s.v, s.r, p)
    return Drift(f_u=f_u, f_v=f_v, f_r=f_r)


def eval_dynamics(s: VesselState, tau: ControlInput, p: VesselParams) -> StateDerivative:
    """Kinematics in the navigation frame plus body-frame accelerations"""
    rates = _rates(s.as_array(), tau.tau_u, tau.tau_r, p)
    if not np.all(np.isfinite(rates)):
        raise IntegrationError(f"non-finite derivative for state {s.model_dump()}")
    return StateDerivative(
        dx=rates[0], dy=rates[1], dpsi=rates[2], du=rates[3], dv=rates[4], dr=rates[5]
    )


def rk4_array(values: np.ndarray, tau_u: float, tau_r: float, p: VesselParams, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step over packed values; the input is held constant"""
    k1 = _rates(values, tau_u, tau_r, p)
    k2 = _rates(values + 0.5 * dt * k1, tau_u, tau_r, p)
    k3 = _rates(values + 0.5 * dt * k2, tau_u, tau_r, p)
    k4 = _rates(values + dt * k3, tau_u, tau_r, p)
    return values + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def step_rk4(
    s: VesselState,
    tau: ControlInput,
    p: VesselParams,
    dt: float,
    t: Optional[float] = None,
) -> VesselState:
    """Advance the vessel by dt under a zero-order-hold input"""
    if dt <= 0:
        raise ValueError(f"step size must be positive, got {dt}")

    with np.errstate(over="ignore", invalid="ignore"):
        values = rk4_array(s.as_array(), tau.tau_u, tau.tau_r, p, dt)
    if not np.all(np.isfinite(values)):
        logger.error(f"Integration produced a non-finite state from {s.model_dump()}")
        raise IntegrationError("non-finite state after RK4 step", t=t)
    return VesselState.from_array(values)

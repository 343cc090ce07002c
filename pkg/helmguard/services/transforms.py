"""
Polar coordinate transformations of the vessel velocity and of the position error.

The velocity transformation maps (u, v) to total speed u_l and sideslip psi_a;
the position-error transformation maps (x_e, y_e) to distance p_e and azimuth
psi_b. Course quantities psi_l = psi + psi_a and r_l = r + psi_a_dot follow.
"""
import math
from typing import NamedTuple, Sequence, Tuple

from ..config import settings
from ..exceptions import SingularAzimuth, SingularSideslip
from ..schemas.controller import ReferencePoint
from ..schemas.polar import FilterState, PolarBundle
from ..schemas.vessel import Drift, VesselParams, VesselState

TWO_PI = 2.0 * math.pi


class TransformedDynamics(NamedTuple):
    f_ul: float
    f_rl: float
    b_ul: float
    eps_ra: float
    r_l: float
    psi_l: float


def wrap_angle(theta: float) -> float:
    """Map an angle to [-pi, pi); +pi maps to -pi"""
    wrapped = (theta + math.pi) % TWO_PI - math.pi
    if wrapped >= math.pi:
        wrapped -= TWO_PI
    return wrapped


def polar_velocity(u: float, v: float) -> Tuple[float, float]:
    """Total speed and sideslip angle; psi_a = arctan(v/u) requires u > 0"""
    if u <= 0.0:
        raise SingularSideslip(f"sideslip undefined for surge velocity u={u:.6g} <= 0")
    return math.hypot(u, v), math.atan(v / u)


def polar_error(x_e: float, y_e: float) -> Tuple[float, float]:
    """Distance and azimuth from the vessel to the reference point"""
    p_e = math.hypot(x_e, y_e)
    if p_e < settings.SINGULAR_TOL:
        raise SingularAzimuth(f"azimuth undefined at p_e={p_e:.3g}")
    return p_e, wrap_angle(math.atan2(y_e, x_e))


def sideslip_rates(
    u: float, v: float, u_dot: float, v_dot: float, u_ddot: float, v_ddot: float
) -> Tuple[float, float]:
    """
    First and second time derivatives of the sideslip angle.

    With N = u*v_dot - v*u_dot and D = u^2 + v^2:
        psi_a_dot  = N / D
        psi_a_ddot = (u*v_ddot - v*u_ddot) / D - 2*N*(u*u_dot + v*v_dot) / D^2
    (the u_dot*v_dot terms of dN/dt cancel).
    """
    denom = u * u + v * v
    if denom <= 0.0:
        raise SingularSideslip("sideslip rate undefined at zero speed")
    numer = u * v_dot - v * u_dot
    psi_a_dot = numer / denom
    psi_a_ddot = (u * v_ddot - v * u_ddot) / denom - 2.0 * numer * (u * u_dot + v * v_dot) / denom ** 2
    return psi_a_dot, psi_a_ddot


def azimuth_rates(x_e: float, y_e: float, x_e_dot: float, y_e_dot: float) -> Tuple[float, float]:
    """Rates of the position-error distance and of the azimuth angle"""
    p_e = math.hypot(x_e, y_e)
    if p_e < settings.SINGULAR_TOL:
        raise SingularAzimuth(f"azimuth rate undefined at p_e={p_e:.3g}")
    p_e_dot = (x_e * x_e_dot + y_e * y_e_dot) / p_e
    psi_b_dot = (x_e * y_e_dot - y_e * x_e_dot) / (p_e * p_e)
    return p_e_dot, psi_b_dot


def transformed_dynamics(
    s: VesselState,
    drift: Drift,
    psi_a_dot: float,
    psi_a_ddot: float,
    p: VesselParams,
) -> TransformedDynamics:
    """Drift and input gains of the (u_l, r_l) dynamics"""
    _, psi_a = polar_velocity(s.u, s.v)
    cos_a, sin_a = math.cos(psi_a), math.sin(psi_a)
    return TransformedDynamics(
        f_ul=cos_a * drift.f_u + sin_a * drift.f_v,
        f_rl=drift.f_r + psi_a_ddot,
        b_ul=cos_a * p.b_u,
        eps_ra=sin_a * p.eps_r,
        r_l=s.r + psi_a_dot,
        psi_l=s.psi + psi_a,
    )


def course_velocity(bundle: PolarBundle) -> Tuple[float, float]:
    """Navigation-frame velocity written with speed and course angle"""
    return bundle.u_l * math.cos(bundle.psi_l), bundle.u_l * math.sin(bundle.psi_l)


def lowpass_update(fs: FilterState, nu_dot_now: Sequence[float], dt: float) -> FilterState:
    """Blend the backward-difference acceleration rate into the running estimate"""
    if dt <= 0:
        raise ValueError(f"filter step must be positive, got {dt}")
    now = tuple(float(value) for value in nu_dot_now)
    if not fs.initialized:
        return FilterState(nu_ddot_est=(0.0, 0.0, 0.0), prev_nu_dot=now, mu=fs.mu, initialized=True)

    estimate = tuple(
        (1.0 - fs.mu) * previous + fs.mu * (current - last) / dt
        for previous, current, last in zip(fs.nu_ddot_est, now, fs.prev_nu_dot)
    )
    return FilterState(nu_ddot_est=estimate, prev_nu_dot=now, mu=fs.mu, initialized=True)


def build_bundle(
    s: VesselState,
    ref: ReferencePoint,
    drift: Drift,
    nu_dot: Sequence[float],
    nu_ddot: Sequence[float],
    p: VesselParams,
) -> PolarBundle:
    """Evaluate both transformations and all their rates at one instant"""
    u_dot, v_dot, _ = nu_dot
    u_ddot, v_ddot, _ = nu_ddot

    u_l, psi_a = polar_velocity(s.u, s.v)
    psi_a_dot, psi_a_ddot = sideslip_rates(s.u, s.v, u_dot, v_dot, u_ddot, v_ddot)
    td = transformed_dynamics(s, drift, psi_a_dot, psi_a_ddot, p)

    x_e, y_e = ref.x_d - s.x, ref.y_d - s.y
    p_e, psi_b = polar_error(x_e, y_e)

    # Navigation-frame velocities of the vessel and of the reference point
    x_dot = s.u * math.cos(s.psi) - s.v * math.sin(s.psi)
    y_dot = s.u * math.sin(s.psi) + s.v * math.cos(s.psi)
    x_d_dot = ref.u_ld * math.cos(ref.psi_ld)
    y_d_dot = ref.u_ld * math.sin(ref.psi_ld)
    p_e_dot, psi_b_dot = azimuth_rates(x_e, y_e, x_d_dot - x_dot, y_d_dot - y_dot)

    return PolarBundle(
        u_l=u_l,
        psi_a=psi_a,
        psi_a_dot=psi_a_dot,
        psi_a_ddot=psi_a_ddot,
        psi_l=td.psi_l,
        r_l=td.r_l,
        p_e=p_e,
        psi_b=psi_b,
        psi_b_dot=psi_b_dot,
        p_e_dot=p_e_dot,
        f_ul=td.f_ul,
        f_rl=td.f_rl,
        b_ul=td.b_ul,
        eps_ra=td.eps_ra,
        b_r=p.b_r,
    )

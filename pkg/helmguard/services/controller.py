import logging
import math
from typing import Sequence, Tuple

from ..config import settings
from ..exceptions import SingularInputMatrix, SingularStabilizer
from ..schemas.controller import ErrorState, Gains, ReferencePoint
from ..schemas.polar import PolarBundle
from ..schemas.vessel import ControlInput
from .transforms import wrap_angle

logger = logging.getLogger(__name__)


def stabilizing_functions(ref: ReferencePoint, bundle: PolarBundle, g: Gains) -> Tuple[float, float]:
    """Virtual-input laws for the total speed and the course rate"""
    cos_lb = math.cos(bundle.psi_l - bundle.psi_b)
    if abs(cos_lb) < settings.SP1_GUARD_COS:
        raise SingularStabilizer(f"cos(psi_l - psi_b)={cos_lb:.3g} in the surge stabilizing function")

    psi_le = wrap_angle(ref.psi_ld - bundle.psi_l)
    alpha_ul = (ref.u_ld * math.cos(ref.psi_ld - bundle.psi_b) + g.k_p * (bundle.p_e - g.c_d)) / cos_lb
    alpha_rl = ref.psi_ld_dot + g.k_psi * psi_le / g.gamma_psi
    return alpha_ul, alpha_rl


def tracking_errors(ref: ReferencePoint, bundle: PolarBundle, g: Gains) -> Tuple[ErrorState, float, float]:
    """Error state together with the stabilizing functions it was formed from"""
    alpha_ul, alpha_rl = stabilizing_functions(ref, bundle, g)
    e = ErrorState(
        p_e=bundle.p_e,
        psi_le=wrap_angle(ref.psi_ld - bundle.psi_l),
        e_ul=alpha_ul - bundle.u_l,
        e_rl=alpha_rl - bundle.r_l,
    )
    return e, alpha_ul, alpha_rl


def stabilizer_rates(history: Sequence[Tuple[float, float]], dt: float) -> Tuple[float, float]:
    """Backward difference of the last two (alpha_ul, alpha_rl) samples; zero until two exist"""
    if len(history) < 2:
        return 0.0, 0.0
    (prev_ul, prev_rl), (curr_ul, curr_rl) = history[-2], history[-1]
    return (curr_ul - prev_ul) / dt, (curr_rl - prev_rl) / dt


def reference_control(
    e: ErrorState,
    bundle: PolarBundle,
    alpha_dots: Tuple[float, float],
    g: Gains,
) -> ControlInput:
    """Backstepping input that renders the composite Lyapunov function decreasing"""
    if abs(bundle.b_ul) < settings.SINGULAR_TOL:
        raise SingularInputMatrix(f"b_ul={bundle.b_ul:.3g}: surge input lost in the course frame")

    alpha_ul_dot, alpha_rl_dot = alpha_dots
    cos_lb = math.cos(bundle.psi_l - bundle.psi_b)

    # Cancel the drift and add the weighted error feedback plus the kinematic coupling
    w_u = alpha_ul_dot - bundle.f_ul + (g.k_u * e.e_ul + (e.p_e - g.c_d) * cos_lb) / g.gamma_u
    w_r = alpha_rl_dot - bundle.f_rl + (g.k_r * e.e_rl + g.gamma_psi * e.psi_le) / g.gamma_r

    # Upper-triangular input matrix [[b_ul, eps_ra], [0, b_r]]
    tau_r = w_r / bundle.b_r
    tau_u = (w_u - bundle.eps_ra * tau_r) / bundle.b_ul
    return ControlInput(tau_u=tau_u, tau_r=tau_r)


def error_dynamics(
    bundle: PolarBundle, alpha_dots: Tuple[float, float], tau: ControlInput
) -> Tuple[float, float]:
    """Time derivative of (e_ul, e_rl) under the input tau"""
    alpha_ul_dot, alpha_rl_dot = alpha_dots
    e_ul_dot = alpha_ul_dot - bundle.f_ul - bundle.b_ul * tau.tau_u - bundle.eps_ra * tau.tau_r
    e_rl_dot = alpha_rl_dot - bundle.f_rl - bundle.b_r * tau.tau_r
    return e_ul_dot, e_rl_dot


def error_kinematics(ref: ReferencePoint, bundle: PolarBundle, u_l: float, r_l: float) -> Tuple[float, float]:
    """Rates of p_e and psi_le for given virtual inputs (u_l, r_l)"""
    p_e_dot = ref.u_ld * math.cos(ref.psi_ld - bundle.psi_b) - u_l * math.cos(bundle.psi_l - bundle.psi_b)
    psi_le_dot = ref.psi_ld_dot - r_l
    return p_e_dot, psi_le_dot


def lyapunov_v1(e: ErrorState, g: Gains) -> float:
    return 0.5 * ((e.p_e - g.c_d) ** 2 + g.gamma_psi * e.psi_le ** 2)


def lyapunov_v2(e: ErrorState, g: Gains) -> float:
    """Kinematic Lyapunov function plus the weighted velocity errors"""
    return lyapunov_v1(e, g) + 0.5 * (g.gamma_u * e.e_ul ** 2 + g.gamma_r * e.e_rl ** 2)


def lyapunov_v1_rate(ref: ReferencePoint, bundle: PolarBundle, g: Gains, u_l: float, r_l: float) -> float:
    """Derivative of V1 along the error kinematics for given virtual inputs"""
    p_e_dot, psi_le_dot = error_kinematics(ref, bundle, u_l, r_l)
    psi_le = wrap_angle(ref.psi_ld - bundle.psi_l)
    return (bundle.p_e - g.c_d) * p_e_dot + g.gamma_psi * psi_le * psi_le_dot


def lyapunov_v2_rate_nominal(e: ErrorState, g: Gains) -> float:
    """V2 rate when the reference input is applied exactly"""
    return -(
        g.k_p * (e.p_e - g.c_d) ** 2
        + g.k_psi * e.psi_le ** 2
        + g.k_u * e.e_ul ** 2
        + g.k_r * e.e_rl ** 2
    )


def decay_rate_printed(g: Gains) -> float:
    """Decay constant in its published form; reported only, never used for control"""
    return 0.5 * min(1.0 / g.k_p, g.gamma_psi / g.k_psi, g.gamma_u / g.k_u, g.gamma_r / g.k_r)


def residual_energy(e: ErrorState, g: Gains) -> float:
    """gamma_psi*psi_le^2 + gamma_u*e_ul^2 + gamma_r*e_rl^2 (no 1/2 factors)"""
    return g.gamma_psi * e.psi_le ** 2 + g.gamma_u * e.e_ul ** 2 + g.gamma_r * e.e_rl ** 2


def min_cd(p_e0: float, v_r0: float) -> float:
    """Smallest towing distance that keeps p_e positive for the given initial errors"""
    if p_e0 <= 0:
        raise ValueError(f"initial distance must be positive, got {p_e0}")
    return (0.5 * p_e0 ** 2 + v_r0) / p_e0

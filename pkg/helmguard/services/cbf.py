import logging
import math
from typing import NamedTuple, Tuple

import numpy as np

from ..config import settings
from ..exceptions import SingularAzimuth
from ..schemas.cbf import Branch, CbfDiagnostics, CbfParams, ConstraintRow, ConstraintSet, EcbfForm
from ..schemas.controller import ReferencePoint
from ..schemas.polar import PolarBundle
from ..schemas.vessel import ControlInput

logger = logging.getLogger(__name__)


class Cc1Result(NamedTuple):
    row: ConstraintRow
    diagnostics: CbfDiagnostics
    branch: Branch


def hurwitz(alpha1: float, alpha2: float) -> bool:
    """True when F - G*K_alpha = [[0, 1], [-alpha1, -alpha2]] has eigenvalues in the open left half-plane"""
    closed_loop = np.array([[0.0, 1.0], [-alpha1, -alpha2]])
    return bool(np.all(np.linalg.eigvals(closed_loop).real < 0.0))


def select_branch(psi_l: float, psi_b: float) -> Branch:
    """Forward barrier while the course points toward the reference half-plane (cos >= 0)"""
    return Branch.FORWARD if math.cos(psi_l - psi_b) >= 0.0 else Branch.REVERSE


def cc1_barriers(psi_l: float, psi_b: float, eps_psi: float) -> Tuple[float, float]:
    """Forward and reverse barrier values; they always sum to -2*eps_psi"""
    cos_lb = math.cos(psi_l - psi_b)
    return cos_lb - eps_psi, -cos_lb - eps_psi


def cc1_row(bundle: PolarBundle, ref: ReferencePoint, tau_ref: ControlInput, cp: CbfParams) -> Cc1Result:
    """
    Second-order barrier row keeping |cos(psi_l - psi_b)| away from zero.

    The row is ``a . X <= b`` over X = tau - tau_ref. Over tau it reads
    ``[c1, c2] tau <= S - alpha1*eps_psi`` on the forward branch and
    ``[-c1, -c2] tau <= -S - alpha1*eps_psi`` on the reverse branch, where S
    collects every input-free term of h_ddot + alpha2*h_dot + alpha1*h.
    """
    if bundle.p_e <= 0.0:
        raise SingularAzimuth(f"CC-1 row needs p_e > 0, got {bundle.p_e:.3g}")

    delta = bundle.psi_l - bundle.psi_b
    sin_d, cos_d = math.sin(delta), math.cos(delta)
    delta_dot = bundle.r_l - bundle.psi_b_dot
    sin_ref, cos_ref = math.sin(ref.psi_ld - bundle.psi_b), math.cos(ref.psi_ld - bundle.psi_b)

    c1 = bundle.b_ul * sin_d ** 2 / bundle.p_e
    c2 = sin_d * (bundle.eps_ra * sin_d / bundle.p_e + bundle.b_r)

    # Input-free part of the azimuth acceleration, scaled by p_e
    q = (
        ref.u_ld_dot * sin_ref
        + ref.u_ld * cos_ref * (ref.psi_ld_dot - bundle.psi_b_dot)
        - bundle.u_l * cos_d * delta_dot
        - bundle.f_ul * sin_d
        - bundle.psi_b_dot * bundle.p_e_dot
    )
    m_core = q / bundle.p_e - bundle.f_rl
    m_printed = m_core + cp.alpha1 * cos_d - cp.alpha2 * sin_d * delta_dot

    if cp.ecbf_form == EcbfForm.PRINTED:
        drift_term = sin_d * m_printed
    else:
        drift_term = sin_d * m_core + cp.alpha1 * cos_d - cp.alpha2 * sin_d * delta_dot - cos_d * delta_dot ** 2

    branch = Branch.FORWARD if cos_d >= 0.0 else Branch.REVERSE
    sign = 1.0 if branch == Branch.FORWARD else -1.0
    h = sign * cos_d - cp.eps_psi
    h_dot = -sign * sin_d * delta_dot

    # At sin(delta) = 0 the barrier sits at its maximum and the row carries no input.
    # It is also left out while h >= activation_margin
    active = abs(sin_d) >= settings.CC1_DEGENERATE_TOL and h < cp.activation_margin
    diagnostics = CbfDiagnostics(
        c1=c1, c2=c2, M=m_printed, h=h, h_dot=h_dot, drift_term=drift_term, active=active
    )
    if not active:
        row = ConstraintRow(a=[0.0, 0.0], b=0.0, rhs_tau=None, label="cc1")
        return Cc1Result(row=row, diagnostics=diagnostics, branch=branch)

    a = [sign * c1, sign * c2]
    rhs_tau = sign * drift_term - cp.alpha1 * cp.eps_psi
    b = rhs_tau - (a[0] * tau_ref.tau_u + a[1] * tau_ref.tau_r)
    row = ConstraintRow(a=a, b=b, rhs_tau=rhs_tau, label="cc1")
    return Cc1Result(row=row, diagnostics=diagnostics, branch=branch)


def cc2_row(u: float, f_u: float, b_u: float, tau_ref_u: float, cp: CbfParams) -> ConstraintRow:
    """First-order barrier row keeping the surge velocity above eps_u"""
    class_k = cp.k_class_k * (u - cp.eps_u)
    direction = 1.0 if b_u > 0 else -1.0
    rhs_tau = (f_u + class_k) / abs(b_u)
    return ConstraintRow(
        a=[-direction, 0.0],
        b=rhs_tau + direction * tau_ref_u,
        rhs_tau=rhs_tau,
        label="cc2",
    )


def assemble(cc1: Cc1Result, cc2: ConstraintRow, h_cc2: float = 0.0) -> ConstraintSet:
    """Stack the CC-1 and CC-2 rows for the active branch"""
    return ConstraintSet(
        A=[list(cc1.row.a), list(cc2.a)],
        b=[cc1.row.b, cc2.b],
        branch=cc1.branch,
        diagnostics=cc1.diagnostics,
        h_cc2=h_cc2,
    )


def build_constraints(
    bundle: PolarBundle,
    ref: ReferencePoint,
    tau_ref: ControlInput,
    u: float,
    f_u: float,
    b_u: float,
    cp: CbfParams,
) -> ConstraintSet:
    cc1 = cc1_row(bundle, ref, tau_ref, cp)
    cc2 = cc2_row(u, f_u, b_u, tau_ref.tau_u, cp)
    return assemble(cc1, cc2, h_cc2=u - cp.eps_u)

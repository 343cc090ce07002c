import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from ..config import settings
from ..exceptions import HelmGuardError
from ..schemas.cbf import ConstraintSet
from ..schemas.controller import ErrorState
from ..schemas.polar import FilterState
from ..schemas.qp import QpStatus
from ..schemas.scenario import ScenarioConfig, SimMode
from ..schemas.simlog import Outcome, SimLog, StepRecord
from ..schemas.vessel import ControlInput, VesselParams, VesselState
from . import qp
from .cbf import build_constraints
from .controller import (
    lyapunov_v2,
    min_cd,
    reference_control,
    residual_energy,
    stabilizer_rates,
    tracking_errors,
)
from .trajectory import reference_at
from .transforms import build_bundle, lowpass_update
from .vessel import drift_terms, step_rk4

logger = logging.getLogger(__name__)


class Breakdown(Exception):
    """Internal signal that the closed loop diverged at a given time"""

    def __init__(self, t: float, reason: str):
        self.t = t
        self.reason = reason
        super().__init__(reason)


class SimulationService:
    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.threshold = settings.BREAKDOWN_THRESHOLD

    def run(self) -> SimLog:
        """Integrate the closed loop and record every control step"""
        cfg = self.cfg
        logger.info(
            f"Running scenario '{cfg.name}' in {cfg.mode.value} mode: "
            f"{cfg.duration:g} s at dt={cfg.dt:g} s"
        )

        state = cfg.initial_state
        filter_state = FilterState(mu=cfg.filter_mu)
        tau_prev = ControlInput()
        history: List[Tuple[float, float]] = []
        records: List[StepRecord] = []
        outcome, breakdown_t, breakdown_reason = Outcome.COMPLETED, None, None
        positivity_bound: Optional[float] = None

        n_steps = cfg.n_steps
        for k in range(n_steps + 1):
            t = k * cfg.dt
            try:
                self._check_magnitude(t, state.as_array(), "state")
                record, tau, filter_state = self._control_step(t, state, filter_state, tau_prev, history)
                self._check_magnitude(t, tau.as_array(), "input")
                if k == 0:
                    positivity_bound = self._check_positivity(record)
                records.append(record)
                if k == n_steps:
                    break
                state = self._integrate(state, tau, t)
                tau_prev = tau
            except Breakdown as exc:
                outcome, breakdown_t, breakdown_reason = Outcome.BREAKDOWN, exc.t, exc.reason
                logger.info(f"Breakdown at t={exc.t:.2f} s: {exc.reason}")
                break

        if outcome == Outcome.COMPLETED:
            logger.info(f"Scenario '{cfg.name}' completed with {len(records)} records")

        return SimLog(
            scenario=cfg.name,
            mode=cfg.mode,
            dt=cfg.dt,
            duration=cfg.duration,
            records=records,
            outcome=outcome,
            breakdown_t=breakdown_t,
            breakdown_reason=breakdown_reason,
            min_cd=positivity_bound,
        )

    def _check_magnitude(self, t: float, values, what: str) -> None:
        if any(abs(value) > self.threshold for value in values):
            raise Breakdown(t, f"{what} magnitude exceeded {self.threshold:g}")

    def _integrate(self, state: VesselState, tau: ControlInput, t: float) -> VesselState:
        try:
            return step_rk4(state, tau, self.cfg.params, self.cfg.dt, t=t)
        except (HelmGuardError, ValidationError) as e:
            raise Breakdown(t + self.cfg.dt, str(e)) from e

    def _control_step(
        self,
        t: float,
        state: VesselState,
        filter_state: FilterState,
        tau_prev: ControlInput,
        history: List[Tuple[float, float]],
    ) -> Tuple[StepRecord, ControlInput, FilterState]:
        """Compute tau_ref, the safety correction and the log record at one sample"""
        cfg = self.cfg
        p, g, cp = cfg.params, cfg.gains, cfg.cbf
        try:
            # Body accelerations come from the plant model under the input being held
            drift = drift_terms(state, p)
            nu_dot = (
                drift.f_u + p.b_u * tau_prev.tau_u,
                drift.f_v + p.eps_r * tau_prev.tau_r,
                drift.f_r + p.b_r * tau_prev.tau_r,
            )
            filter_state = lowpass_update(filter_state, nu_dot, cfg.dt)

            ref = reference_at(t, cfg.trajectory)
            bundle = build_bundle(state, ref, drift, nu_dot, filter_state.nu_ddot_est, p)
            e, alpha_ul, alpha_rl = tracking_errors(ref, bundle, g)

            history.append((alpha_ul, alpha_rl))
            del history[:-2]
            alpha_dots = stabilizer_rates(history, cfg.dt)
            tau_ref = reference_control(e, bundle, alpha_dots, g)

            constraints = build_constraints(bundle, ref, tau_ref, state.u, drift.f_u, p.b_u, cp)
            if cfg.mode == SimMode.QP:
                X, status, slack = self._correct(constraints, p)
            else:
                X, status, slack = ControlInput(), QpStatus.DISABLED, 0.0
            tau = tau_ref.plus(X)
        except (HelmGuardError, ValidationError) as e:
            logger.error(f"Control step failed at t={t:.2f} s: {str(e)}")
            raise Breakdown(t, str(e)) from e

        record = StepRecord(
            t=t,
            state=state,
            bundle=bundle,
            x_d=ref.x_d,
            y_d=ref.y_d,
            psi_ld=ref.psi_ld,
            u_ld=ref.u_ld,
            psi_ld_dot=ref.psi_ld_dot,
            psi_le=e.psi_le,
            e_ul=e.e_ul,
            e_rl=e.e_rl,
            tau_ref=tau_ref,
            tau=tau,
            X=X,
            h_cc1=constraints.diagnostics.h,
            h_cc2=constraints.h_cc2,
            branch=constraints.branch,
            cc1_row_active=constraints.diagnostics.active,
            feasible_at_zero=constraints.satisfied_at_zero(),
            qp_status=status,
            slack=slack,
            V2=lyapunov_v2(e, g),
            near_sp1=abs(math.cos(bundle.psi_l - bundle.psi_b)) < cp.eps_psi,
            near_cc2=state.u < cp.eps_u + settings.SURGE_EVENT_MARGIN,
            small_pe=bundle.p_e < settings.SMALL_PE_EVENT,
        )
        return record, tau, filter_state

    def _correct(self, constraints: ConstraintSet, p: VesselParams) -> Tuple[ControlInput, QpStatus, float]:
        """Minimum-norm correction measured as body acceleration |B X|, CC-1 soft"""
        weights = np.abs(np.array([p.b_u, p.b_r]))
        solution = qp.solve(np.asarray(constraints.A) / weights, constraints.b, soft_row=0)
        X = np.asarray(solution.X) / weights
        return ControlInput.from_array(X), solution.status, solution.slack_used

    def _check_positivity(self, record: StepRecord) -> Optional[float]:
        """Compare the towing distance with the bound that keeps p_e positive"""
        g = self.cfg.gains
        e = ErrorState(p_e=record.bundle.p_e, psi_le=record.psi_le, e_ul=record.e_ul, e_rl=record.e_rl)
        bound = min_cd(e.p_e, residual_energy(e, g))
        if g.c_d < bound:
            logger.warning(
                f"Towing distance c_d={g.c_d:g} m is below the positivity bound {bound:.3f} m; "
                f"p_e > 0 is not guaranteed"
            )
        return bound


def run(cfg: ScenarioConfig) -> SimLog:
    return SimulationService(cfg).run()


def with_mode(cfg: ScenarioConfig, mode: SimMode) -> ScenarioConfig:
    return cfg.model_copy(update={"mode": mode})

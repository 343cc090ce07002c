import logging
import math
from typing import Callable, List, Tuple

from ..config import settings
from ..schemas.cbf import CbfParams
from ..schemas.qp import QpStatus
from ..schemas.simlog import Event, EventKind, SimLog, StepRecord

logger = logging.getLogger(__name__)


def _intervals(
    log: SimLog, kind: EventKind, predicate: Callable[[StepRecord], bool], value: Callable[[StepRecord], float]
) -> List[Event]:
    """One event per maximal run of records satisfying predicate; value is the run's minimum"""
    events: List[Event] = []
    start = None
    extreme = math.inf
    previous_t = None
    for record in log.records:
        if predicate(record):
            if start is None:
                start, extreme = record.t, math.inf
            extreme = min(extreme, value(record))
        elif start is not None:
            events.append(Event(kind=kind, t=start, t_end=previous_t, value=extreme))
            start = None
        previous_t = record.t
    if start is not None:
        events.append(Event(kind=kind, t=start, t_end=previous_t, value=extreme))
    return events


def _cos_lb(record: StepRecord) -> float:
    return abs(math.cos(record.bundle.psi_l - record.bundle.psi_b))


def correction_active(record: StepRecord) -> bool:
    return record.X.norm() > settings.QP_ACTIVE_TOL


def detect_events(log: SimLog, cp: CbfParams) -> List[Event]:
    """Singularity proximity, branch flips and safety-filter activity, ordered by time"""
    events: List[Event] = []
    events += _intervals(log, EventKind.SP1_PROXIMITY, lambda r: _cos_lb(r) < cp.eps_psi, _cos_lb)
    events += _intervals(
        log,
        EventKind.SURGE_MARGIN,
        lambda r: r.state.u < cp.eps_u + settings.SURGE_EVENT_MARGIN,
        lambda r: r.state.u,
    )
    events += _intervals(
        log,
        EventKind.SMALL_POSITION_ERROR,
        lambda r: r.bundle.p_e < settings.SMALL_PE_EVENT,
        lambda r: r.bundle.p_e,
    )
    events += _intervals(log, EventKind.QP_ACTIVATION, correction_active, lambda r: -r.X.norm())
    events += _intervals(
        log,
        EventKind.QP_RELAXED,
        lambda r: r.qp_status == QpStatus.INFEASIBLE_RELAXED,
        lambda r: -r.slack,
    )

    # Branch flips are instantaneous
    for before, after in zip(log.records, log.records[1:]):
        if after.branch != before.branch:
            logger.debug(f"Branch flip {before.branch.value} -> {after.branch.value} at t={after.t:.2f} s")
            events.append(Event(kind=EventKind.BRANCH_FLIP, t=after.t, value=math.cos(
                after.bundle.psi_l - after.bundle.psi_b
            )))

    return sorted(events, key=lambda event: (event.t, event.kind.value))


def activation_fraction(log: SimLog) -> float:
    if not log.records:
        return 0.0
    return sum(1 for record in log.records if correction_active(record)) / len(log.records)


def zero_correction_intervals(log: SimLog, min_length: float = 1.0) -> List[Tuple[int, int]]:
    """Index ranges [start, end] of maximal runs with X exactly zero lasting at least min_length"""
    runs: List[Tuple[int, int]] = []
    start = None
    for index, record in enumerate(log.records):
        if record.X.tau_u == 0.0 and record.X.tau_r == 0.0:
            if start is None:
                start = index
            continue
        if start is not None:
            runs.append((start, index - 1))
            start = None
    if start is not None:
        runs.append((start, len(log.records) - 1))
    return [(a, b) for a, b in runs if log.records[b].t - log.records[a].t >= min_length]


def _reference_switched(before: StepRecord, after: StepRecord) -> bool:
    return before.u_ld != after.u_ld or before.psi_ld_dot != after.psi_ld_dot


def max_lyapunov_increase(log: SimLog, min_length: float = 1.0) -> float:
    """
    Largest one-step increase of V2 inside uncorrected intervals (0 when V2 never rises).

    Steps across a change of trajectory segment are skipped: the reference rates
    enter e_ul and e_rl, so V2 jumps there whatever the input.
    """
    worst = 0.0
    for start, end in zero_correction_intervals(log, min_length):
        for before, after in zip(log.records[start:end], log.records[start + 1:end + 1]):
            if _reference_switched(before, after):
                continue
            worst = max(worst, after.V2 - before.V2)
    if worst > 1e-4:
        logger.warning(f"V2 increased by {worst:.3g} in one step while the safety filter was idle")
    return worst

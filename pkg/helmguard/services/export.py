import logging
import os
from typing import Dict, List, Optional

import pandas as pd

from ..config import settings
from ..schemas.report import CompareReport, RunReport
from ..schemas.simlog import Event, EventKind, Outcome, SimLog
from .events import activation_fraction

logger = logging.getLogger(__name__)

LOG_COLUMNS = [
    "t", "x", "y", "psi", "u", "v", "r",
    "x_d", "y_d", "psi_ld",
    "u_l", "psi_a", "psi_l", "p_e", "psi_b", "psi_le",
    "tau_u_ref", "tau_r_ref", "tau_u", "tau_r", "X_u", "X_r",
    "h_cc1", "h_cc2", "branch", "qp_status", "V2",
]


def log_frame(log: SimLog) -> pd.DataFrame:
    """Flatten a simulation log into one row per control step"""
    rows = []
    for record in log.records:
        s, b = record.state, record.bundle
        rows.append({
            "t": record.t,
            "x": s.x,
            "y": s.y,
            "psi": s.psi,
            "u": s.u,
            "v": s.v,
            "r": s.r,
            "x_d": record.x_d,
            "y_d": record.y_d,
            "psi_ld": record.psi_ld,
            "u_l": b.u_l,
            "psi_a": b.psi_a,
            "psi_l": b.psi_l,
            "p_e": b.p_e,
            "psi_b": b.psi_b,
            "psi_le": record.psi_le,
            "tau_u_ref": record.tau_ref.tau_u,
            "tau_r_ref": record.tau_ref.tau_r,
            "tau_u": record.tau.tau_u,
            "tau_r": record.tau.tau_r,
            "X_u": record.X.tau_u,
            "X_r": record.X.tau_r,
            "h_cc1": record.h_cc1,
            "h_cc2": record.h_cc2,
            "branch": record.branch.value,
            "qp_status": record.qp_status.value,
            "V2": record.V2,
        })
    return pd.DataFrame(rows, columns=LOG_COLUMNS)


def write_log_csv(log: SimLog, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    log_frame(log).to_csv(path, index=False, float_format=settings.CSV_FLOAT_FORMAT)
    logger.info(f"Wrote {len(log.records)} rows to {path}")
    return path


def count_events(events: List[Event]) -> Dict[str, int]:
    counts = {kind.value: 0 for kind in EventKind}
    for event in events:
        counts[event.kind.value] += 1

    # QP activations that start close to an SP-1 proximity interval
    sp1 = [event for event in events if event.kind == EventKind.SP1_PROXIMITY]
    counts["qp_activation_near_sp1"] = sum(
        1
        for event in events
        if event.kind == EventKind.QP_ACTIVATION
        and any(near.within(event.t, settings.EVENT_WINDOW) for near in sp1)
    )
    return counts


def build_report(log: SimLog, events: List[Event], files: Optional[List[str]] = None) -> RunReport:
    """Summarize a run: outcome, final and steady-state errors, filter activity"""
    last = log.last
    steady_p_e = steady_u = None
    if log.outcome == Outcome.COMPLETED and last is not None:
        frame = log_frame(log)
        window = frame[frame["t"] >= last.t - settings.STEADY_WINDOW]
        steady_p_e = float(window["p_e"].mean())
        steady_u = float(window["u"].mean())

    return RunReport(
        scenario=log.scenario,
        mode=log.mode,
        outcome=log.outcome,
        breakdown_t=log.breakdown_t,
        breakdown_reason=log.breakdown_reason,
        steps=len(log.records),
        final_p_e=last.bundle.p_e if last else None,
        final_psi_le=last.psi_le if last else None,
        steady_p_e=steady_p_e,
        steady_u=steady_u,
        qp_activation_fraction=activation_fraction(log),
        min_u=min(record.state.u for record in log.records) if log.records else None,
        event_counts=count_events(events),
        files=files or [],
    )


def write_report(report, path: str) -> str:
    """Dump a RunReport or CompareReport as indented JSON"""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as f:
        f.write(report.model_dump_json(indent=2))
        f.write("\n")
    logger.info(f"Wrote report to {path}")
    return path


def _fmt(value: Optional[float], spec: str = ".3f") -> str:
    return "-" if value is None else format(value, spec)


def summary_table(reports: List[RunReport]) -> str:
    """Plain-text side-by-side summary, one line per run"""
    header = f"{'mode':<10} {'outcome':<10} {'t_end':>8} {'p_e':>8} {'u':>8} {'qp_frac':>8} {'min_u':>8}"
    lines = [header, "-" * len(header)]
    for report in reports:
        t_end = report.breakdown_t if report.outcome == Outcome.BREAKDOWN else None
        lines.append(
            f"{report.mode.value:<10} {report.outcome.value:<10} {_fmt(t_end, '.2f'):>8} "
            f"{_fmt(report.steady_p_e):>8} {_fmt(report.steady_u):>8} "
            f"{report.qp_activation_fraction:>8.4f} {_fmt(report.min_u):>8}"
        )
    return "\n".join(lines)


def compare_report(scenario: str, reports: List[RunReport]) -> CompareReport:
    return CompareReport(scenario=scenario, runs=reports)

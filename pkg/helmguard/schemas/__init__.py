from .cbf import Branch, CbfDiagnostics, CbfParams, ConstraintRow, ConstraintSet, EcbfForm
from .controller import ErrorState, Gains, ReferencePoint
from .polar import FilterState, PolarBundle
from .qp import QpSolution, QpStatus
from .report import CompareReport, RunReport
from .scenario import ScenarioConfig, SimMode, TrajectorySegment, TrajectorySpec
from .simlog import Event, EventKind, Outcome, SimLog, StepRecord
from .vessel import ControlInput, Drift, StateDerivative, VesselParams, VesselState

__all__ = [
    "Branch", "CbfDiagnostics", "CbfParams", "ConstraintRow", "ConstraintSet", "EcbfForm",
    "ErrorState", "Gains", "ReferencePoint",
    "FilterState", "PolarBundle",
    "QpSolution", "QpStatus",
    "CompareReport", "RunReport",
    "ScenarioConfig", "SimMode", "TrajectorySegment", "TrajectorySpec",
    "Event", "EventKind", "Outcome", "SimLog", "StepRecord",
    "ControlInput", "Drift", "StateDerivative", "VesselParams", "VesselState",
]

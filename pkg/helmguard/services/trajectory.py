import math
from typing import Tuple

from ..schemas.controller import ReferencePoint
from ..schemas.scenario import TrajectorySegment, TrajectorySpec


def _advance(
    x: float, y: float, psi: float, segment: TrajectorySegment, tau: float
) -> Tuple[float, float, float]:
    """Pose after tau seconds on a straight or constant-turn segment"""
    omega = segment.psi_ld_dot
    if omega == 0.0:
        return x + segment.u_ld * tau * math.cos(psi), y + segment.u_ld * tau * math.sin(psi), psi
    radius = segment.u_ld / omega
    psi_end = psi + omega * tau
    return (
        x + radius * (math.sin(psi_end) - math.sin(psi)),
        y - radius * (math.cos(psi_end) - math.cos(psi)),
        psi_end,
    )


def reference_at(t: float, spec: TrajectorySpec) -> ReferencePoint:
    """Sample the piecewise reference; segments are half-open and the last one extends forever"""
    if t < 0:
        raise ValueError(f"reference time must be non-negative, got {t}")

    x, y, psi = spec.x0, spec.y0, spec.psi0
    start = 0.0
    last = len(spec.segments) - 1
    for index, segment in enumerate(spec.segments):
        end = start + segment.duration
        if t < end or index == last:
            x, y, psi = _advance(x, y, psi, segment, t - start)
            return ReferencePoint(
                x_d=x,
                y_d=y,
                psi_ld=psi,
                u_ld=segment.u_ld,
                u_ld_dot=0.0,
                psi_ld_dot=segment.psi_ld_dot,
            )
        x, y, psi = _advance(x, y, psi, segment, segment.duration)
        start = end
    raise ValueError("trajectory has no segments")

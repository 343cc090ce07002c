from typing import List, Optional


class HelmGuardError(ValueError):
    """Base class for all errors raised by helmguard"""


class SingularityError(HelmGuardError):
    """A transformation or control law was evaluated at a singular point"""

    code = "SP"

    def __init__(self, message: str):
        super().__init__(f"{self.code}: {message}")


class SingularStabilizer(SingularityError):
    """cos(psi_l - psi_b) vanished in the surge stabilizing function"""

    code = "SP-1"


class SingularInputMatrix(SingularityError):
    """The transformed input matrix lost rank (b_ul = 0)"""

    code = "SP-2"


class SingularSideslip(SingularityError):
    """The sideslip angle is undefined (u <= 0 or zero speed)"""

    code = "SP-3"


class SingularAzimuth(SingularityError):
    """The azimuth angle is undefined (p_e = 0)"""

    code = "SP-4"


class IntegrationError(HelmGuardError):
    """The integrator produced a non-finite state"""

    def __init__(self, message: str, t: Optional[float] = None):
        self.t = t
        where = f" at t={t:.6g} s" if t is not None else ""
        super().__init__(f"{message}{where}")


class QpInfeasibleError(HelmGuardError):
    """The hard constraint rows admit no solution even after relaxation"""


class ScenarioError(HelmGuardError):
    """A scenario file could not be read or validated"""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        self.diagnostics = diagnostics or []
        detail = "; ".join(self.diagnostics)
        super().__init__(f"{message}: {detail}" if detail else message)

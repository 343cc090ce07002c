"""
Exact minimum-norm correction for a handful of half-plane constraints in R^2.

    min ||X||^2  s.t.  A X <= b

Candidates are enumerated in closed form: X = 0, the projection onto each
violated row, and the vertex of each pair of rows. The KKT conditions
X = -A^T lambda / 2, lambda >= 0 select the optimum. When no candidate is
feasible the soft row is relaxed by the smallest slack that restores
feasibility, computed from the dual basic solutions of the slack LP.
"""
import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import settings
from ..exceptions import QpInfeasibleError
from ..schemas.qp import QpSolution, QpStatus

logger = logging.getLogger(__name__)

MAX_ROWS = 4

Candidate = Tuple[np.ndarray, List[int], np.ndarray]


def _feasible(A: np.ndarray, b: np.ndarray, X: np.ndarray, tol: float) -> bool:
    scale = np.maximum(1.0, np.maximum(np.abs(b), np.linalg.norm(A, axis=1) * np.linalg.norm(X)))
    return bool(np.all(A @ X - b <= tol * scale))


def _enumerate(A: np.ndarray, b: np.ndarray, tol: float) -> Optional[Candidate]:
    m = A.shape[0]
    if np.all(b >= 0.0):
        return np.zeros(2), [], np.zeros(m)

    row_norms2 = np.einsum("ij,ij->i", A, A)
    best: Optional[Candidate] = None

    def consider(X: np.ndarray, rows: List[int], lam: np.ndarray) -> None:
        nonlocal best
        if best is None or X @ X < best[0] @ best[0]:
            best = (X, rows, lam)

    # Single active row: projection onto its boundary line
    for i in range(m):
        if row_norms2[i] == 0.0 or b[i] >= 0.0:
            continue
        X = (b[i] / row_norms2[i]) * A[i]
        if _feasible(A, b, X, tol):
            lam = np.zeros(m)
            lam[i] = -2.0 * b[i] / row_norms2[i]
            consider(X, [i], lam)

    # Two active rows: vertex of their boundary lines
    for i, j in itertools.combinations(range(m), 2):
        pair = A[[i, j]]
        det = pair[0, 0] * pair[1, 1] - pair[0, 1] * pair[1, 0]
        if abs(det) <= 1e-14 * np.sqrt(row_norms2[i] * row_norms2[j]):
            continue
        X = np.linalg.solve(pair, b[[i, j]])
        lam_pair = np.linalg.solve(pair.T, -2.0 * X)
        if np.any(lam_pair < -tol * max(1.0, float(np.max(np.abs(lam_pair))))):
            continue
        if _feasible(A, b, X, tol):
            lam = np.zeros(m)
            lam[[i, j]] = np.maximum(lam_pair, 0.0)
            consider(X, [i, j], lam)

    return best


def minimal_slack(A: np.ndarray, b: np.ndarray, soft: int) -> float:
    """
    Smallest s >= 0 such that {X : A X <= b + s e_soft} is non-empty.

    Equals max(0, min over the hard rows' feasible set of A_soft X - b_soft),
    evaluated through the dual: max of -mu.b_J - b_soft over mu >= 0 with
    A_J^T mu = -A_soft and |J| <= 2.
    """
    m = A.shape[0]
    c = A[soft]
    hard = [j for j in range(m) if j != soft and np.any(A[j] != 0.0)]
    values: List[float] = []

    if not np.any(c != 0.0):
        values.append(-b[soft])
    for j in hard:
        n2 = A[j] @ A[j]
        mu = -(c @ A[j]) / n2
        if mu >= 0.0 and np.allclose(mu * A[j], -c, rtol=1e-12, atol=1e-15):
            values.append(-mu * b[j] - b[soft])
    for i, j in itertools.combinations(hard, 2):
        pair_t = A[[i, j]].T
        if abs(np.linalg.det(pair_t)) <= 1e-300:
            continue
        mu = np.linalg.solve(pair_t, -c)
        if np.all(mu >= 0.0):
            values.append(float(-mu @ b[[i, j]] - b[soft]))

    return max([0.0] + values)


def solve(
    A: Sequence[Sequence[float]],
    b: Sequence[float],
    soft_row: Optional[int] = 0,
    tol: Optional[float] = None,
) -> QpSolution:
    """Minimum-norm X with A X <= b; relaxes ``soft_row`` when the rows conflict"""
    tol = settings.QP_FEASIBILITY_TOL if tol is None else tol
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"{A.shape[0]} rows but {b.shape[0]} right-hand sides")
    if A.shape[0] > MAX_ROWS:
        raise ValueError(f"at most {MAX_ROWS} rows are supported, got {A.shape[0]}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValueError("constraint rows must be finite")

    found = _enumerate(A, b, tol)
    if found is not None:
        X, rows, lam = found
        status = QpStatus.UNCONSTRAINED if not rows else QpStatus.ACTIVE_SET
        return QpSolution(X=X.tolist(), status=status, active_rows=rows, multipliers=lam.tolist())

    if soft_row is None or A.shape[0] == 0:
        raise QpInfeasibleError("constraint rows are mutually unsatisfiable")

    slack = minimal_slack(A, b, soft_row)
    relaxed = b.copy()
    relaxed[soft_row] += slack
    found = _enumerate(A, relaxed, tol)
    if found is None:
        # The hard rows alone are empty
        raise QpInfeasibleError(f"no solution after relaxing row {soft_row} by {slack:.6g}")

    X, rows, lam = found
    logger.warning(f"QP infeasible; relaxed row {soft_row} by slack={slack:.6g}")
    return QpSolution(
        X=X.tolist(),
        status=QpStatus.INFEASIBLE_RELAXED,
        active_rows=rows,
        multipliers=lam.tolist(),
        slack_used=slack,
    )


def kkt_residual(A: Sequence[Sequence[float]], b: Sequence[float], solution: QpSolution) -> float:
    """
    Largest violation among stationarity, primal/dual feasibility and complementarity.

    For relaxed solutions pass the relaxed right-hand side.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1)
    X = np.asarray(solution.X, dtype=float)
    lam = np.asarray(solution.multipliers, dtype=float) if solution.multipliers else np.zeros(A.shape[0])

    slack = A @ X - b
    residuals = [
        np.max(np.abs(2.0 * X + A.T @ lam)) if A.size else float(np.max(np.abs(2.0 * X))),
        np.max(np.maximum(slack, 0.0), initial=0.0),
        np.max(np.maximum(-lam, 0.0), initial=0.0),
        np.max(np.abs(lam * slack), initial=0.0),
    ]
    return float(max(residuals))

"""Minimum-cost perfect assignment on square cost matrices with forbidden (infinite) cells."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

INF = float("inf")


class InfeasibleAssignment(ValueError):
    pass


def pad_square(costs: np.ndarray) -> np.ndarray:
    """Pad a rows <= cols matrix with zero-cost dummy rows."""
    costs = np.asarray(costs, dtype=float)
    rows, cols = costs.shape
    if rows > cols:
        raise InfeasibleAssignment(f"{rows} rows cannot fit in {cols} columns")
    if rows == cols:
        return costs
    return np.vstack([costs, np.zeros((cols - rows, cols))])


def solve_assignment(costs, rng: np.random.Generator | None = None) -> list[int]:
    """Return ``cols`` with row ``i`` assigned to column ``cols[i]``.

    The solver is deterministic for a given matrix. Passing ``rng`` adds a
    perturbation too small to change the optimal total of integer-valued
    matrices, which selects a different optimum among ties.
    """
    m = np.array(costs, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    if n == 0:
        return []
    if np.any(m < 0) or np.any(np.isnan(m)):
        raise ValueError("costs must be non-negative")
    if rng is not None:
        finite = np.isfinite(m)
        m[finite] += rng.random(int(finite.sum())) * (0.5 / (n + 1))
    try:
        rows, cols = linear_sum_assignment(m)
    except ValueError as exc:
        raise InfeasibleAssignment(str(exc)) from None
    if not np.all(np.isfinite(m[rows, cols])):
        raise InfeasibleAssignment("no finite-cost perfect assignment")
    return [int(c) for c in cols]


def assignment_cost(costs, cols) -> float:
    m = np.asarray(costs, dtype=float)
    return float(sum(m[i, j] for i, j in enumerate(cols)))

"""
Nonnegative concave QP by cyclic coordinate ascent.

Maximises ``2 t.w - w.K.w`` over ``w >= 0`` for a symmetric positive
semidefinite kernel ``K``. Each coordinate step is the exact maximiser of a
scalar quadratic clipped at zero, so the objective never decreases. Every
``polish_every`` sweeps the active set is solved exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from src.capacity.options import SolverOptions
from src.errors import ConvergenceError
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


class KernelOperator(Protocol):
    size: int

    def diagonal(self) -> np.ndarray: ...

    def column(self, i: int) -> np.ndarray: ...

    def apply(self, weights: np.ndarray) -> np.ndarray: ...

    def submatrix(self, index: np.ndarray) -> np.ndarray: ...


class DenseOperator:
    """A cached kernel matrix behind the operator interface."""

    def __init__(self, matrix: np.ndarray):
        self.matrix = np.asarray(matrix, dtype=np.float64)
        self.size = self.matrix.shape[0]

    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix).copy()

    def column(self, i: int) -> np.ndarray:
        return self.matrix[i]  # symmetric, rows are contiguous

    def apply(self, weights: np.ndarray) -> np.ndarray:
        return self.matrix @ weights

    def submatrix(self, index: np.ndarray) -> np.ndarray:
        return self.matrix[np.ix_(index, index)]


@dataclass
class QPResult:
    weights: np.ndarray
    gradient: np.ndarray  # K @ weights, i.e. the potentials at the constraints
    objective: float
    sweeps: int
    converged: bool
    weak_duality: bool = True
    history: list[float] = field(default_factory=list)


def objective_value(
    targets: np.ndarray, weights: np.ndarray, gradient: np.ndarray
) -> float:
    return 2.0 * math.fsum(targets * weights) - math.fsum(weights * gradient)


def feasible_primal_value(
    targets: np.ndarray, weights: np.ndarray, gradient: np.ndarray
) -> float:
    """
    Energy of the smallest multiple of ``I*w`` that meets every target.

    ``s * I*w`` has ``I`` equal to ``s * gradient``; the cheapest feasible
    ``s`` is ``max t_i / gradient_i``.
    """
    need = targets > 0
    if not np.any(need):
        return 0.0
    if np.any(gradient[need] <= 0):
        return math.inf
    scale = float(np.max(targets[need] / gradient[need]))
    return scale**2 * math.fsum(weights * gradient)


def kkt_satisfied(
    targets: np.ndarray, weights: np.ndarray, gradient: np.ndarray, kkt_tol: float
) -> bool:
    scale = max(float(np.max(targets)), np.finfo(float).tiny)
    residual = gradient - targets
    if np.min(residual) < -kkt_tol * scale:
        return False
    support = weights > 0
    return not np.any(support) or np.max(np.abs(residual[support])) <= kkt_tol * scale


def _polish(
    operator: KernelOperator,
    targets: np.ndarray,
    weights: np.ndarray,
    objective: float,
) -> tuple[np.ndarray, np.ndarray, float] | None:
    """Solve K_SS x = t_S on the support, dropping negative coordinates."""
    support = np.flatnonzero(weights > 0)
    while len(support):
        try:
            x = np.linalg.solve(operator.submatrix(support), targets[support])
        except np.linalg.LinAlgError:
            return None
        if np.all(x >= 0):
            candidate = np.zeros_like(weights)
            candidate[support] = x
            gradient = operator.apply(candidate)
            value = objective_value(targets, candidate, gradient)
            if value >= objective:
                return candidate, gradient, value
            return None
        support = support[x > 0]
    return None


def coordinate_ascent(
    operator: KernelOperator,
    targets: np.ndarray,
    opts: SolverOptions = SolverOptions(),
    initial: np.ndarray | None = None,
) -> QPResult:
    """
    Maximise ``2 t.w - w.K.w`` over ``w >= 0``.

    Args:
        operator: Symmetric PSD kernel with positive diagonal
        targets: Nonnegative right-hand side ``t``
        opts: Tolerances and budgets
        initial: Starting point (default: ``t / (k * max K_ii)``)

    Returns:
        QPResult with the final weights and exact potentials ``K w``

    Raises:
        ConvergenceError: ``opts.max_sweeps`` sweeps without meeting either stop rule
    """
    targets = np.asarray(targets, dtype=np.float64)
    k = operator.size
    diag = operator.diagonal()
    if initial is None:
        weights = targets / (k * float(np.max(diag)))
    else:
        weights = np.array(initial, dtype=np.float64)
    gradient = operator.apply(weights)
    objective = objective_value(targets, weights, gradient)
    history = [objective]
    weak_duality = True

    for sweep in range(1, opts.max_sweeps + 1):
        for i in range(k):
            new = max(0.0, weights[i] + (targets[i] - gradient[i]) / diag[i])
            delta = new - weights[i]
            if delta != 0.0:
                gradient += delta * operator.column(i)
                weights[i] = new

        if sweep % opts.polish_every == 0:
            gradient = operator.apply(weights)
            current = objective_value(targets, weights, gradient)
            polished = _polish(operator, targets, weights, current)
            if polished is not None:
                weights, gradient, _ = polished

        value = objective_value(targets, weights, gradient)
        upper = feasible_primal_value(targets, weights, gradient)
        if value > upper * (1 + 1e-9) + 1e-300:
            weak_duality = False
            logger.warning(
                f"{LogEmoji.WARNING} weak duality broken at sweep {sweep}: {value} > {upper}"
            )
        history.append(value)
        logger.debug(f"{LogEmoji.SOLVER} sweep {sweep}: objective {value:.15g}")

        gain = value - objective
        objective = value
        if kkt_satisfied(targets, weights, gradient, opts.kkt_tol):
            break
        if gain < opts.tol * abs(value):
            # one exact polish before giving up on the stall
            gradient = operator.apply(weights)
            polished = _polish(operator, targets, weights, objective)
            if polished is not None:
                weights, gradient, objective = polished
                history.append(objective)
            break
    else:
        gradient = operator.apply(weights)
        if not kkt_satisfied(targets, weights, gradient, opts.kkt_tol):
            logger.warning(
                f"{LogEmoji.WARNING} no convergence after {opts.max_sweeps} sweeps"
            )
            raise ConvergenceError(
                f"Coordinate ascent did not converge in {opts.max_sweeps} sweeps",
                lower_bound=objective,
                sweeps=opts.max_sweeps,
            )

    gradient = operator.apply(weights)
    objective = objective_value(targets, weights, gradient)
    converged = kkt_satisfied(targets, weights, gradient, opts.kkt_tol)
    logger.debug(
        f"{LogEmoji.SOLVER} stopped after {sweep} sweeps, objective {objective:.15g}, "
        f"converged={converged}"
    )
    return QPResult(
        weights=weights,
        gradient=gradient,
        objective=objective,
        sweeps=sweep,
        converged=converged,
        weak_duality=weak_duality,
        history=history,
    )

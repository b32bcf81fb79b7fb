"""
Minimal-energy majorant: min sum phi^2 over phi >= 0 with I phi >= t on S.

The dual is max 2 sum t(a) nu(a) - E[nu] over nu >= 0 on S, the same
coordinate-ascent problem as the capacity with a general right-hand side.
The optimal phi is I*nu, carried by the ancestor-closure of S.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from src.capacity.dual import kernel_operator
from src.capacity.options import SolverOptions
from src.capacity.qp import coordinate_ascent, feasible_primal_value
from src.errors import FormatError
from src.lattice.dyadic import DyadicBox
from src.potential.kernel import JoinKernel
from src.potential.measures import AtomicMeasure
from src.potential.poset import RelevantPoset, build_relevant_poset


@dataclass(frozen=True)
class MajorantProblem:
    """Constraint boxes with nonnegative targets, aligned by position."""

    constraints: tuple[DyadicBox, ...]
    targets: tuple[float, ...]

    @classmethod
    def of(cls, targets: Mapping[DyadicBox, float]) -> MajorantProblem:
        boxes = sorted(targets)
        values = tuple(float(targets[box]) for box in boxes)
        if any(value < 0 for value in values):
            raise FormatError("Majorant targets must be nonnegative")
        return cls(tuple(boxes), values)

    @classmethod
    def uniform(cls, boxes, value: float = 1.0) -> MajorantProblem:
        return cls.of({box: value for box in boxes})


@dataclass(frozen=True)
class MajorantSolution:
    """
    Optimal dual measure and the value of the majorant it induces.

    ``objective`` is the energy of the feasible rescaling of ``I*measure``
    (an upper bound for the minimum), ``dual_value`` the matching lower bound.
    """

    measure: AtomicMeasure
    objective: float
    dual_value: float
    min_slack: float
    sweeps: int
    converged: bool

    def phi(self) -> RelevantPoset:
        """phi = I*nu on its support; the values are ``poset.mass``."""
        return build_relevant_poset(self.measure)


def min_energy_majorant(
    problem: MajorantProblem, opts: SolverOptions = SolverOptions()
) -> MajorantSolution:
    """
    Solve the majorant QP.

    Constraints with target 0 are vacuous and dropped before solving.

    Args:
        problem: Constraint boxes and targets
        opts: Solver options

    Returns:
        MajorantSolution
    """
    active = [(box, t) for box, t in zip(problem.constraints, problem.targets) if t > 0]
    if not active:
        dimension = problem.constraints[0].dimension if problem.constraints else 1
        return MajorantSolution(AtomicMeasure.empty(dimension), 0.0, 0.0, 0.0, 0, True)

    boxes = [box for box, _ in active]
    targets = np.array([t for _, t in active])
    kernel = JoinKernel(boxes)
    result = coordinate_ascent(kernel_operator(kernel, opts), targets, opts)

    measure = AtomicMeasure.from_atoms(
        [(box, float(w)) for box, w in zip(boxes, result.weights) if w > 0],
        boxes[0].dimension,
    )
    return MajorantSolution(
        measure=measure,
        objective=feasible_primal_value(targets, result.weights, result.gradient),
        dual_value=result.objective,
        min_slack=float(np.min(result.gradient - targets)),
        sweeps=result.sweeps,
        converged=result.converged,
    )

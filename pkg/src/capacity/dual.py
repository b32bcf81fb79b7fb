"""
Capacity on T^d through the dual problem.

cap(E) = max over nu >= 0 carried by E of 2|nu| - E[nu]. The energy is the
join-kernel quadratic form, so only the reduced constraint set is ever a
variable; the primal function comes for free as I*nu.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from src.capacity.certificate import CapacityCertificate, certify, root_certificate
from src.capacity.options import SolverOptions
from src.capacity.qp import DenseOperator, coordinate_ascent
from src.errors import EmptySetError, SupportViolationError
from src.lattice.boxset import BoxSet, reduce_to_maximal
from src.lattice.dyadic import DyadicBox
from src.potential.kernel import JoinKernel
from src.potential.measures import AtomicMeasure, energy
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


def kernel_operator(kernel: JoinKernel, opts: SolverOptions):
    """Cached matrix when it fits, the kernel itself (matrix-free rows) otherwise."""
    if opts.matrix_free or kernel.size > opts.kernel_cache_limit:
        logger.info(f"{LogEmoji.SOLVER} matrix-free sweeps over {kernel.size} boxes")
        return kernel
    return DenseOperator(kernel.matrix())


def dual_capacity(
    E: BoxSet | Iterable[DyadicBox], opts: SolverOptions = SolverOptions()
) -> CapacityCertificate:
    """
    Capacity and equilibrium measure of a set of boxes.

    Args:
        E: Nonempty constraint set on T, T^2 or T^3
        opts: Solver tolerances and budgets

    Returns:
        CapacityCertificate; ``cap_value`` is the final dual value

    Raises:
        EmptySetError: E is empty
        ConvergenceError: Sweep budget exhausted (carries the best lower bound)
    """
    if not isinstance(E, BoxSet):
        E = BoxSet.of(E)
    if not len(E):
        raise EmptySetError("Capacity of the empty set requested")

    reduced = reduce_to_maximal(E)
    if reduced.contains_root():
        return root_certificate(reduced.dimension, len(reduced))

    kernel = JoinKernel(reduced.boxes)
    result = coordinate_ascent(
        kernel_operator(kernel, opts), np.ones(kernel.size), opts
    )
    support = result.weights > 0
    equilibrium = AtomicMeasure.from_atoms(
        [
            (box, float(w))
            for box, w, keep in zip(reduced.boxes, result.weights, support)
            if keep
        ],
        reduced.dimension,
    )
    logger.debug(
        f"{LogEmoji.SOLVER} dual capacity {result.objective:.15g} "
        f"({int(support.sum())}/{kernel.size} boxes charged, {result.sweeps} sweeps)"
    )
    return certify(
        reduced,
        equilibrium,
        result.objective,
        method="dual",
        potentials=result.gradient,
        sweeps=result.sweeps,
        converged=result.converged,
        weak_duality=result.weak_duality,
        objective_history=tuple(result.history),
    )


def capacity_lower_bound(nu: AtomicMeasure, E: BoxSet | Iterable[DyadicBox]) -> float:
    """
    max(|nu|^2 / E[nu], 2|nu| - E[nu]) for nu carried by the down-set of E.

    Raises:
        SupportViolationError: Some atom lies in no element of E
    """
    if not isinstance(E, BoxSet):
        E = BoxSet.of(E, dimension=nu.dimension)
    for box in nu.boxes:
        if not E.covers(box):
            raise SupportViolationError(f"Atom {box} is not below any element of E")

    total = nu.total_mass
    nu_energy = energy(nu)
    if nu_energy <= 0:
        return 0.0
    return max(total**2 / nu_energy, 2 * total - nu_energy)

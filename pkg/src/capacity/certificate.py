"""Capacity certificates: value, equilibrium measure and the numbers that back them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox
from src.potential.measures import AtomicMeasure


@dataclass(frozen=True)
class CapacityCertificate:
    """
    A capacity value with its equilibrium measure.

    ``f = I*equilibrium`` is the primal function; ``lower_bound`` is the dual
    value ``2|nu| - E[nu]``, always a valid lower bound for the capacity, and
    ``duality_gap`` compares it with the energy of the feasible rescaling
    ``f / min_E V``.
    """

    cap_value: float
    equilibrium: AtomicMeasure
    primal_energy: float
    duality_gap: float
    min_potential_on_E: float
    min_potential_on_support: float
    max_potential_on_support: float
    lower_bound: float
    constraint_size: int
    method: str
    sweeps: int = 0
    converged: bool = True
    weak_duality: bool = True
    objective_history: tuple[float, ...] = ()

    @property
    def support_size(self) -> int:
        return len(self.equilibrium)

    @property
    def total_mass(self) -> float:
        return self.equilibrium.total_mass

    def kkt_ok(self, tol: float) -> bool:
        """V >= 1 - tol on E and |V - 1| <= tol on the support."""
        return (
            self.min_potential_on_E >= 1 - tol
            and abs(self.min_potential_on_support - 1) <= tol
            and abs(self.max_potential_on_support - 1) <= tol
        )

    def objective_monotone(self, rtol: float = 1e-10) -> bool:
        """The dual objective never went down from one sweep to the next."""
        history = np.asarray(self.objective_history)
        if len(history) < 2:
            return True
        slack = rtol * max(1.0, float(np.max(np.abs(history))))
        return bool(np.all(np.diff(history) >= -slack))

    def to_dict(self) -> dict:
        return {
            "cap_value": self.cap_value,
            "duality_gap": self.duality_gap,
            "lower_bound": self.lower_bound,
            "primal_energy": self.primal_energy,
            "total_mass": self.total_mass,
            "support_size": self.support_size,
            "constraint_size": self.constraint_size,
            "min_potential_on_E": self.min_potential_on_E,
            "min_potential_on_support": self.min_potential_on_support,
            "max_potential_on_support": self.max_potential_on_support,
            "method": self.method,
            "sweeps": self.sweeps,
            "converged": self.converged,
            "weak_duality": self.weak_duality,
            "objective_monotone": self.objective_monotone(),
        }


def certify(
    constraints: BoxSet,
    equilibrium: AtomicMeasure,
    cap_value: float,
    method: str,
    potentials: np.ndarray | None = None,
    sweeps: int = 0,
    converged: bool = True,
    weak_duality: bool = True,
    objective_history: tuple[float, ...] = (),
) -> CapacityCertificate:
    """
    Assemble a certificate for a measure carried by the constraint set.

    Args:
        constraints: Reduced constraint set E
        equilibrium: Measure supported on E
        cap_value: Reported capacity
        method: Solver name recorded in the certificate
        potentials: V^nu at every element of E, aligned with ``constraints``
            (computed from the measure when omitted)
        sweeps: Solver sweeps used
        converged: Whether the solver met its KKT tolerance
        weak_duality: Whether every sweep stayed below its feasible primal energy
        objective_history: Dual objective after each sweep

    Returns:
        CapacityCertificate
    """
    if potentials is None:
        kernel = equilibrium.kernel
        potentials = np.array(
            [math.fsum(kernel.query(box) * equilibrium.mass_array) for box in constraints]
        )
    position = {box: i for i, box in enumerate(constraints.boxes)}
    on_support = potentials[[position[box] for box in equilibrium.boxes]]

    total = equilibrium.total_mass
    primal = math.fsum(np.asarray(equilibrium.masses) * on_support)
    lower = 2 * total - primal
    min_e = float(np.min(potentials))
    gap = primal / min_e**2 - lower if min_e > 0 else math.inf

    return CapacityCertificate(
        cap_value=cap_value,
        equilibrium=equilibrium,
        primal_energy=primal,
        duality_gap=gap,
        min_potential_on_E=min_e,
        min_potential_on_support=float(np.min(on_support)),
        max_potential_on_support=float(np.max(on_support)),
        lower_bound=lower,
        constraint_size=len(constraints),
        method=method,
        sweeps=sweeps,
        converged=converged,
        weak_duality=weak_duality,
        objective_history=tuple(objective_history),
    )


def root_certificate(dimension: int, constraint_size: int = 1) -> CapacityCertificate:
    """Any set containing the root has capacity 1, witnessed by a unit mass at the root."""
    unit = AtomicMeasure.point_mass(DyadicBox.root(dimension), 1.0)
    return CapacityCertificate(
        cap_value=1.0,
        equilibrium=unit,
        primal_energy=1.0,
        duality_gap=0.0,
        min_potential_on_E=1.0,
        min_potential_on_support=1.0,
        max_potential_on_support=1.0,
        lower_bound=1.0,
        constraint_size=constraint_size,
        method="root",
    )

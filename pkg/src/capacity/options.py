from dataclasses import dataclass

from src.config import KERNEL_CACHE_LIMIT, KKT_TOL, MAX_SWEEPS, POLISH_EVERY, SOLVER_TOL


@dataclass(frozen=True)
class SolverOptions:
    """Knobs of the coordinate-ascent solver (CLI: --tol, --max-sweeps, --matrix-free)."""

    tol: float = SOLVER_TOL
    kkt_tol: float = KKT_TOL
    max_sweeps: int = MAX_SWEEPS
    matrix_free: bool = False
    polish_every: int = POLISH_EVERY
    kernel_cache_limit: int = KERNEL_CACHE_LIMIT

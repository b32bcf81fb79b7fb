"""Run independent experiment cells, in a process pool when ``jobs > 1``."""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)

C = TypeVar("C")
R = TypeVar("R")


def run_cells(func: Callable[[C], R], cells: Iterable[C], jobs: int = 1) -> list[R]:
    """
    Apply ``func`` to every cell and return the results in input order.

    ``func`` must be a module-level function so it can be pickled.
    """
    cells = list(cells)
    if jobs <= 1 or len(cells) <= 1:
        return [func(cell) for cell in cells]

    workers = min(jobs, len(cells))
    logger.info(f"{LogEmoji.PROCESS} {len(cells)} cells on {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, cells))

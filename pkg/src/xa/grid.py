import concurrent.futures
import logging
from typing import Callable, List, TypeVar

T = TypeVar("T")

logger = logging.getLogger(__name__)


def run_grid(n_rows: int, n_cols: int, cell: Callable[[int, int], T],
             workers: int = 1) -> List[List[T]]:
    """Evaluate ``cell(row, col)`` over an ``n_rows x n_cols`` grid.

    Cells must not share mutable state. Results are placed by index, so the
    returned grid does not depend on the number of workers or on completion
    order.

    Args:
        n_rows: Number of rows (ages)
        n_cols: Number of columns (trials)
        cell: Cell function
        workers: Worker threads; 1 runs inline

    Returns:
        List[List[T]]: ``grid[row][col]``
    """
    grid: List[List[T]] = [[None] * n_cols for _ in range(n_rows)]  # type: ignore[list-item]
    if workers <= 1:
        for row in range(n_rows):
            for col in range(n_cols):
                grid[row][col] = cell(row, col)
        return grid

    logger.debug(f"Running {n_rows}x{n_cols} cells on {workers} threads")
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {
            executor.submit(cell, row, col): (row, col)
            for row in range(n_rows) for col in range(n_cols)
        }
        for future in concurrent.futures.as_completed(futures):
            row, col = futures[future]
            grid[row][col] = future.result()
    return grid

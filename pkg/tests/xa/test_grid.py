import threading

from xa.grid import run_grid


def test_grid_is_filled_by_index():
    grid = run_grid(3, 4, lambda i, j: (i, j))
    assert grid == [[(i, j) for j in range(4)] for i in range(3)]


def test_worker_count_does_not_change_results():
    def cell(i, j):
        return i * 100 + j

    assert run_grid(5, 7, cell, workers=1) == run_grid(5, 7, cell, workers=4)


def test_cells_run_on_worker_threads():
    names = set()
    lock = threading.Lock()

    def cell(i, j):
        with lock:
            names.add(threading.current_thread().name)
        return None

    run_grid(4, 4, cell, workers=3)
    assert threading.main_thread().name not in names

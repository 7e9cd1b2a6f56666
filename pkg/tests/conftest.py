import numpy as np
import pytest

from sobolev1d import Potential, make_piecewise_constant


def random_piecewise_constant(rng: np.random.Generator, n_pieces: int | None = None) -> Potential:
    """Random step potential with values in [0.5, 5] and well-separated jumps."""
    n = int(n_pieces) if n_pieces is not None else int(rng.integers(2, 6))
    while True:
        edges = np.sort(rng.uniform(-6.0, 6.0, size=n - 1))
        if n == 2 or np.min(np.diff(edges)) > 0.2:
            break
    values = rng.uniform(0.5, 5.0, size=n)
    return make_piecewise_constant(edges, values)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)

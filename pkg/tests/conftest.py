import numpy as np
import pytest

from d8span.geometry import PointSet


def random_points(seed: int, n: int, box: float = 1000.0) -> PointSet:
    rng = np.random.default_rng(seed)
    return PointSet.from_pairs(rng.uniform(0.0, box, size=(n, 2)))


@pytest.fixture
def small_instance():
    from d8span.builder import construct_d8

    ps = random_points(11, 40)
    T, sel = construct_d8(ps)
    return ps, T, sel

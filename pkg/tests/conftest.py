import numpy as np
import pytest

from ucp_ensemble.dataset import Dataset, EnvFactors, ProjectRecord


def make_record(ratings, ucp, effort):
    return ProjectRecord(EnvFactors(tuple(ratings)), ucp, effort)


def make_dataset(rows, name="test"):
    """rows: iterable of (ratings, ucp, effort)."""
    return Dataset(name, tuple(make_record(r, u, e) for r, u, e in rows))


def random_dataset(n, seed, name="random"):
    """n random records with productivity loosely tied to the ratings."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        ratings = rng.uniform(0, 5, size=8)
        prod = 24.0 - 1.2 * (ratings[0] - 2.5) - 0.8 * (ratings[1] - 2.5) + rng.normal(0, 2.0)
        prod = max(prod, 2.0)
        ucp = rng.uniform(50, 400)
        rows.append((ratings, ucp, prod * ucp))
    return make_dataset(rows, name)


@pytest.fixture
def tiny_dataset():
    return random_dataset(12, seed=99, name="tiny")

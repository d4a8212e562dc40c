import csv
from pathlib import Path

import numpy as np
import pytest

from olsaudit.ols import Dataset

DATA = Path(__file__).parent / "data"


def random_dataset(seed, n=10, d=2):
    rng = np.random.default_rng(seed)
    return Dataset(rng.standard_normal((n, d)), rng.standard_normal(n))


def exact_fit_dataset(seed=0, n=8, d=3):
    """Responses lie exactly on the controls, so a zero-treatment fit exists."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    lam = rng.standard_normal(d - 1)
    return Dataset(X, X[:, 1:] @ lam), lam


@pytest.fixture(scope="session")
def boston():
    with open(DATA / "boston_housing.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    data = np.array(rows[1:], dtype=float)
    return header, data

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from collinear_lens import Dataset
from collinear_lens.montecarlo import DGPConfig, generate_trial

FIXTURES = Path(__file__).parent / "fixtures"


def random_dataset(rng, n, p, noise=1.0, correlate=0.0):
    """Well-conditioned random dataset with slopes of order one."""
    X = rng.standard_normal((n, p))
    if correlate and p >= 2:
        shared = rng.standard_normal((n, 1))
        X = np.sqrt(1.0 - correlate) * X + np.sqrt(correlate) * shared
    beta = rng.uniform(-2.0, 2.0, size=p)
    y = 1.0 + X @ beta + noise * rng.standard_normal(n)
    return Dataset.from_arrays(X, y)


def orthogonal_design(rng, n, p):
    """Regressor matrix with exactly centered, mutually orthogonal columns."""
    raw = np.column_stack([np.ones(n), rng.standard_normal((n, p))])
    q, _ = np.linalg.qr(raw)
    return q[:, 1:]  # orthonormal and orthogonal to the constant column


def dgp_dataset(seed, n, rho, beta1):
    """One draw from the experiment generator, as a Dataset."""
    config = DGPConfig(beta1=beta1, rho=rho, n=n, trials=1, seed=seed)
    return generate_trial(config, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)

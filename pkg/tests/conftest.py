import numpy as np
import pytest

from emdclf.features import LabeledDataset


def two_gaussians(seed=42, n_per_class=200, dim=2, offset=2.0):
    """Two unit-covariance blobs at -offset*e1 and +offset*e1."""
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal((n_per_class, dim)) + np.eye(dim)[0] * -offset
    x1 = rng.standard_normal((n_per_class, dim)) + np.eye(dim)[0] * offset
    labels = np.array([0] * n_per_class + [1] * n_per_class)
    return LabeledDataset(np.vstack([x0, x1]), labels)


@pytest.fixture(scope="session")
def gaussian_data():
    return two_gaussians()

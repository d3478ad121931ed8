import numpy as np
import pytest

from perronlab.lattice import PositiveOperator

OMEGA3 = np.exp(2j * np.pi / 3)


def op(a, norm=np.inf):
    return PositiveOperator.from_array(np.asarray(a, dtype=float), norm)


def cycle(p):
    """Cyclic shift with T[i, (i+1) % p] = 1."""
    return np.roll(np.eye(p), 1, axis=1)


def blocks(*parts):
    parts = [np.atleast_2d(np.asarray(b, dtype=float)) for b in parts]
    n = sum(b.shape[0] for b in parts)
    a = np.zeros((n, n))
    i = 0
    for b in parts:
        k = b.shape[0]
        a[i:i + k, i:i + k] = b
        i += k
    return a


# ||R(r_n, T)|z|| grows like 1/h^2 along the first coordinate while
# z = (0, 1, -1) is an eigenvector for -1: not minimal growth
NON_MINIMAL = np.array([[1.0, 1.0, 1.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

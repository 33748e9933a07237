import sys
from pathlib import Path

import numpy as np
import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))


def random_system(rng, n, unit_ports=True):
    """Random (A, P) with entries U[-2, 2] and P = I by default."""
    import locact

    A = rng.uniform(-2.0, 2.0, (n, n))
    P = np.eye(n) if unit_ports else np.diag([1.0] * 1 + [0.0] * (n - 1))
    return locact.make_system(A, P)


def random_member_of_M(rng, n, min_abscissa=None, max_tries=200):
    """Random Gaussian system with P = e1 e1^T that lies in the generic set;
    optionally shifted so the spectral abscissa is at least ``min_abscissa``."""
    import locact
    from locact import genericity

    P = np.zeros((n, n))
    P[0, 0] = 1.0
    for _ in range(max_tries):
        A = rng.standard_normal((n, n))
        if min_abscissa is not None:
            shift = min_abscissa - np.linalg.eigvals(A).real.max()
            if shift > 0:
                A = A + (shift + rng.uniform(0.0, 0.3)) * np.eye(n)
        sys = locact.make_system(A, P)
        if genericity.in_generic_M(sys).in_M:
            if min_abscissa is None or \
                    np.linalg.eigvals(A).real.max() >= min_abscissa:
                return sys
    raise AssertionError("could not sample a generic-set member")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

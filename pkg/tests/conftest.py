import numpy as np
import pytest

from qrelkit import Functional, MultiMatrixAlgebra


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture
def m2():
    return MultiMatrixAlgebra([2])


@pytest.fixture
def mixed():
    return MultiMatrixAlgebra([2, 1])


def nontracial_state(alg, seed=5):
    """A faithful non-tracial state-like functional with random densities."""
    rng = np.random.default_rng(seed)
    dens = []
    for n in alg.blocks:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q = g @ g.conj().T + 0.3 * np.eye(n)
        dens.append(q)
    return Functional(alg, dens)

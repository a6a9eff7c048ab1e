import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrelkit import (
    MultiMatrixAlgebra,
    RepresentedAlgebra,
    ValidationError,
    bimodule_generate,
    intersect,
    span_of,
    sum_spaces,
)

E11 = np.array([[1.0, 0.0], [0.0, 0.0]])
E12 = np.array([[0.0, 1.0], [0.0, 0.0]])
E21 = np.array([[0.0, 0.0], [1.0, 0.0]])


def random_space(rng, dim, shape):
    gens = [
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        for _ in range(dim)
    ]
    return span_of(gens, shape=shape)


def test_span_basics():
    s = span_of([E11, 2 * E11, E12], shape=(2, 2))
    assert s.dim == 2
    assert s.shape == (2, 2)
    gram = np.array(
        [[np.vdot(a, b) for b in s.basis] for a in s.basis]
    )
    assert np.abs(gram - np.eye(2)).max() < 1e-12
    assert s.contains(3 * E11 - 1j * E12)
    assert not s.contains(E21)


def test_span_of_empty_and_noise():
    assert span_of([], shape=(2, 2)).dim == 0
    # generators at machine-noise scale must not be promoted to dimensions
    noise = [1e-16 * np.ones((2, 2)) for _ in range(3)]
    assert span_of(noise, shape=(2, 2)).dim == 0


def test_sum_and_intersect_explicit():
    a = span_of([E11], shape=(2, 2))
    b = span_of([E12], shape=(2, 2))
    assert sum_spaces(a, b).dim == 2
    assert intersect(a, b).dim == 0
    assert intersect(a, a).equals(a)
    both = span_of([E11, E12], shape=(2, 2))
    assert sum_spaces(a, b).equals(both)


def test_projection_is_hermitian_idempotent():
    rng = np.random.default_rng(0)
    s = random_space(rng, 3, (3, 3))
    p = s.projection()
    assert np.abs(p - p.conj().T).max() < 1e-10
    assert np.abs(p @ p - p).max() < 1e-10
    assert int(round(np.trace(p).real)) == s.dim


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    du=st.integers(0, 4),
    dw=st.integers(0, 4),
)
def test_dimension_law(seed, du, dw):
    rng = np.random.default_rng(seed)
    u = random_space(rng, du, (2, 3))
    w = random_space(rng, dw, (2, 3))
    s = sum_spaces(u, w)
    i = intersect(u, w)
    assert u.dim + w.dim == s.dim + i.dim
    assert u.subset_of(s) and w.subset_of(s)
    assert i.subset_of(u) and i.subset_of(w)


def test_bimodule_closure():
    rng = np.random.default_rng(7)
    left = RepresentedAlgebra(MultiMatrixAlgebra([2]), [2])
    right = RepresentedAlgebra(MultiMatrixAlgebra([1, 1]), [2, 1])
    g = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    space = bimodule_generate(
        left.commutant_basis(), [g], right.commutant_basis(), shape=(4, 3)
    )
    for a in left.commutant_basis():
        for b in space.basis:
            for c in right.commutant_basis():
                assert space.contains(a @ b @ c, tol=1e-8)


def test_shape_mismatch_rejected():
    with pytest.raises(ValidationError):
        span_of([E11], shape=(3, 3))
    a = span_of([E11], shape=(2, 2))
    b = span_of([np.ones((3, 3))], shape=(3, 3))
    with pytest.raises(ValidationError):
        sum_spaces(a, b)

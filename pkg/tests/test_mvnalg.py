import numpy as np
import pytest

from qrelkit import (
    Functional,
    MultiMatrixAlgebra,
    RepresentedAlgebra,
    ValidationError,
    gns,
    markov_trace,
    represent,
)
from conftest import nontracial_state

TOL = 1e-12


def random_element(rng, alg):
    return [
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        for n in alg.blocks
    ]


# -- algebra plumbing -----------------------------------------------------------


def test_block_validation():
    with pytest.raises(ValidationError):
        MultiMatrixAlgebra([])
    with pytest.raises(ValidationError):
        MultiMatrixAlgebra([2, 0])
    alg = MultiMatrixAlgebra([2, 1])
    with pytest.raises(ValidationError):
        alg.element([np.eye(2)])
    with pytest.raises(ValidationError):
        alg.element([np.eye(3), np.eye(1)])


def test_dims(mixed):
    assert mixed.alg_dim == 5
    assert mixed.dsum_dim == 3
    assert len(list(mixed.unit_basis())) == 5


def test_coords_round_trip(rng, mixed):
    for _ in range(5):
        x = random_element(rng, mixed)
        v = mixed.coords(x)
        assert v.shape == (5,)
        back = mixed.from_coords(v)
        assert max(np.abs(a - b).max() for a, b in zip(x, back)) < TOL


def test_coords_are_row_major(m2):
    x = m2.element([[[1, 2], [3, 4]]])
    assert np.allclose(m2.coords(x), [1, 2, 3, 4])


def test_mul_star(rng, mixed):
    x = random_element(rng, mixed)
    y = random_element(rng, mixed)
    xy = mixed.mul(x, y)
    assert np.allclose(xy[0], x[0] @ y[0])
    assert np.allclose(xy[1], x[1] @ y[1])
    st = mixed.star(mixed.mul(x, y))
    rev = mixed.mul(mixed.star(y), mixed.star(x))
    assert max(np.abs(a - b).max() for a, b in zip(st, rev)) < TOL


def test_markov_trace_weights(mixed):
    x = mixed.element([[[1, 5], [7, 2]], [[4]]])
    # block of size n contributes n * Tr(x_n)
    assert markov_trace(mixed, x) == pytest.approx(2 * (1 + 2) + 1 * 4)


# -- functionals ----------------------------------------------------------------


def test_functional_value_convention(mixed):
    q = [np.diag([0.5, 0.25]), np.array([[2.0]])]
    phi = Functional(mixed, q)
    x = mixed.element([np.diag([1.0, 3.0]), [[5.0]]])
    # phi(x) = sum_a n(a) Tr(Q_a x_a)
    assert phi.value(x) == pytest.approx(2 * (0.5 + 0.75) + 1 * 10.0)
    assert not phi.is_markov_trace
    assert Functional.markov(mixed).is_markov_trace


def test_functional_rejects_bad_densities(m2):
    with pytest.raises(ValidationError):
        Functional(m2, [np.array([[1.0, 1.0], [0.0, 1.0]])])
    with pytest.raises(ValidationError):
        Functional(m2, [np.diag([1.0, 0.0])])


def test_q_power_and_sigma_group(mixed):
    phi = nontracial_state(mixed)
    q1 = phi.q_power(0.3)
    q2 = phi.q_power(0.7)
    q3 = phi.q_power(1.0)
    assert max(np.abs(a @ b - c).max() for a, b, c in zip(q1, q2, q3)) < 1e-10
    x = random_element(np.random.default_rng(1), mixed)
    lhs = phi.sigma(0.2, phi.sigma(0.5, x))
    rhs = phi.sigma(0.7, x)
    assert max(np.abs(a - b).max() for a, b in zip(lhs, rhs)) < 1e-10


# -- representations ------------------------------------------------------------


def test_embed_unembed_round_trip(rng, mixed):
    rep = RepresentedAlgebra(mixed, [2, 3])
    assert rep.hilbert_dim == 2 * 2 + 1 * 3
    x = random_element(rng, mixed)
    back = rep.unembed(rep.embed(x))
    assert max(np.abs(a - b).max() for a, b in zip(x, back)) < TOL


def test_unembed_rejects_outside(mixed):
    rep = RepresentedAlgebra(mixed, [1, 1])
    with pytest.raises(ValidationError):
        rep.unembed(np.ones((3, 3)))


def test_commutant_dimension(mixed):
    # commutant of (M2 with mult 2) + (C with mult 3) has dim 2^2 + 3^2
    rep = RepresentedAlgebra(mixed, [2, 3])
    assert rep.commutant_dim() == 13
    x = random_element(np.random.default_rng(2), mixed)
    ex = rep.embed(x)
    worst = max(
        np.abs(t @ ex - ex @ t).max() for t in rep.commutant_basis()
    )
    assert worst < 1e-10


def test_represent_cross_checks_trivial_algebra():
    # one-dimensional algebra: the structural commutant and the nullspace
    # computation must agree even though everything is roundoff-scale
    rep = represent(MultiMatrixAlgebra([1]), [1])
    assert rep.commutant_dim() == 1


def test_same_representation(mixed):
    a = RepresentedAlgebra(mixed, [2, 1])
    b = RepresentedAlgebra(mixed, [2, 1])
    c = RepresentedAlgebra(mixed, [1, 1])
    assert a.same_representation(b)
    assert not a.same_representation(c)


# -- GNS space ------------------------------------------------------------------


def test_gns_inner_product_matches_state(rng, mixed):
    phi = nontracial_state(mixed)
    g = gns(mixed, phi)
    assert g.dim == 5
    for _ in range(5):
        x = random_element(rng, mixed)
        y = random_element(rng, mixed)
        lhs = np.vdot(g.coords(x), g.coords(y))
        rhs = phi.value(mixed.mul(mixed.star(x), y))
        assert abs(lhs - rhs) < 1e-10


def test_left_action_is_multiplicative(rng, mixed):
    g = gns(mixed, nontracial_state(mixed))
    x = random_element(rng, mixed)
    y = random_element(rng, mixed)
    lhs = g.left_action(x) @ g.coords(y)
    rhs = g.coords(mixed.mul(x, y))
    assert np.abs(lhs - rhs).max() < 1e-10


def test_conjugation_is_involutive(mixed):
    g = gns(mixed, nontracial_state(mixed))
    s = g.j_matrix()
    rng = np.random.default_rng(3)
    v = rng.standard_normal(g.dim) + 1j * rng.standard_normal(g.dim)
    jv = s @ np.conj(v)
    jjv = s @ np.conj(jv)
    assert np.abs(jjv - v).max() < 1e-10


def test_conjugated_algebra_commutes(rng, mixed):
    g = gns(mixed, nontracial_state(mixed))
    s = g.j_matrix()
    x = random_element(rng, mixed)
    y = random_element(rng, mixed)
    jx = s @ np.conj(g.left_action(x)) @ s
    ly = g.left_action(y)
    assert np.abs(jx @ ly - ly @ jx).max() < 1e-9


def test_nabla_power_group_law(mixed):
    g = gns(mixed, nontracial_state(mixed))
    lhs = g.nabla_power(0.25) @ g.nabla_power(0.5)
    rhs = g.nabla_power(0.75)
    assert np.abs(lhs - rhs).max() < 1e-10


def test_modular_group_action(rng, mixed):
    phi = nontracial_state(mixed)
    g = gns(mixed, phi)
    x = random_element(rng, mixed)
    t = 0.37
    lhs = g.nabla_power(1j * t) @ g.left_action(x) @ g.nabla_power(-1j * t)
    rhs = g.left_action(phi.sigma(t, x))
    assert np.abs(lhs - rhs).max() < 1e-9


def test_tracial_flag(mixed):
    assert gns(mixed, Functional.markov(mixed)).tracial
    assert not gns(mixed, nontracial_state(mixed)).tracial

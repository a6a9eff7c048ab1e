import numpy as np
import pytest

from qrelkit import (
    Functional,
    GNSOperator,
    MultiMatrixAlgebra,
    adjacency_of_hom,
    adjacency_of_relation,
    classify,
    dagger,
    from_classical,
    gns,
    gns_representation,
    hom_from_callable,
    kms_adjoint,
    psi_prime,
    psi_prime_inv,
    qg_from_cp_construct,
    relation_of_cp,
    relation_of_positive,
    schur_product,
    theta_of_adjacency,
    verdon_construct,
)
from qrelkit import adjacency, randgen
from qrelkit.adjacency import compose_gns, find_x0, hat_of_cp, identity_gns
from conftest import nontracial_state


def spaces():
    src_alg = MultiMatrixAlgebra([2, 1])
    tgt_alg = MultiMatrixAlgebra([2])
    g_s = gns(src_alg, nontracial_state(src_alg, seed=11))
    g_t = gns(tgt_alg, nontracial_state(tgt_alg, seed=12))
    return g_s, g_t


def random_op(rng, g_s, g_t):
    m = rng.standard_normal((g_t.dim, g_s.dim)) + 1j * rng.standard_normal(
        (g_t.dim, g_s.dim)
    )
    return GNSOperator(g_s, g_t, m)


def random_element(rng, alg):
    return [
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        for n in alg.blocks
    ]


# -- the bijection onto the opposite-tensor algebra ---------------------------------


def test_rank_one_image(rng):
    """The image of |c(x)><c(y)| must be L(x) kron L(sigma_{i/2}(y)*)^T."""
    g_s, g_t = spaces()
    for _ in range(4):
        x = random_element(rng, g_t.algebra)
        y = random_element(rng, g_s.algebra)
        a = GNSOperator(g_s, g_t, np.outer(g_t.coords(x), np.conj(g_s.coords(y))))
        got = psi_prime(a).matrix
        sig = g_s.functional.sigma(0.5j, y)
        twisted = g_s.left_action(g_s.algebra.star(sig)).T
        want = np.kron(g_t.left_action(x), twisted)
        assert np.abs(got - want).max() < 1e-9


def test_psi_prime_is_multiplicative_for_schur(rng):
    g_s, g_t = spaces()
    a = random_op(rng, g_s, g_t)
    b = random_op(rng, g_s, g_t)
    lhs = psi_prime(schur_product(a, b)).matrix
    rhs = psi_prime(a).matrix @ psi_prime(b).matrix
    assert np.abs(lhs - rhs).max() < 1e-8


def test_psi_prime_respects_dagger(rng):
    g_s, g_t = spaces()
    a = random_op(rng, g_s, g_t)
    lhs = psi_prime(dagger(a)).matrix
    rhs = psi_prime(a).matrix.conj().T
    assert np.abs(lhs - rhs).max() < 1e-8


def test_psi_prime_round_trip(rng):
    g_s, g_t = spaces()
    a = random_op(rng, g_s, g_t)
    back = psi_prime_inv(psi_prime(a))
    assert np.abs(back.matrix - a.matrix).max() < 1e-8


# -- modular adjoint -----------------------------------------------------------------


def test_kms_adjoint_is_involutive(rng):
    g_s, g_t = spaces()
    a = random_op(rng, g_s, g_t)
    assert np.abs(kms_adjoint(kms_adjoint(a)).matrix - a.matrix).max() < 1e-10


def test_kms_adjoint_reverses_composition(rng):
    g_s, g_t = spaces()
    a1 = random_op(rng, g_s, g_t)
    a2 = random_op(rng, g_t, g_s)
    lhs = kms_adjoint(compose_gns(a2, a1)).matrix
    rhs = compose_gns(kms_adjoint(a1), kms_adjoint(a2)).matrix
    assert np.abs(lhs - rhs).max() < 1e-9


# -- classification ------------------------------------------------------------------


def test_identity_flags_tracial_vs_not(m2):
    tr = gns(m2, Functional.markov(m2))
    flags = classify(identity_gns(tr))
    assert flags == {
        "cp": True,
        "real": True,
        "schur_idempotent": True,
        "psi_projection": True,
    }
    nt = gns(m2, nontracial_state(m2))
    flags = classify(identity_gns(nt))
    assert flags["cp"] and not flags["schur_idempotent"]


def test_hat_of_cp_matches_action(rng):
    alg = MultiMatrixAlgebra([2, 1])
    rep = gns_representation(alg)
    theta = hom_from_callable(rep, rep, lambda x: list(x))
    g = gns(alg, nontracial_state(alg))
    hat = hat_of_cp(theta, g, g)
    x = random_element(rng, alg)
    lhs = hat.apply(x)
    rhs = theta.apply(x)
    assert max(np.abs(a - b).max() for a, b in zip(lhs, rhs)) < 1e-10


def test_state_preservation_of_identity(m2):
    g = gns(m2, nontracial_state(m2))
    assert adjacency.state_preservation_check(identity_gns(g))


# -- relations from operators and back -----------------------------------------------


def test_relation_operator_round_trip(rng):
    g_s, g_t = spaces()
    src = gns_representation(g_s.algebra)
    tgt = gns_representation(g_t.algebra)
    v = randgen.random_relation(rng, src, tgt)
    a = adjacency_of_relation(v, g_s, g_t)
    flags = classify(a)
    assert flags["cp"] and flags["schur_idempotent"]
    back = relation_of_positive(psi_prime(a))
    assert back.equals(v)


def test_adjacency_needs_gns_representation(rng, m2):
    rep = gns_representation(m2)
    other = randgen.random_representation(rng, m2)
    while other.same_representation(rep):
        other = randgen.random_representation(rng, m2)
    v = randgen.random_relation(rng, other, other)
    g = gns(m2, Functional.markov(m2))
    from qrelkit import ValidationError
    with pytest.raises(ValidationError):
        adjacency_of_relation(v, g, g)


def test_tracial_relation_realized_by_cp_map(rng):
    alg_n = MultiMatrixAlgebra([2, 1])
    alg_m = MultiMatrixAlgebra([2])
    gm = gns(alg_m, Functional.markov(alg_m))
    gn = gns(alg_n, Functional.markov(alg_n))
    v = randgen.random_relation(
        rng, gns_representation(alg_m), gns_representation(alg_n)
    )
    a = adjacency_of_relation(v, gm, gn)
    theta, cert = theta_of_adjacency(a)
    assert cert["residual"] < 1e-8
    assert relation_of_cp(theta).equals(v)


def test_coinjectivity_of_identity_relation(m2):
    from qrelkit import identity_relation
    g = gns(m2, Functional.markov(m2))
    v = identity_relation(gns_representation(m2))
    a = adjacency_of_relation(v, g, g)
    out = adjacency.coinjectivity_criterion(a)
    assert out["coinjective"]


# -- adjacency of a homomorphism ------------------------------------------------------


def test_adjacency_of_hom_certificates():
    src_alg = MultiMatrixAlgebra([2, 1])
    tgt_alg = MultiMatrixAlgebra([2, 2])
    src = gns_representation(src_alg)
    tgt = gns_representation(tgt_alg)
    theta = hom_from_callable(src, tgt, lambda x: [x[0], x[0]])
    a, data = adjacency_of_hom(
        theta, nontracial_state(src_alg, seed=21), nontracial_state(tgt_alg, seed=22)
    )
    assert data.flags["cp"] and data.flags["schur_idempotent"]
    for cert in data.certificates:
        assert cert["residual"] < 1e-8
    for vb in data.v_blocks.values():
        assert np.linalg.eigvalsh(vb).min() > 0


# -- constructions --------------------------------------------------------------------


def five_cycle_graph():
    alg = MultiMatrixAlgebra([1] * 5)
    rep = gns_representation(alg)
    pairs = []
    for i in range(5):
        pairs += [(i, i), (i, (i + 1) % 5), ((i + 1) % 5, i)]
    return from_classical(sorted(set(pairs)), rep, rep), alg


def test_verdon_on_five_cycle():
    s, alg = five_cycle_graph()
    theta, cert = verdon_construct(s)
    assert theta.unital
    assert cert["residual"] < 1e-8
    assert len(theta.source.blocks) == 1  # domain is a full matrix algebra
    from qrelkit import confusability_graph
    assert confusability_graph(theta).equals(s)


def test_qg_from_cp_with_identity_seed():
    s, alg = five_cycle_graph()
    theta, cert = qg_from_cp_construct(s, alg.identity())
    assert cert["residual"] < 1e-7


def test_find_x0_on_reflexive_graph(rng):
    s, alg = five_cycle_graph()
    x0 = find_x0(s, seed=3)
    assert x0 is not None
    rep = gns_representation(alg)
    assert s.space.contains(rep.embed(alg.element(x0)), tol=1e-8)


def test_verdon_rejects_asymmetric_relation():
    alg = MultiMatrixAlgebra([1, 1])
    rep = gns_representation(alg)
    v = from_classical([(0, 0), (1, 1), (0, 1)], rep, rep)
    from qrelkit import ValidationError
    with pytest.raises(ValidationError):
        verdon_construct(v)

import numpy as np
import pytest

from qrelkit import (
    MultiMatrixAlgebra,
    ValidationError,
    adjoint_relation,
    central_support,
    gns_representation,
    hom_from_callable,
    hom_of_relation,
    identity_hom,
    kernel_projection,
    properties,
    property_dictionary,
    relation_of_hom,
    theta_star,
)
from qrelkit import randgen


def embedding_hom():
    """x -> diag(x, x) from M2 into M2 + M2, over GNS representations."""
    src = gns_representation(MultiMatrixAlgebra([2]))
    tgt = gns_representation(MultiMatrixAlgebra([2, 2]))
    return hom_from_callable(src, tgt, lambda x: [x[0], x[0]])


def projection_hom():
    """(x, lam) -> x from M2 + C onto M2; unital but not injective."""
    src = gns_representation(MultiMatrixAlgebra([2, 1]))
    tgt = gns_representation(MultiMatrixAlgebra([2]))
    return hom_from_callable(src, tgt, lambda x: [x[0]])


def test_identity_hom_on_trivial_algebra():
    # everything here is roundoff-scale; the relation must still be seen
    rep = gns_representation(MultiMatrixAlgebra([1]))
    theta = identity_hom(rep)
    v = relation_of_hom(theta)
    assert v.dim == 1
    z = kernel_projection(theta)
    assert np.allclose(z[0], 1.0)


def test_embedding_round_trip():
    theta = embedding_hom()
    assert theta.unital and theta.hom
    v = relation_of_hom(theta)
    back = hom_of_relation(v)
    assert np.abs(back.action - theta.action).max() < 1e-9
    assert back.recovery_residual < 1e-9


def test_projection_hom_kernel():
    theta = projection_hom()
    z = kernel_projection(theta)
    # the kernel is the scalar summand: theta vanishes exactly on (1 - z) N
    assert np.allclose(z[0], np.eye(2))
    assert np.allclose(z[1], 0.0)


def test_property_dictionary_embedding():
    theta = embedding_hom()
    v = relation_of_hom(theta)
    report = property_dictionary(theta, v)
    assert report["all_ok"]
    assert report["unital"] and report["injective_hom"]
    assert not report["surjective_hom"]
    flags = report["flags"]
    # injective hom <-> surjective relation; image < unit corner <-> not injective
    assert flags["surjective"] and flags["function"]
    assert not flags["injective"]


def test_property_dictionary_projection():
    theta = projection_hom()
    v = relation_of_hom(theta)
    report = property_dictionary(theta, v)
    assert report["all_ok"]
    assert report["unital"] and report["surjective_hom"]
    assert not report["injective_hom"]
    # unital + surjective hom <-> the relation is a function
    assert report["flags"]["function"]


def test_property_dictionary_random(rng):
    for _ in range(5):
        theta = randgen.random_hom(rng)
        v = relation_of_hom(theta)
        report = property_dictionary(theta, v)
        assert report["all_ok"]


def test_relation_of_hom_respects_kernel_support():
    theta = projection_hom()
    v = relation_of_hom(theta)
    z = central_support(v)
    zk = kernel_projection(theta)
    assert max(np.abs(a - b).max() for a, b in zip(z, zk)) < 1e-9


def test_theta_star_involution():
    # the projection hom's relation is injective, so the reverse hom exists
    theta = projection_hom()
    star = theta_star(theta)
    star_star = theta_star(star)
    assert np.abs(star_star.action - theta.action).max() < 1e-9


def test_theta_star_requires_injective_relation():
    # the embedding's relation is not injective (image is a proper corner)
    theta = embedding_hom()
    with pytest.raises(ValidationError):
        theta_star(theta)


def test_hom_of_relation_rejects_non_hom_relation(m2):
    from qrelkit import full_relation
    rep = gns_representation(m2)
    v = full_relation(rep, rep)
    with pytest.raises(ValidationError):
        hom_of_relation(v)

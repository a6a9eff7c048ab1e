import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrelkit import (
    MultiMatrixAlgebra,
    RepresentationIsometry,
    ValidationError,
    adjoint_relation,
    central_support,
    compose_relations,
    from_classical,
    full_relation,
    gns_representation,
    identity_relation,
    make_relation,
    properties,
    relation_blocks,
    sum_spaces,
    to_classical,
    transport,
    zero_relation,
)
from qrelkit import randgen

import functools


def points(n):
    return gns_representation(MultiMatrixAlgebra([1] * n))


def classical(pairs, nx, ny):
    return from_classical(pairs, points(nx), points(ny))


# -- construction and validation --------------------------------------------------


def test_gns_representation_multiplicities(mixed):
    rep = gns_representation(mixed)
    assert tuple(rep.multiplicities) == mixed.blocks
    assert rep.hilbert_dim == 5


def test_make_relation_rejects_non_bimodule(m2):
    rep = gns_representation(m2)
    e11 = np.zeros((4, 4))
    e11[0, 0] = 1.0
    with pytest.raises(ValidationError):
        make_relation(rep, rep, [e11])
    # but closing the generators repairs it
    v = make_relation(rep, rep, [e11], close=True)
    assert v.dim >= 1


def test_units_and_extremes(m2, mixed):
    rep = gns_representation(m2)
    other = gns_representation(mixed)
    ident = identity_relation(rep)
    assert ident.dim == rep.commutant_dim()
    assert zero_relation(rep, other).dim == 0
    assert full_relation(rep, other).dim == rep.hilbert_dim * other.hilbert_dim


def test_identity_is_unit_for_composition(rng):
    alg = randgen.random_algebra(rng, max_blocks=2, max_size=2)
    src = gns_representation(alg)
    tgt = gns_representation(randgen.random_algebra(rng, max_blocks=2, max_size=2))
    v = randgen.random_relation(rng, src, tgt)
    left = compose_relations(v, identity_relation(src))
    right = compose_relations(identity_relation(tgt), v)
    assert left.equals(v) and right.equals(v)


def test_composition_associative(rng):
    reps = [
        gns_representation(randgen.random_algebra(rng, max_blocks=2, max_size=2))
        for _ in range(4)
    ]
    v1 = randgen.random_relation(rng, reps[0], reps[1])
    v2 = randgen.random_relation(rng, reps[1], reps[2])
    v3 = randgen.random_relation(rng, reps[2], reps[3])
    lhs = compose_relations(v3, compose_relations(v2, v1))
    rhs = compose_relations(compose_relations(v3, v2), v1)
    assert lhs.equals(rhs)


def test_composition_needs_matching_middle(rng):
    a = gns_representation(MultiMatrixAlgebra([2]))
    b = gns_representation(MultiMatrixAlgebra([1, 1]))
    v = randgen.random_relation(rng, a, b)
    with pytest.raises(ValidationError):
        compose_relations(v, v)


def test_adjoint_involution_and_antihomomorphism(rng):
    reps = [
        gns_representation(randgen.random_algebra(rng, max_blocks=2, max_size=2))
        for _ in range(3)
    ]
    v = randgen.random_relation(rng, reps[0], reps[1])
    w = randgen.random_relation(rng, reps[1], reps[2])
    assert adjoint_relation(adjoint_relation(v)).equals(v)
    lhs = adjoint_relation(compose_relations(w, v))
    rhs = compose_relations(adjoint_relation(v), adjoint_relation(w))
    assert lhs.equals(rhs)


def test_relation_blocks_reassemble(rng):
    src = gns_representation(MultiMatrixAlgebra([2, 1]))
    tgt = gns_representation(MultiMatrixAlgebra([1, 2]))
    v = randgen.random_relation(rng, src, tgt)
    parts = relation_blocks(v)
    assert set(parts) == {(b, a) for b in range(2) for a in range(2)}
    total = functools.reduce(sum_spaces, parts.values())
    assert total.equals(v.space)


# -- classical relations -----------------------------------------------------------


def classical_flag_oracle(pairs, nx, ny):
    per_x = {x: {y for y, xx in pairs if xx == x} for x in range(nx)}
    per_y = {y: {x for yy, x in pairs if yy == y} for y in range(ny)}
    coinj = all(len(per_x[x]) <= 1 for x in range(nx))
    cosur = all(len(per_x[x]) >= 1 for x in range(nx))
    inj = all(len(per_y[y]) <= 1 for y in range(ny))
    sur = all(len(per_y[y]) >= 1 for y in range(ny))
    return {
        "coinjective": coinj,
        "cosurjective": cosur,
        "injective": inj,
        "surjective": sur,
        "partial_function": coinj,
        "function": coinj and cosur,
    }


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), nx=st.integers(1, 4), ny=st.integers(1, 4))
def test_classical_flags_and_round_trip(seed, nx, ny):
    rng = np.random.default_rng(seed)
    grid = [(y, x) for y in range(ny) for x in range(nx)]
    pairs = sorted(p for p in grid if rng.random() < 0.5)
    if not pairs:
        pairs = [grid[int(rng.integers(len(grid)))]]
    v = classical(pairs, nx, ny)
    assert to_classical(v) == pairs
    got = properties(v).as_dict()
    want = classical_flag_oracle(pairs, nx, ny)
    for key, val in want.items():
        assert bool(got[key]) == val, (key, pairs, nx, ny)


def test_classical_symmetry_and_reflexivity():
    cycle = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]
    flags = properties(classical(cycle, 3, 3)).as_dict()
    assert flags["symmetric"] and flags["reflexive"]
    flags = properties(classical([(0, 1)], 3, 3)).as_dict()
    assert not flags["symmetric"] and not flags["reflexive"]


def test_flags_none_when_not_endomorphic():
    flags = properties(classical([(0, 0)], 2, 3)).as_dict()
    assert flags["symmetric"] is None and flags["reflexive"] is None


def test_to_classical_needs_commutative(rng, m2):
    rep = gns_representation(m2)
    v = identity_relation(rep)
    with pytest.raises(ValidationError):
        to_classical(v)


def test_central_support_of_partial_relation():
    v = classical([(0, 0)], 2, 2)
    z = central_support(v)
    assert np.allclose(z[0], 1.0) and np.allclose(z[1], 0.0)


def test_classical_pair_out_of_range():
    with pytest.raises(ValidationError):
        classical([(2, 0)], 2, 2)


# -- transport across representations ----------------------------------------------


def test_canonical_isometry_requires_same_algebra(m2, mixed):
    with pytest.raises(ValidationError):
        RepresentationIsometry.canonical(
            gns_representation(m2), gns_representation(mixed)
        )


def test_transport_preserves_flags(rng, mixed):
    old = gns_representation(mixed)
    new = randgen.random_representation(rng, mixed)
    v = randgen.random_relation(rng, old, old)
    iso = RepresentationIsometry.canonical(old, new)
    w = transport(v, iso, iso)
    a = properties(v).as_dict()
    b = properties(w).as_dict()
    assert a == b
    back = transport(w, RepresentationIsometry.canonical(new, old),
                     RepresentationIsometry.canonical(new, old))
    assert back.equals(v)

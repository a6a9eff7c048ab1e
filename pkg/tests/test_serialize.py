import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrelkit import Functional, MultiMatrixAlgebra, RepresentedAlgebra, ValidationError
from qrelkit import serialize

finite = st.floats(allow_nan=False, allow_infinity=False, width=32)


@given(re=finite, im=finite)
def test_scalar_round_trip(re, im):
    z = complex(re, im)
    doc = serialize.scalar_to_doc(z)
    assert serialize.scalar_from_doc(doc) == z


def test_scalar_accepts_plain_numbers():
    assert serialize.scalar_from_doc(2) == 2 + 0j
    assert serialize.scalar_from_doc(2.5) == 2.5 + 0j
    with pytest.raises(ValidationError):
        serialize.scalar_from_doc("nope")
    with pytest.raises(ValidationError):
        serialize.scalar_from_doc([1.0])


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), rows=st.integers(1, 4), cols=st.integers(1, 4))
def test_matrix_round_trip(seed, rows, cols):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    back = serialize.matrix_from_doc(serialize.matrix_to_doc(m))
    assert np.abs(back - m).max() == 0.0


def test_matrix_rejects_ragged_rows():
    with pytest.raises(ValidationError):
        serialize.matrix_from_doc([[[1, 0], [0, 0]], [[1, 0]]])


def test_malformed_document_reports_byte_offset():
    with pytest.raises(ValidationError) as err:
        serialize.loads('{"kind": }')
    assert "byte offset 9" in str(err.value)


def test_dumps_is_deterministic_and_sorted():
    doc = {"b": 1, "a": [True, None]}
    text = serialize.dumps(doc)
    assert text == serialize.dumps(doc)
    assert text.index('"a"') < text.index('"b"')


def test_dumps_accepts_numpy_scalars():
    doc = {
        "flag": np.bool_(True),
        "count": np.int64(3),
        "worst": np.float64(0.5),
    }
    parsed = json.loads(serialize.dumps(doc))
    assert parsed == {"flag": True, "count": 3, "worst": 0.5}


def test_algebra_round_trip_markov(mixed):
    doc = serialize.algebra_to_doc(mixed, Functional.markov(mixed))
    assert doc["state"] == "markov_trace"
    alg, phi = serialize.algebra_from_doc(doc)
    assert alg == mixed and phi.is_markov_trace


def test_algebra_round_trip_densities(mixed):
    phi = Functional(mixed, [np.diag([1.0, 2.0]), np.array([[0.5]])])
    doc = serialize.algebra_to_doc(mixed, phi)
    alg, back = serialize.algebra_from_doc(doc)
    assert alg == mixed
    assert max(
        np.abs(a - b).max() for a, b in zip(back.densities, phi.densities)
    ) == 0.0


def test_algebra_doc_validation():
    with pytest.raises(ValidationError):
        serialize.algebra_from_doc({"blocks": "nope"})
    with pytest.raises(ValidationError):
        serialize.algebra_from_doc({"blocks": [2], "state": {"densities": []}})
    with pytest.raises(ValidationError):
        serialize.algebra_from_doc({"blocks": [2], "state": "weird"})


def test_representation_round_trip(mixed):
    rep = RepresentedAlgebra(mixed, [2, 3])
    doc = serialize.representation_to_doc(rep, Functional.markov(mixed))
    back, phi = serialize.representation_from_doc(doc)
    assert back.same_representation(rep)
    assert phi.is_markov_trace


def test_representation_defaults_to_gns_multiplicities(mixed):
    doc = {"blocks": [2, 1]}
    rep, _ = serialize.representation_from_doc(doc)
    assert tuple(rep.multiplicities) == (2, 1)


def test_subspace_doc_parts():
    doc = {"dims": [2, 2], "generators": [[[1, 0], [0, 0]]]}
    (rows, cols), gens = serialize.subspace_doc_parts(doc)
    assert (rows, cols) == (2, 2) and len(gens) == 1
    with pytest.raises(ValidationError):
        serialize.subspace_doc_parts({"dims": [2]})
    with pytest.raises(ValidationError):
        serialize.subspace_doc_parts(
            {"dims": [2, 2], "generators": [[[1, 0]]]}
        )


def test_certificate_shape():
    cert = serialize.certificate("claim", 2, 2, 1e-12)
    assert set(cert) == {"claim", "lhs_dim", "rhs_dim", "residual"}

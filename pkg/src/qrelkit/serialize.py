"""JSON documents for algebras, states, subspaces, relations, and maps.

All complex scalars are serialized as two-element arrays ``[re, im]`` and all
matrices are row-major nested lists of such pairs, so fixtures are
language-neutral and diff-able.  Every reader raises ``ValidationError`` with
a byte offset for malformed JSON and with a field path for malformed content.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ValidationError
from .mvnalg import Functional, MultiMatrixAlgebra, RepresentedAlgebra

__all__ = [
    "loads",
    "dumps",
    "scalar_to_doc",
    "scalar_from_doc",
    "matrix_to_doc",
    "matrix_from_doc",
    "algebra_to_doc",
    "algebra_from_doc",
    "representation_to_doc",
    "representation_from_doc",
    "subspace_doc_parts",
    "certificate",
]


def loads(text: str) -> object:
    """Parse one JSON document; report the byte offset on failure."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"malformed document at byte offset {exc.pos}: {exc.msg}"
        ) from exc


def _coerce(o):
    """json.dumps fallback for numpy scalars."""
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.complexfloating):
        return scalar_to_doc(complex(o))
    raise TypeError(f"Object of type {type(o).__name__} is not JSON serializable")


def dumps(doc: object) -> str:
    """Serialize a document deterministically (sorted keys, no float noise)."""
    return json.dumps(doc, sort_keys=True, separators=(",", ": "), indent=1,
                      default=_coerce)


def scalar_to_doc(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def scalar_from_doc(doc, where: str = "scalar") -> complex:
    if isinstance(doc, (int, float)):
        return complex(doc)
    if (
        isinstance(doc, (list, tuple))
        and len(doc) == 2
        and all(isinstance(t, (int, float)) for t in doc)
    ):
        return complex(doc[0], doc[1])
    raise ValidationError(f"{where}: expected [re, im], got {doc!r}")


def matrix_to_doc(m) -> list:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[scalar_to_doc(z) for z in row] for row in m]


def matrix_from_doc(doc, where: str = "matrix") -> np.ndarray:
    if not isinstance(doc, list) or not doc or not all(isinstance(r, list) for r in doc):
        raise ValidationError(f"{where}: expected a non-empty list of rows")
    width = len(doc[0])
    rows = []
    for i, r in enumerate(doc):
        if len(r) != width:
            raise ValidationError(f"{where}: row {i} has length {len(r)}, expected {width}")
        rows.append([scalar_from_doc(z, f"{where}[{i}]") for z in r])
    return np.asarray(rows, dtype=complex)


def algebra_to_doc(algebra: MultiMatrixAlgebra, functional: Functional | None = None) -> dict:
    doc: dict = {"blocks": list(algebra.blocks)}
    if functional is not None:
        if functional.is_markov_trace:
            doc["state"] = "markov_trace"
        else:
            doc["state"] = {
                "densities": [matrix_to_doc(q) for q in functional.densities]
            }
    return doc


def algebra_from_doc(doc, where: str = "algebra") -> tuple[MultiMatrixAlgebra, Functional]:
    if not isinstance(doc, dict) or "blocks" not in doc:
        raise ValidationError(f"{where}: expected an object with a 'blocks' field")
    blocks = doc["blocks"]
    if not isinstance(blocks, list) or not all(isinstance(n, int) for n in blocks):
        raise ValidationError(f"{where}.blocks: expected a list of ints")
    algebra = MultiMatrixAlgebra(blocks)
    state = doc.get("state", "markov_trace")
    if state == "markov_trace":
        functional = Functional.markov(algebra)
    elif isinstance(state, dict) and "densities" in state:
        dens = state["densities"]
        if not isinstance(dens, list) or len(dens) != len(blocks):
            raise ValidationError(f"{where}.state.densities: expected one matrix per block")
        mats = [matrix_from_doc(d, f"{where}.state.densities[{i}]") for i, d in enumerate(dens)]
        functional = Functional(algebra, mats)
    else:
        raise ValidationError(
            f"{where}.state: expected 'markov_trace' or an object with 'densities'"
        )
    return algebra, functional


def representation_to_doc(
    rep: RepresentedAlgebra, functional: Functional | None = None
) -> dict:
    doc = algebra_to_doc(rep.algebra, functional)
    doc["multiplicities"] = list(rep.multiplicities)
    if np.abs(rep.block_unitary - np.eye(rep.hilbert_dim)).max() > 0:
        doc["block_unitary"] = matrix_to_doc(rep.block_unitary)
    return doc


def representation_from_doc(
    doc, where: str = "representation"
) -> tuple[RepresentedAlgebra, Functional]:
    algebra, functional = algebra_from_doc(doc, where)
    mult = doc.get("multiplicities")
    if mult is None:
        mult = list(algebra.blocks)
    if not isinstance(mult, list) or not all(isinstance(m, int) for m in mult):
        raise ValidationError(f"{where}.multiplicities: expected a list of ints")
    u = doc.get("block_unitary")
    if u is not None:
        u = matrix_from_doc(u, f"{where}.block_unitary")
    rep = RepresentedAlgebra(algebra, mult, u)
    return rep, functional


def subspace_doc_parts(doc, where: str = "subspace") -> tuple[tuple[int, int], list[np.ndarray]]:
    """Read `{ "dims": [d_out, d_in], "generators": [matrix, ...] }`."""
    if not isinstance(doc, dict) or "dims" not in doc:
        raise ValidationError(f"{where}: expected an object with 'dims'")
    dims = doc["dims"]
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and d >= 1 for d in dims)
    ):
        raise ValidationError(f"{where}.dims: expected [d_out, d_in]")
    gens_doc = doc.get("generators", [])
    if not isinstance(gens_doc, list):
        raise ValidationError(f"{where}.generators: expected a list")
    gens = []
    for i, g in enumerate(gens_doc):
        m = matrix_from_doc(g, f"{where}.generators[{i}]")
        if m.shape != (dims[0], dims[1]):
            raise ValidationError(
                f"{where}.generators[{i}]: shape {m.shape}, expected {(dims[0], dims[1])}"
            )
        gens.append(m)
    return (dims[0], dims[1]), gens


def certificate(claim: str, lhs_dim: int, rhs_dim: int, residual: float) -> dict:
    """Machine-readable equality certificate used throughout the reports."""
    return {
        "claim": str(claim),
        "lhs_dim": int(lhs_dim),
        "rhs_dim": int(rhs_dim),
        "residual": float(residual),
    }

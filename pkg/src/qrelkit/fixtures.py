"""Built-in worked examples and counterexamples.

Three constructions with exactly known data, used by the fixture suite and
handy as CLI inputs: a cosurjective relation that no unital channel
realizes, a rank-one positive element whose operator admits no
state-preserving positive multiple, and a small classical channel whose
support relation is known by hand.
"""

from __future__ import annotations

import numpy as np

from . import adjacency, cpmap, qrel
from .mvnalg import Functional, MultiMatrixAlgebra, gns

__all__ = [
    "cosurjective_not_unital_relation",
    "state_obstructed_element",
    "example_channel_kernel",
]


def cosurjective_not_unital_relation() -> qrel.QuantumRelation:
    """A two-dimensional relation on one qubit algebra that is cosurjective
    (1 lies in V* compose V) yet admits no spanning set with
    sum b_i* b_i = 1: the unique Hermitian Gram solution has a negative
    eigenvalue.  u1*u1 - u2*u2 = 1 holds exactly in integers."""
    alg = MultiMatrixAlgebra([2])
    rep = qrel.RepresentedAlgebra(alg, [1])
    u1 = (1.0 / np.sqrt(2.0)) * np.array([[3.0, 2.0], [-3.0, 2.0]])
    u2 = np.diag([np.sqrt(8.0), np.sqrt(3.0)])
    return qrel.make_relation(rep, rep, [u1, u2])


def state_obstructed_element() -> dict:
    """A rank-one positive element of the opposite-tensor algebra over one
    qubit with the trace state whose operator admits no state-preserving
    positive multiple; the partial trace over the first leg has determinant
    exactly 1/8 and distinct eigenvalues."""
    alg = MultiMatrixAlgebra([2])
    space = gns(alg, Functional.markov(alg))
    xi = np.array([0.5, 0.5, 0.5, 0.5j])
    e = np.outer(xi, xi.conj())
    partial = np.einsum("ikil->kl", e.reshape(2, 2, 2, 2))
    x = adjacency.opposite_tensor_from_kron(space, space, e)
    operator = adjacency.psi_prime_inv(x)
    return {
        "space": space,
        "kron_matrix": e,
        "element": x,
        "operator": operator,
        "partial_trace": partial,
    }


def example_channel_kernel() -> np.ndarray:
    """A two-input channel: input 0 maps to output 0 surely, input 1 is
    uniform; the support relation is {(0,0), (0,1), (1,1)}."""
    return np.array([[1.0, 0.0], [0.5, 0.5]])

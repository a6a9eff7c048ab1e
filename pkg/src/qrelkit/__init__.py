"""Executable calculus of quantum relations over multimatrix algebras.

The package models finite-dimensional von Neumann algebras (direct sums of
matrix blocks), operator subspaces between their representations, and the
quantum relations those subspaces form.  It converts between four pictures
of the same data: *-homomorphisms, completely positive maps, bimodule
subspaces, and Schur-idempotent operators on GNS spaces.  Randomized
verification suites exercise every identity the library claims; the CLI
exposes the conversions and the suites over JSON documents.
"""

from .config import VERSION, EQ_TOL, RANK_TOL
from .errors import InternalConsistencyError, ValidationError
from .mvnalg import (
    Functional,
    GNSSpace,
    MultiMatrixAlgebra,
    RepresentedAlgebra,
    gns,
    markov_trace,
    modular_sigma,
    represent,
)
from .opspace import OperatorSubspace, bimodule_generate, intersect, span_of, sum_spaces
from .qrel import (
    QuantumRelation,
    RelationFlags,
    RepresentationIsometry,
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
    to_classical,
    transport,
    zero_relation,
)
from .cpmap import (
    CPMap,
    classical_channel,
    confusability_graph,
    cp_from_callable,
    cp_from_kraus,
    identity_cp,
    make_cp,
    pullback,
    relation_of_cp,
    ucp_realizable_full_target,
)
from .qfunc import (
    Hom,
    hom_from_callable,
    hom_of_relation,
    identity_hom,
    kernel_projection,
    make_hom,
    property_dictionary,
    relation_of_hom,
    theta_star,
)
from .adjacency import (
    GNSOperator,
    adjacency_of_hom,
    adjacency_of_relation,
    classify,
    dagger,
    kms_adjoint,
    psi_prime,
    psi_prime_inv,
    qg_from_cp_construct,
    relation_of_positive,
    schur_product,
    theta_of_adjacency,
    verdon_construct,
)
from .suites import SUITE_NAMES, run_all, run_suite

__version__ = VERSION

__all__ = [
    "VERSION",
    "EQ_TOL",
    "RANK_TOL",
    "InternalConsistencyError",
    "ValidationError",
    "Functional",
    "GNSSpace",
    "MultiMatrixAlgebra",
    "RepresentedAlgebra",
    "gns",
    "markov_trace",
    "modular_sigma",
    "represent",
    "OperatorSubspace",
    "bimodule_generate",
    "intersect",
    "span_of",
    "sum_spaces",
    "QuantumRelation",
    "RelationFlags",
    "RepresentationIsometry",
    "adjoint_relation",
    "central_support",
    "compose_relations",
    "from_classical",
    "full_relation",
    "gns_representation",
    "identity_relation",
    "make_relation",
    "properties",
    "relation_blocks",
    "to_classical",
    "transport",
    "zero_relation",
    "CPMap",
    "classical_channel",
    "confusability_graph",
    "cp_from_callable",
    "cp_from_kraus",
    "identity_cp",
    "make_cp",
    "pullback",
    "relation_of_cp",
    "ucp_realizable_full_target",
    "Hom",
    "hom_from_callable",
    "hom_of_relation",
    "identity_hom",
    "kernel_projection",
    "make_hom",
    "property_dictionary",
    "relation_of_hom",
    "theta_star",
    "GNSOperator",
    "adjacency_of_hom",
    "adjacency_of_relation",
    "classify",
    "dagger",
    "kms_adjoint",
    "psi_prime",
    "psi_prime_inv",
    "qg_from_cp_construct",
    "relation_of_positive",
    "schur_product",
    "theta_of_adjacency",
    "verdon_construct",
    "SUITE_NAMES",
    "run_all",
    "run_suite",
]

"""Quantum relations between represented multimatrix algebras.

A relation from M (on H) to N (on K) is a subspace V of B(H, K) that is a
bimodule over the commutants: N' V M' = V.  This module provides the
category operations (identity, composition, adjoint, transpose), the
function-like property flags, the block decomposition over minimal central
projections, the classical import/export dictionary, and transport of a
relation along intertwining isometries to new representations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import opspace
from .config import eq_tol
from .errors import InternalConsistencyError, ValidationError
from .mvnalg import MultiMatrixAlgebra, RepresentedAlgebra

__all__ = [
    "QuantumRelation",
    "RelationFlags",
    "RepresentationIsometry",
    "make_relation",
    "identity_relation",
    "zero_relation",
    "full_relation",
    "compose_relations",
    "adjoint_relation",
    "transpose_relation",
    "properties",
    "is_symmetric",
    "is_reflexive",
    "central_support",
    "relation_blocks",
    "from_classical",
    "to_classical",
    "transport",
    "is_invertible_pair",
    "gns_representation",
    "commutant_span",
]


def commutant_span(rep: RepresentedAlgebra, tol=None) -> opspace.OperatorSubspace:
    d = rep.hilbert_dim
    return opspace.span_of(rep.commutant_basis(), shape=(d, d), tol=tol)


class QuantumRelation:
    """A concrete quantum relation: source and target representations plus
    the operator subspace, validated to be a commutant bimodule."""

    def __init__(self, source, target, space, check: bool = True, tol=None):
        if not isinstance(source, RepresentedAlgebra) or not isinstance(
            target, RepresentedAlgebra
        ):
            raise ValidationError("source and target must be represented algebras")
        expected = (target.hilbert_dim, source.hilbert_dim)
        if space.shape != expected:
            raise ValidationError(
                f"subspace shape {space.shape} does not match B(H, K) = {expected}"
            )
        self.source = source
        self.target = target
        self.space = space
        if check:
            _check_bimodule(source, target, space, tol)

    @property
    def dim(self) -> int:
        return self.space.dim

    def endomorphic(self) -> bool:
        return self.source.same_representation(self.target)

    def equals(self, other: "QuantumRelation", tol=None) -> bool:
        return (
            self.source.same_representation(other.source)
            and self.target.same_representation(other.target)
            and self.space.equals(other.space, tol)
        )

    def __repr__(self) -> str:
        return (
            f"QuantumRelation(dim={self.space.dim}, "
            f"source={self.source!r}, target={self.target!r})"
        )


def _check_bimodule(source, target, space, tol=None) -> None:
    closed = opspace.bimodule_generate(
        target.commutant_basis(),
        list(space.basis),
        source.commutant_basis(),
        shape=space.shape,
        tol=tol,
    )
    if closed.equals(space, tol):
        return
    worst = 0.0
    witness = None
    p = space.projection()
    for a in target.commutant_basis():
        for g in space.basis:
            for b in source.commutant_basis():
                t = a @ g @ b
                v = t.reshape(-1)
                resid = float(np.linalg.norm(v - p @ v))
                if resid > worst:
                    worst = resid
                    witness = "commutant product escapes the span"
    raise ValidationError(
        f"generators do not span a commutant bimodule: {witness} "
        f"(largest residual {worst:.3e}; closure has dim {closed.dim}, "
        f"input dim {space.dim})"
    )


def make_relation(source, target, generators, close: bool = False, tol=None) -> QuantumRelation:
    """Build a relation from generating operators H_source -> H_target.

    With ``close`` the generators are expanded to the bimodule they
    generate; otherwise the bimodule property is verified and violations are
    rejected with the largest escaping residual.
    """
    shape = (target.hilbert_dim, source.hilbert_dim)
    for g in generators:
        g = np.asarray(g)
        if g.shape != shape:
            raise ValidationError(f"generator shaped {g.shape}, expected {shape}")
    if close:
        space = opspace.bimodule_generate(
            target.commutant_basis(),
            list(generators),
            source.commutant_basis(),
            shape=shape,
            tol=tol,
        )
        return QuantumRelation(source, target, space, check=False)
    space = opspace.span_of(list(generators), shape=shape, tol=tol)
    return QuantumRelation(source, target, space, check=True, tol=tol)


def identity_relation(rep: RepresentedAlgebra, tol=None) -> QuantumRelation:
    """The identity morphism on M: the commutant M' itself."""
    return QuantumRelation(rep, rep, commutant_span(rep, tol), check=False)


def zero_relation(source, target) -> QuantumRelation:
    shape = (target.hilbert_dim, source.hilbert_dim)
    return QuantumRelation(source, target, opspace.zero_space(shape), check=False)


def full_relation(source, target) -> QuantumRelation:
    shape = (target.hilbert_dim, source.hilbert_dim)
    return QuantumRelation(source, target, opspace.full_space(shape), check=False)


def compose_relations(v: QuantumRelation, w: QuantumRelation, tol=None) -> QuantumRelation:
    """Composite relation: first w, then v (operator products v @ w)."""
    if not v.source.same_representation(w.target):
        raise ValidationError(
            "relations are not composable: v.source must equal w.target"
        )
    space = opspace.compose_spaces(v.space, w.space, tol=tol)
    return QuantumRelation(w.source, v.target, space, check=False)


def adjoint_relation(v: QuantumRelation, tol=None) -> QuantumRelation:
    return QuantumRelation(
        v.target, v.source, opspace.adjoint_space(v.space, tol=tol), check=False
    )


def _opposite_rep(rep: RepresentedAlgebra) -> RepresentedAlgebra:
    """Representation of the opposite algebra by transposed embeddings.

    Opposite elements are stored as blockwise transposes, which turns
    reversed multiplication into plain matrix multiplication, so the
    opposite algebra reuses the multimatrix machinery with a conjugated
    block unitary: embed_op(x^T-blocks) = embed(x)^T.
    """
    return RepresentedAlgebra(
        rep.algebra.opposite(), rep.multiplicities, np.conj(rep.block_unitary)
    )


def transpose_relation(v: QuantumRelation, tol=None) -> QuantumRelation:
    """Entrywise transpose; lands between the opposite algebras."""
    return QuantumRelation(
        _opposite_rep(v.target),
        _opposite_rep(v.source),
        opspace.transpose_space(v.space, tol=tol),
        check=False,
    )


@dataclass(frozen=True)
class RelationFlags:
    """Function-like properties of a relation.  ``symmetric`` and
    ``reflexive`` are None unless source and target coincide."""

    coinjective: bool
    cosurjective: bool
    injective: bool
    surjective: bool
    partial_function: bool
    function: bool
    symmetric: bool | None
    reflexive: bool | None

    def as_dict(self) -> dict:
        return {
            "coinjective": self.coinjective,
            "cosurjective": self.cosurjective,
            "injective": self.injective,
            "surjective": self.surjective,
            "partial_function": self.partial_function,
            "function": self.function,
            "symmetric": self.symmetric,
            "reflexive": self.reflexive,
        }


def properties(v: QuantumRelation, tol=None) -> RelationFlags:
    """Compute all flags by subspace comparison.

    coinjective: V V* inside N'; cosurjective: V* V contains M';
    injective: V* V inside M'; surjective: V V* contains N';
    a partial function is a coinjective relation and a function is a
    coinjective and cosurjective one.
    """
    nc = commutant_span(v.target, tol)
    mc = commutant_span(v.source, tol)
    vs = opspace.adjoint_space(v.space, tol=tol)
    vvs = opspace.compose_spaces(v.space, vs, tol=tol)
    vsv = opspace.compose_spaces(vs, v.space, tol=tol)
    coinjective = vvs.subset_of(nc, tol)
    cosurjective = mc.subset_of(vsv, tol)
    injective = vsv.subset_of(mc, tol)
    surjective = nc.subset_of(vvs, tol)
    symmetric = reflexive = None
    if v.endomorphic():
        symmetric = bool(vs.equals(v.space, tol))
        reflexive = bool(v.space.contains(np.eye(v.target.hilbert_dim), tol))
    return RelationFlags(
        coinjective=coinjective,
        cosurjective=cosurjective,
        injective=injective,
        surjective=surjective,
        partial_function=coinjective,
        function=coinjective and cosurjective,
        symmetric=symmetric,
        reflexive=reflexive,
    )


def is_symmetric(v: QuantumRelation, tol=None) -> bool:
    if not v.endomorphic():
        raise ValidationError("symmetry requires source and target to coincide")
    return opspace.adjoint_space(v.space, tol=tol).equals(v.space, tol)


def is_reflexive(v: QuantumRelation, tol=None) -> bool:
    if not v.endomorphic():
        raise ValidationError("reflexivity requires source and target to coincide")
    return v.space.contains(np.eye(v.target.hilbert_dim), tol)


def central_support(v: QuantumRelation, tol=None) -> list[np.ndarray]:
    """For coinjective V, the unique central projection z of the target
    algebra with V V* = z N' (as subspaces); returned as an element of N."""
    flags = properties(v, tol)
    if not flags.coinjective:
        raise ValidationError("central support requires a coinjective relation")
    target = v.target
    vs = opspace.adjoint_space(v.space, tol=tol)
    vvs = opspace.compose_spaces(v.space, vs, tol=tol)
    hit = []
    for alpha in range(len(target.algebra.blocks)):
        p = target.central_projection_matrix(alpha)
        nonzero = any(
            np.abs(p @ b).max() > eq_tol(tol) for b in vvs.basis
        )
        hit.append(nonzero)
    z = target.algebra.zero()
    for alpha, on in enumerate(hit):
        if on:
            z[alpha] = np.eye(target.algebra.blocks[alpha], dtype=complex)
    zp = target.embed(z)
    ideal = opspace.span_of(
        [zp @ c for c in target.commutant_basis()],
        shape=(target.hilbert_dim, target.hilbert_dim),
        tol=tol,
    )
    if not ideal.equals(vvs, tol):
        raise InternalConsistencyError(
            "V V* is not the expected central ideal "
            f"(dims {vvs.dim} vs {ideal.dim}); bimodule bookkeeping is broken"
        )
    return z


def relation_blocks(v: QuantumRelation, tol=None) -> dict:
    """Components 1_beta V 1_alpha over pairs of minimal central projections;
    keys are (target_block, source_block)."""
    out = {}
    for beta in range(len(v.target.algebra.blocks)):
        pb = v.target.central_projection_matrix(beta)
        for alpha in range(len(v.source.algebra.blocks)):
            pa = v.source.central_projection_matrix(alpha)
            comp = opspace.span_of(
                [pb @ b @ pa for b in v.space.basis],
                shape=v.space.shape,
                tol=tol,
            )
            out[(beta, alpha)] = comp
    return out


def _require_commutative(rep: RepresentedAlgebra, name: str) -> None:
    if any(n != 1 for n in rep.algebra.blocks):
        raise ValidationError(f"{name} must be commutative (all blocks of size 1)")


def from_classical(pairs, source, target, tol=None) -> QuantumRelation:
    """Import a set relation R as pairs (y, x) over commutative algebras:
    the span of the full (y, x) corner blocks."""
    _require_commutative(source, "source algebra")
    _require_commutative(target, "target algebra")
    ms = source.multiplicities
    mt = target.multiplicities
    offs_s = np.concatenate([[0], np.cumsum(ms)])
    offs_t = np.concatenate([[0], np.cumsum(mt)])
    gens = []
    for (y, x) in pairs:
        y, x = int(y), int(x)
        if not (0 <= y < len(mt)) or not (0 <= x < len(ms)):
            raise ValidationError(f"pair ({y}, {x}) out of range")
        for a in range(mt[y]):
            for b in range(ms[x]):
                g = np.zeros((target.hilbert_dim, source.hilbert_dim), dtype=complex)
                g[offs_t[y] + a, offs_s[x] + b] = 1.0
                gens.append(
                    target.block_unitary.conj().T @ g @ source.block_unitary
                )
    if not gens:
        return zero_relation(source, target)
    return make_relation(source, target, gens, close=False, tol=tol)


def to_classical(v: QuantumRelation, tol=None) -> list[tuple[int, int]]:
    """Export a relation over commutative algebras as its set of pairs
    (y, x); each corner component must be full or zero."""
    _require_commutative(v.source, "source algebra")
    _require_commutative(v.target, "target algebra")
    comps = relation_blocks(v, tol)
    pairs = []
    for (beta, alpha), comp in sorted(comps.items()):
        full_dim = v.target.multiplicities[beta] * v.source.multiplicities[alpha]
        if comp.dim == 0:
            continue
        if comp.dim != full_dim:
            raise InternalConsistencyError(
                f"corner ({beta}, {alpha}) has dimension {comp.dim}, "
                f"expected 0 or {full_dim}; not a classical relation"
            )
        pairs.append((beta, alpha))
    return pairs


class RepresentationIsometry:
    """An intertwining isometry u: H_new -> H_old (x) C^ell between two
    representations of the same algebra, used to transport relations."""

    def __init__(self, old_rep, new_rep, matrix, ell: int, check: bool = True):
        if old_rep.algebra != new_rep.algebra:
            raise ValidationError("isometry must connect representations of one algebra")
        self.old_rep = old_rep
        self.new_rep = new_rep
        self.ell = int(ell)
        u = np.asarray(matrix, dtype=complex)
        want = (old_rep.hilbert_dim * self.ell, new_rep.hilbert_dim)
        if u.shape != want:
            raise ValidationError(f"isometry shaped {u.shape}, expected {want}")
        self.matrix = u
        if check:
            gram = u.conj().T @ u
            if np.abs(gram - np.eye(new_rep.hilbert_dim)).max() > 1e-9:
                raise ValidationError("matrix is not an isometry (u^dag u != 1)")
            eye_l = np.eye(self.ell)
            for x in new_rep.algebra.unit_basis():
                lhs = u @ new_rep.embed(x)
                rhs = np.kron(old_rep.embed(x), eye_l) @ u
                if np.abs(lhs - rhs).max() > 1e-9:
                    raise ValidationError(
                        "isometry does not intertwine the two representations"
                    )

    @classmethod
    def canonical(cls, old_rep, new_rep) -> "RepresentationIsometry":
        """The standard choice: per block, pad the multiplicity leg of the
        new representation into as many copies of the old one as needed."""
        if old_rep.algebra != new_rep.algebra:
            raise ValidationError("isometry must connect representations of one algebra")
        blocks = old_rep.algebra.blocks
        ell = 1
        for mo, mn in zip(old_rep.multiplicities, new_rep.multiplicities):
            ell = max(ell, -(-mn // mo))
        parts = []
        for n, mo, mn in zip(blocks, old_rep.multiplicities, new_rep.multiplicities):
            iso = np.zeros((mo * ell, mn), dtype=complex)
            iso[:mn, :] = np.eye(mn)
            parts.append(np.kron(np.eye(n), iso))
        d_old = old_rep.hilbert_dim
        d_new = new_rep.hilbert_dim
        b = np.zeros((d_old * ell, d_new), dtype=complex)
        r = c = 0
        for p in parts:
            b[r : r + p.shape[0], c : c + p.shape[1]] = p
            r += p.shape[0]
            c += p.shape[1]
        u = np.kron(old_rep.block_unitary.conj().T, np.eye(ell)) @ b @ new_rep.block_unitary
        return cls(old_rep, new_rep, u, ell)


def transport(
    v: QuantumRelation,
    iso_source: RepresentationIsometry,
    iso_target: RepresentationIsometry,
    tol=None,
) -> QuantumRelation:
    """Move a relation to new representations of the same algebras:
    the span of u_N^dag (v (x) E) u_M over basis operators E of the
    auxiliary-leg space.  Flags are representation-independent, which the
    suites verify by recomputing them after transport."""
    if not iso_source.old_rep.same_representation(v.source):
        raise ValidationError("source isometry does not start at V's source")
    if not iso_target.old_rep.same_representation(v.target):
        raise ValidationError("target isometry does not start at V's target")
    um = iso_source.matrix
    un = iso_target.matrix
    ls, lt = iso_source.ell, iso_target.ell
    gens = []
    for b in v.space.basis:
        for k in range(lt):
            for l in range(ls):
                e = np.zeros((lt, ls))
                e[k, l] = 1.0
                gens.append(un.conj().T @ np.kron(b, e) @ um)
    space = opspace.span_of(
        gens,
        shape=(iso_target.new_rep.hilbert_dim, iso_source.new_rep.hilbert_dim),
        tol=tol,
    )
    try:
        return QuantumRelation(
            iso_source.new_rep, iso_target.new_rep, space, check=True, tol=tol
        )
    except ValidationError as exc:
        raise InternalConsistencyError(
            f"transported space is not a bimodule: {exc}"
        ) from exc


def is_invertible_pair(u: QuantumRelation, v: QuantumRelation, tol=None) -> bool:
    """True iff v after u is the identity on u's source and u after v is the
    identity on u's target.  When true and u is a partial function, u's
    adjoint must coincide with v, which is asserted."""
    if not (
        u.source.same_representation(v.target)
        and u.target.same_representation(v.source)
    ):
        return False
    vu = compose_relations(v, u, tol)
    uv = compose_relations(u, v, tol)
    ok = vu.equals(identity_relation(u.source, tol), tol) and uv.equals(
        identity_relation(u.target, tol), tol
    )
    if ok and properties(u, tol).coinjective:
        if not adjoint_relation(u, tol).equals(v, tol):
            raise InternalConsistencyError(
                "invertible partial function whose inverse is not its adjoint"
            )
    return ok


def gns_representation(algebra: MultiMatrixAlgebra) -> RepresentedAlgebra:
    """The representation by left multiplication on the inner-product space
    of the algebra (multiplicity n(a) per block, identity block unitary)."""
    return RepresentedAlgebra(algebra, algebra.blocks)

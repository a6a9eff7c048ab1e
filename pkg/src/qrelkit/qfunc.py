"""Normal *-homomorphisms and their bijection with coinjective relations.

A hom theta: N -> M determines the relation
V = {v : y v = v theta(y) for all y in N}, computed here as a nullspace;
conversely every coinjective relation arises this way, and this module
recovers the hom by least squares with residual certificates.  The
surrounding dictionary (unital <-> function, kernel <-> central support,
the adjoint hom of an injective coinjective relation) is made executable.
"""

from __future__ import annotations

import numpy as np

from . import opspace, qrel
from .config import eq_tol
from .cpmap import CPMap, make_cp
from .errors import InternalConsistencyError, ValidationError
from .mvnalg import RepresentedAlgebra

__all__ = [
    "Hom",
    "make_hom",
    "hom_from_callable",
    "identity_hom",
    "relation_of_hom",
    "hom_of_relation",
    "property_dictionary",
    "theta_star",
    "kernel_projection",
]


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


class Hom(CPMap):
    """A CP map validated to be multiplicative and star-preserving.

    Caches the unit image e = theta(1) and the central kernel projection z
    (theta vanishes exactly on (1-z)N).
    """

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        if not self.hom:
            raise ValidationError("action is not multiplicative / star-preserving")
        self.unit_image = self.apply(self.source.identity())
        self._z: list[np.ndarray] | None = None

    @property
    def z(self) -> list[np.ndarray]:
        if self._z is None:
            self._z = kernel_projection(self)
        return self._z


def make_hom(source_rep, target_rep, action, **kw) -> Hom:
    return Hom(source_rep, target_rep, action, **kw)


def hom_from_callable(source_rep, target_rep, fn, **kw) -> Hom:
    src = source_rep.algebra
    tgt = target_rep.algebra
    cols = [tgt.coords(fn(u)) for u in src.unit_basis()]
    return Hom(source_rep, target_rep, np.stack(cols, axis=1), **kw)


def identity_hom(rep: RepresentedAlgebra, **kw) -> Hom:
    return Hom(rep, rep, np.eye(rep.algebra.alg_dim), **kw)


def relation_of_hom(theta: CPMap, tol=None) -> qrel.QuantumRelation:
    """V^theta = the intertwiner space {v : y v = v theta(y)}, a relation
    from the target algebra to the source one; always coinjective."""
    if not theta.hom:
        raise ValidationError("relation_of_hom requires a homomorphism")
    nrep = theta.source_rep
    mrep = theta.target_rep
    dk = nrep.hilbert_dim
    dh = mrep.hilbert_dim
    rows = []
    eye_k = np.eye(dk)
    eye_h = np.eye(dh)
    for y in theta.source.unit_basis():
        a = nrep.embed(y)
        b = mrep.embed(theta.apply(y))
        rows.append(np.kron(a, eye_h) - np.kron(eye_k, b.T))
    stacked = np.vstack(rows)
    _, s, vh = np.linalg.svd(stacked)
    cut = 1e-10 * max(1.0, s[0] if s.size else 0.0)
    null_rows = vh[s <= cut].conj()
    extra = vh[s.size :].conj()
    if extra.size:
        null_rows = np.vstack([null_rows, extra])
    k = null_rows.shape[0]
    space = opspace.OperatorSubspace(
        null_rows.reshape(k, dk, dh), (dk, dh), eq_tol(tol)
    )
    try:
        v = qrel.QuantumRelation(mrep, nrep, space, check=True, tol=tol)
    except ValidationError as exc:
        raise InternalConsistencyError(
            f"intertwiner space is not a bimodule: {exc}"
        ) from exc
    if not qrel.properties(v, tol).coinjective:
        raise InternalConsistencyError(
            "relation of a homomorphism failed to be coinjective"
        )
    return v


def hom_of_relation(v: qrel.QuantumRelation, tol=None) -> Hom:
    """Recover the homomorphism of a coinjective relation.

    The unit image e is the projection onto the joint range of the adjoint
    basis; theta(y) is the least-squares solution of theta(y) v^dag = v^dag y
    constrained to the corner e B(H) e, with the residual kept as a
    certificate on the returned hom.  The round trip back to the relation is
    verified.
    """
    t = eq_tol(tol)
    if not qrel.properties(v, tol).coinjective:
        raise ValidationError("hom recovery requires a coinjective relation")
    mrep = v.source
    nrep = v.target
    dh = mrep.hilbert_dim
    if v.space.dim == 0:
        action = np.zeros((mrep.algebra.alg_dim, nrep.algebra.alg_dim))
        out = Hom(nrep, mrep, action, tol=tol)
        out.recovery_residual = 0.0
        return out

    cols = [b.conj().T[:, k] for b in v.space.basis for k in range(b.shape[0])]
    stacked = np.stack(cols)
    _, s, vh = np.linalg.svd(stacked, full_matrices=False)
    cut = 1e-10 * max(1.0, s[0] if s.size else 0.0)
    onb = vh[: int((s > cut).sum())]
    e = onb.T @ onb.conj()

    eye = np.eye(dh)
    corner = np.kron(eye, eye) - np.kron(e, e.T)
    basis = list(v.space.basis)
    cols_out = []
    worst = 0.0
    for y in nrep.algebra.unit_basis():
        ey = nrep.embed(y)
        lhs_rows = [np.kron(eye, b.conj()) for b in basis]
        rhs_rows = [_vec(b.conj().T @ ey) for b in basis]
        a_sys = np.vstack(lhs_rows + [corner])
        b_sys = np.concatenate(rhs_rows + [np.zeros(dh * dh)])
        sol, *_ = np.linalg.lstsq(a_sys, b_sys, rcond=None)
        resid = float(np.abs(a_sys @ sol - b_sys).max())
        worst = max(worst, resid)
        if resid > 10 * t:
            raise InternalConsistencyError(
                f"hom recovery system inconsistent (residual {resid:.3e}) "
                "for a coinjective relation"
            )
        x = sol.reshape(dh, dh)
        cols_out.append(mrep.algebra.coords(mrep.unembed(x, tol=10 * t)))
    action = np.stack(cols_out, axis=1)
    out = Hom(nrep, mrep, action, tol=tol)
    out.recovery_residual = worst
    back = relation_of_hom(out, tol)
    if not back.equals(v, tol):
        raise InternalConsistencyError(
            "recovered homomorphism does not reproduce the relation "
            f"(dims {back.dim} vs {v.dim})"
        )
    return out


def _image_commutant(theta: CPMap, tol=None) -> opspace.OperatorSubspace:
    """Commutant of the image theta(N) inside all operators on H."""
    mrep = theta.target_rep
    dh = mrep.hilbert_dim
    eye = np.eye(dh)
    rows = []
    for y in theta.source.unit_basis():
        b = mrep.embed(theta.apply(y))
        rows.append(np.kron(b, eye) - np.kron(eye, b.T))
    stacked = np.vstack(rows)
    _, s, vh = np.linalg.svd(stacked)
    cut = 1e-10 * max(1.0, s[0] if s.size else 0.0)
    null_rows = vh[s <= cut].conj()
    k = null_rows.shape[0]
    return opspace.OperatorSubspace(null_rows.reshape(k, dh, dh), (dh, dh), eq_tol(tol))


def property_dictionary(theta: Hom, v: qrel.QuantumRelation | None = None, tol=None) -> dict:
    """Verify the hom/relation dictionary and return a machine-readable report.

    Items: (1) unital <-> function; (2) injective hom <-> surjective
    relation; (3) injective relation <-> theta(1) central and
    theta(N) = theta(1)M; (4) for unital theta, surjective hom <-> injective
    relation.  Also checks that V* compose V equals theta(1) theta(N)'.
    """
    if v is None:
        v = relation_of_hom(theta, tol)
    flags = qrel.properties(v, tol)
    mrep = theta.target_rep

    action_rank = np.linalg.matrix_rank(theta.action, tol=1e-9)
    injective_hom = action_rank == theta.source.alg_dim
    surjective_hom = action_rank == theta.target.alg_dim

    e = mrep.embed(theta.unit_image)
    central = all(
        np.abs(e @ c - c @ e).max() <= eq_tol(tol)
        for c in [mrep.embed(u) for u in theta.target.unit_basis()]
    )
    image = opspace.span_of(
        [mrep.embed(theta.apply(u)) for u in theta.source.unit_basis()],
        shape=e.shape,
        tol=tol,
    )
    corner = opspace.span_of(
        [e @ mrep.embed(u) for u in theta.target.unit_basis()],
        shape=e.shape,
        tol=tol,
    )
    image_is_corner = image.equals(corner, tol)

    lhs = qrel.compose_relations(qrel.adjoint_relation(v, tol), v, tol).space
    com = _image_commutant(theta, tol)
    rhs = opspace.span_of([e @ c for c in com.basis], shape=e.shape, tol=tol)
    com_image_ok = lhs.equals(rhs, tol)

    report = {
        "unital": theta.unital,
        "flags": flags.as_dict(),
        "injective_hom": bool(injective_hom),
        "surjective_hom": bool(surjective_hom),
        "unit_image_central": bool(central),
        "image_equals_unit_corner": bool(image_is_corner),
        "item1_unital_iff_function": theta.unital == flags.function,
        "item2_injective_iff_surjective": bool(injective_hom) == flags.surjective,
        "item3_injective_relation_iff_corner": flags.injective
        == (central and image_is_corner),
        "item4_function_surjective_iff_injective": (not theta.unital)
        or (bool(surjective_hom) == flags.injective),
        "unit_corner_commutant_equals_vstar_v": com_image_ok,
    }
    report["all_ok"] = all(
        report[k]
        for k in (
            "item1_unital_iff_function",
            "item2_injective_iff_surjective",
            "item3_injective_relation_iff_corner",
            "item4_function_surjective_iff_injective",
            "unit_corner_commutant_equals_vstar_v",
        )
    )
    return report


def theta_star(theta: Hom, tol=None) -> Hom:
    """The reverse hom x -> theta^{-1}(theta(1) x) of a hom whose relation
    is injective as well as coinjective; its relation is the adjoint."""
    t = eq_tol(tol)
    v = relation_of_hom(theta, tol)
    flags = qrel.properties(v, tol)
    if not flags.injective:
        raise ValidationError("reverse hom needs an injective relation")
    mrep = theta.target_rep
    nrep = theta.source_rep
    e = theta.unit_image
    cols = []
    for x in mrep.algebra.unit_basis():
        b = mrep.algebra.mul(e, x)
        ycoords, *_ = np.linalg.lstsq(
            theta.action, mrep.algebra.coords(b), rcond=None
        )
        resid = float(np.abs(theta.action @ ycoords - mrep.algebra.coords(b)).max())
        if resid > 10 * t:
            raise InternalConsistencyError(
                f"theta(1)x is not in the image of theta (residual {resid:.3e})"
            )
        cols.append(ycoords)
    out = Hom(mrep, nrep, np.stack(cols, axis=1), tol=tol)
    back = relation_of_hom(out, tol)
    if not back.equals(qrel.adjoint_relation(v, tol), tol):
        raise InternalConsistencyError(
            "reverse hom does not realize the adjoint relation"
        )
    return out


def kernel_projection(theta: CPMap, tol=None) -> list[np.ndarray]:
    """The central projection z with ker(theta) = (1-z)N, computed as the
    central support of the hom's relation and cross-checked against the
    nullspace of the action matrix."""
    if not theta.hom:
        raise ValidationError("kernel projection requires a homomorphism")
    v = relation_of_hom(theta, tol)
    z = qrel.central_support(v, tol)
    n = theta.source
    one_minus = n.sub(n.identity(), z)
    kernel_basis = []
    for u in n.unit_basis():
        w = n.mul(one_minus, n.mul(u, one_minus))
        kernel_basis.append(n.coords(w))
    proj_kernel = opspace.span_of(
        [c.reshape(1, -1) for c in kernel_basis], shape=(1, n.alg_dim), tol=tol
    )
    _, s, vh = np.linalg.svd(theta.action)
    cut = 1e-10 * max(1.0, s[0] if s.size else 0.0)
    null_rows = vh[sum(s > cut) :].conj()
    action_kernel = opspace.span_of(
        [r.reshape(1, -1) for r in null_rows], shape=(1, n.alg_dim), tol=tol
    )
    if not proj_kernel.equals(action_kernel, tol):
        raise InternalConsistencyError(
            "central support does not match the kernel of the action "
            f"(dims {proj_kernel.dim} vs {action_kernel.dim})"
        )
    return z

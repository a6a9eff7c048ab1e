"""Schur calculus on GNS spaces and the relation/operator correspondence.

Operators between the GNS spaces of two algebras with states carry a second
product (the Schur product), an involution (the dagger), and a linear
bijection onto the algebra generated by left multiplications of the target
and twisted right multiplications of the source.  Under this bijection,
completely positive Schur-idempotent operators correspond to projections,
and those projections correspond to quantum relations.  This module
implements the bijection in both directions, the classification flags, the
modular (KMS) adjoint, a coinjectivity test, the adjacency operator of a
*-homomorphism, and the constructions that realize symmetric relations as
confusability graphs of (U)CP maps.
"""

from __future__ import annotations

import numpy as np

from .config import eq_tol, RANK_TOL
from .errors import ValidationError, InternalConsistencyError
from .mvnalg import (
    Functional,
    GNSSpace,
    MultiMatrixAlgebra,
    RepresentedAlgebra,
    gns,
    represent,
)
from . import opspace
from . import qrel
from . import cpmap as cp
from .qfunc import Hom, make_hom, relation_of_hom
from .serialize import certificate


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


def _unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(rows, cols)


class GNSOperator:
    """A linear operator between two GNS spaces, stored as a matrix in the
    canonical coordinates.  `apply` gives the induced map on algebra
    elements: apply(x) = c_target^{-1}(matrix @ c_source(x))."""

    def __init__(self, source: GNSSpace, target: GNSSpace, matrix):
        self.source = source
        self.target = target
        matrix = np.asarray(matrix, dtype=complex)
        want = (target.dim, source.dim)
        if matrix.shape != want:
            raise ValidationError(f"matrix shaped {matrix.shape}, expected {want}")
        self.matrix = matrix

    def apply(self, x) -> list[np.ndarray]:
        return self.target.inv_coords(self.matrix @ self.source.coords(x))

    def same_spaces(self, other: "GNSOperator") -> bool:
        return (
            self.source.algebra == other.source.algebra
            and self.target.algebra == other.target.algebra
            and all(
                np.array_equal(a, b)
                for a, b in zip(
                    self.source.functional.densities, other.source.functional.densities
                )
            )
            and all(
                np.array_equal(a, b)
                for a, b in zip(
                    self.target.functional.densities, other.target.functional.densities
                )
            )
        )

    def __repr__(self) -> str:
        return f"GNSOperator({self.source.dim} -> {self.target.dim})"


class OppositeTensorElement:
    """An operator on (target GNS space) tensor (conjugate source GNS space)
    that lies in the algebra spanned by L(x) kron L(sigma_{i/2}(y)*)^T.  The
    matrix uses the row-major identification of rank-ones with kron."""

    def __init__(self, source: GNSSpace, target: GNSSpace, matrix):
        self.source = source
        self.target = target
        matrix = np.asarray(matrix, dtype=complex)
        d = target.dim * source.dim
        if matrix.shape != (d, d):
            raise ValidationError(f"matrix shaped {matrix.shape}, expected {(d, d)}")
        self.matrix = matrix

    def __repr__(self) -> str:
        return f"OppositeTensorElement(dim={self.matrix.shape[0]})"


def identity_gns(space: GNSSpace) -> GNSOperator:
    return GNSOperator(space, space, np.eye(space.dim))


def compose_gns(a2: GNSOperator, a1: GNSOperator) -> GNSOperator:
    if a2.source.algebra != a1.target.algebra:
        raise ValidationError("composition needs matching middle algebra")
    return GNSOperator(a1.source, a2.target, a2.matrix @ a1.matrix)


def gns_hat(source: GNSSpace, target: GNSSpace, fn) -> GNSOperator:
    """The GNS matrix of an algebra map: columns are the coordinates of the
    images of the coordinate elements."""
    cols = [target.coords(fn(b)) for b in source.coordinate_elements()]
    return GNSOperator(source, target, np.stack(cols, axis=1))


def hat_of_cp(theta: cp.CPMap, source: GNSSpace, target: GNSSpace) -> GNSOperator:
    if theta.source != source.algebra or theta.target != target.algebra:
        raise ValidationError("map does not match the given spaces")
    return gns_hat(source, target, theta.apply)


# -- multiplication map and the Schur product --------------------------------


def mult_maps(space: GNSSpace) -> tuple[np.ndarray, np.ndarray]:
    """The multiplication map m: L2 kron L2 -> L2, c(x) kron c(y) -> c(xy),
    and its adjoint.  Under the Markov trace m m* = 1."""
    alg = space.algebra
    d = space.dim
    elems = space.coordinate_elements()
    m = np.zeros((d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            m[:, a * d + b] = space.coords(alg.mul(elems[a], elems[b]))
    return m, m.conj().T


def schur_product(a: GNSOperator, b: GNSOperator, tol=None) -> GNSOperator:
    """The product m_target (a kron b) m_source*; generalizes the entrywise
    matrix product."""
    if not a.same_spaces(b):
        raise ValidationError("Schur product needs operators between the same spaces")
    m_t, _ = mult_maps(a.target)
    _, ms_s = mult_maps(a.source)
    return GNSOperator(a.source, a.target, m_t @ np.kron(a.matrix, b.matrix) @ ms_s)


def dagger(a: GNSOperator) -> GNSOperator:
    """The involution x -> a(x*)* applied through the coordinates."""
    src, tgt = a.source, a.target
    cols = []
    for b in src.coordinate_elements():
        img = a.apply(src.algebra.star(b))
        cols.append(tgt.coords(tgt.algebra.star(img)))
    return GNSOperator(src, tgt, np.stack(cols, axis=1))


# -- the bijection with the opposite-tensor algebra ---------------------------


def _twisted_right_factors(space: GNSSpace) -> list[np.ndarray]:
    """For each coordinate element b of the source, the matrix
    L(sigma_{i/2}(b)*)^T acting on the conjugate GNS space."""
    out = []
    for b in space.coordinate_elements():
        s = space.sigma(0.5j, b)
        out.append(space.left_action(space.algebra.star(s)).T)
    return out


def psi_prime(a: GNSOperator) -> OppositeTensorElement:
    """Send a GNS operator to its image in the opposite-tensor algebra.  On
    rank-ones: |c(x)><c(y)| maps to L(x) kron L(sigma_{i/2}(y)*)^T."""
    src, tgt = a.source, a.target
    rs = _twisted_right_factors(src)
    big = np.zeros((tgt.dim * src.dim, tgt.dim * src.dim), dtype=complex)
    for k in range(src.dim):
        xk = tgt.inv_coords(a.matrix[:, k])
        big += np.kron(tgt.left_action(xk), rs[k])
    return OppositeTensorElement(src, tgt, big)


def psi_prime_inv(x: OppositeTensorElement, tol=None) -> GNSOperator:
    """Invert psi_prime by solving the factorized Gram system; rejects input
    outside the opposite-tensor algebra via the reconstruction residual."""
    t = eq_tol(tol)
    src, tgt = x.source, x.target
    dn, dm = tgt.dim, src.dim
    ls = np.stack([tgt.left_action(b) for b in tgt.coordinate_elements()])
    rs = np.stack(_twisted_right_factors(src))
    p = np.einsum("kab,lab->kl", ls.conj(), ls)
    s = np.einsum("kab,lab->kl", rs.conj(), rs)
    x4 = x.matrix.reshape(dn, dm, dn, dm)
    z = np.einsum("kab,aubv->kuv", ls.conj(), x4)
    beta = np.einsum("luv,kuv->kl", rs.conj(), z)
    coeff = np.linalg.solve(np.kron(p, s), beta.reshape(-1))
    a = GNSOperator(src, tgt, coeff.reshape(dn, dm))
    back = psi_prime(a)
    scale = max(1.0, float(np.abs(x.matrix).max()))
    resid = float(np.abs(back.matrix - x.matrix).max())
    if resid > t * scale:
        raise ValidationError(
            "matrix is not in the span of left-by-target, twisted-right-by-source "
            f"multiplications (residual {resid:.3e})"
        )
    return a


def classify(a: GNSOperator, tol=None) -> dict:
    """Flags: completely positive (positive image under psi_prime), real
    (dagger-invariant), Schur-idempotent, and whether the psi_prime image is
    an orthogonal projection.  The equivalence (cp and idempotent) ==
    (real and idempotent) == projection is cross-checked."""
    t = eq_tol(tol)
    x = psi_prime(a).matrix
    scale = max(1.0, float(np.abs(x).max()))
    herm = float(np.abs(x - x.conj().T).max()) <= t * scale
    is_cp = False
    if herm:
        w = np.linalg.eigvalsh(0.5 * (x + x.conj().T))
        is_cp = bool(w[0] >= -t * scale)
    a_scale = max(1.0, float(np.abs(a.matrix).max()))
    real = float(np.abs(dagger(a).matrix - a.matrix).max()) <= t * a_scale
    idem = (
        float(np.abs(schur_product(a, a).matrix - a.matrix).max()) <= t * a_scale
    )
    proj = herm and float(np.abs(x @ x - x).max()) <= t * max(1.0, scale * scale)
    flags = {
        "cp": is_cp,
        "real": real,
        "schur_idempotent": idem,
        "psi_projection": proj,
    }
    if not ((is_cp and idem) == (real and idem) == proj):
        raise InternalConsistencyError(
            f"projection-equivalence flags disagree: {flags}"
        )
    return flags


# -- relations from positive elements and back --------------------------------


def _image_subspace(x: OppositeTensorElement, tol=None) -> list[np.ndarray]:
    """Matrices spanning the image of a positive opposite-tensor element,
    under the rank-one identification of the tensor space with operators
    from the source GNS space to the target one."""
    t = eq_tol(tol)
    dn, dm = x.target.dim, x.source.dim
    scale = max(1.0, float(np.abs(x.matrix).max()))
    if float(np.abs(x.matrix - x.matrix.conj().T).max()) > t * scale:
        raise ValidationError("element is not self-adjoint")
    w, u = np.linalg.eigh(0.5 * (x.matrix + x.matrix.conj().T))
    if w[0] < -t * scale:
        raise ValidationError(f"element is not positive (eigenvalue {w[0]:.3e})")
    cut = RANK_TOL * max(float(w[-1]), 1e-300)
    return [_unvec(u[:, j], dn, dm) for j in range(w.size) if w[j] > cut]


def relation_of_positive(x: OppositeTensorElement, tol=None) -> qrel.QuantumRelation:
    """The quantum relation of a positive opposite-tensor element, computed
    three ways and cross-checked: the modular-conjugated image, the bimodule
    generated by the conjugated operator, and the density-power form."""
    t = eq_tol(tol)
    src, tgt = x.source, x.target
    ims = _image_subspace(x, tol)
    shape = (tgt.dim, src.dim)
    nq_t = tgt.nabla_power(0.25)
    nq_s = src.nabla_power(0.25)
    gens1 = [nq_t @ m @ nq_s for m in ims]
    v1 = opspace.span_of(gens1, shape=shape, tol=t)

    a = psi_prime_inv(x, tol)
    rep_s = qrel.gns_representation(src.algebra)
    rep_t = qrel.gns_representation(tgt.algebra)
    conj_a = nq_t @ a.matrix @ src.nabla_power(-0.25)
    v2 = opspace.bimodule_generate(
        rep_t.commutant_basis(), [conj_a], rep_s.commutant_basis(), shape=shape, tol=t
    )

    lq_t = tgt.left_action(tgt.functional.q_power(0.25))
    lq_s = src.left_action(src.functional.q_power(0.25))
    gens3 = [lq_t @ m @ lq_s for m in ims]
    v3 = opspace.span_of(gens3, shape=shape, tol=t)

    if not (v1.equals(v2, tol=t) and v1.equals(v3, tol=t)):
        raise InternalConsistencyError(
            "the three routes to the relation of a positive element disagree "
            f"(dims {v1.dim}, {v2.dim}, {v3.dim})"
        )
    try:
        return qrel.make_relation(rep_s, rep_t, v1.basis, tol=t)
    except ValidationError as exc:
        raise InternalConsistencyError(
            f"image of a positive element is not a bimodule: {exc}"
        ) from exc


def adjacency_of_relation(
    v: qrel.QuantumRelation, source: GNSSpace, target: GNSSpace, tol=None
) -> GNSOperator:
    """The CP Schur-idempotent operator whose positive image projects onto
    the modular-deconjugated relation."""
    t = eq_tol(tol)
    if not v.source.same_representation(qrel.gns_representation(source.algebra)):
        raise ValidationError("relation source is not the GNS representation")
    if not v.target.same_representation(qrel.gns_representation(target.algebra)):
        raise ValidationError("relation target is not the GNS representation")
    nqi_t = target.nabla_power(-0.25)
    nqi_s = source.nabla_power(-0.25)
    gens = [nqi_t @ b @ nqi_s for b in v.space.basis]
    w = opspace.span_of(gens, shape=(target.dim, source.dim), tol=t)
    proj = w.projection()
    a = psi_prime_inv(OppositeTensorElement(source, target, proj), tol)
    flags = classify(a, tol)
    if not (flags["cp"] and flags["schur_idempotent"]):
        raise InternalConsistencyError(
            f"operator of a relation failed to classify as expected: {flags}"
        )
    return a


# -- modular adjoint and induced CP map ---------------------------------------


def kms_adjoint(a: GNSOperator, tol=None) -> GNSOperator:
    """The state-compatible adjoint J_target a* J_source.  On operators
    invariant under the dagger (in particular all completely positive ones)
    this coincides with the modular-power form
    nabla_source^{-1/2} a* nabla_target^{1/2}, and the two routes are
    cross-checked; on generic operators only the conjugation form applies,
    the power form being conjugate-linear instead of linear."""
    t = eq_tol(tol)
    s_src = a.source.j_matrix()
    s_tgt = a.target.j_matrix()
    mat = s_src @ a.matrix.T @ s_tgt
    a_scale = max(1.0, float(np.abs(a.matrix).max()))
    if float(np.abs(dagger(a).matrix - a.matrix).max()) <= t * a_scale:
        alt = (
            a.source.nabla_power(-0.5)
            @ a.matrix.conj().T
            @ a.target.nabla_power(0.5)
        )
        if float(np.abs(mat - alt).max()) > t * max(1.0, float(np.abs(mat).max())):
            raise InternalConsistencyError(
                "conjugation and modular-power forms of the adjoint disagree "
                "on a dagger-invariant operator"
            )
    return GNSOperator(a.target, a.source, mat)


def theta_of_adjacency(a: GNSOperator, tol=None) -> tuple[cp.CPMap, dict]:
    """The CP map induced by the modular adjoint of a CP operator, returned
    with a certificate that its relation is the modular conjugate of the
    operator's relation."""
    t = eq_tol(tol)
    flags = classify(a, tol)
    if not flags["cp"]:
        raise ValidationError("operator is not completely positive")
    k = kms_adjoint(a, tol)
    try:
        theta = cp.cp_from_callable(
            qrel.gns_representation(a.target.algebra),
            qrel.gns_representation(a.source.algebra),
            k.apply,
            source_state=a.target.functional,
            target_state=a.source.functional,
            tol=tol,
        )
    except ValidationError as exc:
        raise InternalConsistencyError(
            f"modular adjoint of a CP operator failed the CP check: {exc}"
        ) from exc
    v_a = relation_of_positive(psi_prime(a), tol)
    lhs = cp.relation_of_cp(theta, tol)
    nq_t = a.target.nabla_power(0.25)
    nqi_s = a.source.nabla_power(-0.25)
    rhs = opspace.span_of(
        [nq_t @ b @ nqi_s for b in v_a.space.basis],
        shape=(a.target.dim, a.source.dim),
        tol=t,
    )
    resid = float(np.abs(lhs.space.projection() - rhs.projection()).max())
    if not lhs.space.equals(rhs, tol=t):
        raise InternalConsistencyError(
            "relation of the induced map does not match the conjugated "
            f"relation of the operator (residual {resid:.3e})"
        )
    report = certificate(
        "relation of induced map equals modular conjugate of operator relation",
        lhs.dim,
        rhs.dim,
        resid,
    )
    return theta, report


def coinjectivity_criterion(a: GNSOperator, tol=None) -> dict:
    """Test whether a CP Schur-idempotent operator is coinjective: the
    composition with its modular adjoint must be a right multiplication,
    and the multiplier is then a central positive element."""
    t = eq_tol(tol)
    tgt = a.target
    alg = tgt.algebra
    b = a.matrix @ kms_adjoint(a, tol).matrix
    comm = qrel.commutant_span(qrel.gns_representation(alg), tol=t)
    if not comm.contains(b, tol=t * max(1.0, float(np.abs(b).max()))):
        return {"coinjective": False, "x0": None}
    qh = tgt.functional.q_power(0.5)
    qih = tgt.functional.q_power(-0.5)
    x0, pos = [], 0
    for alpha, n in enumerate(alg.blocks):
        blk = b[pos : pos + n * n, pos : pos + n * n].reshape(n, n, n, n)
        c = np.einsum("iuiv->uv", blk) / n
        x0.append(qh[alpha] @ c.T @ qih[alpha])
        pos += n * n
    resid = float(np.abs(tgt.right_action(x0) - b).max())
    if resid > t * max(1.0, float(np.abs(b).max())):
        raise InternalConsistencyError(
            f"extracted multiplier does not reproduce the composition ({resid:.3e})"
        )
    for blk, n in zip(x0, alg.blocks):
        off = float(np.abs(blk - (np.trace(blk) / n) * np.eye(n)).max())
        if off > t * max(1.0, float(np.abs(blk).max())):
            raise InternalConsistencyError(
                f"multiplier of a coinjective operator is not central ({off:.3e})"
            )
        w = np.linalg.eigvalsh(0.5 * (blk + blk.conj().T))
        if w[0] < -t * max(1.0, float(w[-1])):
            raise InternalConsistencyError(
                f"multiplier of a coinjective operator is not positive ({w[0]:.3e})"
            )
    return {"coinjective": True, "x0": x0}


def state_preservation_check(a: GNSOperator, tol=None) -> bool:
    """Whether the induced map carries the source state to the target state;
    three equivalent tests are run and must agree: the states themselves,
    unitality of the plain adjoint, and the state-slice of the psi_prime
    image being the identity."""
    t = eq_tol(tol)
    src, tgt = a.source, a.target
    worst = 0.0
    for b in src.coordinate_elements():
        lhs = tgt.functional.value(a.apply(b))
        rhs = src.functional.value(b)
        worst = max(worst, abs(lhs - rhs))
    ok1 = worst <= t

    one_s = src.coords(src.algebra.identity())
    one_t = tgt.coords(tgt.algebra.identity())
    ok2 = (
        float(np.abs(a.matrix.conj().T @ one_t - one_s).max())
        <= t * max(1.0, float(np.abs(one_s).max()))
    )

    x4 = psi_prime(a).matrix.reshape(tgt.dim, src.dim, tgt.dim, src.dim)
    r = np.einsum("a,aubv,b->uv", one_t.conj(), x4, one_t)
    ok3 = float(np.abs(r - np.eye(src.dim)).max()) <= t * max(
        1.0, float(np.abs(r).max())
    )

    if not (ok1 == ok2 == ok3):
        raise InternalConsistencyError(
            f"state-preservation tests disagree: {ok1}, {ok2}, {ok3}"
        )
    return ok1


# -- fixtures helpers ----------------------------------------------------------


def opposite_tensor(
    source: GNSSpace, target: GNSSpace, pairs, tol=None
) -> OppositeTensorElement:
    """Build sum of L(n_k) kron L(m_k)^T from (target element, source element)
    pairs; the representation of an elementary tensor with an opposite
    second leg."""
    d = target.dim * source.dim
    big = np.zeros((d, d), dtype=complex)
    for y, x in pairs:
        big += np.kron(
            target.left_action(y), source.left_action(x).T
        )
    return OppositeTensorElement(source, target, big)


def opposite_tensor_from_kron(
    source: GNSSpace, target: GNSSpace, x: np.ndarray, tol=None
) -> OppositeTensorElement:
    """Decompose a concrete kron-picture matrix over two single-block
    algebras into elementary tensors and represent it on the GNS spaces."""
    if len(target.algebra.blocks) != 1 or len(source.algebra.blocks) != 1:
        raise ValidationError("kron import needs single-block algebras")
    n = target.algebra.blocks[0]
    m = source.algebra.blocks[0]
    x = np.asarray(x, dtype=complex)
    if x.shape != (n * m, n * m):
        raise ValidationError(f"matrix shaped {x.shape}, expected {(n * m, n * m)}")
    r = x.reshape(n, m, n, m).transpose(0, 2, 1, 3).reshape(n * n, m * m)
    u, s, vh = np.linalg.svd(r)
    cut = RANK_TOL * max(float(s[0]) if s.size else 0.0, 1e-300)
    pairs = []
    for k in range(s.size):
        if s[k] <= cut:
            continue
        yk = [_unvec(s[k] * u[:, k], n, n)]
        xk = [_unvec(vh[k], m, m).T]
        pairs.append((yk, xk))
    return opposite_tensor(source, target, pairs, tol)


# -- adjacency operator of a homomorphism -------------------------------------


def _weighted_power(functional: Functional, s: float) -> list[np.ndarray]:
    """Blockwise powers of the density rescaled to the plain-trace form
    (block size times the stored density)."""
    return [
        (float(n) ** s) * q
        for n, q in zip(functional.algebra.blocks, functional.q_power(s))
    ]


def _range_onb(p: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the range of a projection by Gram-Schmidt over
    its columns in index order; returns a (dim, rank) matrix."""
    cols = []
    for j in range(p.shape[1]):
        w = p[:, j].astype(complex)
        for f in cols:
            w = w - (f.conj() @ w) * f
        nrm = float(np.linalg.norm(w))
        if nrm > max(tol, 1e-12):
            cols.append(w / nrm)
    if not cols:
        return np.zeros((p.shape[0], 0), dtype=complex)
    return np.stack(cols, axis=1)


class HomAdjacencyData:
    """Intermediate data of the adjacency operator of a homomorphism:
    the per-block range isometries, compressed density blocks, multiplier
    blocks, the assembled multiplier, and the verification certificates."""

    def __init__(self, isometries, t_blocks, v_blocks, u, flags, certificates):
        self.isometries = isometries
        self.t_blocks = t_blocks
        self.v_blocks = v_blocks
        self.u = u
        self.flags = flags
        self.certificates = certificates


def adjacency_of_hom(
    theta,
    source_state: Functional,
    target_state: Functional,
    tol=None,
) -> tuple[GNSOperator, HomAdjacencyData]:
    """The CP Schur-idempotent operator generating the adjoint of the
    relation of a homomorphism, for arbitrary faithful states.

    The operator acts between the GNS spaces by
    a(x) = q_M^{-1/4} u^{1/2} theta(q_N^{1/4} x q_N^{1/4}) u^{1/2} q_M^{-1/4}
    with plain-trace-form density powers, where the positive multiplier u
    commutes with the image and is assembled blockwise from the compressed
    inverse square root of the target density.
    """
    t = eq_tol(tol)
    if not getattr(theta, "hom", False):
        raise ValidationError("map is not a *-homomorphism")
    alg_n = theta.source
    alg_m = theta.target
    if source_state.algebra != alg_n or target_state.algebra != alg_m:
        raise ValidationError("states do not match the map's algebras")
    g_n = gns(alg_n, source_state)
    g_m = gns(alg_m, target_state)

    dsum = alg_m.dsum_dim
    qm_wih = alg_m.block_diag(_weighted_power(target_state, -0.5))

    def theta_big(y):
        return alg_m.block_diag(theta.apply(y))

    isometries: dict[int, np.ndarray] = {}
    t_blocks: dict[int, np.ndarray] = {}
    v_blocks: dict[int, np.ndarray] = {}
    u_big = np.zeros((dsum, dsum), dtype=complex)
    certs = []
    qn_wih = _weighted_power(source_state, -0.5)
    for alpha, n in enumerate(alg_n.blocks):
        p1 = theta_big(alg_n.matrix_unit(alpha, 0, 0))
        f = _range_onb(p1, t)
        r = f.shape[1]
        if r == 0:
            continue
        w = np.zeros((dsum, n * r), dtype=complex)
        for k in range(n):
            img = theta_big(alg_n.matrix_unit(alpha, k, 0)) @ f
            w[:, k * r : (k + 1) * r] = img
        iso_resid = float(np.abs(w.conj().T @ w - np.eye(n * r)).max())
        if iso_resid > 10 * t:
            raise InternalConsistencyError(
                f"range isometry of block {alpha} is not isometric ({iso_resid:.3e})"
            )
        inter = 0.0
        for k in range(n):
            for l in range(n):
                lhs = theta_big(alg_n.matrix_unit(alpha, k, l))
                ekl = np.zeros((n, n))
                ekl[k, l] = 1.0
                rhs = w @ np.kron(ekl, np.eye(r)) @ w.conj().T
                inter = max(inter, float(np.abs(lhs - rhs).max()))
        if inter > 10 * t:
            raise InternalConsistencyError(
                f"block {alpha} image is not of product form ({inter:.3e})"
            )
        tb = w.conj().T @ qm_wih @ w
        v = np.zeros((r, r), dtype=complex)
        for i in range(n):
            for j in range(n):
                v += qn_wih[alpha][j, i] * tb[i * r : (i + 1) * r, j * r : (j + 1) * r]
        vw = np.linalg.eigvalsh(0.5 * (v + v.conj().T))
        if vw[0] <= t * max(1.0, float(vw[-1])):
            raise InternalConsistencyError(
                f"compressed multiplier of block {alpha} is not positive definite "
                f"(eigenvalue {vw[0]:.3e})"
            )
        u_alpha = np.linalg.inv(v)
        isometries[alpha] = w
        t_blocks[alpha] = tb
        v_blocks[alpha] = v
        u_big += w @ np.kron(np.eye(n), u_alpha) @ w.conj().T
        certs.append(
            certificate(
                f"block {alpha} multiplier is positive definite",
                r,
                r,
                float(max(0.0, -vw[0])),
            )
        )

    u_big += np.eye(dsum) - theta_big(alg_n.identity())
    u = alg_m.from_block_diag(u_big)
    back = float(np.abs(alg_m.block_diag(u) - u_big).max())
    if back > 10 * t:
        raise InternalConsistencyError(
            f"assembled multiplier is not in the target algebra ({back:.3e})"
        )
    comm_resid = 0.0
    for unit in alg_n.unit_basis():
        img = theta.apply(unit)
        lhs = alg_m.mul(u, img)
        rhs = alg_m.mul(img, u)
        comm_resid = max(
            comm_resid, max(float(np.abs(x - y).max()) for x, y in zip(lhs, rhs))
        )
    if comm_resid > 10 * t:
        raise InternalConsistencyError(
            f"multiplier does not commute with the image ({comm_resid:.3e})"
        )
    u_half = []
    for blk in u:
        w, vecs = np.linalg.eigh(0.5 * (blk + blk.conj().T))
        u_half.append(vecs @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ vecs.conj().T)

    qm_wi4 = _weighted_power(target_state, -0.25)
    qn_w4 = _weighted_power(source_state, 0.25)
    left = alg_m.mul(qm_wi4, u_half)

    def act(x):
        inner = alg_n.mul(alg_n.mul(qn_w4, x), qn_w4)
        mid = theta.apply(inner)
        return alg_m.mul(alg_m.mul(left, mid), alg_m.star(left))

    a = gns_hat(g_n, g_m, act)

    flags = classify(a, tol)
    if not (flags["cp"] and flags["schur_idempotent"]):
        raise InternalConsistencyError(
            f"operator of a homomorphism failed to classify as expected: {flags}"
        )
    theta_gns = make_hom(
        qrel.gns_representation(alg_n),
        qrel.gns_representation(alg_m),
        theta.action,
        source_state=source_state,
        target_state=target_state,
        tol=tol,
    )
    vstar = qrel.adjoint_relation(relation_of_hom(theta_gns, tol), tol)
    gen = g_m.nabla_power(0.25) @ a.matrix @ g_n.nabla_power(-0.25)
    span = opspace.bimodule_generate(
        qrel.gns_representation(alg_m).commutant_basis(),
        [gen],
        qrel.gns_representation(alg_n).commutant_basis(),
        shape=(g_m.dim, g_n.dim),
        tol=t,
    )
    resid = float(np.abs(span.projection() - vstar.space.projection()).max())
    if not span.equals(vstar.space, tol=t):
        raise InternalConsistencyError(
            "bimodule of the conjugated operator does not equal the adjoint "
            f"relation of the map (residual {resid:.3e})"
        )
    certs.append(
        certificate(
            "bimodule of conjugated operator equals adjoint relation of map",
            span.dim,
            vstar.dim,
            resid,
        )
    )
    data = HomAdjacencyData(isometries, t_blocks, v_blocks, u, flags, certs)
    return a, data


# -- constructions: relations as confusability graphs --------------------------


def verdon_construct(s: qrel.QuantumRelation, tol=None) -> tuple[cp.CPMap, dict]:
    """Verdon's construction: a unital CP map from a full matrix algebra
    whose confusability graph is the given reflexive symmetric relation
    over the Markov-trace GNS representation."""
    t = eq_tol(tol)
    if not s.endomorphic:
        raise ValidationError("construction needs an endomorphic relation")
    alg = s.source.algebra
    if not s.source.same_representation(qrel.gns_representation(alg)):
        raise ValidationError("relation must act on the GNS representation")
    if not qrel.is_symmetric(s, tol):
        raise ValidationError("relation is not symmetric")
    comm = qrel.commutant_span(s.source, tol=t)
    if not comm.subset_of(s.space, tol=t):
        raise ValidationError("relation is not reflexive")
    g = gns(alg, Functional.markov(alg))

    e = s.space.projection()
    e0 = comm.projection()
    a1 = psi_prime_inv(OppositeTensorElement(g, g, e - e0), tol)
    opnorm = float(np.linalg.norm(a1.matrix, 2))
    if opnorm <= t:
        a_mat = np.eye(g.dim, dtype=complex)
    else:
        a_mat = np.eye(g.dim, dtype=complex) + (0.5 / opnorm) * a1.matrix

    herm = float(np.abs(a_mat - a_mat.conj().T).max())
    if herm > t * max(1.0, float(np.abs(a_mat).max())):
        raise InternalConsistencyError(
            f"shifted operator is not self-adjoint ({herm:.3e})"
        )
    w, vecs = np.linalg.eigh(0.5 * (a_mat + a_mat.conj().T))
    if w[0] <= t:
        raise InternalConsistencyError(
            f"shifted operator is not positive definite (eigenvalue {w[0]:.3e})"
        )
    r = g.dim
    roots = [g.inv_coords(np.sqrt(w[k]) * vecs[:, k]) for k in range(r)]

    src_alg = MultiMatrixAlgebra([r])
    src_rep = represent(src_alg, [1], check=False)
    action = np.zeros((alg.alg_dim, r * r), dtype=complex)
    for i in range(r):
        for j in range(r):
            img = alg.mul(alg.star(roots[i]), roots[j])
            action[:, i * r + j] = alg.coords(img)
    try:
        theta = cp.make_cp(
            src_rep,
            qrel.gns_representation(alg),
            action,
            target_state=g.functional,
            tol=tol,
        )
    except ValidationError as exc:
        raise InternalConsistencyError(
            f"square-root map failed the CP check: {exc}"
        ) from exc
    one = theta.apply(src_alg.identity())
    unital_resid = max(
        float(np.abs(x - y).max()) for x, y in zip(one, alg.identity())
    )
    if unital_resid > 10 * t:
        raise InternalConsistencyError(
            f"constructed map is not unital ({unital_resid:.3e})"
        )
    graph = cp.confusability_graph(theta, tol)
    resid = float(np.abs(graph.space.projection() - s.space.projection()).max())
    if not graph.equals(s, tol=max(t, 1e-7)):
        raise InternalConsistencyError(
            f"confusability graph does not match the input relation ({resid:.3e})"
        )
    report = certificate(
        "confusability graph of constructed map equals input relation",
        graph.dim,
        s.dim,
        resid,
    )
    return theta, report


def _support_condition(s: qrel.QuantumRelation, f0_big: np.ndarray, tol: float):
    """Check f0 b f0 = b for every basis element; returns (ok, witness)."""
    worst, idx = 0.0, None
    for k, b in enumerate(s.space.basis):
        resid = float(np.abs(f0_big @ b @ f0_big - b).max())
        if resid > worst:
            worst, idx = resid, k
    return worst <= tol, (idx, worst)


def qg_from_cp_construct(
    s: qrel.QuantumRelation, x0, tol=None
) -> tuple[cp.CPMap, dict]:
    """Realize a symmetric relation as the confusability graph of a CP map,
    given a positive element of the relation whose support compresses every
    member onto itself.  Compresses to the support, rescales by the inverse
    square root, runs the unital construction there, and conjugates back."""
    t = eq_tol(tol)
    if not s.endomorphic:
        raise ValidationError("construction needs an endomorphic relation")
    alg = s.source.algebra
    rep = qrel.gns_representation(alg)
    if not s.source.same_representation(rep):
        raise ValidationError("relation must act on the GNS representation")
    if not qrel.is_symmetric(s, tol):
        raise ValidationError("relation is not symmetric")
    x0 = alg.element(x0)
    herm = max(float(np.abs(b - b.conj().T).max()) for b in x0)
    if herm > t:
        raise ValidationError("seed element is not self-adjoint")
    if not s.space.contains(rep.embed(x0), tol=t):
        raise ValidationError("seed element is not in the relation")

    f0, bases, kept = [], [], []
    lam_max = max(
        float(np.linalg.eigvalsh(0.5 * (b + b.conj().T))[-1]) for b in x0
    )
    if lam_max <= t:
        raise ValidationError("seed element is zero")
    cut = max(RANK_TOL * lam_max, t * 1e-2)
    for alpha, b in enumerate(x0):
        w, vecs = np.linalg.eigh(0.5 * (b + b.conj().T))
        if w.size and w[0] < -t * max(1.0, lam_max):
            raise ValidationError(
                f"seed element is not positive (eigenvalue {w[0]:.3e})"
            )
        sel = vecs[:, w > cut]
        f0.append(sel @ sel.conj().T)
        if sel.shape[1] > 0:
            kept.append(alpha)
            bases.append(sel)
    f0_big = rep.embed(f0)
    ok, witness = _support_condition(s, f0_big, t)
    if not ok:
        raise ValidationError(
            "support of the seed does not compress the relation onto itself "
            f"(basis element {witness[0]}, residual {witness[1]:.3e})"
        )

    blocks0 = [bases[k].shape[1] for k in range(len(kept))]
    alg0 = MultiMatrixAlgebra(blocks0)
    mult0 = [alg.blocks[a] for a in kept]
    rep0 = represent(alg0, mult0, check=False)
    p0 = np.zeros((rep0.hilbert_dim, rep.hilbert_dim), dtype=complex)
    row = 0
    for k, alpha in enumerate(kept):
        n = alg.blocks[alpha]
        r = blocks0[k]
        col = sum(m * m for m in alg.blocks[:alpha])
        p0[row : row + r * n, col : col + n * n] = np.kron(
            bases[k].conj().T, np.eye(n)
        )
        row += r * n

    xt = [
        bases[k].conj().T @ x0[alpha] @ bases[k] for k, alpha in enumerate(kept)
    ]
    xt_ih, xt_h = [], []
    for blk in xt:
        w, vecs = np.linalg.eigh(0.5 * (blk + blk.conj().T))
        if w[0] <= t:
            raise InternalConsistencyError(
                f"compressed seed is not positive definite (eigenvalue {w[0]:.3e})"
            )
        xt_ih.append(vecs @ np.diag(w ** -0.5) @ vecs.conj().T)
        xt_h.append(vecs @ np.diag(np.sqrt(w)) @ vecs.conj().T)
    e_ih = rep0.embed(xt_ih)
    gens0 = [e_ih @ p0 @ b @ p0.conj().T @ e_ih for b in s.space.basis]
    s0 = qrel.make_relation(rep0, rep0, gens0, tol=t)

    new_rep = qrel.gns_representation(alg0)
    iso = qrel.RepresentationIsometry.canonical(rep0, new_rep)
    s0g = qrel.transport(s0, iso, iso, tol=t)
    if not qrel.is_symmetric(s0g, tol):
        raise InternalConsistencyError("compressed relation lost symmetry")
    if not qrel.is_reflexive(s0g, tol):
        raise InternalConsistencyError("compressed relation is not reflexive")

    theta0, _ = verdon_construct(s0g, tol)

    def iota(y):
        out = alg.zero()
        for k, alpha in enumerate(kept):
            out[alpha] = bases[k] @ y[k] @ bases[k].conj().T
        return out

    def act(f):
        mid = theta0.apply(f)
        return iota(alg0.mul(alg0.mul(xt_h, mid), xt_h))

    try:
        theta = cp.cp_from_callable(
            theta0.source_rep, rep, act, tol=tol
        )
    except ValidationError as exc:
        raise InternalConsistencyError(
            f"composed map failed the CP check: {exc}"
        ) from exc
    graph = cp.confusability_graph(theta, tol)
    resid = float(np.abs(graph.space.projection() - s.space.projection()).max())
    if not graph.equals(s, tol=max(t, 1e-7)):
        raise InternalConsistencyError(
            f"confusability graph does not match the input relation ({resid:.3e})"
        )
    report = certificate(
        "confusability graph of constructed map equals input relation",
        graph.dim,
        s.dim,
        resid,
    )
    return theta, report


def find_x0(s: qrel.QuantumRelation, seed: int = 0, budget: int = 64, tol=None):
    """Search for a positive element of the relation whose support compresses
    every member onto itself; heuristic, returns None when the budget is
    exhausted.  Candidates are spectral-floor maximizers and random
    combinations over the self-adjoint part of (relation intersect algebra)."""
    t = eq_tol(tol)
    if not s.endomorphic:
        raise ValidationError("search needs an endomorphic relation")
    alg = s.source.algebra
    rep = qrel.gns_representation(alg)
    if not s.source.same_representation(rep):
        raise ValidationError("relation must act on the GNS representation")
    embedded = opspace.span_of(
        rep.embedded_unit_basis(), shape=s.space.shape, tol=t
    )
    w = opspace.intersect(s.space, embedded, tol=t)
    if w.dim == 0:
        return None

    herms = []
    seen: list[np.ndarray] = []
    for b in w.basis:
        x = rep.unembed(b)
        for h in (
            alg.add(x, alg.star(x)),
            alg.scale(1j, alg.sub(x, alg.star(x))),
        ):
            v = alg.coords(h)
            vr = np.concatenate([v.real, v.imag])
            if np.linalg.norm(vr) <= t:
                continue
            resid = vr.copy()
            for p in seen:
                resid = resid - (p @ resid) * p
            if np.linalg.norm(resid) > 1e-8:
                seen.append(resid / np.linalg.norm(resid))
                herms.append(h)
    if not herms:
        return None

    def combo(tvec):
        out = alg.zero()
        for c, h in zip(tvec, herms):
            out = alg.add(out, alg.scale(float(c), h))
        return out

    def neg_floor(tvec):
        nrm = float(np.linalg.norm(tvec))
        if nrm < 1e-12:
            return 1.0
        x = combo(tvec / nrm)
        return -min(
            float(np.linalg.eigvalsh(0.5 * (b + b.conj().T))[0]) for b in x
        )

    rng = np.random.default_rng(seed)
    candidates = []
    from scipy.optimize import minimize

    for _ in range(4):
        start = rng.standard_normal(len(herms))
        with np.errstate(over="ignore"):
            res = minimize(neg_floor, start, method="Powell")
        nrm = float(np.linalg.norm(res.x))
        if nrm > 1e-12:
            candidates.append(combo(res.x / nrm))
    for h in herms:
        candidates.append(h)
        candidates.append(alg.scale(-1.0, h))
    for _ in range(budget):
        candidates.append(combo(rng.standard_normal(len(herms))))

    def support_rank(x):
        total = 0
        lam = max(
            float(np.linalg.eigvalsh(0.5 * (b + b.conj().T))[-1]) for b in x
        )
        if lam <= t:
            return 0
        for b in x:
            wv = np.linalg.eigvalsh(0.5 * (b + b.conj().T))
            total += int(np.sum(wv > max(RANK_TOL * lam, t * 1e-2)))
        return total

    scored = []
    for x in candidates:
        lam_min = min(
            float(np.linalg.eigvalsh(0.5 * (b + b.conj().T))[0]) for b in x
        )
        if lam_min < -1e-10:
            continue
        rk = support_rank(x)
        if rk == 0:
            continue
        scored.append((rk, x))
    scored.sort(key=lambda p: -p[0])

    tried = 0
    for _, x in scored:
        if tried >= budget:
            break
        tried += 1
        lam = max(
            float(np.linalg.eigvalsh(0.5 * (b + b.conj().T))[-1]) for b in x
        )
        cut = max(RANK_TOL * lam, t * 1e-2)
        f0 = []
        for b in x:
            wv, vecs = np.linalg.eigh(0.5 * (b + b.conj().T))
            sel = vecs[:, wv > cut]
            f0.append(sel @ sel.conj().T)
        ok, _ = _support_condition(s, rep.embed(f0), t)
        if ok:
            return x
    return None

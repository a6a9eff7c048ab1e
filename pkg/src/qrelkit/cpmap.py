"""Normal completely positive maps between multimatrix algebras.

A map theta: N -> M is stored as a matrix acting on algebra coordinates,
together with representations of both algebras.  Construction validates
complete positivity blockwise (the block-Choi matrices must be positive
semidefinite) and computes the unital / multiplicative / state-preserving
flags.  Kraus operators are extracted by extending theta to all bounded
operators on the source Hilbert space through the trace-compatible
conditional expectation and eigendecomposing the Choi matrix of the
extension; the Stinespring isometry and the associated quantum relation
(the span of the Kraus set under left commutant multiplication) follow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import opspace, qrel
from .config import eq_tol, rank_tol
from .errors import InternalConsistencyError, ValidationError
from .mvnalg import Functional, MultiMatrixAlgebra, RepresentedAlgebra

__all__ = [
    "CPMap",
    "StinespringDilation",
    "make_cp",
    "cp_from_callable",
    "cp_from_kraus",
    "identity_cp",
    "conditional_expectation",
    "kraus",
    "stinespring",
    "relation_of_cp",
    "compose_cp",
    "confusability_graph",
    "pullback",
    "ucp_realizable_full_target",
    "classical_channel",
]


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


def conditional_expectation(rep: RepresentedAlgebra, t: np.ndarray) -> list[np.ndarray]:
    """Compress an operator on the representation space into the algebra:
    the unique weighted-trace-compatible expectation, computed blockwise as
    the normalized partial trace over the multiplicity legs."""
    t = np.asarray(t, dtype=complex)
    d = rep.hilbert_dim
    if t.shape != (d, d):
        raise ValidationError(f"operator shaped {t.shape}, expected {(d, d)}")
    u = rep.block_unitary
    tp = u @ t @ u.conj().T
    out = []
    off = 0
    for n, m in zip(rep.algebra.blocks, rep.multiplicities):
        sz = n * m
        blk = tp[off : off + sz, off : off + sz].reshape(n, m, n, m)
        out.append(np.einsum("imjm->ij", blk) / m)
        off += sz
    return out


@dataclass
class StinespringDilation:
    """Dilation data: theta(y) = v^dag (embedded y (x) 1) v with
    v mapping the target representation space into source-space (x) C^r."""

    isometry: np.ndarray
    kraus_count: int
    minimal: bool


class CPMap:
    """A CP map theta: source algebra N -> target algebra M with fixed
    representations, its flags, Kraus set, and Stinespring dilation."""

    def __init__(
        self,
        source_rep: RepresentedAlgebra,
        target_rep: RepresentedAlgebra,
        action: np.ndarray,
        source_state: Functional | None = None,
        target_state: Functional | None = None,
        tol=None,
    ):
        self.source_rep = source_rep
        self.target_rep = target_rep
        self.source = source_rep.algebra
        self.target = target_rep.algebra
        action = np.asarray(action, dtype=complex)
        want = (self.target.alg_dim, self.source.alg_dim)
        if action.shape != want:
            raise ValidationError(f"action shaped {action.shape}, expected {want}")
        self.action = action
        self.source_state = source_state
        self.target_state = target_state
        t = eq_tol(tol)

        self.choi_blocks = self._block_choi()
        worst = 0.0
        for c in self.choi_blocks:
            w = np.linalg.eigvalsh(c)
            floor = -t * max(1.0, float(w[-1]))
            if w[0] < floor:
                worst = min(worst, float(w[0]))
        if worst < 0.0:
            raise ValidationError(
                f"map is not completely positive (Choi eigenvalue {worst:.3e})"
            )

        one = self.apply(self.source.identity())
        self.unital = (
            max(
                np.abs(a - b).max()
                for a, b in zip(one, self.target.identity())
            )
            <= t
        )
        self.hom = self._check_hom(t)
        self.state_preserving = None
        if source_state is not None and target_state is not None:
            worst_sp = 0.0
            for u in self.source.unit_basis():
                lhs = target_state.value(self.apply(u))
                rhs = source_state.value(u)
                worst_sp = max(worst_sp, abs(lhs - rhs))
            self.state_preserving = worst_sp <= t

        self.kraus = self._extract_kraus(t)
        self.dilation = self._build_dilation(t)

    # -- basic action ---------------------------------------------------------

    def apply(self, y) -> list[np.ndarray]:
        return self.target.from_coords(self.action @ self.source.coords(y))

    def _block_choi(self) -> list[np.ndarray]:
        """One Choi matrix per source block: [theta(e^a_ij)]_ij in the
        multiplicity-one block-diagonal picture of the target."""
        out = []
        dm = self.target.dsum_dim
        for alpha, n in enumerate(self.source.blocks):
            c = np.zeros((n * dm, n * dm), dtype=complex)
            for i in range(n):
                for j in range(n):
                    img = self.target.block_diag(
                        self.apply(self.source.matrix_unit(alpha, i, j))
                    )
                    c[i * dm : (i + 1) * dm, j * dm : (j + 1) * dm] = img
            out.append(c)
        return out

    def _check_hom(self, t: float) -> bool:
        units = list(self.source.unit_basis())
        images = [self.apply(u) for u in units]
        for u, img in zip(units, images):
            st = self.apply(self.source.star(u))
            if (
                max(np.abs(a - b.conj().T).max() for a, b in zip(st, img))
                > t
            ):
                return False
        for a, ia in zip(units, images):
            for b, ib in zip(units, images):
                prod = self.apply(self.source.mul(a, b))
                direct = self.target.mul(ia, ib)
                if max(np.abs(x - y).max() for x, y in zip(prod, direct)) > t:
                    return False
        return True

    # -- Kraus / Stinespring ----------------------------------------------------

    def _extended_choi(self) -> np.ndarray:
        """Choi matrix of embed_M . theta . E over all of B(K)."""
        dk = self.source_rep.hilbert_dim
        dh = self.target_rep.hilbert_dim
        c = np.zeros((dk * dh, dk * dh), dtype=complex)
        for k in range(dk):
            for l in range(dk):
                e = np.zeros((dk, dk), dtype=complex)
                e[k, l] = 1.0
                img = self.target_rep.embed(
                    self.apply(conditional_expectation(self.source_rep, e))
                )
                c[k * dh : (k + 1) * dh, l * dh : (l + 1) * dh] = img
        return c

    def _extract_kraus(self, t: float) -> list[np.ndarray]:
        dk = self.source_rep.hilbert_dim
        dh = self.target_rep.hilbert_dim
        c = self._extended_choi()
        w, vecs = np.linalg.eigh(c)
        cut = rank_tol(None) * max(float(w[-1]), 1e-300)
        if w[0] < -max(cut, t):
            raise InternalConsistencyError(
                f"extended Choi matrix has negative eigenvalue {w[0]:.3e} "
                "for a validated CP map"
            )
        ops = []
        for lam, v in zip(w, vecs.T):
            if lam > cut:
                ops.append(np.conj(np.sqrt(lam) * v).reshape(dk, dh))
        worst = 0.0
        for y in self.source.unit_basis():
            lhs = sum(b.conj().T @ self.source_rep.embed(y) @ b for b in ops)
            lhs = lhs if ops else np.zeros((dh, dh), dtype=complex)
            rhs = self.target_rep.embed(self.apply(y))
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        if worst > 10 * t:
            raise InternalConsistencyError(
                f"Kraus reconstruction residual {worst:.3e} exceeds tolerance"
            )
        return ops

    def _build_dilation(self, t: float) -> StinespringDilation:
        dh = self.target_rep.hilbert_dim
        r = max(len(self.kraus), 1)
        v = np.zeros((self.source_rep.hilbert_dim * r, dh), dtype=complex)
        for i, b in enumerate(self.kraus):
            e = np.zeros((r, 1))
            e[i, 0] = 1.0
            v += np.kron(b, e)
        gram = v.conj().T @ v
        theta1 = self.target_rep.embed(self.apply(self.source.identity()))
        if np.abs(gram - theta1).max() > 10 * t:
            raise InternalConsistencyError("dilation fails v^dag v = theta(1)")
        if self.kraus:
            stacked = np.stack([_vec(b) for b in self.kraus])
            rank = np.linalg.matrix_rank(stacked, tol=1e-9)
            minimal = rank == len(self.kraus)
        else:
            minimal = True
        return StinespringDilation(v, len(self.kraus), minimal)

    def __repr__(self) -> str:
        return (
            f"CPMap({self.source!r} -> {self.target!r}, "
            f"unital={self.unital}, hom={self.hom}, kraus={len(self.kraus)})"
        )


def make_cp(
    source_rep,
    target_rep,
    action,
    source_state=None,
    target_state=None,
    tol=None,
) -> CPMap:
    """Validate and wrap a linear action on algebra coordinates as a CP map."""
    return CPMap(source_rep, target_rep, action, source_state, target_state, tol)


def cp_from_callable(source_rep, target_rep, fn, **kw) -> CPMap:
    """Build the action matrix of a block-tuple function column by column."""
    src = source_rep.algebra
    tgt = target_rep.algebra
    cols = [tgt.coords(fn(u)) for u in src.unit_basis()]
    return make_cp(source_rep, target_rep, np.stack(cols, axis=1), **kw)


def cp_from_kraus(source_rep, target_rep, ops, **kw) -> CPMap:
    """CP map theta(y) = sum_i b_i^dag y b_i from operators b_i: H -> K."""
    dk = source_rep.hilbert_dim
    dh = target_rep.hilbert_dim
    ops = [np.asarray(b, dtype=complex) for b in ops]
    for b in ops:
        if b.shape != (dk, dh):
            raise ValidationError(f"Kraus operator shaped {b.shape}, expected {(dk, dh)}")

    def fn(y):
        acc = np.zeros((dh, dh), dtype=complex)
        ey = source_rep.embed(y)
        for b in ops:
            acc += b.conj().T @ ey @ b
        return target_rep.unembed(acc)

    return cp_from_callable(source_rep, target_rep, fn, **kw)


def identity_cp(rep: RepresentedAlgebra, **kw) -> CPMap:
    return make_cp(rep, rep, np.eye(rep.algebra.alg_dim), **kw)


def kraus(theta: CPMap) -> list[np.ndarray]:
    return list(theta.kraus)


def stinespring(theta: CPMap) -> StinespringDilation:
    return theta.dilation


def relation_of_cp(theta: CPMap, tol=None) -> qrel.QuantumRelation:
    """The quantum relation of a channel: the left commutant module spanned
    by any Kraus set, a relation from the target algebra to the source one.
    The result is independent of the Kraus decomposition used."""
    shape = (theta.source_rep.hilbert_dim, theta.target_rep.hilbert_dim)
    gens = []
    for c in theta.source_rep.commutant_basis():
        for b in theta.kraus:
            gens.append(c @ b)
    space = opspace.span_of(gens, shape=shape, tol=tol)
    try:
        return qrel.QuantumRelation(
            theta.target_rep, theta.source_rep, space, check=True, tol=tol
        )
    except ValidationError as exc:
        raise InternalConsistencyError(
            f"channel relation is not a bimodule: {exc}"
        ) from exc


def compose_cp(theta2: CPMap, theta1: CPMap, tol=None) -> CPMap:
    """Composite map theta2 after theta1 (actions multiply)."""
    if theta1.target != theta2.source or not theta1.target_rep.same_representation(
        theta2.source_rep
    ):
        raise ValidationError("maps are not composable (middle algebra mismatch)")
    return make_cp(
        theta1.source_rep,
        theta2.target_rep,
        theta2.action @ theta1.action,
        source_state=theta1.source_state,
        target_state=theta2.target_state,
        tol=tol,
    )


def confusability_graph(theta: CPMap, tol=None) -> qrel.QuantumRelation:
    """The relation V^theta* compose V^theta over the target representation;
    always symmetric, and reflexive when theta is unital."""
    v = relation_of_cp(theta, tol)
    return qrel.compose_relations(qrel.adjoint_relation(v, tol), v, tol)


def pullback(v: qrel.QuantumRelation, theta_m: CPMap, theta_n: CPMap, tol=None) -> qrel.QuantumRelation:
    """Pull a relation back along channels into both legs.

    Computed twice: as V^{theta_N}* after V after V^{theta_M}, and through
    the Stinespring dilations as u_N^dag (V (x) full auxiliary space) u_M.
    The two routes must agree; disagreement signals a convention bug.
    """
    if not theta_m.source_rep.same_representation(v.source):
        raise ValidationError("theta_m must land its source on V's source")
    if not theta_n.source_rep.same_representation(v.target):
        raise ValidationError("theta_n must land its source on V's target")
    vm = relation_of_cp(theta_m, tol)
    vn = relation_of_cp(theta_n, tol)
    composed = qrel.compose_relations(
        qrel.adjoint_relation(vn, tol), qrel.compose_relations(v, vm, tol), tol
    )

    um = theta_m.dilation.isometry
    un = theta_n.dilation.isometry
    rm = max(theta_m.dilation.kraus_count, 1)
    rn = max(theta_n.dilation.kraus_count, 1)
    gens = []
    for b in v.space.basis:
        for k in range(rn):
            for l in range(rm):
                e = np.zeros((rn, rm))
                e[k, l] = 1.0
                gens.append(un.conj().T @ np.kron(b, e) @ um)
    dil_space = opspace.span_of(
        gens,
        shape=(theta_n.target_rep.hilbert_dim, theta_m.target_rep.hilbert_dim),
        tol=tol,
    )
    if not dil_space.equals(composed.space, tol):
        raise InternalConsistencyError(
            "pullback routes disagree: composition gives dim "
            f"{composed.space.dim}, dilation gives dim {dil_space.dim}"
        )
    return qrel.QuantumRelation(
        theta_m.target_rep, theta_n.target_rep, composed.space, check=False
    )


def _hermitian_basis(r: int) -> list[np.ndarray]:
    out = []
    for i in range(r):
        h = np.zeros((r, r), dtype=complex)
        h[i, i] = 1.0
        out.append(h)
    for i in range(r):
        for j in range(i + 1, r):
            h = np.zeros((r, r), dtype=complex)
            h[i, j] = h[j, i] = 1.0
            out.append(h)
            h = np.zeros((r, r), dtype=complex)
            h[i, j] = 1j
            h[j, i] = -1j
            out.append(h)
    return out


def ucp_realizable_full_target(v: qrel.QuantumRelation, basis=None, tol=None) -> dict:
    """Decide whether a relation into a full matrix algebra with trivial
    commutant can be the relation of a unital channel.

    Works over the Hermitian Gram matrices G with
    sum_ij G_ij u_i^dag u_j = 1 for a basis (u_i) of the relation: a PSD
    solution yields unital Kraus operators inside V.  The decision is exact
    when the affine solution set is a point; otherwise a positive point is
    searched by maximizing the smallest eigenvalue over the solution set
    (sound when it reports realizable, heuristic when it reports not).
    The witness Gram matrix refers to ``basis`` when one is supplied
    (it must span the relation), else to the canonical orthonormal basis.
    """
    t = eq_tol(tol)
    tgt = v.target
    if len(tgt.algebra.blocks) != 1 or tgt.multiplicities != (1,):
        raise ValidationError(
            "realizability probe requires a single-block target of multiplicity 1"
        )
    if basis is None:
        basis = list(v.space.basis)
    else:
        basis = [np.asarray(b, dtype=complex) for b in basis]
        span = opspace.span_of(basis, shape=v.space.shape, tol=tol)
        if not span.equals(v.space, tol) or span.dim != len(basis):
            raise ValidationError("supplied operators are not a basis of the relation")
    r = len(basis)
    dh = v.source.hilbert_dim
    if r == 0:
        return {"realizable": False, "witness": None, "exact": True, "witness_rank": None}

    herm = _hermitian_basis(r)
    cols = []
    for h in herm:
        acc = np.zeros((dh, dh), dtype=complex)
        for i in range(r):
            for j in range(r):
                if h[i, j] != 0:
                    acc += h[i, j] * (basis[i].conj().T @ basis[j])
        cols.append(np.concatenate([acc.real.reshape(-1), acc.imag.reshape(-1)]))
    a = np.stack(cols, axis=1)
    target_vec = np.concatenate(
        [np.eye(dh).reshape(-1), np.zeros(dh * dh)]
    )
    sol, *_ = np.linalg.lstsq(a, target_vec, rcond=None)
    resid = float(np.abs(a @ sol - target_vec).max())
    if resid > t:
        return {"realizable": False, "witness": None, "exact": True, "witness_rank": None}

    def gram(params):
        g = np.zeros((r, r), dtype=complex)
        for c, h in zip(params, herm):
            g += c * h
        return g

    _, s, vh = np.linalg.svd(a)
    cut = rank_tol(None) * max(1.0, s[0] if s.size else 0.0)
    null = vh[sum(s > cut) :]
    if null.shape[0] == 0:
        g = gram(sol)
        wmin = float(np.linalg.eigvalsh(g)[0])
        ok = wmin >= -t
        return {
            "realizable": ok,
            "witness": g,
            "exact": True,
            "witness_rank": int(np.linalg.matrix_rank(g, tol=1e-9)),
        }

    from scipy import optimize

    def neg_min_eig(tvec):
        g = gram(sol + null.T @ tvec)
        return -float(np.linalg.eigvalsh(g)[0])

    best = optimize.minimize(
        neg_min_eig,
        np.zeros(null.shape[0]),
        method="Powell",
        options={"maxiter": 2000, "xtol": 1e-10, "ftol": 1e-12},
    )
    g = gram(sol + null.T @ best.x)
    g = (g + g.conj().T) / 2
    acc = np.zeros((dh, dh), dtype=complex)
    for i in range(r):
        for j in range(r):
            acc += g[i, j] * (basis[i].conj().T @ basis[j])
    eq_ok = np.abs(acc - np.eye(dh)).max() <= 10 * t
    wmin = float(np.linalg.eigvalsh(g)[0])
    ok = eq_ok and wmin >= -t
    return {
        "realizable": ok,
        "witness": g,
        "exact": False,
        "witness_rank": int(np.linalg.matrix_rank(g, tol=1e-9)),
    }


def classical_channel(p, source_rep=None, target_rep=None, tol=None) -> CPMap:
    """Channel of a row-stochastic kernel p[x][y] = p(y|x): the map taking a
    function f on Y to the function x -> sum_y p(y|x) f(y) on X."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 2:
        raise ValidationError("p must be a matrix of conditional probabilities")
    if p.min() < -1e-12:
        raise ValidationError("p has negative entries")
    if np.abs(p.sum(axis=1) - 1.0).max() > 1e-9:
        raise ValidationError("rows of p must sum to 1")
    nx, ny = p.shape
    if source_rep is None:
        source_rep = RepresentedAlgebra(MultiMatrixAlgebra([1] * ny), [1] * ny)
    if target_rep is None:
        target_rep = RepresentedAlgebra(MultiMatrixAlgebra([1] * nx), [1] * nx)
    if tuple(source_rep.algebra.blocks) != tuple([1] * ny):
        raise ValidationError("source algebra must be functions on Y")
    if tuple(target_rep.algebra.blocks) != tuple([1] * nx):
        raise ValidationError("target algebra must be functions on X")
    return make_cp(source_rep, target_rep, p.astype(complex), tol=tol)

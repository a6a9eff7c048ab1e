"""Finite-dimensional von Neumann algebras as direct sums of matrix blocks.

An algebra M = M_{n(1)} + ... + M_{n(k)} (direct sum) is described by its
block sizes.  Elements are lists of per-block complex matrices.  The module
also provides representations (block multiplicities plus an identifying
unitary), faithful positive functionals given by per-block densities, and the
GNS space with its modular machinery.

Conventions fixed once for the whole package:

* vectorization is row-major; vec(A X B) = (A kron B^T) vec(X);
* the weighted trace is Tr_M(x) = sum_a n(a) Tr(x_a) (the normalization that
  makes the GNS multiplication map m satisfy m m^dag = 1);
* a functional is phi(x) = Tr_M(Q x) with Q a per-block positive definite
  density, so phi is the weighted trace itself exactly when Q = 1;
* the modular group is sigma_z(x) = Q^{iz} x Q^{-iz}, so
  sigma_{i/2}(y) = Q^{-1/2} y Q^{1/2};
* the modular conjugation J is anti-linear and is stored as the matrix of
  (coordinate conjugation followed by a real permutation): J v = S conj(v).
"""

from __future__ import annotations

import numpy as np

from . import opspace
from .errors import InternalConsistencyError, ValidationError

__all__ = [
    "MultiMatrixAlgebra",
    "Functional",
    "RepresentedAlgebra",
    "GNSSpace",
    "markov_trace",
    "modular_sigma",
    "represent",
    "gns",
    "opposite",
]

_EIG_FLOOR = 1e-12


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


def _unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(rows, cols)


def _block_diag(mats) -> np.ndarray:
    mats = [np.asarray(m, dtype=complex) for m in mats]
    n = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = np.zeros((n, c), dtype=complex)
    r = s = 0
    for m in mats:
        out[r : r + m.shape[0], s : s + m.shape[1]] = m
        r += m.shape[0]
        s += m.shape[1]
    return out


def _transposition_permutation(n: int) -> np.ndarray:
    """Permutation S with S vec(A) = vec(A^T) for n x n matrices."""
    s = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            s[i * n + j, j * n + i] = 1.0
    return s


class MultiMatrixAlgebra:
    """Direct sum of full matrix blocks, given by an ordered list of sizes."""

    def __init__(self, blocks, labels=None):
        blocks = tuple(int(n) for n in blocks)
        if not blocks or any(n < 1 for n in blocks):
            raise ValidationError("block sizes must be a non-empty list of ints >= 1")
        self.blocks = blocks
        if labels is None:
            labels = tuple(f"b{i}" for i in range(len(blocks)))
        else:
            labels = tuple(str(l) for l in labels)
            if len(labels) != len(blocks):
                raise ValidationError("labels must match blocks in length")
        self.labels = labels
        self.alg_dim = int(sum(n * n for n in blocks))
        self.dsum_dim = int(sum(blocks))

    # -- element plumbing ---------------------------------------------------

    def element(self, mats) -> list[np.ndarray]:
        """Validate and normalize a block tuple into an element."""
        if len(mats) != len(self.blocks):
            raise ValidationError(
                f"expected {len(self.blocks)} blocks, got {len(mats)}"
            )
        out = []
        for n, m in zip(self.blocks, mats):
            m = np.asarray(m, dtype=complex)
            if m.shape != (n, n):
                raise ValidationError(f"block shaped {m.shape}, expected {(n, n)}")
            out.append(m)
        return out

    def zero(self) -> list[np.ndarray]:
        return [np.zeros((n, n), dtype=complex) for n in self.blocks]

    def identity(self) -> list[np.ndarray]:
        return [np.eye(n, dtype=complex) for n in self.blocks]

    def matrix_unit(self, alpha: int, i: int, j: int) -> list[np.ndarray]:
        x = self.zero()
        x[alpha][i, j] = 1.0
        return x

    def central_projection(self, alpha: int) -> list[np.ndarray]:
        """Minimal central projection 1_alpha (identity of one block)."""
        x = self.zero()
        x[alpha] = np.eye(self.blocks[alpha], dtype=complex)
        return x

    def unit_basis(self):
        """All matrix units, in block-major row-major order (a coordinate basis)."""
        for alpha, n in enumerate(self.blocks):
            for i in range(n):
                for j in range(n):
                    yield self.matrix_unit(alpha, i, j)

    # -- algebra operations ---------------------------------------------------

    def mul(self, x, y) -> list[np.ndarray]:
        return [a @ b for a, b in zip(x, y)]

    def star(self, x) -> list[np.ndarray]:
        return [a.conj().T for a in x]

    def lincomb(self, coeffs, elements) -> list[np.ndarray]:
        out = self.zero()
        for c, x in zip(coeffs, elements):
            for b, a in zip(out, x):
                b += complex(c) * a
        return out

    def scale(self, c, x) -> list[np.ndarray]:
        return [complex(c) * a for a in x]

    def add(self, x, y) -> list[np.ndarray]:
        return [a + b for a, b in zip(x, y)]

    def sub(self, x, y) -> list[np.ndarray]:
        return [a - b for a, b in zip(x, y)]

    # -- coordinates ----------------------------------------------------------

    def coords(self, x) -> np.ndarray:
        """Fixed algebra coordinates: concatenated row-major vec of the blocks."""
        return np.concatenate([_vec(a) for a in x])

    def from_coords(self, v) -> list[np.ndarray]:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.size != self.alg_dim:
            raise ValidationError(f"coordinate length {v.size}, expected {self.alg_dim}")
        out, pos = [], 0
        for n in self.blocks:
            out.append(_unvec(v[pos : pos + n * n], n, n))
            pos += n * n
        return out

    def block_diag(self, x) -> np.ndarray:
        """Multiplicity-one embedding of an element as one block-diagonal matrix."""
        return _block_diag(x)

    def from_block_diag(self, m) -> list[np.ndarray]:
        m = np.asarray(m, dtype=complex)
        out, pos = [], 0
        for n in self.blocks:
            out.append(m[pos : pos + n, pos : pos + n])
            pos += n
        return out

    def norm(self, x) -> float:
        """Frobenius norm of the block tuple."""
        return float(np.sqrt(sum(float((np.abs(a) ** 2).sum()) for a in x)))

    def opposite(self) -> "MultiMatrixAlgebra":
        """Opposite algebra: same blocks; y^op acts on conjugate coordinates as
        the transpose of the left-action matrix of y."""
        return MultiMatrixAlgebra(self.blocks, tuple(l + "^op" for l in self.labels))

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiMatrixAlgebra) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def __repr__(self) -> str:
        return f"MultiMatrixAlgebra(blocks={list(self.blocks)})"


def markov_trace(algebra: MultiMatrixAlgebra, x) -> complex:
    """Weighted trace: sum over blocks of n(a) * Tr(x_a)."""
    x = algebra.element(x)
    return complex(sum(n * np.trace(a) for n, a in zip(algebra.blocks, x)))


class Functional:
    """Faithful positive functional phi(x) = Tr_M(Q x), Q positive definite.

    ``Q`` is the density with respect to the weighted (block-dilated) trace,
    so the weighted trace itself corresponds to Q = 1.
    """

    def __init__(self, algebra: MultiMatrixAlgebra, densities=None):
        self.algebra = algebra
        if densities is None:
            densities = algebra.identity()
        self.densities = algebra.element(densities)
        self._eigs = []
        for q in self.densities:
            if np.abs(q - q.conj().T).max() > 1e-12 * max(1.0, np.abs(q).max()):
                raise ValidationError("density blocks must be Hermitian")
            w, v = np.linalg.eigh(q)
            if w.min() <= _EIG_FLOOR * max(w.max(), 1.0):
                raise ValidationError(
                    "density must be positive definite "
                    f"(eigenvalue {w.min():.3e} below the clamping floor)"
                )
            self._eigs.append((w, v))
        self.is_markov_trace = all(
            np.abs(q - np.eye(q.shape[0])).max() <= 1e-12 for q in self.densities
        )

    @classmethod
    def markov(cls, algebra: MultiMatrixAlgebra) -> "Functional":
        return cls(algebra, None)

    def value(self, x) -> complex:
        x = self.algebra.element(x)
        return complex(
            sum(
                n * np.trace(q @ a)
                for n, q, a in zip(self.algebra.blocks, self.densities, x)
            )
        )

    def q_power(self, s) -> list[np.ndarray]:
        """Q^s per block, via the Hermitian eigendecomposition (s may be complex)."""
        out = []
        for w, v in self._eigs:
            d = np.exp(np.asarray(s, dtype=complex) * np.log(w))
            out.append(v @ np.diag(d) @ v.conj().T)
        return out

    def sigma(self, z, x) -> list[np.ndarray]:
        """Modular automorphism sigma_z(x) = Q^{iz} x Q^{-iz}."""
        x = self.algebra.element(x)
        left = self.q_power(1j * z)
        right = self.q_power(-1j * z)
        return [l @ a @ r for l, a, r in zip(left, x, right)]

    def __repr__(self) -> str:
        kind = "markov" if self.is_markov_trace else "density"
        return f"Functional({self.algebra!r}, {kind})"


class RepresentedAlgebra:
    """An algebra together with per-block multiplicities giving M inside B(H).

    H is identified with the direct sum over blocks of C^{n(a)} tensor
    C^{m(a)} by ``block_unitary`` (default: that ordering itself), and
    embed(x) conjugates the block-diagonal amplified matrix back to H.
    """

    def __init__(self, algebra: MultiMatrixAlgebra, multiplicities, block_unitary=None):
        self.algebra = algebra
        mult = tuple(int(m) for m in multiplicities)
        if len(mult) != len(algebra.blocks) or any(m < 1 for m in mult):
            raise ValidationError("multiplicities must be >= 1, one per block")
        self.multiplicities = mult
        self.hilbert_dim = int(
            sum(n * m for n, m in zip(algebra.blocks, mult))
        )
        if block_unitary is None:
            u = np.eye(self.hilbert_dim, dtype=complex)
        else:
            u = np.asarray(block_unitary, dtype=complex)
            if u.shape != (self.hilbert_dim, self.hilbert_dim):
                raise ValidationError("block_unitary has the wrong shape")
            if np.abs(u @ u.conj().T - np.eye(self.hilbert_dim)).max() > 1e-10:
                raise ValidationError("block_unitary is not unitary")
        self.block_unitary = u
        self._commutant: list[np.ndarray] | None = None

    def embed(self, x) -> np.ndarray:
        x = self.algebra.element(x)
        amp = _block_diag(
            [np.kron(a, np.eye(m)) for a, m in zip(x, self.multiplicities)]
        )
        u = self.block_unitary
        return u.conj().T @ amp @ u

    def embedded_unit_basis(self) -> list[np.ndarray]:
        return [self.embed(b) for b in self.algebra.unit_basis()]

    def unembed(self, t, tol: float = 1e-8) -> list[np.ndarray]:
        """Invert ``embed`` by least squares; reject matrices outside M."""
        t = np.asarray(t, dtype=complex)
        basis = np.stack([_vec(b) for b in self.embedded_unit_basis()], axis=1)
        coeff, *_ = np.linalg.lstsq(basis, _vec(t), rcond=None)
        resid = np.abs(basis @ coeff - _vec(t)).max()
        if resid > tol * max(1.0, np.abs(t).max()):
            raise ValidationError(
                f"matrix is not in the represented algebra (residual {resid:.3e})"
            )
        return self.algebra.from_coords(coeff)

    def central_projection_matrix(self, alpha: int) -> np.ndarray:
        return self.embed(self.algebra.central_projection(alpha))

    def commutant_basis(self) -> list[np.ndarray]:
        """Basis of {T : T embed(x) = embed(x) T for all x}.

        Built structurally as the amplified 1_{n(a)} tensor M_{m(a)} blocks,
        conjugated by the block unitary; dimension is the sum of the squared
        multiplicities.
        """
        if self._commutant is None:
            u = self.block_unitary
            basis = []
            offset = 0
            sizes = [n * m for n, m in zip(self.algebra.blocks, self.multiplicities)]
            for (n, m, sz) in zip(self.algebra.blocks, self.multiplicities, sizes):
                for k in range(m):
                    for l in range(m):
                        e = np.zeros((m, m), dtype=complex)
                        e[k, l] = 1.0
                        blk = np.kron(np.eye(n), e)
                        t = np.zeros((self.hilbert_dim, self.hilbert_dim), dtype=complex)
                        t[offset : offset + sz, offset : offset + sz] = blk
                        basis.append(u.conj().T @ t @ u)
                offset += sz
            self._commutant = basis
        return self._commutant

    def commutant_dim(self) -> int:
        return int(sum(m * m for m in self.multiplicities))

    def same_representation(self, other: "RepresentedAlgebra") -> bool:
        return (
            isinstance(other, RepresentedAlgebra)
            and self.algebra == other.algebra
            and self.multiplicities == other.multiplicities
            and np.abs(self.block_unitary - other.block_unitary).max() <= 1e-12
        )

    def __repr__(self) -> str:
        return (
            f"RepresentedAlgebra(blocks={list(self.algebra.blocks)}, "
            f"multiplicities={list(self.multiplicities)})"
        )


def _nullspace_commutant(rep: RepresentedAlgebra) -> opspace.OperatorSubspace:
    """Commutant recomputed from scratch as the nullspace of the commutation
    equations; used to cross-check the structural construction."""
    d = rep.hilbert_dim
    eye = np.eye(d)
    rows = []
    for b in rep.embedded_unit_basis():
        rows.append(np.kron(b, eye) - np.kron(eye, b.T))
    stacked = np.vstack(rows)
    _, s, vh = np.linalg.svd(stacked)
    cut = 1e-10 * max(1.0, s[0] if s.size else 0.0)
    null_rows = vh[s <= cut].conj()
    extra = vh[s.size :].conj()
    all_rows = np.vstack([null_rows, extra]) if extra.size else null_rows
    k = all_rows.shape[0]
    return opspace.OperatorSubspace(all_rows.reshape(k, d, d), (d, d), 1e-9)


def represent(
    algebra: MultiMatrixAlgebra,
    multiplicities,
    block_unitary=None,
    check: bool = True,
) -> RepresentedAlgebra:
    """Build a represented algebra and cross-check its commutant.

    The structural commutant (amplified matrix units on the multiplicity
    legs) is compared against the nullspace of the commutation equations;
    a mismatch raises, since the two constructions are independent.
    """
    rep = RepresentedAlgebra(algebra, multiplicities, block_unitary)
    if check:
        structural = opspace.span_of(
            rep.commutant_basis(), shape=(rep.hilbert_dim, rep.hilbert_dim)
        )
        recomputed = _nullspace_commutant(rep)
        if structural.dim != rep.commutant_dim():
            raise InternalConsistencyError(
                f"structural commutant dimension {structural.dim} != "
                f"{rep.commutant_dim()}"
            )
        if not structural.equals(recomputed):
            raise InternalConsistencyError(
                "structural and nullspace commutants disagree "
                f"(dims {structural.dim} vs {recomputed.dim})"
            )
    return rep


class GNSSpace:
    """The inner-product space of an algebra with a faithful functional.

    Coordinates are chosen isometrically: c(x) has per-block components
    sqrt(n(a)) * vec(x_a Q_a^{1/2}), so the standard inner product of
    coordinates equals Tr_M(Q x^dag y).  The left action, the modular
    operator powers, and the (anti-linear) conjugation J all become explicit
    block matrices in these coordinates; J is stored as a real permutation S
    applied after coordinate conjugation.
    """

    def __init__(self, algebra: MultiMatrixAlgebra, functional: Functional):
        if functional.algebra != algebra:
            raise ValidationError("functional belongs to a different algebra")
        self.algebra = algebra
        self.functional = functional
        self.dim = algebra.alg_dim
        self.tracial = functional.is_markov_trace
        self._qh = functional.q_power(0.5)
        self._qih = functional.q_power(-0.5)
        self._coord_elements: list[list[np.ndarray]] | None = None
        self._j: np.ndarray | None = None

    # -- coordinates --------------------------------------------------------

    def coords(self, x) -> np.ndarray:
        x = self.algebra.element(x)
        parts = [
            np.sqrt(n) * _vec(a @ qh)
            for n, a, qh in zip(self.algebra.blocks, x, self._qh)
        ]
        return np.concatenate(parts)

    def inv_coords(self, v) -> list[np.ndarray]:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.size != self.dim:
            raise ValidationError(f"vector length {v.size}, expected {self.dim}")
        out, pos = [], 0
        for n, qih in zip(self.algebra.blocks, self._qih):
            out.append(_unvec(v[pos : pos + n * n], n, n) / np.sqrt(n) @ qih)
            pos += n * n
        return out

    def coordinate_elements(self) -> list[list[np.ndarray]]:
        """Algebra elements whose coordinates are the standard basis vectors."""
        if self._coord_elements is None:
            eye = np.eye(self.dim)
            self._coord_elements = [self.inv_coords(eye[k]) for k in range(self.dim)]
        return self._coord_elements

    # -- actions and modular data --------------------------------------------

    def left_action(self, x) -> np.ndarray:
        x = self.algebra.element(x)
        return _block_diag(
            [np.kron(a, np.eye(n)) for a, n in zip(x, self.algebra.blocks)]
        )

    def right_action(self, y) -> np.ndarray:
        y = self.algebra.element(y)
        s = self.functional.sigma(0.5j, y)
        return _block_diag(
            [np.kron(np.eye(n), b.T) for b, n in zip(s, self.algebra.blocks)]
        )

    def nabla_power(self, s) -> np.ndarray:
        qs = self.functional.q_power(s)
        qms = self.functional.q_power(-s)
        return _block_diag([np.kron(a, b.conj()) for a, b in zip(qs, qms)])

    def j_matrix(self) -> np.ndarray:
        """The real permutation S with J v = S conj(v) (one vec-transposition
        per block; independent of the density)."""
        if self._j is None:
            self._j = _block_diag(
                [_transposition_permutation(n) for n in self.algebra.blocks]
            )
        return self._j

    def apply_j(self, v) -> np.ndarray:
        return self.j_matrix() @ np.conj(np.asarray(v, dtype=complex))

    def sigma(self, z, x) -> list[np.ndarray]:
        return self.functional.sigma(z, x)

    def representation(self) -> RepresentedAlgebra:
        """The representation by left multiplication (multiplicity n(a))."""
        return RepresentedAlgebra(self.algebra, self.algebra.blocks)

    def __repr__(self) -> str:
        return f"GNSSpace(blocks={list(self.algebra.blocks)}, dim={self.dim}, tracial={self.tracial})"


def modular_sigma(space: GNSSpace, z, x) -> list[np.ndarray]:
    """Modular automorphism sigma_z(x) = Q^{iz} x Q^{-iz} of a GNS space."""
    return space.sigma(z, x)


def gns(algebra: MultiMatrixAlgebra, functional: Functional) -> GNSSpace:
    return GNSSpace(algebra, functional)


def opposite(algebra: MultiMatrixAlgebra) -> MultiMatrixAlgebra:
    return algebra.opposite()

"""Numerically robust calculus of finite-dimensional operator subspaces.

A subspace V of complex matrices (maps C^{cols} -> C^{rows}) is stored by an
orthonormal basis for the Hilbert-Schmidt inner product <S,T> = Tr(S^dag T).
The canonical form of a subspace is its orthogonal projection matrix acting
on row-major vectorized matrices; equality and inclusion are always decided
on projections, never on bases (SVD tie-breaking makes bases non-canonical).
"""

from __future__ import annotations

import numpy as np

from .config import eq_tol, rank_tol
from .errors import ValidationError

__all__ = [
    "OperatorSubspace",
    "span_of",
    "zero_space",
    "full_space",
    "compose_spaces",
    "adjoint_space",
    "transpose_space",
    "bimodule_generate",
    "compare",
    "intersect",
    "sum_spaces",
]


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


class OperatorSubspace:
    """Span of complex ``rows x cols`` matrices with an HS-orthonormal basis."""

    def __init__(self, onb: np.ndarray, shape: tuple[int, int], tol: float):
        self.shape = (int(shape[0]), int(shape[1]))
        self.onb = np.asarray(onb, dtype=complex).reshape(-1, *self.shape)
        self.tol = float(tol)
        self._projection: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.onb.shape[0]

    @property
    def basis(self) -> list[np.ndarray]:
        return [self.onb[i] for i in range(self.dim)]

    def projection(self) -> np.ndarray:
        """Orthogonal projection onto the subspace, on vectorized matrices."""
        if self._projection is None:
            n = self.shape[0] * self.shape[1]
            if self.dim == 0:
                self._projection = np.zeros((n, n), dtype=complex)
            else:
                b = self.onb.reshape(self.dim, n)
                self._projection = b.T @ b.conj()
        return self._projection

    def contains(self, t: np.ndarray, tol: float | None = None) -> bool:
        t = np.asarray(t, dtype=complex)
        if t.shape != self.shape:
            raise ValidationError(
                f"matrix shape {t.shape} does not match subspace shape {self.shape}"
            )
        v = _vec(t)
        resid = v - self.projection() @ v
        return np.linalg.norm(resid) <= eq_tol(tol) * max(1.0, np.linalg.norm(v))

    def subset_of(self, other: "OperatorSubspace", tol: float | None = None) -> bool:
        _check_same_shape(self, other)
        if self.dim == 0:
            return True
        p = other.projection()
        b = self.onb.reshape(self.dim, -1)
        resid = b - b @ p.T  # rows are vectors; P acts on columns
        return float(np.abs(resid).max()) <= eq_tol(tol)

    def equals(self, other: "OperatorSubspace", tol: float | None = None) -> bool:
        _check_same_shape(self, other)
        d = np.abs(self.projection() - other.projection()).max() if (
            self.dim or other.dim
        ) else 0.0
        return float(d) <= eq_tol(tol)

    def __repr__(self) -> str:
        return f"OperatorSubspace(shape={self.shape}, dim={self.dim})"


def _check_same_shape(v: OperatorSubspace, w: OperatorSubspace) -> None:
    if v.shape != w.shape:
        raise ValidationError(f"subspace shapes differ: {v.shape} vs {w.shape}")


def span_of(
    generators,
    shape: tuple[int, int] | None = None,
    tol: float | None = None,
) -> OperatorSubspace:
    """Subspace spanned by a list of matrices.

    The basis comes from an SVD of the stacked vectorized generators; the
    dimension is the numerical rank at the relative threshold ``tol``
    (default 1e-9 times the top singular value).  An empty generator list is
    allowed and yields the zero subspace, in which case ``shape`` is required.
    """
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        if shape is None:
            raise ValidationError("empty generator list requires an explicit shape")
        return OperatorSubspace(np.zeros((0, *shape)), shape, rank_tol(tol))
    shp = gens[0].shape
    if len(shp) != 2:
        raise ValidationError("generators must be 2-d matrices")
    if shape is not None and tuple(shape) != shp:
        raise ValidationError(f"generator shape {shp} does not match requested {shape}")
    for g in gens:
        if g.shape != shp:
            raise ValidationError("all generators must share the same shape")
    mat = np.stack([_vec(g) for g in gens])
    _, s, vh = np.linalg.svd(mat, full_matrices=False)
    cut = rank_tol(tol)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > cut * max(1.0, s[0])))
    return OperatorSubspace(vh[:rank].reshape(rank, *shp), shp, cut)


def zero_space(shape: tuple[int, int]) -> OperatorSubspace:
    return span_of([], shape=shape)


def full_space(shape: tuple[int, int]) -> OperatorSubspace:
    n = shape[0] * shape[1]
    return OperatorSubspace(np.eye(n).reshape(n, *shape), shape, rank_tol(None))


def compose_spaces(
    v: OperatorSubspace, w: OperatorSubspace, tol: float | None = None
) -> OperatorSubspace:
    """Span of all products v @ w (v in V, w in W); inner dimensions must agree."""
    if v.shape[1] != w.shape[0]:
        raise ValidationError(
            f"cannot compose: {v.shape} after {w.shape} (inner dims differ)"
        )
    out_shape = (v.shape[0], w.shape[1])
    if v.dim == 0 or w.dim == 0:
        return zero_space(out_shape)
    prods = [a @ b for a in v.basis for b in w.basis]
    return span_of(prods, shape=out_shape, tol=tol)


def adjoint_space(v: OperatorSubspace, tol: float | None = None) -> OperatorSubspace:
    """Span of elementwise conjugate-transposes."""
    shp = (v.shape[1], v.shape[0])
    return span_of([a.conj().T for a in v.basis], shape=shp, tol=tol)


def transpose_space(v: OperatorSubspace, tol: float | None = None) -> OperatorSubspace:
    """Span of elementwise transposes."""
    shp = (v.shape[1], v.shape[0])
    return span_of([a.T for a in v.basis], shape=shp, tol=tol)


def bimodule_generate(
    a_basis,
    generators,
    b_basis,
    shape: tuple[int, int] | None = None,
    tol: float | None = None,
) -> OperatorSubspace:
    """Span of ``a @ g @ b`` over the two multiplier algebras.

    ``a_basis`` and ``b_basis`` must each span an algebra (closed under
    products), so a single left pass followed by a single right pass closes
    the generators; no iteration is needed.  Each pass re-canonicalizes, which
    keeps the intermediate generator count at most the ambient dimension.
    """
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        if shape is None:
            raise ValidationError("empty generator list requires an explicit shape")
        return zero_space(shape)
    shp = gens[0].shape
    left = span_of([np.asarray(a) @ g for a in a_basis for g in gens], shape=shp, tol=tol)
    if left.dim == 0:
        return left
    return span_of(
        [x @ np.asarray(b) for x in left.basis for b in b_basis], shape=shp, tol=tol
    )


def compare(
    v: OperatorSubspace, w: OperatorSubspace, tol: float | None = None
) -> str:
    """Order relation between two subspaces: one of
    ``"equal"``, ``"V<=W"``, ``"W<=V"``, ``"incomparable"``."""
    vw = v.subset_of(w, tol)
    wv = w.subset_of(v, tol)
    if vw and wv:
        return "equal"
    if vw:
        return "V<=W"
    if wv:
        return "W<=V"
    return "incomparable"


def intersect(
    v: OperatorSubspace, w: OperatorSubspace, tol: float | None = None
) -> OperatorSubspace:
    """Intersection, via the nullspace of the stacked complement projections.

    A vector lies in both subspaces exactly when both residuals vanish; the
    singular-value cut is sqrt(2) times the comparison tolerance, matching a
    per-space membership residual of at most that tolerance.
    """
    _check_same_shape(v, w)
    n = v.shape[0] * v.shape[1]
    eye = np.eye(n)
    stacked = np.vstack([eye - v.projection(), eye - w.projection()])
    _, s, vh = np.linalg.svd(stacked)
    cut = np.sqrt(2.0) * eq_tol(tol)
    rows = vh[s <= cut].conj()
    return OperatorSubspace(rows.reshape(rows.shape[0], *v.shape), v.shape, rank_tol(None))


def sum_spaces(
    v: OperatorSubspace, w: OperatorSubspace, tol: float | None = None
) -> OperatorSubspace:
    """Linear span of the union."""
    _check_same_shape(v, w)
    return span_of(v.basis + w.basis, shape=v.shape, tol=tol)

"""Seeded random instances for the verification suites.

Sizes follow the desk-scale contract: algebras get at most three blocks of
size at most three with GNS dimension at most fourteen, so every suite stays
interactive.  All draws flow through one ``numpy.random.Generator``; suites
derive one child seed per trial from a ``SeedSequence`` so a single seed
reproduces the whole run and any failing trial in isolation.
"""

from __future__ import annotations

import numpy as np

from . import cpmap, qrel
from .mvnalg import Functional, MultiMatrixAlgebra, RepresentedAlgebra, represent
from .qfunc import Hom

__all__ = [
    "trial_seeds",
    "random_algebra",
    "random_state",
    "random_element",
    "haar_unitary",
    "random_representation",
    "random_relation",
    "random_graph",
    "random_hom",
    "random_cp",
    "random_stochastic",
]

MAX_BLOCKS = 3
MAX_SIZE = 3
MAX_GNS_DIM = 14


def trial_seeds(seed: int, trials: int) -> list[int]:
    """One independent 64-bit child seed per trial."""
    ss = np.random.SeedSequence(int(seed))
    return [int(s.generate_state(1)[0]) for s in ss.spawn(int(trials))]


def random_algebra(
    rng: np.random.Generator,
    max_blocks: int = MAX_BLOCKS,
    max_size: int = MAX_SIZE,
    max_gns_dim: int = MAX_GNS_DIM,
) -> MultiMatrixAlgebra:
    while True:
        k = int(rng.integers(1, max_blocks + 1))
        blocks = [int(rng.integers(1, max_size + 1)) for _ in range(k)]
        if sum(n * n for n in blocks) <= max_gns_dim:
            return MultiMatrixAlgebra(blocks)


def random_state(
    rng: np.random.Generator, algebra: MultiMatrixAlgebra, tracial: bool = False
) -> Functional:
    """A faithful state; with ``tracial`` the Markov trace state."""
    if tracial:
        return Functional.markov(algebra)
    densities = []
    for n in algebra.blocks:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        densities.append(a @ a.conj().T + 0.2 * np.eye(n))
    tot = sum(
        n * float(np.trace(d).real) for n, d in zip(algebra.blocks, densities)
    )
    return Functional(algebra, [d / tot for d in densities])


def random_element(
    rng: np.random.Generator,
    algebra: MultiMatrixAlgebra,
    hermitian: bool = False,
    positive: bool = False,
) -> list[np.ndarray]:
    out = []
    for n in algebra.blocks:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if positive:
            a = a @ a.conj().T
        elif hermitian:
            a = (a + a.conj().T) / 2
        out.append(a)
    return out


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_representation(
    rng: np.random.Generator,
    algebra: MultiMatrixAlgebra,
    max_mult: int = 2,
    rotate: bool = True,
) -> RepresentedAlgebra:
    mult = [int(rng.integers(1, max_mult + 1)) for _ in algebra.blocks]
    dim = sum(n * m for n, m in zip(algebra.blocks, mult))
    u = haar_unitary(rng, dim) if rotate else None
    return represent(algebra, mult, u, check=False)


def random_relation(
    rng: np.random.Generator,
    source: RepresentedAlgebra,
    target: RepresentedAlgebra,
    generators: int = 1,
) -> qrel.QuantumRelation:
    shape = (target.hilbert_dim, source.hilbert_dim)
    gens = [
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        for _ in range(generators)
    ]
    return qrel.make_relation(source, target, gens, close=True)


def random_graph(
    rng: np.random.Generator,
    rep: RepresentedAlgebra,
    reflexive: bool = True,
    extra: int = 1,
) -> qrel.QuantumRelation:
    """A symmetric (optionally reflexive) endomorphic relation: the bimodule
    closure of a star-closed generating set.  Draws low-rank generators so
    the result is not always the full space."""
    d = rep.hilbert_dim
    gens = list(rep.commutant_basis()) if reflexive else []
    for _ in range(extra):
        u = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        g = np.outer(u, v.conj())
        gens.extend([g, g.conj().T])
    if not reflexive and not gens:
        gens = [np.eye(d, dtype=complex)]
    return qrel.make_relation(rep, rep, gens, close=True)


def random_hom(
    rng: np.random.Generator,
    unital: bool = True,
    injective: bool = True,
    max_gns_dim: int = MAX_GNS_DIM,
    source: MultiMatrixAlgebra | None = None,
) -> Hom:
    """A random *-homomorphism between random multimatrix algebras over
    their GNS representations.

    Built from a multiplicity pattern: target block beta carries
    ``k[beta, alpha]`` copies of source block alpha plus an optional dead
    corner (the non-unital case); a zero column kills a source block (the
    non-injective case).  Each target block is conjugated by a Haar unitary
    so images are never axis-aligned.  Passing ``source`` pins the domain,
    which lets callers chain homomorphisms.
    """
    while True:
        if source is not None:
            src = source
        else:
            src = random_algebra(rng, max_blocks=2, max_size=2, max_gns_dim=6)
        b = len(src.blocks)
        rows = int(rng.integers(1, MAX_BLOCKS + 1))
        k = rng.integers(0, 2, size=(rows, b))
        pad = np.zeros(rows, dtype=int)
        if not unital:
            pad[int(rng.integers(0, rows))] = 1 + int(rng.integers(0, 2))
        if not injective and b > 1:
            k[:, int(rng.integers(0, b))] = 0
        sizes = k @ np.asarray(src.blocks) + pad
        if (sizes == 0).any() or sizes.max() > MAX_SIZE:
            continue
        if injective and (k.sum(axis=0) == 0).any():
            continue
        if sum(int(s) * int(s) for s in sizes) > max_gns_dim:
            continue
        tgt = MultiMatrixAlgebra([int(s) for s in sizes])
        units = [haar_unitary(rng, int(s)) for s in sizes]

        def action(x, k=k, units=units, pad=pad, tgt=tgt):
            out = []
            for beta in range(len(tgt.blocks)):
                parts = []
                for alpha, xa in enumerate(x):
                    for _ in range(int(k[beta, alpha])):
                        parts.append(xa)
                if pad[beta]:
                    parts.append(np.zeros((int(pad[beta]), int(pad[beta]))))
                m = np.zeros((tgt.blocks[beta], tgt.blocks[beta]), dtype=complex)
                r = 0
                for p in parts:
                    m[r : r + p.shape[0], r : r + p.shape[1]] = p
                    r += p.shape[0]
                out.append(units[beta] @ m @ units[beta].conj().T)
            return out

        cols = [
            tgt.coords(action(u)) for u in src.unit_basis()
        ]
        return Hom(
            qrel.gns_representation(src),
            qrel.gns_representation(tgt),
            np.stack(cols, axis=1),
        )


def random_cp(
    rng: np.random.Generator,
    source: RepresentedAlgebra,
    target: RepresentedAlgebra,
    kraus_count: int = 2,
) -> cpmap.CPMap:
    """A random completely positive map between the algebras: compress by
    random operators, then apply the trace-compatible expectation onto the
    target algebra.  Both steps are completely positive, and the second
    forces the image into the algebra for any choice of compressions."""
    shape = (source.hilbert_dim, target.hilbert_dim)
    ops = [
        (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        / np.sqrt(2.0 * shape[0])
        for _ in range(kraus_count)
    ]

    def fn(x):
        big = source.embed(x)
        t = sum(w.conj().T @ big @ w for w in ops)
        return cpmap.conditional_expectation(target, t)

    return cpmap.cp_from_callable(source, target, fn)


def random_stochastic(
    rng: np.random.Generator, nx: int, ny: int, sparsity: float = 0.4
) -> np.ndarray:
    """A row-stochastic kernel with a controllable share of exact zeros."""
    p = rng.random((nx, ny)) * (rng.random((nx, ny)) > sparsity)
    for i in range(nx):
        if p[i].sum() <= 0:
            p[i, int(rng.integers(0, ny))] = 1.0
        p[i] /= p[i].sum()
    return p

"""Tolerance defaults.

All rank/zero decisions in the package use a relative singular-value
threshold (``RANK_TOL`` times the largest singular value); subspace
comparisons use an absolute entrywise threshold on canonical projection
matrices (``EQ_TOL``).  The environment variable ``QRELKIT_TOL`` overrides
the *comparison* default, mirroring the CLI's ``--tol`` flag.
"""

from __future__ import annotations

import os

VERSION = "0.1.0"

RANK_TOL = 1e-9
EQ_TOL = 1e-8


def rank_tol(tol: float | None = None) -> float:
    """Resolve a relative rank-cut tolerance."""
    return RANK_TOL if tol is None else float(tol)


def eq_tol(tol: float | None = None) -> float:
    """Resolve an absolute comparison tolerance (env-overridable)."""
    if tol is not None:
        return float(tol)
    env = os.environ.get("QRELKIT_TOL")
    return float(env) if env else EQ_TOL

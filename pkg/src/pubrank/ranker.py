"""Damped power iteration over row-stochastic transition operators.

The engine is matrix-free: a :class:`TransitionOperator` only knows how to
apply ``x -> x @ C`` for a row-(sub)stochastic ``C`` whose all-zero rows are
listed explicitly.  Dangling rows are never densified; their probability mass
is accumulated per step and redistributed uniformly, which is what makes
million-node corpora tractable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
import scipy.sparse as sp

DEFAULT_DAMPING = 0.85
DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 200

# n small enough to densify and solve directly
EXACT_MAX_DIM = 12


@dataclass(frozen=True)
class TransitionOperator:
    """Row-normalized transition structure applied from the left.

    ``apply(x)`` computes ``x @ C`` where every non-dangling row of the
    implied matrix ``C`` sums to 1; rows listed in ``dangling`` carry no
    outgoing mass and contribute nothing through ``apply``.
    """

    n: int
    apply: Callable[[np.ndarray], np.ndarray]
    dangling: np.ndarray  # sorted int64 row indices with zero out-weight

    def dangling_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[self.dangling] = True
        return mask


@dataclass(frozen=True)
class PowerIterationConfig:
    damping: float = DEFAULT_DAMPING
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    teleport: Optional[np.ndarray] = None  # None means uniform

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must be in (0,1), got {self.damping}")
        if self.tolerance < 0.0:
            raise ValueError("tolerance must be nonnegative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.teleport is not None:
            v = np.asarray(self.teleport, dtype=np.float64)
            if v.ndim != 1:
                raise ValueError("teleport vector must be one-dimensional")
            if np.any(v < 0.0):
                raise ValueError("teleport vector must be nonnegative")
            if abs(float(v.sum()) - 1.0) > 1e-12:
                raise ValueError("teleport vector must sum to 1")
            object.__setattr__(self, "teleport", v)

    def teleport_for(self, n: int) -> np.ndarray:
        if self.teleport is None:
            return np.full(n, 1.0 / n)
        if self.teleport.shape[0] != n:
            raise ValueError(
                f"teleport vector has dimension {self.teleport.shape[0]}, "
                f"operator has {n}"
            )
        return self.teleport


@dataclass(frozen=True)
class RankVector:
    """Stationary distribution estimate plus convergence bookkeeping."""

    values: np.ndarray
    iterations_used: int
    final_residual: float
    converged: bool
    residuals: tuple = field(default=())


def row_normalize(weights: Union[np.ndarray, sp.spmatrix]) -> TransitionOperator:
    """Turn a nonnegative row-weighted adjacency into a TransitionOperator.

    Non-zero rows are divided by their sum; all-zero rows are recorded as
    dangling.  Raises ValueError on any negative weight.
    """
    if sp.issparse(weights):
        mat = weights.tocsr().astype(np.float64)
    else:
        mat = sp.csr_matrix(np.asarray(weights, dtype=np.float64))
    if mat.shape[0] != mat.shape[1]:
        raise ValueError(f"transition weights must be square, got {mat.shape}")
    if mat.nnz and mat.data.min() < 0.0:
        raise ValueError("negative weight in transition adjacency")

    n = mat.shape[0]
    row_sums = np.asarray(mat.sum(axis=1)).ravel()
    dangling = np.flatnonzero(row_sums == 0.0)
    inv = np.zeros(n)
    nz = row_sums > 0.0
    inv[nz] = 1.0 / row_sums[nz]
    # scale each row in place through the csr data layout
    norm = mat.copy()
    norm.data = norm.data * np.repeat(inv, np.diff(norm.indptr))

    def apply(x: np.ndarray) -> np.ndarray:
        return x @ norm

    return TransitionOperator(n=n, apply=apply, dangling=dangling.astype(np.int64))


def power_iterate(op: TransitionOperator, cfg: PowerIterationConfig) -> RankVector:
    """Solve pi^T = damping * pi^T C' + (1 - damping) * v^T by iteration.

    C' is the operator with every dangling row replaced by the uniform row.
    Starts from the uniform vector, measures the L1 distance between
    successive iterates and stops at cfg.tolerance or cfg.max_iterations,
    whichever comes first.  Non-convergence is reported through the flag,
    not raised.
    """
    n = op.n
    if n < 1:
        raise ValueError("operator dimension must be >= 1")
    alpha = cfg.damping
    v = cfg.teleport_for(n)
    dangling = op.dangling
    uniform = 1.0 / n

    x = np.full(n, uniform)
    residuals = []
    residual = np.inf
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        dangling_mass = float(x[dangling].sum()) if dangling.size else 0.0
        y = alpha * op.apply(x)
        y += alpha * dangling_mass * uniform
        y += (1.0 - alpha) * v
        residual = float(np.abs(y - x).sum())
        residuals.append(residual)
        x = y / y.sum()
        if residual <= cfg.tolerance:
            break
    converged = residual <= cfg.tolerance
    return RankVector(
        values=x,
        iterations_used=iterations,
        final_residual=residual,
        converged=converged,
        residuals=tuple(residuals),
    )


def stationary_exact(
    dense_transition: np.ndarray, cfg: PowerIterationConfig
) -> RankVector:
    """Direct linear solve of the damped stationary equation for tiny n.

    Applies the same row normalization and dangling repair as the iterative
    path, then solves (I - damping * C')^T pi = (1 - damping) * v by Gaussian
    elimination.  Intended as a test oracle; restricted to n <= 12.
    """
    mat = np.asarray(dense_transition, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    n = mat.shape[0]
    if n < 1:
        raise ValueError("matrix dimension must be >= 1")
    if n > EXACT_MAX_DIM:
        raise ValueError(f"exact solve limited to n <= {EXACT_MAX_DIM}, got {n}")
    if mat.min() < 0.0:
        raise ValueError("negative weight in transition adjacency")

    row_sums = mat.sum(axis=1)
    repaired = np.empty_like(mat)
    for i in range(n):
        if row_sums[i] > 0.0:
            repaired[i] = mat[i] / row_sums[i]
        else:
            repaired[i] = 1.0 / n  # dangling repair

    alpha = cfg.damping
    v = cfg.teleport_for(n)
    system = np.eye(n) - alpha * repaired.T
    pi = np.linalg.solve(system, (1.0 - alpha) * v)
    assert np.all(np.isfinite(pi)), "damped system must be nonsingular for damping < 1"
    pi = pi / pi.sum()
    return RankVector(
        values=pi, iterations_used=0, final_residual=0.0, converged=True
    )

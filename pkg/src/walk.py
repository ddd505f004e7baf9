#!/usr/bin/env python3
"""
Walk matrices for dynkin-walk
W(M) = [e, Me, ..., M^{m-1}e] by repeated matrix-vector products, the
truncation W-hat, exact and numeric main-eigenvalue counts, and the integer
walk recurrence (main polynomial).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .chebyshev import IntPolynomial
from .errors import DimensionError, InvalidParameterError, NumericFailureError
from .exact_linalg import BigMatrix, rank_rational, solve_rational, submatrix
from .graph_core import Graph, adjacency_matrix

logger = logging.getLogger("dynkin-walk.walk")

DEFAULT_EIGEN_TOL = 1e-8
JACOBI_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class WalkPair:
    """W(G) and its truncation (first row and last column removed)"""
    W: BigMatrix
    hatW: BigMatrix


def _row_support(a: BigMatrix) -> List[List[Tuple[int, int]]]:
    return [[(j, x) for j, x in enumerate(a.row(i)) if x] for i in range(a.rows)]


def walk_columns(a: BigMatrix, count: int) -> List[Tuple[int, ...]]:
    """e, Ae, ..., A^{count-1}e; each step costs one pass over the nonzeros of A"""
    if not a.is_square:
        raise DimensionError(f"walk matrix of a non-square {a.rows}x{a.cols} matrix")
    support = _row_support(a)
    column = (1,) * a.rows
    columns = []
    for _ in range(count):
        columns.append(column)
        column = tuple(sum(x * column[j] for j, x in row) for row in support)
    return columns


def _from_columns(columns: List[Tuple[int, ...]], rows: int) -> BigMatrix:
    return BigMatrix(rows, len(columns), tuple(col[i] for i in range(rows) for col in columns))


def walk_matrix(a: BigMatrix) -> BigMatrix:
    """m x m matrix whose column j is M^{j-1} e_m"""
    if not a.is_square:
        raise DimensionError(f"walk matrix of a non-square {a.rows}x{a.cols} matrix")
    return _from_columns(walk_columns(a, a.rows), a.rows)


def hat_walk_matrix(g: Graph) -> BigMatrix:
    if g.n < 2:
        raise DimensionError(f"truncated walk matrix needs at least 2 vertices, got {g.n}")
    W = walk_matrix(adjacency_matrix(g))
    return submatrix(W, range(1, g.n), range(g.n - 1))


def walk_pair(g: Graph) -> WalkPair:
    if g.n < 2:
        raise DimensionError(f"truncated walk matrix needs at least 2 vertices, got {g.n}")
    W = walk_matrix(adjacency_matrix(g))
    return WalkPair(W, submatrix(W, range(1, g.n), range(g.n - 1)))


def main_eigenvalue_count_exact(g: Graph) -> int:
    """rank of W(G) over the rationals"""
    return rank_rational(walk_matrix(adjacency_matrix(g)))


def main_polynomial(g: Graph) -> IntPolynomial:
    """Monic P of degree r = rank W(G) with P(A) e = 0

    e, Ae, ..., A^{r-1}e are independent, so A^r e has unique coordinates in
    them; those coordinates are integers.
    """
    A = adjacency_matrix(g)
    columns = walk_columns(A, g.n + 1)
    W = _from_columns(columns[:g.n], g.n)
    r = rank_rational(W)
    basis = _from_columns(columns[:r], g.n)
    coords = solve_rational(basis, columns[r])
    if any(c.denominator != 1 for c in coords):
        raise NumericFailureError(f"walk recurrence has non-integral coefficients {coords}")
    return IntPolynomial(tuple(-int(c) for c in coords) + (1,))


# ---------------------------------------------------------------------------
# numeric eigen-decomposition
# ---------------------------------------------------------------------------

def jacobi_eigh(a: np.ndarray, threshold: float = JACOBI_THRESHOLD,
                max_sweeps: int = JACOBI_MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations for a real symmetric matrix

    Stops once the off-diagonal Frobenius norm falls below threshold times
    max(1, ||a||_F). Returns eigenvalues and the matrix whose columns are the
    matching orthonormal eigenvectors.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=0.0):
        raise DimensionError("Jacobi rotations need a symmetric matrix")
    v = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(a)))

    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < threshold * scale:
            logger.debug(f"Jacobi converged on {n}x{n} after {sweep} sweeps (off={off:.2e})")
            return np.diag(a).copy(), v
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    raise NumericFailureError(f"Jacobi rotations did not converge in {max_sweeps} sweeps")


def main_eigenvalue_count_numeric(g: Graph, tol: float = DEFAULT_EIGEN_TOL,
                                  threshold: float = JACOBI_THRESHOLD,
                                  max_sweeps: int = JACOBI_MAX_SWEEPS) -> int:
    """Count eigenvalue clusters whose eigenspace has a projection of e above tol*sqrt(n)"""
    if tol <= 0:
        raise InvalidParameterError("tolerance must be positive")
    A = np.array(adjacency_matrix(g).to_lists(), dtype=float)
    values, vectors = jacobi_eigh(A, threshold, max_sweeps)
    order = np.argsort(values)
    values, vectors = values[order], vectors[:, order]

    groups = []
    start = 0
    for i in range(1, g.n + 1):
        if i == g.n or values[i] - values[i - 1] > tol:
            groups.append((start, i))
            start = i

    e = np.ones(g.n)
    cutoff = tol * math.sqrt(g.n)
    count = 0
    for lo, hi in groups:
        projection = float(np.linalg.norm(vectors[:, lo:hi].T @ e))
        if projection > cutoff:
            count += 1
    logger.debug(f"{len(groups)} eigenvalue clusters, {count} main")
    return count

"""Dense least-squares and ridge solvers.

Every linear fit in the network (block weights and h-function weights) goes
through :func:`solve_least_squares` or :func:`solve_ridge`. Both work in
float64 and are pure functions of their inputs.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, InvalidInput


@dataclass(frozen=True)
class SolveReport:
    solution: np.ndarray
    effective_rank: int
    residual_sse: float


def _check_system(A, y):
    A = np.asarray(A, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionMismatch(f"design matrix must be 2-D, got shape {A.shape}")
    if y.ndim != 1:
        raise DimensionMismatch(f"target must be 1-D, got shape {y.shape}")
    n_rows, n_cols = A.shape
    if n_rows < 1 or n_cols < 1:
        raise InvalidInput(f"design matrix must be non-empty, got shape {A.shape}")
    if y.shape[0] != n_rows:
        raise DimensionMismatch(f"design matrix has {n_rows} rows but target has {y.shape[0]}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise InvalidInput("design matrix and target must be finite")
    return A, y


def _report(A, y, x, rank):
    resid = A @ x - y
    return SolveReport(solution=x, effective_rank=int(rank), residual_sse=float(resid @ resid))


def solve_least_squares(A, y):
    """Minimum-norm least-squares solution of ``A x ~ y``.

    Uses a thin SVD. Singular values below ``max(N, m) * eps * s_max`` are
    treated as zero, which gives the Moore-Penrose pseudoinverse solution.
    """
    A, y = _check_system(A, y)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    cutoff = max(A.shape) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    keep = s > cutoff
    rank = int(np.count_nonzero(keep))
    coef = np.zeros_like(s)
    coef[keep] = (U[:, keep].T @ y) / s[keep]
    x = Vt.T @ coef
    return _report(A, y, x, rank)


def solve_ridge(A, y, lam):
    """Minimiser of ``||A x - y||^2 + lam ||x||^2``.

    ``lam == 0`` is routed to :func:`solve_least_squares`; a positive ``lam``
    solves ``(A^T A + lam I) x = A^T y`` by Cholesky factorisation.
    """
    lam = float(lam)
    if not np.isfinite(lam) or lam < 0:
        raise InvalidInput(f"ridge parameter must be finite and >= 0, got {lam}")
    if lam == 0.0:
        return solve_least_squares(A, y)
    A, y = _check_system(A, y)
    gram = A.T @ A
    gram[np.diag_indices_from(gram)] += lam
    rhs = A.T @ y
    factor = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
    x = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    # With lam > 0 the system is always full rank.
    return _report(A, y, x, A.shape[1])

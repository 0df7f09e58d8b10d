"""Graph construction and the graph-side solver pieces (row weights, spectral embedding)."""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from . import kernels
from .errors import InvalidInputError, NumericalError


@dataclass(frozen=True)
class AffinityGraph:
    W: np.ndarray
    symmetric: bool = False


@dataclass(frozen=True)
class GraphLaplacian:
    L: np.ndarray


def knn_affinity(X, k, self_exclude=True):
    """Gaussian k-nearest-neighbour graph over the columns of ``X``.

    Each column keeps weights ``exp(-d^2 / (2 sigma^2))`` to its ``k`` nearest
    neighbours, with ``sigma`` the median of all kept distances. Rows are
    normalized, the graph symmetrized, and rows normalized again so the result
    is a valid row-stochastic initial similarity matrix with zero diagonal.

    With ``self_exclude=False`` a sample counts as one of its own ``k``
    neighbours (its weight is still dropped from the diagonal).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise InvalidInputError("X must be a 2-D matrix with samples as columns")
    n = X.shape[1]
    if not 0 < k < n:
        raise InvalidInputError(f"need 0 < k < n, got k={k}, n={n}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("X contains non-finite values")

    D2 = kernels.pairwise_sq_dists(X.T)
    n_nb = k if self_exclude else k - 1
    rows = np.arange(n)
    ranked = D2.copy()
    ranked[rows, rows] = -np.inf  # self always sorts first, then is skipped
    order = np.argsort(ranked, axis=1, kind="stable")[:, 1:n_nb + 1]

    W = np.zeros((n, n))
    if n_nb > 0:
        d = np.sqrt(D2[rows[:, None], order])
        sigma = float(np.median(d))
        if sigma == 0.0:
            sigma = 1.0
        W[rows[:, None], order] = np.exp(-(d * d) / (2.0 * sigma * sigma))
    _row_normalize(W)
    W = 0.5 * (W + W.T)
    _row_normalize(W)
    return AffinityGraph(W, symmetric=False)


def _row_normalize(W):
    sums = W.sum(axis=1, keepdims=True)
    np.divide(W, sums, out=W, where=sums > 0)


def laplacian(S):
    """``L = D - (S + S^T)/2`` with ``D`` the degrees of the symmetrized graph."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidInputError("laplacian needs a square matrix")
    if np.any(S < 0):
        raise InvalidInputError("laplacian needs a nonnegative matrix")
    Ws = 0.5 * (S + S.T)
    L = np.diag(Ws.sum(axis=1)) - Ws
    return GraphLaplacian(L)


def row_weights(Xv, Fv, lambda2):
    """``G_ij = ||x_i - x_j||^2 + lambda2 ||f_i - f_j||^2`` (columns of Xv, rows of Fv)."""
    Xv = np.asarray(Xv, dtype=np.float64)
    Fv = np.asarray(Fv, dtype=np.float64)
    if Xv.ndim != 2 or Fv.ndim != 2 or Xv.shape[1] != Fv.shape[0]:
        raise InvalidInputError(
            f"view has {Xv.shape[-1]} samples but embedding has {Fv.shape[0]} rows"
        )
    if lambda2 < 0:
        raise InvalidInputError("lambda2 must be nonnegative")
    return kernels.pairwise_sq_dists(Xv.T) + lambda2 * kernels.pairwise_sq_dists(Fv)


def spectral_embedding(L, c):
    """Eigenvectors of the ``c`` smallest eigenvalues of a graph Laplacian."""
    L = L.L if isinstance(L, GraphLaplacian) else np.asarray(L, dtype=np.float64)
    n = L.shape[0]
    if not 0 < c <= n:
        raise InvalidInputError(f"need 0 < c <= n, got c={c}, n={n}")
    try:
        _, F = linalg.eigh(L, subset_by_index=[0, c - 1])
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    return F

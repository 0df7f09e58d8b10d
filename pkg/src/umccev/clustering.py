"""Affinity fusion and spectral clustering with a seeded k-means."""
import numpy as np
from scipy import linalg

from .errors import InvalidInputError, NumericalError


def fuse_affinity(Z, Us):
    """``(|Z| + |Z^T|)/2`` plus the view average of ``(|U| + |U^T|)/2``."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise InvalidInputError("Z must be square")
    absZ = np.abs(Z)
    A = 0.5 * (absZ + absZ.T)
    if len(Us):
        acc = np.zeros_like(A)
        for i, U in enumerate(Us):
            U = np.asarray(U, dtype=np.float64)
            if U.shape != Z.shape:
                raise InvalidInputError(f"U[{i}] has shape {U.shape}, expected {Z.shape}")
            absU = np.abs(U)
            acc += 0.5 * (absU + absU.T)
        A = A + acc / len(Us)
    return A


def _kmeans_pp(X, k, rng):
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[j] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centers[j]) ** 2, axis=1))
    return centers


def _assign(X, centers):
    d2 = (
        np.sum(X * X, axis=1)[:, None]
        - 2.0 * X @ centers.T
        + np.sum(centers * centers, axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(X.shape[0]), labels]


def _lloyd(X, centers, max_iter):
    k = centers.shape[0]
    labels, dist = _assign(X, centers)
    for _ in range(max_iter):
        for j in range(k):
            members = labels == j
            if members.any():
                centers[j] = X[members].mean(axis=0)
            else:
                # reseed an empty cluster at the point worst served by its center
                far = int(np.argmax(dist))
                centers[j] = X[far]
                labels[far] = j
                dist[far] = 0.0
        new_labels, dist = _assign(X, centers)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    wcss = float(sum(np.sum((X[labels == j] - centers[j]) ** 2) for j in range(k)))
    return labels, wcss


def kmeans(points, k, seed=0, restarts=20, max_iter=300):
    """Lloyd's k-means with k-means++ seeding; the restart with lowest WCSS wins."""
    X = np.asarray(points, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if k <= 0:
        raise InvalidInputError(f"k must be positive, got {k}")
    if k > n:
        raise InvalidInputError(f"k={k} exceeds the number of points {n}")
    if restarts < 1:
        raise InvalidInputError("need at least one restart")
    best_labels, best_wcss = None, np.inf
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        labels, wcss = _lloyd(X, _kmeans_pp(X, k, rng), max_iter)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    return best_labels.astype(np.int64)


def spectral_cluster(A, c, seed=0, restarts=20):
    """Normalized spectral clustering of a symmetric nonnegative affinity.

    Zero-degree samples are treated as isolated components: each gets its own
    zero-eigenvalue basis direction.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise InvalidInputError("affinity must be square")
    if not 0 < c <= n:
        raise InvalidInputError(f"need 0 < c <= n, got c={c}, n={n}")
    if np.any(A < 0) or not np.all(np.isfinite(A)):
        raise InvalidInputError("affinity must be finite and nonnegative")
    W = 0.5 * (A + A.T)
    deg = W.sum(axis=1)
    isolated = deg <= 0
    dinv = np.zeros(n)
    dinv[~isolated] = 1.0 / np.sqrt(deg[~isolated])
    L = np.eye(n) - dinv[:, None] * W * dinv[None, :]
    L[isolated, isolated] = 0.0
    L = 0.5 * (L + L.T)
    try:
        _, V = linalg.eigh(L, subset_by_index=[0, c - 1])
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    norms = np.linalg.norm(V, axis=1, keepdims=True)
    V = np.divide(V, norms, out=np.zeros_like(V), where=norms > 0)
    return kmeans(V, c, seed=seed, restarts=restarts)

"""Pure numpy versions of the compiled kernels in ``_core.pyx``."""
import numpy as np


def project_rows_capped_simplex(V):
    V = np.asarray(V, dtype=np.float64)
    n = V.shape[0]
    if V.ndim != 2 or V.shape[1] != n:
        raise ValueError("expected a square matrix")
    if n < 2:
        raise ValueError("need at least two columns")
    off = ~np.eye(n, dtype=bool)
    W = V[off].reshape(n, n - 1)
    u = -np.sort(-W, axis=1)
    css = np.cumsum(u, axis=1)
    ks = np.arange(1, n, dtype=np.float64)
    t = (css - 1.0) / ks
    # support size is the last index where the sorted value clears its shift
    rho = (n - 2) - np.argmax((u - t > 0)[:, ::-1], axis=1)
    theta = t[np.arange(n), rho]
    out = np.zeros_like(V)
    out[off] = np.maximum(W - theta[:, None], 0.0).ravel()
    return out


def firm_threshold_array(x, lam, a):
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    if a <= lam:
        return np.where(ax <= lam, 0.0, x)
    mid = np.sign(x) * (a / (a - lam)) * (ax - lam)
    return np.where(ax <= lam, 0.0, np.where(ax > a, x, mid))


def pairwise_sq_dists(P, block_elems=1 << 22):
    P = np.asarray(P, dtype=np.float64)
    n, d = P.shape
    out = np.empty((n, n))
    step = max(1, block_elems // max(1, n * d))
    for start in range(0, n, step):
        diff = P[start:start + step, None, :] - P[None, :, :]
        out[start:start + step] = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(out, 0.0)
    return out

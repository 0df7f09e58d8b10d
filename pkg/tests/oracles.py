"""Brute-force reference computations, deliberately independent of the package."""
import itertools
import math
from collections import Counter

import numpy as np


def grid_argmin(objective, lo=-5.0, hi=5.0, step=1e-4):
    """Minimize a vectorized scalar objective over a uniform grid: ``(x*, f(x*))``."""
    xs = np.arange(int(round((hi - lo) / step)) + 1) * step + lo
    fx = objective(xs)
    i = int(np.argmin(fx))
    return xs[i], fx[i]


def grid_argmin_batch(objective, ys, lo=-5.0, hi=5.0, step=1e-4):
    """Grid minimization for many instances at once; ``objective(xs[None], ys[:, None])``."""
    xs = np.arange(int(round((hi - lo) / step)) + 1) * step + lo
    out_x = np.empty(len(ys))
    out_f = np.empty(len(ys))
    chunk = max(1, 2_000_000 // xs.size)
    for s in range(0, len(ys), chunk):
        f = objective(xs[None, :], ys[s:s + chunk, None])
        i = np.argmin(f, axis=1)
        out_x[s:s + chunk] = xs[i]
        out_f[s:s + chunk] = f[np.arange(len(i)), i]
    return out_x, out_f


def mcp(x, lam, a):
    """Scalar minimax-concave penalty whose prox is the firm threshold with knees ``lam``, ``a``."""
    ax = np.abs(x)
    return np.where(ax <= a, lam * ax - lam * ax * ax / (2 * a), lam * a / 2)


def huber_grid(u, b, step=1e-4):
    """``inf_v |v| + b^2/2 (u - v)^2`` per coordinate by grid search, summed."""
    total = 0.0
    for ui in np.atleast_1d(u):
        _, f = grid_argmin(lambda v: np.abs(v) + 0.5 * b * b * (ui - v) ** 2,
                           lo=min(-5.0, ui - 1), hi=max(5.0, ui + 1), step=step)
        total += f
    return total


def simplex_projection_by_support(v, banned):
    """Exact projection onto the capped simplex by enumerating every candidate support."""
    free = [j for j in range(len(v)) if j != banned]
    best, best_val = None, math.inf
    for r in range(1, len(free) + 1):
        for support in itertools.combinations(free, r):
            vs = np.array([v[j] for j in support])
            shift = (vs.sum() - 1.0) / r
            vals = vs - shift
            if np.any(vals < -1e-15):
                continue
            o = np.zeros(len(v))
            o[list(support)] = np.maximum(vals, 0.0)
            val = float(np.sum((o - v) ** 2))
            if val < best_val:
                best, best_val = o, val
    return best, best_val


_SIMPLEX_GRIDS = {}


def simplex_grid(dim, step):
    """All points of the probability simplex in ``dim`` coordinates on a lattice of ``step``."""
    key = (dim, step)
    if key not in _SIMPLEX_GRIDS:
        m = int(round(1 / step))
        if dim == 2:
            i = np.arange(m + 1)
            pts = np.stack([i, m - i], axis=1)
        elif dim == 3:
            i, j = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
            keep = i + j <= m
            i, j = i[keep], j[keep]
            pts = np.stack([i, j, m - i - j], axis=1)
        else:
            raise ValueError("only 2 or 3 free coordinates supported")
        _SIMPLEX_GRIDS[key] = pts / m
    return _SIMPLEX_GRIDS[key]


def simplex_grid_min(v, banned, step):
    """Best objective ``||o - v||^2`` over the lattice of the capped simplex."""
    free = np.delete(np.asarray(v, dtype=float), banned)
    P = simplex_grid(free.size, step)
    vals = np.sum(P * P, axis=1) - 2 * P @ free + free @ free + v[banned] ** 2
    return float(vals.min())


def fd_gradient(f, X, h=1e-5):
    """Central finite-difference gradient of a scalar function of a matrix."""
    G = np.zeros_like(X)
    for idx in np.ndindex(X.shape):
        Xp = X.copy()
        Xm = X.copy()
        Xp[idx] += h
        Xm[idx] -= h
        G[idx] = (f(Xp) - f(Xm)) / (2 * h)
    return G


# -- partitions and metrics -----------------------------------------------------

def restricted_growth_strings(n, max_blocks):
    """Every set partition of ``n`` items into at most ``max_blocks`` blocks, as label tuples."""
    def rec(prefix, used):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for lab in range(min(used + 1, max_blocks)):
            yield from rec(prefix + [lab], max(used, lab + 1))
    yield from rec([], 0)


def brute_accuracy(pred, truth):
    pl, tl = sorted(set(pred)), sorted(set(truth))
    k = max(len(pl), len(tl))
    targets = tl + [None] * (k - len(tl))
    best = 0
    for perm in itertools.permutations(targets, len(pl)):
        mapping = dict(zip(pl, perm))
        best = max(best, sum(mapping[p] == t for p, t in zip(pred, truth)))
    return best / len(pred)


def pair_counts(pred, truth):
    """(both together, together only in pred, together only in truth, apart in both)."""
    ss = sd = ds = dd = 0
    for i, j in itertools.combinations(range(len(pred)), 2):
        sp, st = pred[i] == pred[j], truth[i] == truth[j]
        if sp and st:
            ss += 1
        elif sp:
            sd += 1
        elif st:
            ds += 1
        else:
            dd += 1
    return ss, sd, ds, dd


def brute_prf(pred, truth):
    ss, sd, ds, _ = pair_counts(pred, truth)
    p = ss / (ss + sd) if ss + sd else 0.0
    r = ss / (ss + ds) if ss + ds else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def brute_ari(pred, truth):
    """Hubert-Arabie ARI in its pair-count form."""
    a, b, c, d = pair_counts(pred, truth)
    num = 2.0 * (a * d - b * c)
    den = (a + b) * (b + d) + (a + c) * (c + d)
    return 1.0 if den == 0 else num / den


def brute_purity(pred, truth):
    total = 0
    for p in set(pred):
        total += max(Counter(t for q, t in zip(pred, truth) if q == p).values())
    return total / len(pred)


def brute_nmi(pred, truth):
    n = len(pred)
    cp, ct, joint = Counter(pred), Counter(truth), Counter(zip(pred, truth))
    hp = -sum(c / n * math.log(c / n) for c in cp.values())
    ht = -sum(c / n * math.log(c / n) for c in ct.values())
    mi = sum(c / n * math.log((c / n) / ((cp[p] / n) * (ct[t] / n))) for (p, t), c in joint.items())
    if hp == 0 and ht == 0:
        return 1.0
    if hp == 0 or ht == 0:
        return 0.0
    return mi / math.sqrt(hp * ht)


# -- per-update sub-objectives (written out term by term) ----------------------

def nuclear(M):
    return float(np.linalg.svd(M, compute_uv=False).sum())


def lagrangian_E(X, Z, E, lambda3, mu):
    R = X - X @ Z - E
    return lambda3 * nuclear(E) + 0.5 * mu * float(np.sum(R * R))


def lagrangian_Z(X, Z, E, U, S, eta, mu):
    R = X - X @ Z - E
    return (0.5 * mu * np.sum(R * R) + 0.5 * eta * np.sum((Z - U) ** 2)
            + 0.5 * mu * np.sum((Z - S) ** 2))


def lagrangian_U(X, U, Z, U1, U2, C1, C2, eta, mu1, mu2):
    R = X - X @ U
    U2off = U2 - np.diag(np.diag(U2))
    return (0.5 * np.sum(R * R) + 0.5 * eta * np.sum((Z - U) ** 2)
            + np.sum(C1 * (U - U1)) + 0.5 * mu1 * np.sum((U - U1) ** 2)
            + np.sum(C2 * (U - U2off)) + 0.5 * mu2 * np.sum((U - U2off) ** 2))


def s_row_objective(s, z, g, mu):
    return float(g @ s + 0.5 * mu * np.sum((s - z) ** 2))


def model_objective(views, Z, S, E, U, F, lambda1, lambda2, lambda3, eta, b1, b2):
    """Naive double-loop evaluation of the monitored model objective."""
    n = Z.shape[0]
    total = 0.0
    for v, X in enumerate(views):
        for i in range(n):
            for j in range(n):
                total += np.sum((X[:, i] - X[:, j]) ** 2) * S[i, j]
                total += lambda2 * S[i, j] * np.sum((F[v][i] - F[v][j]) ** 2)
        total += lambda3 * nuclear(E[v])
        for t in np.linalg.svd(U[v], compute_uv=False):
            total += lambda1 * _gmc_scalar(t, b1[v])
        for t in U[v].ravel():
            total += lambda1 * _gmc_scalar(abs(t), b2[v])
        total += eta * np.sum((Z - U[v]) ** 2)
    return float(total)


def _gmc_scalar(t, b):
    # |t| minus the grid-free Huber envelope inf_v |v| + b^2/2 (t - v)^2
    cand = [abs(t), 0.5 * b * b * t * t]  # v = 0 or v -> t
    v = np.sign(t) * max(abs(t) - 1 / (b * b), 0.0)
    cand.append(abs(v) + 0.5 * b * b * (t - v) ** 2)
    return abs(t) - min(cand)


def refine_batch(objective, x0, ys, half=2e-4, step=1e-7):
    """Second, finer grid pass around per-instance coarse minimizers ``x0``."""
    offs = np.arange(-int(round(half / step)), int(round(half / step)) + 1) * step
    xs = x0[:, None] + offs[None, :]
    f = objective(xs, ys[:, None])
    i = np.argmin(f, axis=1)
    rows = np.arange(len(ys))
    return xs[rows, i], f[rows, i]


def simplex_grid_min_batch(V, banned, step, chunk=16):
    """``simplex_grid_min`` for many vectors sharing length and banned index."""
    free = np.delete(np.asarray(V, dtype=float), banned, axis=1)
    P = simplex_grid(free.shape[1], step)
    pp = np.sum(P * P, axis=1)
    best = np.empty(len(V))
    arg = np.empty((len(V), free.shape[1]))
    for s in range(0, len(V), chunk):
        blk = free[s:s + chunk]
        vals = pp[:, None] - 2 * P @ blk.T
        i = np.argmin(vals, axis=0)
        best[s:s + chunk] = vals[i, np.arange(len(i))] + np.sum(blk * blk, axis=1) + V[s:s + chunk, banned] ** 2
        arg[s:s + chunk] = P[i]
    return best, np.insert(arg, banned, 0.0, axis=1)

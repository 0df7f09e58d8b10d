"""External clustering metrics: ACC, NMI, purity, pairwise P/R/F, ARI."""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InvalidInputError

METRIC_NAMES = ("acc", "nmi", "purity", "precision", "recall", "f_score", "ari")


@dataclass(frozen=True)
class Contingency:
    counts: np.ndarray  # rows: predicted clusters, columns: true classes
    n: int

    @classmethod
    def from_labels(cls, pred, truth):
        pred = np.asarray(pred).ravel()
        truth = np.asarray(truth).ravel()
        if pred.shape != truth.shape:
            raise InvalidInputError(f"label vectors differ in length: {pred.size} vs {truth.size}")
        if pred.size == 0:
            raise InvalidInputError("empty label vectors")
        _, p = np.unique(pred, return_inverse=True)
        _, t = np.unique(truth, return_inverse=True)
        counts = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
        np.add.at(counts, (p, t), 1)
        return cls(counts, int(pred.size))


def _comb2(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2.0


def hungarian(cost):
    """Permutation ``perm`` minimizing ``sum(cost[i, perm[i]])``."""
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise InvalidInputError(f"cost matrix must be square, got shape {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise InvalidInputError("cost matrix must be finite")
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(cost.shape[0], dtype=np.int64)
    perm[rows] = cols
    return perm


def accuracy(pred, truth):
    C = Contingency.from_labels(pred, truth)
    k = max(C.counts.shape)
    padded = np.zeros((k, k))
    padded[: C.counts.shape[0], : C.counts.shape[1]] = C.counts
    perm = hungarian(-padded)
    return float(padded[np.arange(k), perm].sum() / C.n)


def nmi(pred, truth):
    """Mutual information over the geometric mean of the two entropies (natural log)."""
    C = Contingency.from_labels(pred, truth)
    rows, cols = C.counts.shape
    # one-cluster partitions have exactly zero entropy; decide them from the shape
    if rows == 1 and cols == 1:
        return 1.0
    if rows == 1 or cols == 1:
        return 0.0
    P = C.counts / C.n
    a = C.counts.sum(axis=1) / C.n
    b = C.counts.sum(axis=0) / C.n
    h_pred = -float(np.sum(a * np.log(a)))
    h_true = -float(np.sum(b * np.log(b)))
    nz = P > 0
    mi = float(np.sum(P[nz] * np.log(P[nz] / np.outer(a, b)[nz])))
    return float(np.clip(mi / np.sqrt(h_pred * h_true), 0.0, 1.0))


def purity(pred, truth):
    C = Contingency.from_labels(pred, truth)
    return float(C.counts.max(axis=1).sum() / C.n)


def pairwise_prf(pred, truth):
    """Pair-counting precision, recall and F-score; 0 stands in for 0/0."""
    C = Contingency.from_labels(pred, truth)
    tp = _comb2(C.counts).sum()
    pred_pairs = _comb2(C.counts.sum(axis=1)).sum()
    true_pairs = _comb2(C.counts.sum(axis=0)).sum()
    p = float(tp / pred_pairs) if pred_pairs > 0 else 0.0
    r = float(tp / true_pairs) if true_pairs > 0 else 0.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


def ari(pred, truth):
    C = Contingency.from_labels(pred, truth)
    sum_ij = _comb2(C.counts).sum()
    sum_a = _comb2(C.counts.sum(axis=1)).sum()
    sum_b = _comb2(C.counts.sum(axis=0)).sum()
    total = _comb2(C.n)
    expected = sum_a * sum_b / total if total > 0 else 0.0
    denom = 0.5 * (sum_a + sum_b) - expected
    if denom == 0:
        # only reachable when both partitions are all-singletons or one block
        return 1.0
    return float((sum_ij - expected) / denom)


def evaluate(pred, truth):
    """All seven metrics as a dict keyed by :data:`METRIC_NAMES`."""
    p, r, f = pairwise_prf(pred, truth)
    return {
        "acc": accuracy(pred, truth),
        "nmi": nmi(pred, truth),
        "purity": purity(pred, truth),
        "precision": p,
        "recall": r,
        "f_score": f,
        "ari": ari(pred, truth),
    }

import itertools

import numpy as np
import pytest

from umccev import metrics
from umccev.errors import InvalidInputError

import oracles


def test_hungarian_examples(rng):
    cost = np.ones((4, 4)) - np.eye(4)
    np.testing.assert_array_equal(metrics.hungarian(cost), np.arange(4))
    np.testing.assert_array_equal(metrics.hungarian([[3.0]]), [0])
    C = rng.normal(size=(5, 5))
    perm = metrics.hungarian(C)
    best = min(sum(C[i, p[i]] for i in range(5)) for p in itertools.permutations(range(5)))
    assert C[np.arange(5), perm].sum() == pytest.approx(best, abs=1e-12)
    with pytest.raises(InvalidInputError):
        metrics.hungarian(np.ones((2, 3)))


def test_accuracy_examples():
    assert metrics.accuracy([0, 1, 2], [0, 1, 2]) == 1.0
    assert metrics.accuracy([2, 0, 1, 1], [0, 1, 2, 2]) == 1.0
    assert metrics.accuracy([0, 0, 1, 1], [0, 1, 0, 1]) == 0.5
    with pytest.raises(InvalidInputError):
        metrics.accuracy([0, 1], [0, 1, 1])


def test_nmi_examples():
    assert metrics.nmi([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(1.0)
    assert metrics.nmi([0, 0, 0, 0], [0, 0, 1, 1]) == 0.0
    assert metrics.nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)


def test_purity_examples():
    assert metrics.purity([1, 1, 0, 0], [0, 0, 1, 1]) == 1.0
    assert metrics.purity([0] * 6, [0, 0, 1, 1, 2, 2]) == pytest.approx(1 / 3)
    assert metrics.purity([0, 0, 1, 1], [0, 0, 0, 1]) == 0.75


def test_pairwise_examples():
    assert metrics.pairwise_prf([0, 0, 1], [0, 0, 1]) == (1.0, 1.0, 1.0)
    assert metrics.pairwise_prf([0, 1, 2, 3], [0, 0, 1, 1]) == (0.0, 0.0, 0.0)
    p, r, f = metrics.pairwise_prf([0, 0, 1, 1], [0, 0, 0, 1])
    assert (p, r, f) == pytest.approx((0.5, 1 / 3, 0.4), abs=1e-15)


def test_ari_examples():
    assert metrics.ari([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert metrics.ari([0, 0, 0, 0], [0, 0, 1, 1]) == 0.0
    pred, truth = [0, 0, 1, 1], [0, 1, 0, 1]
    assert metrics.ari(pred, truth) == pytest.approx(oracles.brute_ari(pred, truth), abs=1e-15)
    assert metrics.ari(pred, truth) == pytest.approx(-0.5, abs=1e-15)


def test_evaluate_keys_and_invariance(rng):
    truth = rng.integers(0, 3, size=30)
    pred = rng.integers(0, 3, size=30)
    base = metrics.evaluate(pred, truth)
    assert tuple(base) == metrics.METRIC_NAMES
    renamed = np.array([7, 3, 5])[pred]
    for name, val in metrics.evaluate(renamed, truth).items():
        assert val == pytest.approx(base[name], abs=1e-12)


def test_partitions_small_exhaustive():
    # spot check; the full sweep lives in the acceptance suite
    parts = list(oracles.restricted_growth_strings(4, 3))
    assert len(parts) == 14  # S(4,1) + S(4,2) + S(4,3) = 1 + 7 + 6
    for a in parts:
        for b in parts:
            assert metrics.accuracy(a, b) == pytest.approx(oracles.brute_accuracy(a, b), abs=1e-12)

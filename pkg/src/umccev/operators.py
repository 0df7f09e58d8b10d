"""Proximal and penalty operators used by the ADMM updates.

All functions are pure. Array arguments are never modified in place.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError, NumericalError


@dataclass(frozen=True)
class FirmParams:
    """Knees of the firm threshold: zero below ``lam``, identity above ``a``.

    ``a == lam`` is accepted and gives hard thresholding.
    """

    lam: float
    a: float

    def __post_init__(self):
        if not (np.isfinite(self.lam) and np.isfinite(self.a)):
            raise InvalidInputError(f"firm knees must be finite, got lam={self.lam}, a={self.a}")
        if self.lam < 0 or self.a < self.lam:
            raise InvalidInputError(f"need a >= lam >= 0, got lam={self.lam}, a={self.a}")

    @classmethod
    def from_weight(cls, theta, gamma):
        """Knees for ``min_x theta*phi(x) + 1/2 (x - y)^2`` with shape ``gamma`` in (0, 1]."""
        if not 0 < gamma <= 1:
            raise InvalidInputError(f"gamma must lie in (0, 1], got {gamma}")
        return cls(theta, theta / gamma)

    @property
    def is_hard(self):
        return self.a == self.lam


@dataclass(frozen=True)
class GmcScale:
    """Scalar ``b`` of the diagonal scaling ``B = b I`` inside the generalized Huber function."""

    b: float

    def __post_init__(self):
        if not (self.b > 0 and np.isfinite(self.b)):
            raise InvalidInputError(f"GMC scale must be positive and finite, got {self.b}")

    @classmethod
    def from_weight(cls, theta, gamma):
        """``b = sqrt(gamma / theta)``, the largest scale keeping the prox subproblem convex."""
        if theta <= 0:
            raise InvalidInputError(f"penalty weight must be positive, got {theta}")
        return cls(float(np.sqrt(gamma / theta)))

    def is_convex_for(self, gamma, theta):
        return self.b ** 2 <= gamma / theta * (1 + 1e-12)


def _as_firm(p):
    return p if isinstance(p, FirmParams) else FirmParams(*p)


def soft_threshold(x, tau):
    """``sign(x) * max(|x| - tau, 0)``, elementwise."""
    if tau < 0:
        raise InvalidInputError(f"threshold must be nonnegative, got {tau}")
    out = np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def firm_threshold(x, p):
    """Firm threshold of a scalar or array.

    0 for ``|x| <= lam``, ``a (|x| - lam) / (a - lam) sign(x)`` on ``(lam, a]``,
    ``x`` above ``a``.
    """
    p = _as_firm(p)
    if np.ndim(x) == 0:
        return float(kernels.firm_threshold_array(np.array([x], dtype=float), p.lam, p.a)[0])
    return kernels.firm_threshold_array(x, p.lam, p.a)


def _svd(M):
    M = np.asarray(M, dtype=np.float64)
    if not np.all(np.isfinite(M)):
        raise NumericalError("SVD input contains non-finite values")
    try:
        return np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc


def svt(M, tau):
    """Singular value thresholding, the prox of ``tau * ||.||_*``."""
    if tau < 0:
        raise InvalidInputError(f"threshold must be nonnegative, got {tau}")
    U, s, Vt = _svd(M)
    s = np.maximum(s - tau, 0.0)
    keep = s > 0
    return (U[:, keep] * s[keep]) @ Vt[keep]


def firm_svt(M, p):
    """Apply the firm threshold to the singular values of ``M``."""
    p = _as_firm(p)
    U, s, Vt = _svd(M)
    s = kernels.firm_threshold_array(s, p.lam, p.a)
    keep = s > 0
    return (U[:, keep] * s[keep]) @ Vt[keep]


def _scale(s):
    return s if isinstance(s, GmcScale) else GmcScale(float(s))


def generalized_huber(u, s):
    """Closed form of ``inf_v ||v||_1 + 1/2 ||b (u - v)||^2`` summed over coordinates."""
    b2 = _scale(s).b ** 2
    t = np.abs(np.asarray(u, dtype=np.float64))
    knee = 1.0 / b2
    vals = np.where(t <= knee, 0.5 * b2 * t * t, t - 0.5 * knee)
    return float(vals.sum())


def gmc_penalty(u, s):
    """``||u||_1`` minus its generalized Huber smoothing; lies in ``[0, ||u||_1]``."""
    t = np.abs(np.asarray(u, dtype=np.float64))
    b2 = _scale(s).b ** 2
    knee = 1.0 / b2
    # computed per coordinate to avoid cancellation in ||u||_1 - huber
    vals = np.where(t <= knee, t - 0.5 * b2 * t * t, 0.5 * knee)
    return float(vals.sum())


def project_capped_simplex(v, banned):
    """Euclidean projection of ``v`` onto ``{o >= 0, sum(o) = 1, o[banned] = 0}``."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise InvalidInputError("expected a vector")
    n = v.shape[0]
    if n < 2:
        raise InvalidInputError("capped simplex is empty once the banned coordinate is removed")
    if not 0 <= banned < n:
        raise InvalidInputError(f"banned index {banned} out of range for length {n}")
    free = np.delete(v, banned)
    u = np.sort(free)[::-1]
    css = np.cumsum(u)
    t = (css - 1.0) / np.arange(1, n)
    rho = np.nonzero(u - t > 0)[0][-1]
    out = np.maximum(free - t[rho], 0.0)
    return np.insert(out, banned, 0.0)

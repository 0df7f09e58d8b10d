"""ADMM engine for the joint multi-view model and its two ablations.

The model couples a global self-expressive matrix ``Z`` (with per-view error
``E`` and an adaptive graph ``S``) to per-view self-expressive matrices ``U``
carrying nonconvex low-rank and sparse penalties. One outer iteration sweeps
the views; for each view the updates run in the order

    E, Z, S, F, U, U1, U2, multipliers

and ``Z``/``S`` are overwritten by every view's pass.

Variants
--------
``umc-cev``   the full model.
``ml0-lssc``  only the ``U`` side: ``Z`` is the global consensus matrix, set to
              the current view's ``U`` (the ``mu`` terms are dropped); ``E``,
              ``S`` and ``F`` stay at their initial values.
``mlrr-agr``  only the ``Z`` side: no ``U`` updates and no ``eta`` coupling.
"""
import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DivergenceError, InvalidInputError, NumericalError
from .graphs import knn_affinity, laplacian, spectral_embedding
from .datasets import normalize_unit_columns
from .operators import FirmParams, GmcScale, firm_svt, firm_threshold, gmc_penalty, svt


class Variant(str, enum.Enum):
    UMC_CEV = "umc-cev"
    ML0_LSSC = "ml0-lssc"
    MLRR_AGR = "mlrr-agr"


@dataclass(frozen=True)
class SolverConfig:
    lambda1: float = 2e-5
    lambda2: float = 2e-1
    lambda3: float = 2.0
    eta: float = 1.0
    mu: float = 0.01
    mu1: float = 1.0
    mu2: float = 0.1
    rho1: float = 1.2
    mu_max: float = 1e6
    gamma: float = 0.6
    max_iter: int = 100
    tol: float = 1e-6
    variant: Variant = Variant.UMC_CEV
    knn_k: int = None
    seed: int = 0
    printed_updates: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        for name in ("lambda1", "lambda2", "lambda3"):
            if not getattr(self, name) >= 0:
                raise InvalidInputError(f"{name} must be nonnegative, got {getattr(self, name)}")
        for name in ("eta", "mu", "mu1", "mu2", "mu_max", "tol"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.rho1 > 1:
            raise InvalidInputError(f"rho1 must exceed 1, got {self.rho1}")
        if not 0 < self.gamma <= 1:
            raise InvalidInputError(f"gamma must lie in (0, 1], got {self.gamma}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 0:
            raise InvalidInputError(f"max_iter must be a nonnegative integer, got {self.max_iter}")
        if self.knn_k is not None and self.knn_k < 1:
            raise InvalidInputError(f"knn_k must be positive, got {self.knn_k}")


@dataclass
class SolverState:
    Z: np.ndarray
    S: np.ndarray
    E: list
    U: list
    U1: list
    U2: list
    C1: list
    C2: list
    F: list
    mu1_cur: float
    mu2_cur: float
    iter: int = 0

    def copy(self):
        cp = lambda xs: [x.copy() for x in xs]
        return SolverState(
            self.Z.copy(), self.S.copy(), cp(self.E), cp(self.U), cp(self.U1), cp(self.U2),
            cp(self.C1), cp(self.C2), cp(self.F), self.mu1_cur, self.mu2_cur, self.iter,
        )


TRACE_COLUMNS = ("iter", "r_zs", "r_u1", "r_u2", "r_recon", "objective")


@dataclass
class IterationTrace:
    r_zs: list = field(default_factory=list)
    r_u1: list = field(default_factory=list)
    r_u2: list = field(default_factory=list)
    r_recon: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    mu1: list = field(default_factory=list)
    mu2: list = field(default_factory=list)

    def __len__(self):
        return len(self.objective)

    def coupling_residual(self, i):
        return max(self.r_zs[i], self.r_u1[i], self.r_u2[i])

    def max_residual(self, i):
        return max(self.coupling_residual(i), self.r_recon[i])

    def rows(self):
        for i in range(len(self)):
            yield (i + 1, self.r_zs[i], self.r_u1[i], self.r_u2[i], self.r_recon[i], self.objective[i])

    def to_csv(self):
        lines = [",".join(TRACE_COLUMNS)]
        for row in self.rows():
            lines.append(f"{row[0]}," + ",".join(f"{x:.17g}" for x in row[1:]))
        return "\n".join(lines) + "\n"


class Problem:
    """A dataset plus the per-view quantities that stay fixed across iterations.

    Linear systems ``(alpha X^T X + c I) Y = B`` are solved through one thin
    SVD of each view, so every ``alpha``/``c`` pair reuses the same factorization.
    """

    def __init__(self, data):
        self.data = data
        self.c = data.c
        self.n = data.n
        self.X = data.views
        self.XtX = [V.T @ V for V in data.views]
        self.D2 = [kernels.pairwise_sq_dists(V.T) for V in data.views]
        self.xnorm = [max(np.linalg.norm(V), np.finfo(float).tiny) for V in data.views]
        self._gram = []
        for V in data.views:
            _, s, Qt = np.linalg.svd(V, full_matrices=False)
            self._gram.append((s * s, Qt.T))

    @property
    def n_views(self):
        return len(self.X)

    def solve_shifted(self, v, alpha, c, B):
        """Solve ``(alpha X_v^T X_v + c I) Y = B``."""
        if c > 0 and alpha >= 0:
            s2, Q = self._gram[v]
            scale = 1.0 / (alpha * s2 + c) - 1.0 / c
            return B / c + Q @ (scale[:, None] * (Q.T @ B))
        M = alpha * self.XtX[v] + c * np.eye(self.n)
        try:
            return np.linalg.solve(M, B)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"singular system for view {v} (shift {c})") from exc


def _as_problem(data):
    return data if isinstance(data, Problem) else Problem(data)


def default_knn_k(c, n):
    return min(max(5, c + 1), n - 1)


def initialize(data, cfg):
    prob = _as_problem(data)
    n, c, nv = prob.n, prob.c, prob.n_views
    if c > n:
        raise InvalidInputError(f"cluster count {c} exceeds sample count {n}")
    k = cfg.knn_k if cfg.knn_k is not None else default_knn_k(c, n)
    stacked = np.vstack([normalize_unit_columns(V) for V in prob.X])
    Z = knn_affinity(stacked, k).W
    F0 = spectral_embedding(laplacian(Z), c)
    zeros = lambda: [np.zeros((n, n)) for _ in range(nv)]
    state = SolverState(
        Z=Z, S=Z.copy(),
        E=[np.zeros_like(V) for V in prob.X],
        U=zeros(), U1=zeros(), U2=zeros(), C1=zeros(), C2=zeros(),
        F=[F0.copy() for _ in range(nv)],
        mu1_cur=float(cfg.mu1), mu2_cur=float(cfg.mu2),
    )
    for v in range(nv):
        state.U[v] = update_U(prob, state, cfg, v)
    return state


# -- single-variable updates ----------------------------------------------------
# Each returns the new value and leaves ``state`` untouched.

def update_E(prob, state, cfg, v):
    """Nuclear-norm prox of the view residual ``X - X Z``."""
    X = prob.X[v]
    return svt(X - X @ state.Z, cfg.lambda3 / cfg.mu)


def update_Z(prob, state, cfg, v):
    eta = 0.0 if cfg.variant is Variant.MLRR_AGR else cfg.eta
    if cfg.variant is Variant.ML0_LSSC:
        return state.U[v].copy()
    X, mu = prob.X[v], cfg.mu
    data_term = prob.XtX[v] - X.T @ state.E[v]
    if cfg.printed_updates:
        rhs = data_term + eta * state.U[v] + mu * state.S
        return prob.solve_shifted(v, 1.0, eta + mu, rhs)
    rhs = mu * data_term + eta * state.U[v] + mu * state.S
    return prob.solve_shifted(v, mu, eta + mu, rhs)


def graph_weights(prob, state, cfg, v):
    return prob.D2[v] + cfg.lambda2 * kernels.pairwise_sq_dists(state.F[v])


def update_S(prob, state, cfg, v):
    """Row-wise projection of ``Z - G/mu`` onto the zero-diagonal probability simplex."""
    G = graph_weights(prob, state, cfg, v)
    return kernels.project_rows_capped_simplex(state.Z - G / cfg.mu)


def update_F(prob, state, cfg, v):
    return spectral_embedding(laplacian(state.S), prob.c)


def update_U(prob, state, cfg, v):
    eta, mu1, mu2 = cfg.eta, state.mu1_cur, state.mu2_cur
    U1, U2, C1, C2 = state.U1[v], state.U2[v], state.C1[v], state.C2[v]
    XtX = prob.XtX[v]
    if cfg.printed_updates:
        rhs = XtX + mu1 * U1 + mu2 * U2 - eta * state.Z - C1 - C2
        return prob.solve_shifted(v, 1.0, mu1 + mu2 - eta, rhs)
    U2_off = U2 - np.diag(np.diag(U2))
    rhs = XtX + eta * state.Z + mu1 * U1 - C1 + mu2 * U2_off - C2
    return prob.solve_shifted(v, 1.0, eta + mu1 + mu2, rhs)


def update_U1(prob, state, cfg, v):
    mu1 = state.mu1_cur
    p = FirmParams.from_weight(cfg.lambda1 / mu1, cfg.gamma)
    return firm_svt(state.C1[v] / mu1 + state.U[v], p)


def update_U2(prob, state, cfg, v):
    mu2 = state.mu2_cur
    p = FirmParams.from_weight(cfg.lambda1 / mu2, cfg.gamma)
    out = firm_threshold(state.C2[v] / mu2 + state.U[v], p)
    np.fill_diagonal(out, 0.0)
    return out


def update_multipliers(prob, state, cfg, v):
    """Dual ascent for view ``v`` and geometric growth of both penalties."""
    mu1, mu2 = state.mu1_cur, state.mu2_cur
    U, U1, U2 = state.U[v], state.U1[v], state.U2[v]
    C1 = state.C1[v] + mu1 * (U - U1)
    C2 = state.C2[v] + mu2 * (U - U2 + np.diag(np.diag(U2)))
    mu1 = min(cfg.rho1 * mu1, cfg.mu_max)
    mu2 = min(cfg.rho1 * mu2, cfg.mu_max)
    return C1, C2, mu1, mu2


# -- monitoring ------------------------------------------------------------------

def _fro_rel(A, B, ref):
    return float(np.linalg.norm(A - B) / max(1.0, np.linalg.norm(ref)))


def residuals(prob, state, cfg):
    """``(r_zs, r_u1, r_u2, r_recon)``; residuals a variant does not drive are 0."""
    variant = cfg.variant
    r_zs = r_u1 = r_u2 = r_recon = 0.0
    if variant is not Variant.ML0_LSSC:
        r_zs = _fro_rel(state.Z, state.S, state.Z)
        r_recon = max(
            float(np.linalg.norm(X - X @ state.Z - E) / xn)
            for X, E, xn in zip(prob.X, state.E, prob.xnorm)
        )
    if variant is not Variant.MLRR_AGR:
        r_u1 = max(_fro_rel(U, U1, U) for U, U1 in zip(state.U, state.U1))
        r_u2 = max(_fro_rel(U, U2, U) for U, U2 in zip(state.U, state.U2))
    return r_zs, r_u1, r_u2, r_recon


def objective(prob, state, cfg):
    """Model objective, with the GMC penalty standing in for the nonconvex terms.

    The penalty scale tracks the current ADMM penalties, ``b = sqrt(gamma mu_i / lambda1)``,
    which is the scale the firm-threshold updates implicitly use.
    """
    prob = _as_problem(prob)
    variant = cfg.variant
    agr = variant is not Variant.ML0_LSSC
    lrs = variant is not Variant.MLRR_AGR
    total = 0.0
    if agr:
        Ls = laplacian(state.S).L
    for v in range(prob.n_views):
        if agr:
            F = state.F[v]
            total += float(np.sum(prob.D2[v] * state.S))
            if cfg.lambda3 > 0:
                total += cfg.lambda3 * float(np.linalg.svd(state.E[v], compute_uv=False).sum())
            total += 2.0 * cfg.lambda2 * float(np.trace(F.T @ Ls @ F))
        if lrs:
            U = state.U[v]
            if cfg.lambda1 > 0:
                b1 = GmcScale.from_weight(cfg.lambda1 / state.mu1_cur, cfg.gamma)
                b2 = GmcScale.from_weight(cfg.lambda1 / state.mu2_cur, cfg.gamma)
                sv = np.linalg.svd(U, compute_uv=False)
                total += cfg.lambda1 * (gmc_penalty(sv, b1) + gmc_penalty(U.ravel(), b2))
            total += cfg.eta * float(np.sum((state.Z - U) ** 2))
    return total


# -- driver ----------------------------------------------------------------------

_STATE_FIELDS = ("Z", "S", "E", "U", "U1", "U2", "C1", "C2", "F")


def _check_finite(state, it, v):
    for name in _STATE_FIELDS:
        val = getattr(state, name)
        arrays = val if isinstance(val, list) else [val]
        for i, arr in enumerate(arrays):
            if not np.all(np.isfinite(arr)):
                label = name if not isinstance(val, list) else f"{name}[{i}]"
                raise DivergenceError(label, it, v)


def iterate(prob, state, cfg, it=None, callback=None):
    """One outer iteration (a sweep over all views), updating ``state`` in place."""
    it = state.iter + 1 if it is None else it
    variant = cfg.variant
    agr = variant is not Variant.ML0_LSSC
    lrs = variant is not Variant.MLRR_AGR
    notify = callback or (lambda *_: None)
    for v in range(prob.n_views):
        if agr:
            state.E[v] = update_E(prob, state, cfg, v)
            notify(state, "E", v)
        state.Z = update_Z(prob, state, cfg, v)
        notify(state, "Z", v)
        if agr:
            state.S = update_S(prob, state, cfg, v)
            notify(state, "S", v)
            state.F[v] = update_F(prob, state, cfg, v)
            notify(state, "F", v)
        if lrs:
            state.U[v] = update_U(prob, state, cfg, v)
            notify(state, "U", v)
            state.U1[v] = update_U1(prob, state, cfg, v)
            notify(state, "U1", v)
            state.U2[v] = update_U2(prob, state, cfg, v)
            notify(state, "U2", v)
            state.C1[v], state.C2[v], state.mu1_cur, state.mu2_cur = update_multipliers(
                prob, state, cfg, v
            )
            notify(state, "multipliers", v)
        _check_finite(state, it, v)
    state.iter = it
    return state


def run(data, cfg=None, callback=None):
    """Run the ADMM loop. Returns ``(state, trace)``.

    ``callback(state, step, v)``, if given, is called after every single update
    with ``step`` one of ``"E", "Z", "S", "F", "U", "U1", "U2", "multipliers"``.
    Stops when the largest driven residual falls below ``cfg.tol`` or after
    ``cfg.max_iter`` iterations.
    """
    cfg = cfg or SolverConfig()
    prob = _as_problem(data)
    state = initialize(prob, cfg)
    trace = IterationTrace()
    for it in range(1, cfg.max_iter + 1):
        iterate(prob, state, cfg, it, callback)
        r = residuals(prob, state, cfg)
        trace.r_zs.append(r[0])
        trace.r_u1.append(r[1])
        trace.r_u2.append(r[2])
        trace.r_recon.append(r[3])
        trace.objective.append(objective(prob, state, cfg))
        trace.mu1.append(state.mu1_cur)
        trace.mu2.append(state.mu2_cur)
        if max(r) < cfg.tol:
            break
    return state, trace


def affinity(state, cfg):
    """Fused affinity for the final spectral clustering."""
    from .clustering import fuse_affinity

    if cfg.variant is Variant.MLRR_AGR:
        return fuse_affinity(state.Z, [])
    return fuse_affinity(state.Z, state.U)

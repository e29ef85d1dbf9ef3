"""Row-action iteration drivers with per-iteration logging.

Methods
-------
rk            classical Kaczmarz update on a randomly sampled row
sk_cyclic     sparse Kaczmarz (shrinkage) with cyclic row order
rsk           randomized sparse Kaczmarz, relaxed 1/||a||^2 step
ersk          randomized sparse Kaczmarz with exact line search
rsk_smoothed  relaxed step on the smoothed elastic net
rbpsfp        randomized Bregman projections over mixed row constraints

The iteration counter k counts single row projections, so per-iteration
costs are directly comparable across methods.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .potentials import ElasticNet, SmoothedElasticNet, SquaredNorm
from .projections import (
    DualState,
    Hyperplane,
    constraint_violation,
    enclosing_halfspace,
    exact_hyperplane_linesearch,
    exact_step_length,
    halfspace_bregman_step,
    inexact_hyperplane_step,
)
from .rng import CumulativeSampler, Xoshiro256pp, normalized_weights

METHODS = ("rk", "sk_cyclic", "rsk", "ersk", "rsk_smoothed", "rbpsfp")

_ALIASES = {"sk": "sk_cyclic", "rsk-smoothed": "rsk_smoothed"}


def canonical_method(name):
    name = _ALIASES.get(name, name)
    if name not in METHODS:
        raise ValueError(f"unknown method {name!r}")
    return name


@dataclass
class SolverConfig:
    method: str = "rsk"
    lam: float = 1.0
    epsilon: float | None = None  # smoothed variant only; defaults to 0.1 * lam
    sampler: object = "rownorm"  # "uniform" | "rownorm" | explicit weight vector
    max_iters: int = 1000
    tol_residual: float = 0.0
    seed: int = 0
    log_every: int | None = None  # defaults to max(1, max_iters // 500)
    step_mode: str = "exact"  # projection mode used by rbpsfp

    def validate(self):
        self.method = canonical_method(self.method)
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol_residual < 0:
            raise ValueError("tol_residual must be >= 0")
        if self.log_every is not None and self.log_every < 1:
            raise ValueError("log_every must be >= 1")
        if self.step_mode not in ("exact", "inexact"):
            raise ValueError("step_mode must be 'exact' or 'inexact'")
        if self.method in ("rsk", "ersk", "sk_cyclic", "rsk_smoothed", "rbpsfp"):
            if not self.lam > 0:
                raise ValueError("sparse methods require lam > 0")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        return self

    @property
    def log_cadence(self):
        return self.log_every if self.log_every is not None else max(1, self.max_iters // 500)

    @property
    def smoothing(self):
        return self.epsilon if self.epsilon is not None else 0.1 * self.lam


@dataclass
class IterateLog:
    """Metric traces at logged iterations (k strictly increasing)."""

    ks: np.ndarray
    residual: np.ndarray
    error: np.ndarray | None = None
    bregman: np.ndarray | None = None
    violation: np.ndarray | None = None


def _potential_for(cfg):
    if cfg.method == "rk":
        return SquaredNorm()
    if cfg.method == "rsk_smoothed":
        return SmoothedElasticNet(cfg.lam, cfg.smoothing)
    return ElasticNet(cfg.lam)


def _row_probs(sampler, row_norm_sq):
    if isinstance(sampler, str):
        if sampler == "uniform":
            m = row_norm_sq.size
            return np.full(m, 1.0 / m)
        if sampler == "rownorm":
            return row_norm_sq / row_norm_sq.sum()
        raise ValueError(f"unknown sampler {sampler!r}")
    return normalized_weights(sampler)


class _Recorder:
    """Appends metric values at logged iterations against a fixed reference."""

    def __init__(self, f, reference):
        self.ks = []
        self.residual = []
        self.reference = None
        if reference is not None:
            self.reference = np.asarray(reference, dtype=float)
            self.ref_norm = float(np.linalg.norm(self.reference))
            self.f_ref = float(f.value(self.reference))
            self.f = f
            self.error = []
            self.bregman = []
        self.violation = []

    def record(self, k, x, xstar, residual, violation=None):
        self.ks.append(k)
        self.residual.append(residual)
        if self.reference is not None:
            diff = x - self.reference
            self.error.append(float(np.linalg.norm(diff)) / self.ref_norm)
            # D_f^{xstar}(x, ref); xstar is a valid subgradient by coupling
            self.bregman.append(self.f_ref - float(self.f.value(x)) + float(xstar @ diff))
        if violation is not None:
            self.violation.append(violation)

    def finish(self):
        return IterateLog(
            ks=np.asarray(self.ks),
            residual=np.asarray(self.residual),
            error=np.asarray(self.error) if self.reference is not None else None,
            bregman=np.asarray(self.bregman) if self.reference is not None else None,
            violation=np.asarray(self.violation) if self.violation else None,
        )


def run(A, b, config, reference=None):
    """Runs one row-action method on Ax = b from x0 = xstar0 = 0.

    Parameters
    ----------
    A : RowMatrix
    b : array of length m, must be nonzero
    config : SolverConfig (method must not be 'rbpsfp')
    reference : optional known solution; enables error and Bregman traces

    Returns
    -------
    (DualState, IterateLog); stops at max_iters or once the relative
    residual at a logging point drops to tol_residual.
    """
    cfg = replace(config).validate()
    if cfg.method == "rbpsfp":
        raise ValueError("use rbpsfp_run for constraint-based problems")
    b = np.asarray(b, dtype=float)
    if b.shape != (A.m,):
        raise ValueError(f"expected rhs of length {A.m}, got {b.shape}")
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        raise ValueError("b must be nonzero")

    f = _potential_for(cfg)
    rows = A.rows
    rn2 = A.row_norm_sq
    m, n = A.m, A.n
    cyclic = cfg.method == "sk_cyclic"
    exact = cfg.method == "ersk"
    identity_link = cfg.method == "rk"
    if not cyclic:
        sampler = CumulativeSampler(_row_probs(cfg.sampler, rn2))
        rng = Xoshiro256pp(cfg.seed)

    rec = _Recorder(f, reference)
    log_every = cfg.log_cadence
    x = np.zeros(n)
    xstar = np.zeros(n)
    rec.record(0, x, xstar, float(np.linalg.norm(rows @ x - b)) / bnorm)

    for k in range(1, cfg.max_iters + 1):
        i = (k - 1) % m if cyclic else sampler.draw(rng)
        a = rows[i]
        if exact:
            t = exact_step_length(f, xstar, a, b[i])
            xstar = xstar - t * a
        else:
            r = float(a @ x) - b[i]
            xstar = xstar - (r / rn2[i]) * a
        x = xstar if identity_link else f.conjugate_gradient(xstar)
        if k % log_every == 0 or k == cfg.max_iters:
            res = float(np.linalg.norm(rows @ x - b)) / bnorm
            rec.record(k, x, xstar, res)
            if res <= cfg.tol_residual:
                break
    return DualState(x=x, xstar=xstar), rec.finish()


def rbpsfp_run(f, constraints, config, reference=None):
    """Randomized Bregman projections over a list of row constraints.

    Hyperplanes receive a direct Bregman projection (exact line search or
    the relaxed step, per config.step_mode); interval and half-space
    constraints are handled through a separating half-space when violated
    and skipped when already satisfied.  Logs the maximal constraint
    violation in place of a residual.
    """
    cfg = replace(config).validate()
    constraints = list(constraints)
    if not constraints:
        raise ValueError("constraint list must be nonempty")
    n = constraints[0].a.size
    for c in constraints:
        if c.a.size != n:
            raise ValueError("all constraints must share the dimension")

    crows = np.stack([c.a for c in constraints])
    clo = np.array([c.lo for c in constraints])
    chi = np.array([c.hi for c in constraints])

    def max_violation(x):
        v = crows @ x
        return float(np.maximum(0.0, np.maximum(clo - v, v - chi)).max())

    probs = _row_probs(cfg.sampler, np.einsum("ij,ij->i", crows, crows))
    sampler = CumulativeSampler(probs)
    rng = Xoshiro256pp(cfg.seed)

    rec = _Recorder(f, reference)
    log_every = cfg.log_cadence
    state = DualState.zero(n)
    rec.record(0, state.x, state.xstar, max_violation(state.x), violation=max_violation(state.x))

    for k in range(1, cfg.max_iters + 1):
        c = constraints[sampler.draw(rng)]
        if isinstance(c, Hyperplane):
            if cfg.step_mode == "exact":
                _, state = exact_hyperplane_linesearch(f, state, c.a, c.b)
            else:
                state = inexact_hyperplane_step(f, state, c.a, c.b)
        else:
            v = float(c.a @ state.x)
            if constraint_violation(c, v) > 0.0:
                u, beta = enclosing_halfspace(c.a, c, state.x)
                state = halfspace_bregman_step(f, state, u, beta, mode=cfg.step_mode)
            # satisfied constraints trigger no update
        if k % log_every == 0 or k == cfg.max_iters:
            viol = max_violation(state.x)
            rec.record(k, state.x, state.xstar, viol, violation=viol)
            if viol <= cfg.tol_residual:
                break
    return state, rec.finish()


def fit_linear_rate(errors):
    """exp(least-squares slope) of log(errors) against the entry index.

    A return value below 1 indicates empirical linear convergence; callers
    must truncate trailing machine-noise entries (floor 1e-15) beforehand
    since nonpositive values are rejected.
    """
    e = np.asarray(errors, dtype=float)
    if e.ndim != 1 or e.size < 3:
        raise ValueError("need at least 3 error values")
    if np.any(e <= 0.0):
        raise ValueError("error values must be positive")
    k = np.arange(e.size, dtype=float)
    logs = np.log(e)
    k_c = k - k.mean()
    slope = float((k_c @ (logs - logs.mean())) / (k_c @ k_c))
    return math.exp(slope)

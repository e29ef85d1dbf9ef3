"""Bregman projection steps onto hyperplanes and half-spaces.

The exact hyperplane step solves min_t f*(xstar - t*a) + t*beta; for the
elastic net this is a breakpoint search on the piecewise-linear derivative,
for the squared norm a closed form, and for the smoothed elastic net a
scalar bisection.  All functions are pure: states are never mutated.
"""

from dataclasses import dataclass

import numpy as np

from .potentials import ElasticNet, SmoothedElasticNet, SquaredNorm


@dataclass
class DualState:
    """Primal/dual iterate pair coupled through x = grad f*(xstar)."""

    x: np.ndarray
    xstar: np.ndarray

    @classmethod
    def from_dual(cls, f, xstar):
        xstar = np.asarray(xstar, dtype=float)
        return cls(x=f.conjugate_gradient(xstar), xstar=xstar)

    @classmethod
    def zero(cls, n):
        # xstar = 0 is a valid subgradient at x = 0 for every variant
        return cls(x=np.zeros(n), xstar=np.zeros(n))


def _as_row(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or not np.any(a != 0.0):
        raise ValueError("row vector must be one-dimensional and nonzero")
    return a


@dataclass
class Hyperplane:
    """<a, x> = b"""

    a: np.ndarray
    b: float

    def __post_init__(self):
        self.a = _as_row(self.a)
        self.b = float(self.b)
        self.lo = self.b
        self.hi = self.b


@dataclass
class HalfSpace:
    """<u, x> <= beta"""

    u: np.ndarray
    beta: float

    def __post_init__(self):
        self.u = _as_row(self.u)
        self.beta = float(self.beta)
        self.a = self.u
        self.lo = -np.inf
        self.hi = self.beta


@dataclass
class Interval:
    """b - delta <= <a, x> <= b + delta"""

    a: np.ndarray
    b: float
    delta: float

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        self.a = _as_row(self.a)
        self.b = float(self.b)
        self.delta = float(self.delta)
        self.lo = self.b - self.delta
        self.hi = self.b + self.delta


def constraint_violation(constraint, value):
    """Distance of <a, x> = value from the constraint's admissible range."""
    return max(0.0, constraint.lo - value, value - constraint.hi)


def inexact_hyperplane_step(f, state, a, b):
    """Single relaxed step: xstar moves by the scaled residual along a.

    Exact orthogonal projection for the squared norm; for other potentials
    the new iterate need not satisfy <a, x'> = b.
    """
    a = _as_row(a)
    r = float(a @ state.x) - float(b)
    xstar = state.xstar - (r / float(a @ a)) * a
    return DualState(x=f.conjugate_gradient(xstar), xstar=xstar)


def _elastic_net_step_length(lam, xstar, a, beta):
    """Breakpoint search for the elastic-net dual line problem.

    g'(t) = beta - <a, S_lam(xstar - t*a)> is piecewise linear and
    nondecreasing; its kinks are t = (xstar_i -+ lam) / a_i over the
    nonzero coordinates of a (coordinates with a_i = 0 never cross a
    kink and contribute nothing).  Coordinate i is shrunk to zero for t
    inside [lo_i, hi_i]; sweeping the sorted kinks with the slope-change
    prefix sums yields g' at every kink, the sign change is located by
    binary search, and the linear equation on that interval gives t.
    """
    nz = a != 0.0
    an = a[nz]
    xn = xstar[nz]
    b1 = (xn - lam) / an
    b2 = (xn + lam) / an
    lo_i = np.minimum(b1, b2)
    hi_i = np.maximum(b1, b2)
    sq = an * an
    full_slope = float(sq.sum())  # all coordinates active outside the kink range

    # duplicates kept: intervals [t_j, t_{j+1}) stay deterministic
    events = np.concatenate((lo_i, hi_i))
    deltas = np.concatenate((sq, -sq))  # d/dt <a, S(xstar - t a)> jumps at kinks
    order = np.argsort(events)
    t_ev = events[order]
    slope_after = -full_slope + np.cumsum(deltas[order])

    def gdirect(t):
        z = xstar - t * a
        return beta - float(a @ (z - np.minimum(np.maximum(z, -lam), lam)))

    h0 = -(gdirect(t_ev[0]) - beta)
    h_ev = np.empty(t_ev.size)
    h_ev[0] = h0
    h_ev[1:] = h0 + np.cumsum(slope_after[:-1] * (t_ev[1:] - t_ev[:-1]))
    gp = beta - h_ev  # nondecreasing since the increments of h_ev are <= 0

    # the prefix sums only nominate a bracket; the interval is confirmed
    # and the linear equation solved with directly evaluated g' values,
    # so accumulated rounding in the sweep never leaks into the step
    last = t_ev.size - 1
    j = min(int(np.searchsorted(gp, 0.0, side="left")), last)
    g_j = gp[0] if j == 0 else gdirect(t_ev[j])
    if g_j >= 0.0:
        while j > 0:
            g_prev = gp[0] if j == 1 else gdirect(t_ev[j - 1])
            if g_prev >= 0.0:
                j -= 1
                g_j = g_prev
                continue
            # g' is linear between consecutive kinks; g_prev < 0 <= g_j
            return float(t_ev[j - 1] - g_prev * (t_ev[j] - t_ev[j - 1]) / (g_j - g_prev))
        return float(t_ev[0] - g_j / full_slope)
    while j < last:
        j += 1
        g_next = gdirect(t_ev[j])
        if g_next >= 0.0:
            return float(t_ev[j - 1] - g_j * (t_ev[j] - t_ev[j - 1]) / (g_next - g_j))
        g_j = g_next
    return float(t_ev[last] - g_j / full_slope)


def _smoothed_step_length(f, xstar, a, beta, max_bisect=200):
    """Scalar bisection on the continuous, strictly increasing g'."""
    tol = 1e-12 * (1.0 + abs(beta))

    def gprime(t):
        return beta - float(a @ f.conjugate_gradient(xstar - t * a))

    g0 = gprime(0.0)
    if abs(g0) <= tol:
        return 0.0
    width = 1.0 + abs(g0) / float(a @ a)
    if g0 < 0.0:
        lo, hi = 0.0, width
        while gprime(hi) < 0.0:
            lo, hi = hi, hi + width
            width *= 2.0
    else:
        lo, hi = -width, 0.0
        while gprime(lo) > 0.0:
            lo, hi = lo - width, lo
            width *= 2.0
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        g_mid = gprime(mid)
        if abs(g_mid) <= tol:
            return mid
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
    raise ArithmeticError("bisection failed to reach the derivative tolerance")


def exact_step_length(f, xstar, a, beta):
    """t minimizing f*(xstar - t*a) + t*beta (smallest minimizer on ties)."""
    if isinstance(f, SquaredNorm):
        return (float(a @ xstar) - beta) / float(a @ a)
    if isinstance(f, ElasticNet):
        return _elastic_net_step_length(f.lam, xstar, a, beta)
    if isinstance(f, SmoothedElasticNet):
        return _smoothed_step_length(f, xstar, a, beta)
    raise TypeError(f"no exact line search for {type(f).__name__}")


def exact_hyperplane_linesearch(f, state, a, beta):
    """Exact Bregman projection onto <a, x> = beta.

    Returns (t_hat, new_state); the new primal iterate satisfies the
    hyperplane equation up to the documented 1e-9 * (1 + |beta|) accuracy.
    """
    a = _as_row(a)
    beta = float(beta)
    t_hat = exact_step_length(f, state.xstar, a, beta)
    xstar = state.xstar - t_hat * a
    return t_hat, DualState(x=f.conjugate_gradient(xstar), xstar=xstar)


def enclosing_halfspace(a, constraint, x):
    """Separating half-space <u, y> <= beta for a violated row constraint.

    With v = <a, x> and w = v - P_range(v) != 0 the half-space contains
    every point satisfying the constraint while excluding x, with the
    exact margin <u, x> - beta = w^2.
    """
    a = _as_row(a)
    v = float(a @ x)
    w = v - min(max(v, constraint.lo), constraint.hi)
    if w == 0.0:
        raise ValueError("x already satisfies the constraint; no separation exists")
    return w * a, w * v - w * w


def halfspace_bregman_step(f, state, u, beta, mode="exact"):
    """Bregman projection onto <u, x> <= beta; identity when already inside."""
    u = _as_row(u)
    beta = float(beta)
    if float(u @ state.x) <= beta:
        return state
    if mode == "exact":
        _, new_state = exact_hyperplane_linesearch(f, state, u, beta)
        return new_state
    if mode == "inexact":
        return inexact_hyperplane_step(f, state, u, beta)
    raise ValueError(f"unknown step mode {mode!r}")

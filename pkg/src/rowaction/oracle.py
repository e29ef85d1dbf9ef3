"""Independent certification of equality-constrained minimizers.

Solves min f(x) s.t. Ax = b through the smooth unconstrained dual
min_y f*(A^T y) - <b, y> by plain gradient descent.  Deliberately
unaccelerated: the oracle is used as ground truth in tests, so
robustness matters more than speed.
"""

from dataclasses import dataclass

import numpy as np


class NumericalError(RuntimeError):
    """Raised when an iterative procedure cannot reach its tolerance."""


@dataclass
class OracleResult:
    y_hat: np.ndarray  # dual point
    x_hat: np.ndarray  # primal solution, = grad f*(A^T y_hat) by construction
    grad_norm: float  # final ||A x_hat - b||
    iterations: int


def spectral_norm_sq(A, tol=1e-12, max_iters=10000):
    """||A||_2^2 by power iteration on A^T A (deterministic start)."""
    n = A.n
    v = np.ones(n) / np.sqrt(n)
    # fixed asymmetric perturbation so v is never orthogonal to the top space
    v += 1e-3 * np.cos(np.arange(1, n + 1))
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(max_iters):
        w = A.matvec_t(A.matvec(v))
        est = float(v @ w)
        wnorm = float(np.linalg.norm(w))
        if wnorm == 0.0:
            return 0.0
        v = w / wnorm
        if abs(est - prev) <= tol * max(est, 1e-300):
            break
        prev = est
    return est


def solve_dual(A, b, f, tol, max_iters=10**7):
    """Gradient descent on the dual with constant step 1 / ||A||_2^2.

    Parameters
    ----------
    A : RowMatrix.  The system Ax = b must be consistent.
    b : array of length m.
    f : Potential (strong convexity modulus 1).
    tol : target for the dual gradient norm ||A x - b|| (absolute).

    Raises NumericalError when the gradient norm plateaus above tol or the
    iteration cap is reached, reporting the best achieved norm; this is
    the failure mode for inconsistent systems, whose residual floors at
    the least-squares level.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    b = np.asarray(b, dtype=float)
    if b.shape != (A.m,):
        raise ValueError(f"expected rhs of length {A.m}, got {b.shape}")
    # a slightly inflated power-iteration estimate, capped by the always
    # valid Frobenius bound, keeps the step a safe 1/L
    L = min(A.frob_sq, 1.02 * spectral_norm_sq(A))
    step = 1.0 / L
    y = np.zeros(A.m)
    best = np.inf
    check_window = 20000
    last_best = np.inf
    for k in range(max_iters):
        x = f.conjugate_gradient(A.matvec_t(y))
        grad = A.matvec(x) - b
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= tol:
            return OracleResult(y_hat=y, x_hat=x, grad_norm=gnorm, iterations=k)
        best = min(best, gnorm)
        if k > 0 and k % check_window == 0:
            if best > last_best * (1.0 - 1e-9):
                raise NumericalError(
                    f"dual gradient stalled at {best:.3e} (target {tol:.3e}); "
                    "the system is likely inconsistent"
                )
            last_best = best
        y = y - step * grad
    raise NumericalError(f"iteration cap reached at gradient norm {best:.3e} (target {tol:.3e})")


def grid_linesearch(f, xstar, a, beta, t_range, step, chunk=65536):
    """Brute-force minimizer of f*(xstar - t*a) + t*beta on a uniform grid.

    Returns the smallest grid point attaining the minimum.  Intended as a
    slow independent check of the exact line search.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    lo, hi = float(t_range[0]), float(t_range[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and hi >= lo):
        raise ValueError("t_range must be a finite interval")
    xstar = np.asarray(xstar, dtype=float)
    a = np.asarray(a, dtype=float)
    count = int(np.floor((hi - lo) / step)) + 1
    best_val = np.inf
    best_t = lo
    for start in range(0, count, chunk):
        ts = lo + step * np.arange(start, min(start + chunk, count))
        vals = f.conjugate_value(xstar[None, :] - ts[:, None] * a[None, :]) + ts * beta
        j = int(np.argmin(vals))
        if vals[j] < best_val:  # strict: earlier chunks win ties
            best_val = float(vals[j])
            best_t = float(ts[j])
    return best_t

"""Instance generation, multi-trial statistics, and plot-data emission."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .matrices import RowMatrix
from .rng import Xoshiro256pp
from .solvers import canonical_method, run

INSTANCE_KINDS = ("gaussian", "tomography")
STAT_NAMES = ("median", "q25", "q75", "min", "max")
METRIC_NAMES = ("res", "err")


@dataclass
class InstanceSpec:
    kind: str = "gaussian"
    m: int = 100
    n: int = 50
    s: int = 10
    noise_rel: float = 0.0
    seed: int = 0

    def validate(self):
        if self.kind not in INSTANCE_KINDS:
            raise ValueError(f"unknown instance kind {self.kind!r}")
        if not 1 <= self.s <= self.n:
            raise ValueError("sparsity s must satisfy 1 <= s <= n")
        if self.noise_rel < 0:
            raise ValueError("noise_rel must be >= 0")
        if self.kind == "tomography":
            g = math.isqrt(self.n)
            if g * g != self.n or g < 2:
                raise ValueError("tomography needs n = grid_side^2 with grid_side >= 2")
        return self


def _sparse_values(rng, count):
    vals = rng.normals(count)
    while np.any(vals == 0.0):  # keep the support size exact
        zero = vals == 0.0
        vals[zero] = rng.normals(int(zero.sum()))
    return vals


def _support(rng, n, s):
    # partial Fisher-Yates: s positions uniform without replacement
    idx = list(range(n))
    for j in range(s):
        swap = j + rng.below(n - j)
        idx[j], idx[swap] = idx[swap], idx[j]
    return np.sort(np.asarray(idx[:s]))


def gen_gaussian_instance(spec):
    """Gaussian matrix, planted s-sparse solution, exact and noisy rhs.

    The noise vector is rescaled so that ||b_delta - b|| / ||b|| equals
    spec.noise_rel exactly.
    """
    spec = replace(spec).validate()
    rng = Xoshiro256pp(spec.seed)
    A = RowMatrix(rng.normals(spec.m * spec.n).reshape(spec.m, spec.n))
    x_hat = np.zeros(spec.n)
    x_hat[_support(rng, spec.n, spec.s)] = _sparse_values(rng, spec.s)
    b = A.matvec(x_hat)
    if float(np.linalg.norm(b)) == 0.0:
        raise ValueError("degenerate instance: b = 0")
    if spec.noise_rel > 0:
        e = rng.normals(spec.m)
        scale = spec.noise_rel * float(np.linalg.norm(b)) / float(np.linalg.norm(e))
        b_delta = b + scale * e
    else:
        b_delta = b.copy()
    return A, x_hat, b, b_delta


def trace_ray(grid_side, theta, offset):
    """Intersection lengths of one ray with every cell of a unit-pixel grid.

    The image domain is [0, g] x [0, g] with g = grid_side and unit square
    pixels (flat index row * g + col).  The ray is the line through
    center + offset * (cos t, sin t) with direction (-sin t, cos t).
    Returns None when the ray misses the domain (or only grazes it).
    """
    g = grid_side
    c = 0.5 * g
    nx, ny = math.cos(theta), math.sin(theta)
    px, py = c + offset * nx, c + offset * ny
    dx, dy = -ny, nx

    t0, t1 = -np.inf, np.inf
    for p, d in ((px, dx), (py, dy)):
        if abs(d) < 1e-12:
            if p <= 0.0 or p >= g:
                return None
        else:
            ta, tb = (0.0 - p) / d, (g - p) / d
            t0 = max(t0, min(ta, tb))
            t1 = min(t1, max(ta, tb))
    if not (t1 - t0 > 1e-9):
        return None

    crossings = [t0, t1]
    for i in range(g + 1):
        for p, d in ((px, dx), (py, dy)):
            if abs(d) >= 1e-12:
                t = (i - p) / d
                if t0 < t < t1:
                    crossings.append(t)
    crossings.sort()

    row = np.zeros(g * g)
    for ta, tb in zip(crossings[:-1], crossings[1:]):
        if tb - ta <= 0.0:
            continue
        tm = 0.5 * (ta + tb)
        ix = min(max(int(px + tm * dx), 0), g - 1)
        iy = min(max(int(py + tm * dy), 0), g - 1)
        row[iy * g + ix] += tb - ta
    return row


def gen_tomography_instance(grid_side, n_rays, s, seed):
    """Random-ray scan of an s-sparse nonnegative image, noiseless rhs."""
    if grid_side < 2 or n_rays < 1:
        raise ValueError("need grid_side >= 2 and n_rays >= 1")
    n = grid_side * grid_side
    if not 1 <= s <= n:
        raise ValueError("sparsity s must satisfy 1 <= s <= n")
    rng = Xoshiro256pp(seed)
    half_diag = grid_side * math.sqrt(2.0) / 2.0
    rows = []
    while len(rows) < n_rays:
        theta = rng.random() * math.pi
        offset = (2.0 * rng.random() - 1.0) * half_diag
        row = trace_ray(grid_side, theta, offset)
        # resample rays that miss or merely graze the domain: a zero (or
        # nearly zero) row must never be emitted
        if row is not None and float(row.sum()) >= 1e-6:
            rows.append(row)
    A = RowMatrix(np.stack(rows))
    x_hat = np.zeros(n)
    x_hat[_support(rng, n, s)] = np.abs(_sparse_values(rng, s))
    b = A.matvec(x_hat)
    return A, x_hat, b


def quantile(sorted_values, q):
    """Linear-interpolation quantile of an ascending sequence."""
    v = np.asarray(sorted_values, dtype=float)
    if v.size == 0:
        raise ValueError("empty input")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    p = q * (v.size - 1)
    lo = int(np.floor(p))
    frac = p - lo
    if frac == 0.0:
        return float(v[lo])
    return float(v[lo] + frac * (v[lo + 1] - v[lo]))


@dataclass
class TrialStats:
    """Cross-trial summaries per logged iteration.

    stats[metric][stat] is an array aligned with ks, for metric in
    ('res', 'err') and stat in ('median', 'q25', 'q75', 'min', 'max').
    """

    ks: np.ndarray
    stats: dict

    def check_ordering(self):
        for metric in self.stats:
            s = self.stats[metric]
            ok = (
                np.all(s["min"] <= s["q25"])
                and np.all(s["q25"] <= s["median"])
                and np.all(s["median"] <= s["q75"])
                and np.all(s["q75"] <= s["max"])
            )
            if not ok:
                raise AssertionError(f"quantile ordering violated for metric {metric!r}")
        return True


def _summarize(ks, curves):
    values = np.stack(curves)  # trials x logged iterations
    out = {}
    per_k = np.sort(values, axis=0)
    out["min"] = per_k[0].copy()
    out["max"] = per_k[-1].copy()
    for name, q in (("q25", 0.25), ("median", 0.5), ("q75", 0.75)):
        out[name] = np.array([quantile(per_k[:, j], q) for j in range(per_k.shape[1])])
    return out


def run_trials(spec, methods, solver_cfg, n_trials):
    """Runs every method on n_trials fresh instances and aggregates curves.

    Trial t derives both the instance and the solver stream from
    spec.seed + t; all methods see the identical instance within a trial.
    Early stopping is disabled so the iteration grids of all trials align.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    spec = replace(spec).validate()
    methods = [canonical_method(m) for m in methods]
    curves = {m: {"res": [], "err": []} for m in methods}
    ks_ref = None
    for t in range(n_trials):
        seed_t = spec.seed + t
        if spec.kind == "gaussian":
            A, x_hat, _, rhs = gen_gaussian_instance(replace(spec, seed=seed_t))
        else:
            A, x_hat, rhs = gen_tomography_instance(
                math.isqrt(spec.n), spec.m, spec.s, seed_t
            )
        for m in methods:
            cfg = replace(solver_cfg, method=m, seed=seed_t, tol_residual=0.0)
            _, log = run(A, rhs, cfg, reference=x_hat)
            if ks_ref is None:
                ks_ref = log.ks
            elif not np.array_equal(log.ks, ks_ref):
                raise AssertionError("iteration grids differ across trials")
            curves[m]["res"].append(log.residual)
            curves[m]["err"].append(log.error)
    return {
        m: TrialStats(
            ks=ks_ref.copy(),
            stats={metric: _summarize(ks_ref, curves[m][metric]) for metric in METRIC_NAMES},
        )
        for m in methods
    }


def format_sci17(v):
    """Scientific notation with 17 significant digits and a bare exponent."""
    mant, exp = f"{float(v):.16e}".split("e")
    return f"{mant}e{int(exp)}"


def emit_dat(path, series):
    """Writes `k value` lines; k as integer, value via format_sci17."""
    series = list(series)
    if not series:
        raise ValueError(f"{path}: refusing to write an empty series")
    try:
        with open(path, "w", newline="\n") as fh:
            for k, v in series:
                fh.write(f"{int(k)} {format_sci17(v)}\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_dat(path):
    out = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                k, v = line.split()
                out.append((int(k), float(v)))
    return out


def dat_filename(stat, metric, method, n, m, s, noise):
    if stat not in STAT_NAMES:
        raise ValueError(f"unknown statistic {stat!r}")
    if metric not in METRIC_NAMES:
        raise ValueError(f"unknown metric {metric!r}")
    return f"{stat}{metric}_{method}_n{n}_m{m}_s{s}_noise{noise:g}.dat"

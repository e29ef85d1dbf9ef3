"""Row-oriented dense matrix storage and spectral helpers."""

import math

import numpy as np


class RowMatrix:
    """Dense system matrix stored row-major with cached squared row norms.

    Immutable after construction; rows with zero norm are rejected because
    every solver divides by them and norm-weighted sampling would give them
    zero mass anyway (a zero row in input data is a bug worth surfacing).
    """

    def __init__(self, rows):
        arr = np.array(rows, dtype=float, copy=True, order="C")
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError("matrix must have at least one row and column")
        row_norm_sq = np.einsum("ij,ij->i", arr, arr)
        if np.any(row_norm_sq <= 0.0):
            bad = int(np.argmin(row_norm_sq))
            raise ValueError(f"row {bad} has zero norm")
        self.rows = arr
        self.m, self.n = arr.shape
        self.row_norm_sq = row_norm_sq
        self.frob_sq = float(row_norm_sq.sum())

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got {x.shape}")
        return self.rows @ x

    def matvec_t(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.m,):
            raise ValueError(f"expected vector of length {self.m}, got {y.shape}")
        return self.rows.T @ y

    def residual_norm_rel(self, x, b):
        """Relative residual ||Ax - b|| / ||b||; undefined (error) for b = 0."""
        b = np.asarray(b, dtype=float)
        if b.shape != (self.m,):
            raise ValueError(f"expected vector of length {self.m}, got {b.shape}")
        bnorm = float(np.linalg.norm(b))
        if bnorm == 0.0:
            raise ValueError("relative residual undefined for b = 0")
        return float(np.linalg.norm(self.matvec(x) - b)) / bnorm


def _jacobi_singular_values(mat, tol=1e-14, max_sweeps=60):
    """Singular values by one-sided Jacobi column orthogonalization."""
    work = np.array(mat, dtype=float, copy=True)
    ncols = work.shape[1]
    for _ in range(max_sweeps):
        rotated = 0
        for p in range(ncols - 1):
            for q in range(p + 1, ncols):
                cp = work[:, p]
                cq = work[:, q]
                app = float(cp @ cp)
                aqq = float(cq @ cq)
                apq = float(cp @ cq)
                if abs(apq) <= tol * math.sqrt(app * aqq):
                    continue
                rotated += 1
                tau = (aqq - app) / (2.0 * apq)
                sign = 1.0 if tau >= 0.0 else -1.0
                t = sign / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * cp - s * cq
                new_q = s * cp + c * cq
                work[:, p] = new_p
                work[:, q] = new_q
        if rotated == 0:
            break
    return np.sqrt(np.einsum("ij,ij->j", work, work))


def smallest_positive_singular_value(A):
    """Smallest nonzero singular value of A.

    Runs one-sided Jacobi on whichever of A or A^T has fewer columns;
    values below 1e-10 * sigma_max are treated as numerical zeros.
    """
    mat = A.rows if A.n <= A.m else A.rows.T
    sv = _jacobi_singular_values(mat)
    sigma_max = float(sv.max())
    if sigma_max == 0.0:
        raise ValueError("zero matrix has no positive singular value")
    positive = sv[sv > 1e-10 * sigma_max]
    if positive.size == 0:
        raise ValueError("no singular value above the zero threshold")
    return float(positive.min())


def load_matrix(path):
    """Reads `m n` on the first line, then m rows of n numbers each."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected 'm n' header line")
        m, n = int(header[0]), int(header[1])
        data = np.loadtxt(fh, ndmin=2)
    if data.shape != (m, n):
        raise ValueError(f"{path}: header says {m}x{n}, data is {data.shape}")
    return RowMatrix(data)


def load_vector(path):
    """Reads one number per line."""
    vec = np.loadtxt(path, ndmin=1)
    if vec.ndim != 1:
        raise ValueError(f"{path}: expected one number per line")
    return vec

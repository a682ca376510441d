"""Packed symmetric matrices and the two eigensolvers used by the algorithms.

Storage layout: entry ``(i, j)`` with ``i <= j`` lives at ``j*(j+1)//2 + i`` of
a flat float64 array (column-major upper packing, the BLAS ``'U'`` layout).
Only one physical value exists per unordered pair, so symmetry cannot break.

``lambda_max`` uses cyclic Jacobi sweeps. The batched form
``lambda_max_batch`` runs the same rotations on a stack of matrices, freezing
each matrix as soon as it converges, so the value returned for a matrix does
not depend on which batch it was computed in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dspmv

from .exceptions import EmptySet, InvalidIndex, NoConvergence

__all__ = [
    "EigSolveSettings",
    "SymmetricMatrix",
    "packed_index",
    "principal_submatrix",
    "lambda_max",
    "lambda_max_batch",
    "top_eigvec",
]


@dataclass(frozen=True)
class EigSolveSettings:
    """Stopping rules for the eigensolvers.

    ``tolerance`` is the relative off-diagonal Frobenius norm at which Jacobi
    stops, and the infinity-norm step size at which power iteration stops.
    ``max_sweeps`` bounds Jacobi sweeps; ``max_iterations`` bounds power
    iteration steps.
    """

    tolerance: float = 1e-10
    max_sweeps: int = 100
    max_iterations: int = 20_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_sweeps < 1:
            raise ValueError(f"max_sweeps must be >= 1, got {self.max_sweeps}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


DEFAULT_SETTINGS = EigSolveSettings()


def packed_index(i, j):
    """Flat position of entry (i, j) in packed storage. Works on arrays."""
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    return hi * (hi + 1) // 2 + lo


class SymmetricMatrix:
    """Immutable dense symmetric matrix stored as a packed upper triangle."""

    __slots__ = ("_packed", "_dim")

    def __init__(self, packed, dim: int):
        dim = int(dim)
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        packed = np.array(packed, dtype=np.float64, copy=True).reshape(-1)
        if packed.size != dim * (dim + 1) // 2:
            raise ValueError(
                f"packed storage for dim={dim} needs {dim * (dim + 1) // 2} entries, "
                f"got {packed.size}"
            )
        if not np.all(np.isfinite(packed)):
            raise ValueError("matrix entries must be finite")
        packed.setflags(write=False)
        self._packed = packed
        self._dim = dim

    @classmethod
    def from_dense(cls, a) -> "SymmetricMatrix":
        """Build from a square array. Only the upper triangle is read."""
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square 2-D array, got shape {a.shape}")
        p = a.shape[0]
        cols, rows = np.tril_indices(p)
        return cls(a[rows, cols], p)

    @classmethod
    def _wrap(cls, packed: np.ndarray, dim: int) -> "SymmetricMatrix":
        # Internal constructor for arrays already validated and owned.
        obj = cls.__new__(cls)
        packed.setflags(write=False)
        obj._packed = packed
        obj._dim = dim
        return obj

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def packed(self) -> np.ndarray:
        """Read-only view of the packed storage."""
        return self._packed

    def get(self, i: int, j: int) -> float:
        p = self._dim
        if not (0 <= i < p and 0 <= j < p):
            raise InvalidIndex(f"({i}, {j}) out of range for dim {p}")
        return float(self._packed[packed_index(i, j)])

    def diagonal(self) -> np.ndarray:
        idx = np.arange(self._dim)
        return self._packed[idx * (idx + 3) // 2]

    def rows(self, indices) -> np.ndarray:
        """Dense copy of the requested rows, shape ``(len(indices), dim)``."""
        idx = np.asarray(indices, dtype=np.int64).reshape(-1)
        if idx.size and (idx.min() < 0 or idx.max() >= self._dim):
            raise InvalidIndex(f"row index out of range for dim {self._dim}")
        cols = np.arange(self._dim)
        return self._packed[packed_index(idx[:, None], cols[None, :])]

    def dense(self) -> np.ndarray:
        """Materialize the full ``dim x dim`` array (a fresh copy)."""
        p = self._dim
        out = np.empty((p, p))
        cols, rows = np.tril_indices(p)
        out[rows, cols] = self._packed
        out[cols, rows] = self._packed
        return out

    def matvec(self, x) -> np.ndarray:
        return dspmv(self._dim, 1.0, self._packed, np.asarray(x, dtype=np.float64))

    def scaled(self, c: float) -> "SymmetricMatrix":
        return SymmetricMatrix._wrap(self._packed * float(c), self._dim)

    def off_diagonal(self) -> np.ndarray:
        """Packed off-diagonal entries (each unordered pair once)."""
        mask = np.ones(self._packed.size, dtype=bool)
        idx = np.arange(self._dim)
        mask[idx * (idx + 3) // 2] = False
        return self._packed[mask]

    def hard_threshold(self, t: float) -> "SymmetricMatrix":
        """Zero off-diagonal entries with ``|value| < t``; the diagonal is kept."""
        out = self._packed.copy()
        keep = np.abs(out) >= t
        idx = np.arange(self._dim)
        keep[idx * (idx + 3) // 2] = True
        out[~keep] = 0.0
        return SymmetricMatrix._wrap(out, self._dim)

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return self._dim == other._dim and np.array_equal(self._packed, other._packed)

    def __hash__(self):
        return hash((self._dim, self._packed.tobytes()))

    def __repr__(self):
        return f"SymmetricMatrix(dim={self._dim})"


def _check_subset(dim: int, indices) -> np.ndarray:
    idx = np.unique(np.asarray(list(indices), dtype=np.int64))
    if idx.size == 0:
        raise EmptySet("index set is empty")
    if idx[0] < 0 or idx[-1] >= dim:
        raise InvalidIndex(f"index out of range for dim {dim}: {idx.tolist()}")
    return idx


def principal_submatrix(m: SymmetricMatrix, s) -> SymmetricMatrix:
    """Restriction of ``m`` to the rows and columns in ``s`` (sorted order)."""
    idx = _check_subset(m.dim, s)
    cols, rows = np.tril_indices(idx.size)
    packed = m.packed[packed_index(idx[rows], idx[cols])]
    return SymmetricMatrix._wrap(packed, idx.size)


def _off_norms(a: np.ndarray, iu) -> np.ndarray:
    upper = a[iu[0], iu[1]]  # (n(n-1)/2, B)
    return np.sqrt(2.0 * np.einsum("kb,kb->b", upper, upper))


def _sweep(a: np.ndarray) -> None:
    # One cyclic sweep, in place, over a batch-last (n, n, B) stack.
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q].copy()
            rot = apq != 0.0
            if not rot.any():
                continue
            app = a[p, p].copy()
            aqq = a[q, q].copy()
            with np.errstate(over="ignore"):
                # a subnormal apq gives theta = inf and t = 0, the correct limit
                theta = (aqq - app) / (2.0 * np.where(rot, apq, 1.0))
                t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[~rot] = 0.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp = a[p].copy()
            rq = a[q].copy()
            newp = c * rp - s * rq
            newq = s * rp + c * rq
            a[p] = newp
            a[q] = newq
            a[:, p] = newp
            a[:, q] = newq
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            pq = np.where(rot, 0.0, apq)
            a[p, q] = pq
            a[q, p] = pq


def lambda_max_batch(mats, settings: EigSolveSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """Largest eigenvalue of each matrix in a ``(B, n, n)`` stack of symmetric arrays.

    Cyclic Jacobi over the upper triangle in row order. A matrix stops being
    rotated once its off-diagonal Frobenius norm is at most
    ``settings.tolerance`` times its full Frobenius norm; only matrices still
    above that level take part in the next sweep.
    """
    mats = np.asarray(mats, dtype=np.float64)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError(f"expected shape (B, n, n), got {mats.shape}")
    nb, n, _ = mats.shape
    if nb == 0:
        return np.empty(0)
    if n == 1:
        return mats[:, 0, 0].copy()
    a = np.ascontiguousarray(mats.transpose(1, 2, 0))  # batch-last: a[i, j] is a length-B vector
    iu = np.triu_indices(n, 1)
    fro = np.sqrt(np.einsum("ijb,ijb->b", a, a))
    thresh = settings.tolerance * fro
    active = np.flatnonzero(_off_norms(a, iu) > thresh)
    for _ in range(settings.max_sweeps):
        if active.size == 0:
            break
        sub = np.ascontiguousarray(a[:, :, active])
        _sweep(sub)
        a[:, :, active] = sub
        still = _off_norms(sub, iu) > thresh[active]
        active = active[still]
    estimate = np.diagonal(a).max(axis=1)
    if active.size:
        raise NoConvergence(
            f"Jacobi did not converge in {settings.max_sweeps} sweeps", estimate=estimate
        )
    return estimate


def lambda_max(m: SymmetricMatrix, settings: EigSolveSettings = DEFAULT_SETTINGS) -> float:
    """Largest eigenvalue of ``m`` by cyclic Jacobi."""
    try:
        return float(lambda_max_batch(m.dense()[None], settings)[0])
    except NoConvergence as exc:
        raise NoConvergence(str(exc), estimate=float(exc.estimate[0])) from None


def _power(m: SymmetricMatrix, shift: float, settings: EigSolveSettings):
    # Returns (vector, converged, flipped).
    p = m.dim
    v = np.full(p, 1.0 / np.sqrt(p))
    for _ in range(settings.max_iterations):
        w = m.matvec(v)
        if shift:
            w += shift * v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # start vector lies in the null space; every vector is an eigenvector
            return v, True, False
        w /= norm
        if np.max(np.abs(w - v)) < settings.tolerance:
            return w, True, False
        if np.max(np.abs(w + v)) < settings.tolerance:
            return w, False, True
        v = w
    return v, False, False


def top_eigvec(m: SymmetricMatrix, settings: EigSolveSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """Unit eigenvector of the largest eigenvalue, by power iteration.

    Starts from the normalized all-ones vector. If the iterates alternate in
    sign (the dominant eigenvalue is negative) the matrix is shifted by the
    magnitude of that eigenvalue and the iteration restarts. The sign is fixed
    so that the entry of largest magnitude is positive. When the top
    eigenspace is degenerate any converged vector in it is returned.
    """
    v, converged, flipped = _power(m, 0.0, settings)
    if flipped:
        shift = abs(float(v @ m.matvec(v)))
        v, converged, _ = _power(m, shift, settings)
    if not converged:
        raise NoConvergence(
            f"power iteration did not converge in {settings.max_iterations} steps", estimate=v
        )
    lead = int(np.argmax(np.abs(v)))
    if v[lead] < 0:
        v = -v
    return v / np.linalg.norm(v)

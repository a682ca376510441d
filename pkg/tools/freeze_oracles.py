"""Regenerate the frozen reference values in tests/data/.

The eigenvalue references come from LAPACK (``numpy.linalg.eigvalsh``), an
implementation independent of the Jacobi solver under test. Matrices are
rebuilt from their seeds at test time; a digest guards against generator drift.
"""

import hashlib
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "lambda_reference.npz"
COUNT = 1000
MASTER = 20240611


def matrix(i: int) -> np.ndarray:
    rng = np.random.default_rng([MASTER, i])
    dim = int(rng.integers(1, 31))
    scale = 10.0 ** rng.uniform(-3, 3)
    a = rng.standard_normal((dim, dim)) * scale
    return (a + a.T) / 2


def main():
    digest = hashlib.sha256()
    lam = np.empty(COUNT)
    dims = np.empty(COUNT, dtype=np.int64)
    for i in range(COUNT):
        a = matrix(i)
        digest.update(a.tobytes())
        lam[i] = np.linalg.eigvalsh(a)[-1]
        dims[i] = a.shape[0]
    np.savez(OUT, lambda_max=lam, dims=dims, master=MASTER, digest=digest.hexdigest())
    print(f"wrote {OUT} ({COUNT} matrices)")


if __name__ == "__main__":
    main()

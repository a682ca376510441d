"""Spiked covariance instances: planted sparse spike plus Gaussian noise.

Each sample is ``x = sqrt(beta) * u * v + xi`` with ``u ~ N(0, 1)`` and
``xi ~ N(0, I_p)``, so the population covariance is ``beta v v^T + I_p``. The
data are treated as centered; no empirical mean is removed.

Randomness comes from numpy's PCG64 generator. ``rng_seed`` seeds a
``SeedSequence`` which spawns two children: the first drives the spike
(support, then signs), the second the samples. Samples are drawn in blocks of
``SAMPLE_BLOCK`` rows of ``p + 1`` standard normals, each row laid out as
``(u_i, xi_i)``, which fixes the draw order ``u_1, xi_1, u_2, xi_2, ...``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .linalg import SymmetricMatrix

__all__ = [
    "SignModel",
    "SupportPolicy",
    "SpikedModelParams",
    "PlantedInstance",
    "make_spike",
    "sample_covariance",
    "save_instance",
    "load_instance",
    "SAMPLE_BLOCK",
]

SAMPLE_BLOCK = 512
# Columns of the covariance accumulated per GEMM; bounds the dense scratch.
_COLUMN_BLOCK = 1024

INSTANCE_FORMAT = "sspca-instance/1"


class SignModel(str, Enum):
    UBSPCA = "UBSPCA"  # every nonzero equals +1/sqrt(k)
    USPCA = "USPCA"  # nonzeros are +-1/sqrt(k) with random signs


class SupportPolicy(str, Enum):
    FIRST_K = "first_k"
    RANDOM = "random"


@dataclass(frozen=True)
class SpikedModelParams:
    n: int
    p: int
    k: int
    beta: float
    sign_model: SignModel = SignModel.UBSPCA
    support_policy: SupportPolicy = SupportPolicy.FIRST_K

    def __post_init__(self):
        object.__setattr__(self, "sign_model", SignModel(self.sign_model))
        object.__setattr__(self, "support_policy", SupportPolicy(self.support_policy))
        problems = self.problems()
        if problems:
            raise ValueError("; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        if self.n < 1:
            out.append(f"n must be >= 1 (got {self.n})")
        if self.p < 1:
            out.append(f"p must be >= 1 (got {self.p})")
        if not 1 <= self.k <= self.p:
            out.append(f"k must satisfy 1 <= k <= p (got k={self.k}, p={self.p})")
        if not (np.isfinite(self.beta) and self.beta >= 0):
            out.append(f"beta must be finite and >= 0 (got {self.beta})")
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sign_model"] = self.sign_model.value
        d["support_policy"] = self.support_policy.value
        return d


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    params: SpikedModelParams
    spike: np.ndarray
    support: tuple[int, ...]
    covariance: SymmetricMatrix
    rng_seed: int


def _streams(rng_seed: int):
    spike_ss, sample_ss = np.random.SeedSequence(int(rng_seed)).spawn(2)
    return np.random.default_rng(spike_ss), np.random.default_rng(sample_ss)


def make_spike(params: SpikedModelParams, rng_seed: int):
    """Planted unit spike and its sorted support, deterministic in ``rng_seed``."""
    rng, _ = _streams(rng_seed)
    p, k = params.p, params.k
    if params.support_policy is SupportPolicy.FIRST_K:
        support = np.arange(k)
    else:
        support = np.sort(rng.choice(p, size=k, replace=False))
    if params.sign_model is SignModel.UBSPCA:
        signs = np.ones(k)
    else:
        signs = rng.choice(np.array([-1.0, 1.0]), size=k)
    spike = np.zeros(p)
    spike[support] = signs / np.sqrt(k)
    return spike, tuple(int(i) for i in support)


def _accumulate_gram(packed: np.ndarray, x: np.ndarray) -> None:
    # packed += upper triangle of x^T x, one column block at a time
    p = x.shape[1]
    for j0 in range(0, p, _COLUMN_BLOCK):
        j1 = min(p, j0 + _COLUMN_BLOCK)
        g = x[:, :j1].T @ x[:, j0:j1]  # (j1, w)
        rows = np.arange(j1)[None, :]
        cols = np.arange(j0, j1)[:, None]
        packed[j0 * (j0 + 1) // 2 : j1 * (j1 + 1) // 2] += g.T[rows <= cols]


def sample_covariance(params: SpikedModelParams, rng_seed: int) -> PlantedInstance:
    """Draw ``n`` samples and return ``(1/n) sum x_i x_i^T`` with the planted spike.

    The samples are generated and folded into the packed accumulator block
    by block; the full ``n x p`` design matrix is never held in memory.
    """
    spike, support = make_spike(params, rng_seed)
    _, rng = _streams(rng_seed)
    n, p = params.n, params.p
    root_beta = np.sqrt(params.beta)
    packed = np.zeros(p * (p + 1) // 2)
    done = 0
    while done < n:
        b = min(SAMPLE_BLOCK, n - done)
        z = rng.standard_normal((b, p + 1))
        x = z[:, 1:]
        x += (root_beta * z[:, :1]) * spike[None, :]
        _accumulate_gram(packed, x)
        done += b
    packed /= n
    return PlantedInstance(
        params=params,
        spike=spike,
        support=support,
        covariance=SymmetricMatrix._wrap(packed, p),
        rng_seed=int(rng_seed),
    )


def save_instance(path, instance: PlantedInstance) -> None:
    """Write an instance as an uncompressed ``.npz`` container.

    Fields, in order: ``format`` (str), ``params`` (JSON str), ``rng_seed``
    (<u8), ``spike`` (<f8, length p), ``support`` (<i8, length k),
    ``covariance`` (<f8, packed upper triangle, length p(p+1)/2).
    """
    path = Path(path)
    with open(path, "wb") as fh:
        np.savez(
            fh,
            format=np.array(INSTANCE_FORMAT),
            params=np.array(json.dumps(instance.params.to_dict(), sort_keys=True)),
            rng_seed=np.array(instance.rng_seed, dtype="<u8"),
            spike=instance.spike.astype("<f8"),
            support=np.asarray(instance.support, dtype="<i8"),
            covariance=instance.covariance.packed.astype("<f8"),
        )


def load_instance(path) -> PlantedInstance:
    with np.load(Path(path), allow_pickle=False) as data:
        fmt = str(data["format"])
        if fmt != INSTANCE_FORMAT:
            raise ValueError(f"{path}: unsupported instance format {fmt!r}")
        params = SpikedModelParams(**json.loads(str(data["params"])))
        return PlantedInstance(
            params=params,
            spike=data["spike"].astype(np.float64),
            support=tuple(int(i) for i in data["support"]),
            covariance=SymmetricMatrix(data["covariance"], params.p),
            rng_seed=int(data["rng_seed"]),
        )

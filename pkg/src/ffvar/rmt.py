"""Haar-random unitary matrices and trace moments.

Sampling follows the standard recipe: a complex Ginibre matrix, a QR
decomposition, then rescaling Q by the phases of R's diagonal, which makes
the distribution exactly Haar. The second moment of |tr U^n| over U(N) is
min(n, N); Monte Carlo estimates here are reproducible because each
fixed-size chunk of samples owns an RNG stream derived from (seed, chunk),
so neither worker count nor scheduling can change the estimate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalCheckError, ValidationError

CHUNK = 1024  # partition granularity is fixed by the sample count alone
_UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class UnitaryMoment:
    N: int
    n: int
    samples: int
    seed: int
    estimate: float
    std_error: float

    @property
    def exact(self) -> int:
        return min(self.n, self.N)

    @property
    def within(self) -> float:
        """Distance to the exact value in standard errors."""
        if self.std_error == 0:
            return 0.0 if self.estimate == self.exact else float("inf")
        return abs(self.estimate - self.exact) / self.std_error


def haar_sample(N: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-distributed element of U(N)."""
    if N < 1:
        raise ValidationError("matrix size must be >= 1")
    for _ in range(2):
        A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        Qm, R = np.linalg.qr(A)
        d = np.diagonal(R)
        phases = d / np.abs(d)
        U = Qm * phases[None, :]
        residual = np.max(np.abs(U.conj().T @ U - np.eye(N)))
        if residual < _UNITARITY_TOL:
            return U
    raise InternalCheckError("unitarity residual too large after retry")


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng((int(seed), int(chunk)))


def _traces_for_chunk(N: int, n: int, count: int,
                      rng: np.random.Generator) -> np.ndarray:
    out = np.empty(count)
    for i in range(count):
        U = haar_sample(N, rng)
        eig = np.linalg.eigvals(U)
        out[i] = abs(np.sum(eig**n)) ** 2
    return out


def trace_moment_mc(N: int, n: int, samples: int,
                    seed: int) -> UnitaryMoment:
    """Monte Carlo mean of |tr U^n|^2 over U(N) with its standard error."""
    if N < 1 or n < 1:
        raise ValidationError("need N, n >= 1")
    if samples < 100:
        raise ValidationError("need at least 100 samples")
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk_id = 0
    while done < samples:
        count = min(CHUNK, samples - done)
        vals = _traces_for_chunk(N, n, count, _chunk_rng(seed, chunk_id))
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += count
        chunk_id += 1
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return UnitaryMoment(N=N, n=n, samples=samples, seed=seed,
                         estimate=mean,
                         std_error=float(np.sqrt(var / samples)))


def pu_invariance_check(N: int, n: int, samples: int, seed: int,
                        tol: float = 1e-10) -> dict:
    """|tr (cU)^n|^2 = |tr U^n|^2 for unit scalars c: the reduction from
    the projective group, checked numerically."""
    if N < 1 or n < 1:
        raise ValidationError("need N, n >= 1")
    rng = _chunk_rng(seed, 0)
    failures = 0
    max_diff = 0.0
    for _ in range(samples):
        U = haar_sample(N, rng)
        c = np.exp(2j * np.pi * rng.random())
        eig = np.linalg.eigvals(U)
        base = abs(np.sum(eig**n)) ** 2
        scaled = abs(np.sum((c * eig) ** n)) ** 2
        diff = abs(scaled - base) / max(base, 1.0)
        max_diff = max(max_diff, diff)
        if diff > tol:
            failures += 1
    return {"N": N, "n": n, "trials": samples, "failures": failures,
            "max_relative_diff": max_diff, "passed": failures == 0}

"""Seeded tensor families and sequence families.

Randomness for trial ``t`` of a run seeded with ``seed`` comes from
``SeedSequence([seed, t, stream])``, so results never depend on the order
in which trials execute.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

TENSOR_FAMILIES = ("rademacher", "gaussian", "rank_one", "custom")


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial), int(stream)]))


def sample_tensor(family: str, dims, field: str, rng: np.random.Generator):
    """Return ``(coeffs, factors)``; ``factors`` is set for rank-one tensors."""
    dims = tuple(int(n) for n in dims)
    complex_ = field == "complex"
    if family == "rademacher":
        return rng.choice([-1.0, 1.0], size=dims), None
    if family == "gaussian":
        g = rng.standard_normal(dims)
        if complex_:
            g = (g + 1j * rng.standard_normal(dims)) / np.sqrt(2)
        return g, None
    if family == "rank_one":
        factors = [random_unit_vectors(rng, 1, n, complex_)[0] for n in dims]
        coeffs = factors[0]
        for f in factors[1:]:
            coeffs = np.multiply.outer(coeffs, f)
        return coeffs, factors
    raise ValueError(f"unknown tensor family {family!r}; expected one of {', '.join(TENSOR_FAMILIES[:3])}")


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int, complex_: bool = False) -> np.ndarray:
    z = rng.standard_normal((count, dim))
    if complex_:
        z = z + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sign_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    return rng.choice([-1.0, 1.0], size=(count, dim))


SEQUENCE_KINDS = ("basis", "signs", "unit")


def sample_sequence(kind: str, dim: int, rng: np.random.Generator, complex_: bool = False,
                    max_len: int = 4) -> np.ndarray:
    if kind == "basis":
        return np.eye(dim)
    length = int(rng.integers(1, max_len + 1))
    if kind == "signs":
        return sign_vectors(rng, length, dim)
    if kind == "unit":
        return random_unit_vectors(rng, length, dim, complex_)
    raise ValueError(f"unknown sequence kind {kind!r}")


def sample_families(dims, count: int, rng: np.random.Generator, complex_: bool = False) -> list[tuple]:
    """``count`` families (one sequence per slot); the first is all-basis."""
    fams = [tuple(np.eye(n) for n in dims)]
    while len(fams) < count:
        kinds = rng.choice(SEQUENCE_KINDS, size=len(dims))
        fams.append(tuple(sample_sequence(str(kd), n, rng, complex_) for kd, n in zip(kinds, dims)))
    return fams


def worker_count() -> int:
    raw = os.environ.get("HLGAUGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def map_trials(fn, items) -> list:
    """Ordered map over trials, threaded up to ``HLGAUGE_THREADS`` workers."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

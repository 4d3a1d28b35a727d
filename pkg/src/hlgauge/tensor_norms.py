"""Anisotropic mixed norms, weak norms and Holder alignment on dense tensors.

Tensors are plain numpy arrays (real or complex), row-major with the last
index fastest. Index ``j_k`` is measured with exponent ``p_k``; the
innermost sum runs over the last index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .estimate import NormEstimate
from .exponents import (
    Exponent,
    ExponentLike,
    ExponentVector,
    as_exponent,
    as_exponent_vector,
    format_fraction,
)

__all__ = [
    "VectorSequence",
    "ExactPower",
    "as_tensor",
    "lp_norm",
    "mixed_norm",
    "norm_monotonicity_gap",
    "minkowski_gap",
    "dual_align",
    "align_rows",
    "complex_sign",
    "weak_p_norm",
    "weak_p_norm_basis",
]

MAX_ENTRIES = 10**6


def as_tensor(t) -> np.ndarray:
    a = np.asarray(t)
    if a.ndim == 0:
        raise ValueError("a tensor needs at least one index")
    if a.dtype.kind not in "biufc":
        raise TypeError(f"tensor entries must be numeric, got dtype {a.dtype}")
    if a.dtype.kind in "biu":
        a = a.astype(float)
    if not np.all(np.isfinite(a)):
        raise ValueError("tensor entries must be finite")
    return a


def complex_sign(z: np.ndarray) -> np.ndarray:
    """``z/|z|`` with ``sign(0) = 0``; real input stays real."""
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        return np.sign(z)
    mag = np.abs(z)
    out = np.zeros_like(z)
    nz = mag > 0
    out[nz] = z[nz] / mag[nz]
    return out


def _reduce_last(a: np.ndarray, p: float) -> np.ndarray:
    # a is nonnegative long double; scaling by the row max keeps powers in range
    if p == math.inf:
        return a.max(axis=-1)
    if p == 1:
        return a.sum(axis=-1)
    scale = a.max(axis=-1, keepdims=True)
    safe = np.where(scale > 0, scale, 1)
    pl = np.longdouble(p)
    total = ((a / safe) ** pl).sum(axis=-1)
    return total ** (np.longdouble(1) / pl) * safe[..., 0]


def _nested_array(a: np.ndarray, exps: list[float]) -> np.ndarray:
    # reduces the trailing len(exps) axes
    acc = np.abs(a).astype(np.longdouble)
    for p in reversed(exps):
        acc = _reduce_last(acc, p)
    return acc.astype(float)


def _nested(a: np.ndarray, exps: list[float]) -> float:
    return float(_nested_array(a, exps))


def lp_norm(v, p: ExponentLike | float) -> float:
    """Flat ``l_p`` norm of all entries of ``v`` (``p > 0`` allowed)."""
    pf = float(as_exponent(p)) if isinstance(p, (Exponent, str)) else float(p)
    if not pf > 0:
        raise ValueError(f"norm exponent must be positive, got {p}")
    return _nested(np.ravel(np.asarray(v)), [pf])


def mixed_norm(t, spec) -> float:
    """Nested norm: ``l_{p_1}`` over ``j_1`` of ... of ``l_{p_m}`` over ``j_m``.

    ``spec`` is an ExponentVector (or anything coercible) of length equal to
    the tensor order; ``inf`` entries take the supremum over their index.
    Sums are accumulated in long double.
    """
    a = as_tensor(t)
    p = as_exponent_vector(spec)
    if len(p) != a.ndim:
        raise ValueError(f"order mismatch: tensor has {a.ndim} indices, spec has {len(p)}")
    return _nested(a, p.floats())


def _componentwise_le(p: ExponentVector, q: ExponentVector) -> bool:
    return len(p) == len(q) and all(pk <= qk for pk, qk in zip(p, q))


def norm_monotonicity_gap(t, spec_p, spec_q) -> tuple[float, float]:
    """Return ``(||t||_q, ||t||_p)`` for ``q >= p`` componentwise."""
    p, q = as_exponent_vector(spec_p), as_exponent_vector(spec_q)
    if not _componentwise_le(p, q):
        raise ValueError(f"need spec_q >= spec_p componentwise, got p=({p}) q=({q})")
    return mixed_norm(t, q), mixed_norm(t, p)


def minkowski_gap(a, p: float, q: float) -> tuple[float, float]:
    """Both sides of the Minkowski swap for ``0 < p <= q < inf``.

    ``lhs = ||(||a_i.||_p)_i||_q`` and ``rhs = ||(||a_.j||_q)_j||_p``.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("minkowski_gap expects a matrix")
    p, q = float(p), float(q)
    if not (0 < p <= q < math.inf):
        raise ValueError(f"need 0 < p <= q < inf, got p={p}, q={q}")
    if p == q:
        flat = _nested(a.ravel(), [q])
        return flat, flat
    return _nested(a, [q, p]), _nested(a.T, [p, q])


def align_rows(psi: np.ndarray, p: ExponentLike, current: np.ndarray | None = None):
    """Row-wise Holder maximizer over the unit ball of ``l_p``.

    For each row ``psi_r`` returns ``x_r`` with ``||x_r||_p <= 1`` and
    ``sum_i psi_ri x_ri = ||psi_r||_{p*}``. Rows with ``psi_r = 0`` keep
    ``current[r]`` (zeros if not given). Returns ``(x, values, zero_rows)``.
    """
    p = as_exponent(p)
    psi = np.atleast_2d(np.asarray(psi))
    mag = np.abs(psi)
    sgn = np.conj(complex_sign(psi))
    zero = ~np.any(mag > 0, axis=1)
    pf = float(p)
    if p.is_inf:
        x = sgn.copy()
        values = mag.astype(np.longdouble).sum(axis=1)
        values = values.astype(float)
    elif p == 1:
        idx = np.argmax(mag, axis=1)
        rows = np.arange(psi.shape[0])
        x = np.zeros_like(sgn)
        x[rows, idx] = sgn[rows, idx]
        values = mag[rows, idx].astype(float)
    else:
        pstar = float(p.dual())
        scale = mag.max(axis=1, keepdims=True)
        safe = np.where(scale > 0, scale, 1.0)
        u = mag / safe
        n = np.sum(u ** pstar, axis=1, keepdims=True) ** (1.0 / pstar)
        n = np.where(n > 0, n, 1.0)
        x = sgn * (u / n) ** (pstar - 1.0)
        values = (n * safe)[:, 0]
        # clip rounding so the witness stays feasible
        xn = np.sum(np.abs(x) ** pf, axis=1, keepdims=True) ** (1.0 / pf)
        x = np.where(xn > 1.0, x / np.where(xn > 0, xn, 1.0), x)
    if np.any(zero):
        fallback = np.zeros_like(x) if current is None else np.asarray(current, dtype=x.dtype)
        x[zero] = fallback[zero]
        values = np.where(zero, 0.0, values)
    return x, values, zero


def dual_align(psi, p: ExponentLike) -> tuple[np.ndarray, float]:
    """Maximize ``|sum_i psi_i x_i|`` over the closed unit ball of ``l_p``.

    Returns the maximizer ``x`` and the maximum, which is ``||psi||_{p*}``.
    For ``p = 1`` ties go to the lowest index.
    """
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise ValueError("dual_align expects a vector")
    if not np.any(psi != 0):
        raise ValueError("dual_align of the zero vector is undefined")
    x, values, _ = align_rows(psi[None, :], p)
    return x[0], float(values[0])


@dataclass(frozen=True)
class VectorSequence:
    """Finite sequence ``(x_1, ..., x_N)`` in ``l_q^d``; rows are vectors."""

    vectors: np.ndarray
    ambient_q: Exponent

    def __post_init__(self):
        v = np.asarray(self.vectors)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2:
            raise ValueError("a vector sequence is a 2-D array (one row per vector)")
        object.__setattr__(self, "vectors", as_tensor(v))
        object.__setattr__(self, "ambient_q", as_exponent(self.ambient_q))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def scaled(self, weights) -> "VectorSequence":
        w = np.asarray(weights, dtype=float)
        return VectorSequence(self.vectors * w[:, None], self.ambient_q)


def _unit_rows(rng: np.random.Generator, rows: int, dim: int, p: Exponent, complex_: bool) -> np.ndarray:
    z = rng.standard_normal((rows, dim))
    if complex_:
        z = z + 1j * rng.standard_normal((rows, dim))
    pf = float(p)
    norms = np.max(np.abs(z), axis=1) if p.is_inf else np.sum(np.abs(z) ** pf, axis=1) ** (1.0 / pf)
    return z / norms[:, None]


def weak_p_norm(seq: VectorSequence, p: ExponentLike, *, restarts: int = 8, max_iters: int = 500,
                tol: float = 1e-13, seed=0) -> NormEstimate:
    """Estimate ``sup_{phi in B_{q*}} (sum_j |phi(x_j)|^p)^{1/p}``.

    Alternating Holder ascent over ``(phi, psi) in B_{q*} x B_{p*}`` for
    the bilinear objective ``psi . X phi``, from the dual alignments of
    the individual vectors plus ``restarts`` random starts. The value is
    recomputed from the feasible witness ``phi``, so it is a lower bound.
    """
    p = as_exponent(p)
    X = seq.vectors
    if len(seq) == 0:
        raise ValueError("weak norm of an empty sequence")
    qdual = seq.ambient_q.dual()
    pdual = p.dual()
    complex_ = np.iscomplexobj(X)
    nz = [j for j in range(len(seq)) if np.any(X[j] != 0)]
    if not nz:
        witness = np.zeros(seq.dim, dtype=X.dtype)
        return NormEstimate(0.0, [witness], "alternating", degenerate=True)

    rng = np.random.default_rng(seed)
    starts = [align_rows(X[j][None, :], qdual)[0][0] for j in nz[:16]]
    phi = np.vstack(starts + list(_unit_rows(rng, restarts, seq.dim, qdual, complex_)))
    if complex_:
        phi = phi.astype(complex)

    def objective(ph):
        return _rows_norm(ph @ X.T, p)

    values = objective(phi)
    active = np.ones(len(phi), dtype=bool)
    sweeps = 0
    for sweeps in range(1, max_iters + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ph = phi[idx]
        psi, _, _ = align_rows(ph @ X.T, pdual)
        new_phi, _, _ = align_rows(psi @ X, qdual, current=ph)
        new_vals = objective(new_phi)
        improved = new_vals >= values[idx]
        phi[idx[improved]] = new_phi[improved]
        gain = new_vals - values[idx]
        values[idx] = np.maximum(values[idx], new_vals)
        done = ~improved | (gain <= tol * np.maximum(values[idx], 1e-300))
        active[idx[done]] = False

    best = int(np.argmax(values))
    w = phi[best]
    wn = _rows_norm(w[None, :], qdual)[0]
    if wn > 1.0:
        w = w / wn
    value = float(_rows_norm((w @ X.T)[None, :], p)[0])
    return NormEstimate(value, [w], "alternating", restarts_used=len(phi), iterations=sweeps)


def _rows_norm(a: np.ndarray, p: Exponent) -> np.ndarray:
    return _nested_array(np.atleast_2d(a), [float(p)])


@dataclass(frozen=True)
class ExactPower:
    """``base ** exponent`` kept exact; ``exact`` is set when it is rational."""

    base: int
    exponent: Fraction

    @property
    def exact(self) -> Fraction | None:
        if self.exponent == 0:
            return Fraction(1)
        root = _integer_root(self.base, self.exponent.denominator)
        if root is None:
            return None
        return Fraction(root) ** self.exponent.numerator

    @property
    def value(self) -> float:
        return float(self.base) ** float(self.exponent)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        exact = self.exact
        if exact is not None:
            return format_fraction(exact)
        return f"{self.base}^({format_fraction(self.exponent)})"


def _integer_root(n: int, k: int) -> int | None:
    if k == 1:
        return n
    guess = round(n ** (1.0 / k))
    for cand in (guess - 1, guess, guess + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def weak_p_norm_basis(n: int, p: ExponentLike, q: ExponentLike) -> ExactPower:
    """Weak ``l_p`` norm of the unit vector basis of ``l_q^n``.

    Equals ``n ** max(0, 1/p - 1/q*)``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    p, q = as_exponent(p), as_exponent(q)
    e = max(Fraction(0), p.reciprocal - q.dual().reciprocal)
    return ExactPower(n, e)

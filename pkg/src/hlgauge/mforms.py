"""Multilinear forms on finite-dimensional ``l_p`` spaces and their norms.

A form ``T: l_{p_1}^{n_1} x ... x l_{p_m}^{n_m} -> K`` is stored by its
coefficients ``T(e_{j_1}, ..., e_{j_m})``. Estimators return a
:class:`~hlgauge.estimate.NormEstimate` whose witness is feasible, so every
reported value is a lower bound of ``||T||``.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field

import numpy as np

from .estimate import NormEstimate
from .exponents import ExponentVector, as_exponent_vector
from .tensor_norms import (
    VectorSequence,
    _rows_norm,
    align_rows,
    as_tensor,
    lp_norm,
    mixed_norm,
    weak_p_norm,
)

__all__ = [
    "MultilinearForm",
    "ProbeResult",
    "evaluate",
    "outputs",
    "norm_alternating",
    "norm_sign_enum",
    "norm_svd_bilinear",
    "rank_one_norm",
    "summing_norm_probe",
]

SIGN_ENUM_LIMIT = 2**24


@dataclass(frozen=True)
class MultilinearForm:
    coeffs: np.ndarray
    domain_p: ExponentVector
    field: str = ""

    def __post_init__(self):
        coeffs = as_tensor(self.coeffs)
        domain = as_exponent_vector(self.domain_p)
        if coeffs.ndim != len(domain):
            raise ValueError(f"order mismatch: coefficients have {coeffs.ndim} indices, "
                             f"domain has {len(domain)} exponents")
        fld = self.field or ("complex" if np.iscomplexobj(coeffs) else "real")
        if fld not in ("real", "complex"):
            raise ValueError(f"scalar field must be 'real' or 'complex', got {fld!r}")
        if fld == "real" and np.iscomplexobj(coeffs):
            raise ValueError("complex coefficients need the complex scalar field")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "domain_p", domain)
        object.__setattr__(self, "field", fld)

    @property
    def order(self) -> int:
        return self.coeffs.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape

    def scaled(self, lam) -> "MultilinearForm":
        return MultilinearForm(self.coeffs * lam, self.domain_p,
                               "complex" if np.iscomplexobj(lam) else self.field)

    def permuted(self, perm) -> "MultilinearForm":
        perm = list(perm)
        return MultilinearForm(np.transpose(self.coeffs, perm),
                               ExponentVector(tuple(self.domain_p[i] for i in perm)), self.field)


def evaluate(T: MultilinearForm, *xs):
    """``sum_j coeffs[j] * x_1[j_1] * ... * x_m[j_m]``."""
    if len(xs) != T.order:
        raise ValueError(f"form of order {T.order} needs {T.order} arguments, got {len(xs)}")
    t = T.coeffs
    for k in reversed(range(T.order)):
        x = np.asarray(xs[k])
        if x.shape != (T.shape[k],):
            raise ValueError(f"slot {k + 1} expects a vector of length {T.shape[k]}, got shape {x.shape}")
        t = t @ x
    return t.item()


def outputs(T: MultilinearForm, seqs) -> np.ndarray:
    """Array ``(T(x^1_{j_1}, ..., x^m_{j_m}))_j`` for one sequence per slot."""
    t = T.coeffs
    for k, seq in enumerate(seqs):
        X = seq.vectors if isinstance(seq, VectorSequence) else np.atleast_2d(np.asarray(seq))
        if X.shape[1] != T.shape[k]:
            raise ValueError(f"slot {k + 1} expects vectors of length {T.shape[k]}, got {X.shape[1]}")
        t = np.tensordot(t, X, axes=([0], [1]))
    return t


def _unit_starts(rng, rows: int, dim: int, p, complex_: bool) -> np.ndarray:
    z = rng.standard_normal((rows, dim))
    if complex_:
        z = z + 1j * rng.standard_normal((rows, dim))
    return z / _rows_norm(z, p)[:, None]


class _Contractor:
    """Batched contractions of the coefficients against all slots but one."""

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = coeffs
        m = coeffs.ndim
        letters = string.ascii_letters[:m]
        self.subs = []
        for k in range(m):
            ops = ",".join("Z" + letters[i] for i in range(m) if i != k)
            self.subs.append(f"{letters},{ops}->Z{letters[k]}")
        self._paths: dict[int, list] = {}

    def __call__(self, xs: list[np.ndarray], k: int) -> np.ndarray:
        others = [xs[i] for i in range(len(xs)) if i != k]
        if not others:
            return np.broadcast_to(self.coeffs, (xs[0].shape[0],) + self.coeffs.shape).copy()
        path = self._paths.get(k)
        if path is None:
            path = np.einsum_path(self.subs[k], self.coeffs, *others, optimize="greedy")[0]
            self._paths[k] = path
        return np.einsum(self.subs[k], self.coeffs, *others, optimize=path)


def _batched_values(contract: _Contractor, xs: list[np.ndarray]) -> np.ndarray:
    psi = contract(xs, len(xs) - 1)
    return np.abs(np.sum(psi * xs[-1], axis=1))


def norm_alternating(T: MultilinearForm, restarts: int = 20, max_iters: int = 500, tol: float = 1e-10,
                     seed=0, trace: bool = False) -> NormEstimate:
    """Estimate ``||T||`` on the product of ``l_{p_k}`` unit balls.

    Block-coordinate ascent: each sweep replaces slot ``k`` by the Holder
    maximizer of the linear functional left after freezing the other
    slots, so ``|T(x)|`` never decreases. All restarts run as one batch;
    a restart stops once its relative gain over a sweep falls below
    ``tol``. The best restart wins, lowest restart id on ties.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    m = T.order
    complex_ = T.field == "complex"
    rng = np.random.default_rng(seed)
    xs = [_unit_starts(rng, restarts, n, p, complex_) for n, p in zip(T.shape, T.domain_p)]
    if not np.any(T.coeffs != 0):
        witness = [np.zeros(n, dtype=complex if complex_ else float) for n in T.shape]
        return NormEstimate(0.0, witness, "alternating", restarts, 0, degenerate=True)
    if complex_:
        xs = [x.astype(complex) for x in xs]
    contract = _Contractor(T.coeffs)
    values = _batched_values(contract, xs)
    degenerate = np.zeros(restarts, dtype=bool)
    history = [[float(v)] for v in values] if trace else None
    active = np.ones(restarts, dtype=bool)
    sweeps = 0
    for sweeps in range(1, max_iters + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            sweeps -= 1
            break
        sub = [x[idx] for x in xs]
        for k in range(m):
            psi = contract(sub, k)
            sub[k], new_vals, zero = align_rows(psi, T.domain_p[k], current=sub[k])
            degenerate[idx[zero]] = True
        for k in range(m):
            xs[k][idx] = sub[k]
        gain = new_vals - values[idx]
        values[idx] = new_vals
        if trace:
            for i, v in zip(idx, new_vals):
                history[i].append(float(v))
        done = (gain <= tol * new_vals) | (new_vals == 0)
        active[idx[done]] = False

    best = int(np.argmax(values))
    witness = [x[best].copy() for x in xs]
    value = abs(evaluate(T, *witness))
    return NormEstimate(value, witness, "alternating", restarts, sweeps,
                        degenerate=bool(degenerate[best]), history=history)


def _sign_vectors(n: int) -> np.ndarray:
    return np.array(list(itertools.product((1.0, -1.0), repeat=n)))


def norm_sign_enum(T: MultilinearForm) -> NormEstimate:
    """Exact ``||T||`` for real forms on ``l_inf`` products by vertex enumeration.

    Sign vectors of the first ``m - 1`` slots are enumerated exhaustively;
    the last slot is solved exactly (its best sign vector gives the ``l_1``
    norm of the contracted functional).
    """
    if T.field != "real":
        raise ValueError("sign enumeration supports real scalars only")
    if any(not p.is_inf for p in T.domain_p):
        raise ValueError("sign enumeration needs every domain exponent equal to inf")
    if sum(T.shape) > 24:
        raise ValueError(f"sign enumeration guard: 2^{sum(T.shape)} vertices exceed 2^24")
    m = T.order
    signs = [_sign_vectors(n) for n in T.shape[:-1]]
    # fixing x_1 up to a global sign halves the work
    if signs:
        signs[0] = signs[0][: max(1, len(signs[0]) // 2)]
    t = T.coeffs
    for S in signs:
        t = np.tensordot(t, S, axes=([0], [1]))
    # t now has the last slot first, then one axis per enumerated slot
    t = np.moveaxis(t, 0, -1)
    l1 = np.abs(t).sum(axis=-1)
    flat = int(np.argmax(l1))
    choice = np.unravel_index(flat, l1.shape) if signs else ()
    witness = [signs[k][choice[k]].copy() for k in range(m - 1)]
    last = np.sign(t[choice])
    last[last == 0] = 1.0
    witness.append(last)
    value = abs(evaluate(T, *witness))
    return NormEstimate(value, witness, "sign_enum", 1, 0)


def norm_svd_bilinear(T: MultilinearForm) -> NormEstimate:
    """Exact ``||T||`` of a bilinear form on ``l_2 x l_2``: the top singular value."""
    if T.order != 2 or any(p != 2 for p in T.domain_p):
        raise ValueError("SVD oracle needs a bilinear form with domain exponents (2, 2)")
    U, S, Vh = np.linalg.svd(T.coeffs)
    x, y = np.conj(U[:, 0]), np.conj(Vh[0, :])
    if T.field == "real":
        x, y = x.real, y.real
    value = abs(evaluate(T, x, y))
    return NormEstimate(value, [x, y], "svd", 1, 0)


def rank_one_norm(factors, domain_p) -> float:
    """Closed form ``prod_k ||a_k||_{p_k*}`` for ``coeffs = a_1 (x) ... (x) a_m``."""
    domain_p = as_exponent_vector(domain_p)
    out = 1.0
    for a, p in zip(factors, domain_p):
        out *= lp_norm(a, p.dual())
    return out


@dataclass
class ProbeResult:
    """Lower bound of a multiple summing norm over a sampled set of families."""

    value: float
    best: int | None
    quotients: list[float]
    numerators: list[float]
    denominators: list[float]
    skipped: int = 0
    witnesses: dict = field(default_factory=dict, repr=False)


def _as_sequence(seq, ambient) -> VectorSequence:
    if isinstance(seq, VectorSequence):
        return seq
    return VectorSequence(np.atleast_2d(np.asarray(seq)), ambient)


def cached_weak_norm(seq: VectorSequence, p, cache: dict | None, restarts: int = 8, seed=0):
    key = (seq.vectors.tobytes(), seq.vectors.shape, seq.vectors.dtype.str, str(p), str(seq.ambient_q), restarts)
    if cache is not None and key in cache:
        return cache[key]
    est = weak_p_norm(seq, p, restarts=restarts, seed=seed)
    if cache is not None:
        cache[key] = est
    return est


def summing_norm_probe(T: MultilinearForm, s, p, sequence_families, *, cache: dict | None = None,
                       weak_restarts: int = 8, seed=0) -> ProbeResult:
    """Max over families of ``||(T(x_j))_j||_s / prod_k ||x^k||_{w,p_k}``.

    Each family is one sequence per slot (arrays or VectorSequence, taken in
    ``l_{domain_p[k]}``). Families with a vanishing weak norm are skipped.
    """
    s, p = as_exponent_vector(s), as_exponent_vector(p)
    if len(s) != T.order or len(p) != T.order:
        raise ValueError("summing exponents must have one entry per slot")
    quotients, nums, dens = [], [], []
    skipped = 0
    for fam in sequence_families:
        seqs = [_as_sequence(x, T.domain_p[k]) for k, x in enumerate(fam)]
        den = 1.0
        for k, seq in enumerate(seqs):
            den *= cached_weak_norm(seq, p[k], cache, weak_restarts, seed).value
        num = mixed_norm(outputs(T, seqs), s)
        if den == 0:
            skipped += 1
            quotients.append(float("nan"))
        else:
            quotients.append(num / den)
        nums.append(num)
        dens.append(den)
    valid = [i for i, q in enumerate(quotients) if q == q]
    best = max(valid, key=lambda i: (quotients[i], -i)) if valid else None
    value = quotients[best] if best is not None else 0.0
    return ProbeResult(value, best, quotients, nums, dens, skipped)

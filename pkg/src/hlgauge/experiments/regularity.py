"""Finite-data probe of the anisotropic regularity principle.

A kernel is a set of nonnegative tables ``R_k[z, w]`` and ``S[z_1, ..., z_m, v]``.
A selection picks, per slot, indices ``z_j^k`` (repetition allowed) and
nonnegative scalings; homogeneity is applied by the harness, which multiplies
the selected rows. The hypothesis constant is measured on the sampled
selections and the conclusion is checked on the same selections, so the
probe can only test necessity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..exponents import as_exponent, as_exponent_vector
from ..mforms import MultilinearForm, cached_weak_norm, outputs
from ..tensor_norms import VectorSequence, _nested_array
from .config import ConfigError, ExperimentConfig
from .holder_chain import holder_chain_weights
from .inclusion import _domain, inclusion_schedule
from .report import ExperimentReport
from .sampling import map_trials, random_unit_vectors, sample_families, sample_tensor, trial_rng

CONCLUSION_RTOL = 1e-9
MAX_SELECTION = 4


@dataclass(frozen=True)
class TabulatedKernel:
    R: tuple[np.ndarray, ...]
    S: np.ndarray

    def __post_init__(self):
        R = tuple(np.asarray(t, dtype=float) for t in self.R)
        S = np.asarray(self.S, dtype=float)
        if S.ndim != len(R) + 1:
            raise ValueError(f"S must have {len(R) + 1} axes (one per slot plus V), got {S.ndim}")
        for k, t in enumerate(R):
            if t.ndim != 2:
                raise ValueError(f"R_{k + 1} must be a 2-D table")
            if t.shape[0] != S.shape[k]:
                raise ValueError(f"R_{k + 1} has {t.shape[0]} rows but S has {S.shape[k]} entries on axis {k}")
        for name, t in [("S", S)] + [(f"R_{k + 1}", t) for k, t in enumerate(R)]:
            if not np.all(np.isfinite(t)):
                raise ValueError(f"{name} has non-finite entries")
            if np.any(t < 0):
                raise ValueError(f"{name} has negative entries")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "S", S)

    @property
    def order(self) -> int:
        return len(self.R)

    def to_json(self) -> dict:
        return {"R": [t.tolist() for t in self.R], "S": {"shape": list(self.S.shape), "entries": self.S.ravel().tolist()}}

    @classmethod
    def from_json(cls, obj: dict) -> "TabulatedKernel":
        try:
            S = np.asarray(obj["S"]["entries"], dtype=float).reshape(obj["S"]["shape"])
            return cls(tuple(np.asarray(t, dtype=float) for t in obj["R"]), S)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed kernel: {exc}") from exc


def load_kernel(path) -> TabulatedKernel:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read kernel {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"kernel {path} is not valid JSON: {exc}") from exc
    return TabulatedKernel.from_json(obj)


def random_kernel(z_sizes, w_sizes, v_size: int, rng: np.random.Generator) -> TabulatedKernel:
    R = tuple(rng.random((nz, nw)) for nz, nw in zip(z_sizes, w_sizes))
    return TabulatedKernel(R, rng.random(tuple(z_sizes) + (v_size,)))


def product_kernel(R, w0: int = 0) -> TabulatedKernel:
    """``S(z, v) = prod_k R_k(z_k, w0)`` with a single ``v``."""
    R = [np.asarray(t, dtype=float) for t in R]
    S = R[0][:, w0]
    for t in R[1:]:
        S = np.multiply.outer(S, t[:, w0])
    return TabulatedKernel(tuple(R), np.asarray(S)[..., None])


def form_kernel(T: MultilinearForm, vectors, functionals) -> TabulatedKernel:
    """Kernel of a form: ``R_k = |phi_w(x_z)|`` and ``S = |T(x_{z_1}, ..., x_{z_m})|``."""
    seqs = [VectorSequence(np.atleast_2d(x), T.domain_p[k]) for k, x in enumerate(vectors)]
    R = tuple(np.abs(seq.vectors @ np.atleast_2d(f).T) for seq, f in zip(seqs, functionals))
    return TabulatedKernel(R, np.abs(outputs(T, seqs))[..., None])


def random_selection(kernel: TabulatedKernel, rng: np.random.Generator, scaled: bool = False):
    sel = []
    for t in kernel.R:
        n = int(rng.integers(1, MAX_SELECTION + 1))
        idx = rng.integers(0, t.shape[0], size=n)
        lam = rng.uniform(0.25, 2.0, size=n) if scaled else np.ones(n)
        sel.append((idx, lam))
    return sel


def _evaluate(kernel: TabulatedKernel, sel, r_exps, s_exps, p, q):
    """Numerators (sup over v) and per-slot denominators of one selection."""
    S = kernel.S[np.ix_(*[idx for idx, _ in sel], np.arange(kernel.S.shape[-1]))]
    for k, (_, lam) in enumerate(sel):
        shape = [1] * S.ndim
        shape[k] = -1
        S = S * lam.reshape(shape)
    A = np.moveaxis(S, -1, 0)
    lhs_r = _nested_array(A, r_exps)
    lhs_s = _nested_array(A, s_exps)
    dp, dq = [], []
    for t, (idx, lam), pk, qk in zip(kernel.R, sel, p.floats(), q.floats()):
        rows = (t[idx] * lam[:, None]).T
        dp.append(float(np.max(_nested_array(rows, [pk]))))
        dq.append(float(np.max(_nested_array(rows, [qk]))))
    return A, lhs_r, lhs_s, dp, dq


def regularity_probe(kernel: TabulatedKernel, r, p, q, *, samples: int = 16, seed=0, selections=None) -> dict:
    """Measure ``C_hyp`` on sampled selections and check the conclusion on the same ones.

    A selection whose conclusion quotient exceeds ``C_hyp`` is reweighted
    by the Holder chain at its maximizing ``v``; the reweighted selection
    enters the hypothesis pool before anything is called a violation.
    """
    r = as_exponent(r)
    p, q = as_exponent_vector(p), as_exponent_vector(q)
    m = kernel.order
    if len(p) != m or len(q) != m:
        raise ValueError(f"exponents need {m} entries")
    s = inclusion_schedule(r, p, q)
    r_exps = [float(r)] * m
    s_exps = s.floats()
    if selections is None:
        rng = np.random.default_rng(seed)
        selections = [random_selection(kernel, rng, scaled=i % 2 == 1) for i in range(samples)]

    hyp, con, skipped, kept = [], [], 0, []
    for sel in selections:
        A, lr, ls, dp, dq = _evaluate(kernel, sel, r_exps, s_exps, p, q)
        if min(dp) == 0:
            skipped += 1
            continue
        hyp.append(float(np.max(lr)) / math.prod(dp))
        con.append(float(np.max(ls)) / math.prod(dq))
        kept.append((sel, A, ls))
    c_hyp0 = c_hyp = max(hyp, default=0.0)
    limit = 1 + CONCLUSION_RTOL
    extracted = 0
    for i in sorted(range(len(con)), key=lambda i: -con[i]):
        if con[i] <= c_hyp * limit:
            continue
        sel, A, ls = kept[i]
        weights = holder_chain_weights(A[int(np.argmax(ls))], r, p, q)
        star = [(idx, lam * w) for (idx, lam), w in zip(sel, weights)]
        _, lr, _, dp, _ = _evaluate(kernel, star, r_exps, s_exps, p, q)
        extracted += 1
        if min(dp) > 0:
            c_hyp = max(c_hyp, float(np.max(lr)) / math.prod(dp))
    violations = sum(1 for v in con if v > c_hyp * limit)
    rec = {
        "selections": len(selections),
        "skipped": skipped,
        "c_hyp": c_hyp0,
        "c_hyp_escalated": c_hyp,
        "max_conclusion": max(con, default=0.0),
        "extracted": extracted,
        "violations": violations,
        "status": "violation" if violations else "ok",
        "degenerate_exact": (all(a == b for a, b in zip(hyp, con))
                             if [str(e) for e in p] == [str(e) for e in q] else None),
    }
    return rec


def matched_kernel(T: MultilinearForm, families, p, q, *, extra: int = 4, rng=None, cache=None,
                   weak_restarts: int = 8, seed=0) -> TabulatedKernel:
    """Kernel of ``T`` whose ``W_k`` holds the weak-norm witnesses of the families.

    ``Z_k`` is the union of the families' slot-``k`` vectors; ``W_k`` adds
    ``extra`` random functionals from the dual unit ball.
    """
    m = T.order
    vectors, functionals = [], []
    for k in range(m):
        rows = [np.atleast_2d(f[k]) for f in families]
        vectors.append(np.vstack(rows))
        wit = []
        for x in rows:
            seq = VectorSequence(x, T.domain_p[k])
            for e in (p[k], q[k]):
                w = cached_weak_norm(seq, e, cache, weak_restarts, seed).witness[0]
                wit.append(w)
        if rng is not None and extra:
            z = random_unit_vectors(rng, extra, T.shape[k], T.field == "complex")
            d = T.domain_p[k].dual()
            norms = np.array([np.max(np.abs(v)) if d.is_inf else np.sum(np.abs(v) ** float(d)) ** (1 / float(d))
                              for v in z])
            wit.extend(z / norms[:, None])
        functionals.append(np.vstack(wit))
    return form_kernel(T, vectors, functionals)


def family_selections(families):
    """Selections of a matched kernel that reproduce each family in order."""
    m = len(families[0])
    offsets = [0] * m
    sels = []
    for fam in families:
        sel = []
        for k in range(m):
            n = np.atleast_2d(fam[k]).shape[0]
            sel.append((np.arange(offsets[k], offsets[k] + n), np.ones(n)))
            offsets[k] += n
        sels.append(sel)
    return sels


def regularity_run(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.kind != "regularity_probe":
        raise ConfigError(f"regularity_probe needs kind 'regularity_probe', got {cfg.kind!r}")
    r, p, q = cfg.exponent("r"), cfg.exponents("p"), cfg.exponents("q")
    s = inclusion_schedule(r, p, q)
    kernel = load_kernel(cfg.kernel) if cfg.kernel else None
    if kernel is not None and kernel.order != cfg.m:
        raise ConfigError(f"kernel has {kernel.order} slots, expected {cfg.m}")
    domain = _domain(cfg)
    dims = cfg.shape if cfg.dims else (2,) * cfg.m

    def trial(t: int) -> dict:
        if kernel is not None:
            rec = regularity_probe(kernel, r, p, q, samples=cfg.samples, seed=[cfg.seed, t, 3])
            return {"trial": t, "kernel": "file", **rec}
        coeffs, _ = sample_tensor(cfg.family, dims, cfg.field, trial_rng(cfg.seed, t))
        T = MultilinearForm(coeffs, domain, cfg.field)
        fams = sample_families(dims, cfg.samples, trial_rng(cfg.seed, t, 1), cfg.field == "complex")
        K = matched_kernel(T, fams, p, q, rng=trial_rng(cfg.seed, t, 2), seed=[cfg.seed, t, 2])
        rng = trial_rng(cfg.seed, t, 3)
        sels = family_selections(fams) + [random_selection(K, rng, scaled=True) for _ in range(cfg.samples)]
        rec = regularity_probe(K, r, p, q, selections=sels)
        return {"trial": t, "kernel": "form", **rec}

    records = map_trials(trial, range(cfg.trials))
    violations = sum(rec["violations"] for rec in records)
    report = ExperimentReport("regularity_probe", cfg.to_dict(), records)
    report.summary = {
        "schedule": s.to_json(),
        "trials": len(records),
        "skipped": sum(rec["skipped"] for rec in records),
        "extracted": sum(rec["extracted"] for rec in records),
        "violations": violations,
        "passed": violations == 0,
        "status": "violation" if violations else "pass",
    }
    if [str(e) for e in p] == [str(e) for e in q]:
        report.summary["degenerate_exact"] = all(rec["degenerate_exact"] for rec in records)
    report.notes.append("the hypothesis is measured on finitely many sampled selections, "
                        "so the probe checks a necessary condition only")
    return report

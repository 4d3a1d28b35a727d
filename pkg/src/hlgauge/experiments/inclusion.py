"""Numerical demonstration of the norm-one inclusion of multiple summing classes.

For sampled forms and a shared pool of sequence families, the largest
``(r; p)`` quotient over the pool must dominate every ``(s; q)`` quotient.
A sampled pool is not closed under the reweighting the inclusion relies
on, so before calling anything a violation the offending family is
reweighted by :func:`holder_chain_weights` and its ``(r; p)`` quotient is
added to the pool (a larger lower bound, never a looser tolerance).
"""

from __future__ import annotations

import numpy as np

from ..exponents import ExponentVector, schedule_bayart, schedule_inclusion
from ..mforms import MultilinearForm, cached_weak_norm, outputs, summing_norm_probe
from ..tensor_norms import VectorSequence
from .config import ConfigError, ExperimentConfig
from .hl import HypothesisError
from .holder_chain import holder_chain_weights
from .report import ExperimentReport
from .sampling import map_trials, sample_families, sample_tensor, trial_rng

PROBE_RTOL = 1e-6
WEAK_RESTARTS = 8


def inclusion_schedule(r, p, q) -> ExponentVector:
    sched = schedule_inclusion(r, p, q)
    if not sched.hypothesis_ok:
        raise HypothesisError(f"inclusion hypotheses fail: {', '.join(sched.violated_conditions)}")
    return sched.s


def compare_probes(T: MultilinearForm, r, p, q, families, *, cache: dict | None = None,
                   weak_restarts: int = WEAK_RESTARTS, seed=0) -> dict:
    """Both probes over the same families, with escalation; returns a record."""
    s = inclusion_schedule(r, p, q)
    m = T.order
    rr = ExponentVector.isotropic(r, m)
    cache = {} if cache is None else cache
    rp = summing_norm_probe(T, rr, p, families, cache=cache, weak_restarts=weak_restarts, seed=seed)
    sq = summing_norm_probe(T, s, q, families, cache=cache, weak_restarts=weak_restarts, seed=seed)
    rho0 = rho = rp.value
    limit = 1 + PROBE_RTOL
    order = sorted((i for i, v in enumerate(sq.quotients) if v == v), key=lambda i: -sq.quotients[i])
    extracted = 0
    for i in order:
        if sq.quotients[i] <= rho * limit:
            continue
        seqs = [VectorSequence(np.atleast_2d(x), T.domain_p[k]) for k, x in enumerate(families[i])]
        weights = holder_chain_weights(np.abs(outputs(T, seqs)), r, p, q)
        star = [seq.scaled(w) for seq, w in zip(seqs, weights)]
        probe = summing_norm_probe(T, rr, p, [star], cache=cache, weak_restarts=weak_restarts, seed=seed)
        extracted += 1
        rho = max(rho, probe.value)

    quotients = list(sq.quotients)
    for i in order:
        if quotients[i] <= rho * limit:
            continue
        # refine the q-weak norms of the family itself before flagging it
        den = 1.0
        for k, x in enumerate(families[i]):
            seq = VectorSequence(np.atleast_2d(x), T.domain_p[k])
            first = cached_weak_norm(seq, q[k], cache, weak_restarts, seed).value
            again = cached_weak_norm(seq, q[k], None, 4 * weak_restarts, [7, *np.atleast_1d(seed)]).value
            den *= max(first, again)
        quotients[i] = sq.numerators[i] / den
    valid = [v for v in quotients if v == v]
    violations = sum(1 for v in valid if v > rho * limit)
    rec = {
        "families": len(families),
        "skipped": rp.skipped,
        "rho_rp": rho0,
        "rho_rp_escalated": rho,
        "max_rho_sq": max(valid, default=0.0),
        "worst_gap": max(valid, default=0.0) / rho if rho > 0 else 0.0,
        "extracted": extracted,
        "violations": violations,
        "status": "violation" if violations else "ok",
    }
    if [str(e) for e in p] == [str(e) for e in q]:
        rec["degenerate_exact"] = all(a == b or (a != a and b != b) for a, b in zip(rp.quotients, sq.quotients))
    else:
        rec["degenerate_exact"] = None
    return rec


def _domain(cfg: ExperimentConfig) -> ExponentVector:
    return cfg.exponents("domain") if cfg.domain else ExponentVector.isotropic(2, cfg.m)


def inclusion_demo(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.kind != "inclusion_demo":
        raise ConfigError(f"inclusion_demo needs kind 'inclusion_demo', got {cfg.kind!r}")
    r, p, q = cfg.exponent("r"), cfg.exponents("p"), cfg.exponents("q")
    s = inclusion_schedule(r, p, q)
    domain = _domain(cfg)
    dims = cfg.shape if cfg.dims else (2,) * cfg.m
    complex_ = cfg.field == "complex"

    def trial(t: int) -> dict:
        coeffs, _ = sample_tensor(cfg.family, dims, cfg.field, trial_rng(cfg.seed, t))
        T = MultilinearForm(coeffs, domain, cfg.field)
        fams = sample_families(dims, cfg.samples, trial_rng(cfg.seed, t, 1), complex_)
        rec = compare_probes(T, r, p, q, fams, seed=[cfg.seed, t, 2])
        return {"trial": t, "family": cfg.family, **rec}

    records = map_trials(trial, range(cfg.trials))
    violations = sum(rec["violations"] for rec in records)
    report = ExperimentReport("inclusion_demo", cfg.to_dict(), records)
    report.summary = {
        "schedule": s.to_json(),
        "bayart": [str(schedule_bayart(r, p, q).exponent)],
        "forms": len(records),
        "max_gap": max((rec["worst_gap"] for rec in records), default=0.0),
        "extracted": sum(rec["extracted"] for rec in records),
        "violations": violations,
        "passed": violations == 0,
        "status": "violation" if violations else "pass",
    }
    report.notes.append("probes are lower bounds over finite sampled families; "
                        "the check is a necessary condition only")
    return report

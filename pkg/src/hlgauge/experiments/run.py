"""Dispatch an :class:`ExperimentConfig` to the matching experiment."""

from __future__ import annotations

from .config import ConfigError, ExperimentConfig
from .hl import compare_schedules, hl_verify
from .inclusion import inclusion_demo
from .regularity import regularity_run
from .report import ExperimentReport


def exponent_table(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.p is None:
        raise ConfigError("exponent_table needs 'p'")
    table = compare_schedules(cfg.m, cfg.exponents("p"))
    report = ExperimentReport("exponent_table", cfg.to_dict(), table.rows)
    report.summary = {"m": cfg.m, "p": table.p.to_json(), "hypotheses": table.hypotheses, "status": "pass"}
    return report


RUNNERS = {
    "hl_verify": hl_verify,
    "inclusion_demo": inclusion_demo,
    "regularity_probe": regularity_run,
    "exponent_table": exponent_table,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return RUNNERS[cfg.kind](cfg)

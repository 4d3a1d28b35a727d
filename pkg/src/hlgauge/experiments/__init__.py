from .config import ConfigError, ExperimentConfig, load_config
from .hl import compare_schedules, hl_verify, validate_hl_report
from .inclusion import compare_probes, inclusion_demo
from .regularity import TabulatedKernel, regularity_probe, regularity_run
from .report import ExperimentReport, read_report, render_report, write_report
from .run import run_experiment

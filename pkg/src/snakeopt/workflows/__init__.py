"""Experiment, ablation and export workflows."""

from .ablation import AblationReport, export_ablation, run_ablation
from .base import ExperimentReport, ExperimentSpec, init_experiment_wf, run_experiment
from .outputs import export

__all__ = [
    'AblationReport',
    'ExperimentReport',
    'ExperimentSpec',
    'export',
    'export_ablation',
    'init_experiment_wf',
    'run_ablation',
    'run_experiment',
]

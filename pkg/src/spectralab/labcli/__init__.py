"""Experiment registry, seeded execution, and flat-file outputs."""

from .experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    TrialReport,
    run_experiment,
    stream_id_for,
)
from .svg import emit_scatter_svg

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "TrialReport",
    "emit_scatter_svg",
    "run_experiment",
    "stream_id_for",
]

"""Experiment, reporting and estimation services."""

from .estimation_service import (
    CurvePoint,
    EstimationService,
    estimation_curve,
    estimation_error,
    eval_trajectories,
    load_trace,
    save_trace,
)
from .experiment_service import (
    ExperimentResult,
    ExperimentService,
    RunResult,
    run_experiment,
    run_seed,
)
from .report_service import (
    ComparisonReport,
    OutputError,
    compare_report,
    compare_totals,
    emit_series,
    manifest,
)

__all__ = [
    "ComparisonReport",
    "CurvePoint",
    "EstimationService",
    "ExperimentResult",
    "ExperimentService",
    "OutputError",
    "RunResult",
    "compare_report",
    "compare_totals",
    "emit_series",
    "estimation_curve",
    "estimation_error",
    "eval_trajectories",
    "load_trace",
    "manifest",
    "run_experiment",
    "run_seed",
    "save_trace",
]

"""Command-line entry point: simulate, tune-beta, estimate, compare.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from .config import get_settings
from .estimation.params import EstimatedParams
from .inference.filter import trace_log_likelihood
from .models.rng import RngStream
from .models.trajectory import generate_trajectory
from .schemas.experiment import ConfigError, ExperimentConfig, load_config
from .services.estimation_service import (
    EstimationService,
    estimation_curve,
    eval_trajectories,
    load_trace,
    save_trace,
)
from .services.experiment_service import (
    ExperimentService,
    beta_search_config,
    cell_params,
)
from .services.report_service import OutputError, compare_report, compare_totals, emit_series
from .tuning.beta_search import achievable_region, optimize_beta

logger = logging.getLogger(__name__)
settings = get_settings()

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def parse_seeds(text: str) -> List[int]:
    """'0,3,7' or '0-29' (inclusive) or a mix of both."""
    seeds: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            start, end = part.split("-", 1)
            seeds.extend(range(int(start), int(end) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise argparse.ArgumentTypeError(f"No seeds in {text!r}")
    return seeds


def parse_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_beta(text: str) -> Any:
    if text == "optimize":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"beta must be a number or 'optimize', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastuplink",
        description="Fast uplink grant scheduling simulator",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Run policies on seeded cells")
    simulate.add_argument("--config", type=Path, help="YAML/JSON config or manifest.json")
    simulate.add_argument("--seeds", type=parse_seeds, help="e.g. 0-29 or 1,4,9")
    simulate.add_argument("--policies", type=parse_list, help="Comma-separated policy names")
    simulate.add_argument("--beta", type=parse_beta, help="Age weight or 'optimize'")
    simulate.add_argument("--horizon", type=int, help="Slots per run")
    simulate.add_argument("--workers", type=int, help="Worker processes")
    simulate.add_argument("--out", type=Path, help="Output directory")
    simulate.add_argument(
        "--format", dest="formats", action="append", choices=["csv", "json"],
        help="Output format (repeatable)",
    )
    simulate.add_argument(
        "--save-traces", action="store_true", help="Also write each seed's activation trace"
    )

    tune = commands.add_parser("tune-beta", help="Optimize the age weight beta")
    tune.add_argument("--config", type=Path)
    tune.add_argument("--seed", type=int, default=0)
    tune.add_argument("--policy", help="Policy to tune (default from config)")
    tune.add_argument("--replications", type=int)
    tune.add_argument(
        "--region", type=parse_list, metavar="BETAS",
        help="Also sweep these betas (comma-separated) for the achievable region",
    )
    tune.add_argument("--out", type=Path)

    estimate = commands.add_parser("estimate", help="Offline EM on an activation trace")
    source = estimate.add_mutually_exclusive_group(required=True)
    source.add_argument("--trace", type=Path, help="CSV trace (one row per slot)")
    source.add_argument(
        "--truth-seed", type=int, help="Simulate the training trace from the config's cell"
    )
    estimate.add_argument("--config", type=Path)
    estimate.add_argument("--events", type=int, help="Number of hidden events N")
    estimate.add_argument("--seed", type=int, default=0, help="Seed of the EM initialization")
    estimate.add_argument("--eval-runs", type=int, default=5)
    estimate.add_argument("--out", type=Path)

    compare = commands.add_parser("compare", help="Compare policies of a results directory")
    compare.add_argument("results", type=Path, help="Directory written by simulate")
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _config(path: Optional[Path], **overrides: Any) -> ExperimentConfig:
    config = load_config(path) if path else ExperimentConfig()
    return config.with_overrides(**overrides)


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _config(
        args.config,
        seeds=args.seeds,
        policies=args.policies,
        beta=args.beta,
        horizon=args.horizon,
        workers=args.workers,
        output_dir=str(args.out) if args.out else None,
        formats=args.formats,
    )
    result = ExperimentService(config).run(keep_trajectories=args.save_traces)
    out = Path(config.output_dir)
    emit_series(result, out)
    if args.save_traces:
        for run in result.runs:
            if run.trajectory is not None:
                save_trace(run.trajectory, out / f"seed_{run.seed}" / "trace.csv")

    if len(result.policies) >= 2:
        print(compare_report(result).to_text())
    else:
        for run in result.runs:
            for row in run.totals():
                print(row)
    return EXIT_OK


def cmd_tune_beta(args: argparse.Namespace) -> int:
    config = _config(args.config, beta_tuning_policy=args.policy)
    if args.replications:
        config = config.with_overrides(beta_replications=args.replications)
    search_config = beta_search_config(config, args.seed)
    params = cell_params(config, RngStream(args.seed))
    result = optimize_beta(search_config, params)

    print(f"beta*={result.beta:.6g} cost={result.cost:.6g}")
    if result.warning:
        print(f"warning: {result.warning}")
    out = args.out or Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        evaluations = result.grid + result.refinements
        frame = pd.DataFrame([e.to_dict() for e in evaluations])
        frame.to_csv(out / "beta_search.csv", index=False)
        if args.region:
            betas = [float(b) for b in args.region]
            region = achievable_region(betas, search_config, params)
            pd.DataFrame([e.to_dict() for e in region]).to_csv(out / "region.csv", index=False)
    except OSError as exc:
        raise OutputError(out, exc.strerror or str(exc)) from exc
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    config = _config(args.config)
    n_events = args.events or config.n_events
    service = EstimationService(
        n_events=n_events, max_iters=config.em_max_iters, soft=config.soft_em
    )
    curve = None

    if args.trace is not None:
        trace = load_trace(args.trace)
        estimate = service.estimate(trace, seed=args.seed)
    else:
        root = RngStream(args.truth_seed)
        params = cell_params(config, root)
        training = generate_trajectory(params, config.training_horizon, root.child("training"))
        trace = training.observations()
        estimate = service.estimate(trace, seed=args.seed)
        init_root = RngStream(args.seed)
        init = EstimatedParams.initial(
            params.n_events, params.n_devices, init_root.child("em-init")
        )
        evals = eval_trajectories(params, args.eval_runs, config.horizon, root.child("eval"))
        curve = estimation_curve(
            params,
            trace,
            init,
            evals,
            max_iters=config.em_max_iters,
            rng=init_root.child("q-restarts"),
            soft=config.soft_em,
        )

    report = estimate.to_dict()
    report["log_likelihood"] = trace_log_likelihood(estimate, trace)
    print(json.dumps(report, indent=2))
    if args.out:
        try:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / "estimate.json").write_text(json.dumps(report, indent=2) + "\n")
            if curve is not None:
                pd.DataFrame([vars(point) for point in curve]).to_csv(
                    args.out / "estimation_curve.csv", index=False
                )
        except OSError as exc:
            raise OutputError(args.out, exc.strerror or str(exc)) from exc
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    runs_path = args.results / "runs.csv"
    if not runs_path.exists():
        raise ConfigError(f"No runs.csv in {args.results}")
    totals = pd.read_csv(runs_path)
    policies = list(dict.fromkeys(totals["policy"]))
    report = compare_totals(totals, policies)
    print(report.to_text())
    try:
        report.summary.to_csv(args.results / "summary.csv", index=False)
        report.ratios.to_csv(args.results / "ratios.csv", index=False)
    except OSError as exc:
        raise OutputError(args.results, exc.strerror or str(exc)) from exc
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "tune-beta": cmd_tune_beta,
    "estimate": cmd_estimate,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except ValidationError as exc:
        logger.error("%s", ConfigError.from_validation(exc))
        return EXIT_CONFIG
    except Exception as exc:
        logger.error("%s failed: %s", args.command, exc)
        logger.debug("Traceback", exc_info=True)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

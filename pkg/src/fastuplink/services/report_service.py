"""Policy comparison tables and result files."""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.stats import binomtest

from ..models.params import ContractViolationError
from ..schemas.experiment import OutputFormat
from .experiment_service import ExperimentResult

logger = logging.getLogger(__name__)

# Expected regret ordering, worst first; adjacent pairs get a paired sign test.
REGRET_ORDER = ["gf", "tdma", "fu-baseline", "fu-feedback", "fu-genie"]
LOW_CONFIDENCE_SEEDS = 2


class OutputError(OSError):
    """Result files could not be written."""

    def __init__(self, path: Path, reason: str):
        self.path = path
        super().__init__(f"Cannot write results to {path}: {reason}")


@dataclass
class ComparisonReport:
    summary: pd.DataFrame
    ratios: pd.DataFrame
    sign_tests: pd.DataFrame
    n_seeds: int

    @property
    def low_confidence(self) -> bool:
        return self.n_seeds < LOW_CONFIDENCE_SEEDS

    def ratio(self, numerator: str, denominator: str) -> float:
        row = self.ratios[
            (self.ratios["numerator"] == numerator) & (self.ratios["denominator"] == denominator)
        ]
        if row.empty:
            raise KeyError(f"No ratio {numerator}/{denominator}")
        return float(row["regret_ratio"].iloc[0])

    def to_text(self) -> str:
        """Aligned text rendering of the summary and ratio tables."""
        parts = [self.summary.to_string(index=False)]
        if self.low_confidence:
            parts.append(f"(low confidence: {self.n_seeds} seed)")
        parts.append("")
        parts.append(self.ratios.to_string(index=False))
        if not self.sign_tests.empty:
            parts.append("")
            parts.append(self.sign_tests.to_string(index=False))
        return "\n".join(parts)


def totals_frame(result: ExperimentResult) -> pd.DataFrame:
    """One row per (seed, policy) with the run totals."""
    rows = [row for run in result.runs for row in run.totals()]
    return pd.DataFrame(rows)


def _ratio(numerator: float, denominator: float) -> float:
    if denominator > 0:
        return numerator / denominator
    return float("inf") if numerator > 0 else float("nan")


def sign_test(wins: int, losses: int) -> float:
    """One-sided p-value that the first policy has the larger regret more often."""
    trials = wins + losses
    if trials == 0:
        return 1.0
    return float(binomtest(wins, trials, 0.5, alternative="greater").pvalue)


def compare_report(result: ExperimentResult) -> ComparisonReport:
    """Per-policy means over seeds, pairwise regret ratios and paired sign tests."""
    return compare_totals(totals_frame(result), result.policies)


def compare_totals(totals: pd.DataFrame, policies: Sequence[str]) -> ComparisonReport:
    """The comparison computed from a runs table (one row per seed and policy)."""
    if len(policies) < 2:
        raise ContractViolationError("A comparison needs at least two policies")
    summary = (
        totals.groupby("policy")
        .agg(
            regret_cum=("regret_cum", "mean"),
            regret_cum_median=("regret_cum", "median"),
            aoi_mean=("aoi_mean", "mean"),
            usage=("usage", "mean"),
            seeds=("seed", "count"),
        )
        .reindex(list(policies))
        .reset_index()
    )
    summary["low_confidence"] = summary["seeds"] < LOW_CONFIDENCE_SEEDS

    regret = dict(zip(summary["policy"], summary["regret_cum"]))
    per_seed = totals.pivot(index="seed", columns="policy", values="regret_cum")
    ratio_rows = []
    for numerator in summary["policy"]:
        for denominator in summary["policy"]:
            if numerator == denominator:
                continue
            seed_ratios = [
                r
                for a, b in zip(per_seed[numerator], per_seed[denominator])
                if not math.isnan(r := _ratio(float(a), float(b)))
            ]
            ratio_rows.append(
                {
                    "numerator": numerator,
                    "denominator": denominator,
                    "regret_ratio": _ratio(regret[numerator], regret[denominator]),
                    "median_seed_ratio": float(np.median(seed_ratios))
                    if seed_ratios
                    else float("nan"),
                }
            )
    ratios = pd.DataFrame(
        ratio_rows, columns=["numerator", "denominator", "regret_ratio", "median_seed_ratio"]
    )

    present = [p for p in REGRET_ORDER if p in per_seed.columns]
    test_rows = []
    for worse, better in zip(present, present[1:]):
        diff = per_seed[worse] - per_seed[better]
        wins, losses = int((diff > 0).sum()), int((diff < 0).sum())
        test_rows.append(
            {
                "worse": worse,
                "better": better,
                "wins": wins,
                "losses": losses,
                "ties": int((diff == 0).sum()),
                "p_value": sign_test(wins, losses),
            }
        )
    sign_tests = pd.DataFrame(
        test_rows, columns=["worse", "better", "wins", "losses", "ties", "p_value"]
    )
    return ComparisonReport(summary, ratios, sign_tests, n_seeds=int(totals["seed"].nunique()))


def manifest(result: ExperimentResult) -> dict:
    """Config echo plus everything needed to reproduce the run."""
    return {
        "version": result.version,
        "config": result.config.model_dump(mode="json"),
        "seeds": result.seeds,
        "policies": result.policies,
        "beta": {str(run.seed): run.beta for run in result.runs},
    }


def _write_frame(frame: pd.DataFrame, path: Path, fmt: OutputFormat) -> Path:
    target = path.with_suffix(f".{fmt.value}")
    if fmt is OutputFormat.CSV:
        frame.to_csv(target, index=False)
    else:
        frame.to_json(target, orient="records", indent=2)
    return target


def emit_series(
    result: ExperimentResult,
    path: Union[str, Path],
    formats: Optional[Sequence[Union[OutputFormat, str]]] = None,
) -> List[Path]:
    """
    Write the per-slot series of every (seed, policy), the run totals, the comparison
    summary and a manifest.json under path. Returns the written files.
    """
    root = Path(path)
    fmts = list(dict.fromkeys(OutputFormat(f) for f in (formats or result.config.formats)))
    written: List[Path] = []
    try:
        root.mkdir(parents=True, exist_ok=True)
        for run in result.runs:
            seed_dir = root / f"seed_{run.seed}"
            seed_dir.mkdir(exist_ok=True)
            for policy, metrics in run.metrics.items():
                for fmt in fmts:
                    written.append(_write_frame(metrics.to_frame(), seed_dir / policy, fmt))
        for fmt in fmts:
            written.append(_write_frame(totals_frame(result), root / "runs", fmt))
        if len(result.policies) >= 2:
            report = compare_report(result)
            for fmt in fmts:
                written.append(_write_frame(report.summary, root / "summary", fmt))
                written.append(_write_frame(report.ratios, root / "ratios", fmt))
                written.append(_write_frame(report.sign_tests, root / "sign_tests", fmt))
        manifest_path = root / "manifest.json"
        manifest_path.write_text(json.dumps(manifest(result), indent=2, sort_keys=True) + "\n")
        written.append(manifest_path)
    except OSError as exc:
        target = Path(exc.filename) if exc.filename else root
        raise OutputError(target, exc.strerror or str(exc)) from exc
    logger.info("Wrote %d result files to %s", len(written), root)
    return written

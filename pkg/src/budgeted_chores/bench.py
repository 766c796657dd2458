"""Batch runs of the solvers over generated instances, summarised with pandas."""
from __future__ import annotations

import logging
from typing import Dict, List, Optional

import pandas as pd

from .app import Algorithm, ChoreAllocationApp, SolveOutcome
from .errors import ChoreDivisionError, CounterSearchExhausted, IntractableError
from .files import BenchConfig
from .harness import GeneratorConfig, generate_many

logger = logging.getLogger(__name__)

RUN_COLUMNS = (
    "algorithm",
    "seed",
    "agents",
    "chores",
    "status",
    "error",
    "iterations",
    "within_bound",
    "guaranteed",
    "guarantee_met",
    "elapsed_seconds",
    "failed",
)


def iteration_bound(outcome: SolveOutcome) -> Optional[int]:
    """Loop bound the algorithm is known to respect, if any."""

    n, m = outcome.instance.n, outcome.instance.m
    if outcome.algorithm is Algorithm.DENSEST_FIRST:
        return n + m
    if outcome.algorithm is Algorithm.DIVISIBLE:
        return n * (m + 1)
    return None


def _generator_for(algorithm: Algorithm, generator: GeneratorConfig) -> GeneratorConfig:
    if algorithm is Algorithm.TWO_AGENT:
        return generator.model_copy(update={"agents_min": 2, "agents_max": 2})
    return generator


def _status_for(error: ChoreDivisionError) -> str:
    if isinstance(error, CounterSearchExhausted):
        return "exhausted"
    if isinstance(error, IntractableError):
        return "intractable"
    return "error"


def run_bench(config: BenchConfig, app: Optional[ChoreAllocationApp] = None) -> pd.DataFrame:
    """One row per generated instance and algorithm.

    Runs that raise keep their row with a ``status`` other than ``solved``.
    Only unexpected errors and missed guarantees or loop bounds count as failed.
    """

    app = app or ChoreAllocationApp()
    rows: List[Dict[str, object]] = []
    for name in config.algorithms:
        algorithm = Algorithm(name)
        generator = _generator_for(algorithm, config.generator)
        for offset, instance in enumerate(generate_many(generator, config.count)):
            row: Dict[str, object] = {
                "algorithm": algorithm.value,
                "seed": generator.seed + offset,
                "agents": instance.n,
                "chores": instance.m,
            }
            try:
                outcome = app.solve(instance, algorithm)
            except ChoreDivisionError as exc:
                row["status"] = _status_for(exc)
                row["error"] = str(exc)
                row["failed"] = row["status"] == "error"
                logger.warning("%s raised on seed %s: %s", algorithm.value, row["seed"], exc)
                rows.append(row)
                continue
            bound = iteration_bound(outcome)
            row.update(
                {
                    "status": "solved",
                    "iterations": outcome.iterations,
                    "within_bound": bound is None or outcome.iterations <= bound,
                    "guaranteed": outcome.guaranteed,
                    "guarantee_met": outcome.guarantee_met,
                    "elapsed_seconds": outcome.elapsed_seconds,
                }
            )
            for report in outcome.reports:
                row[report.criterion] = report.satisfied
            row["failed"] = not (row["guarantee_met"] and row["within_bound"])
            if row["failed"]:
                logger.warning("%s failed on seed %s", algorithm.value, row["seed"])
            rows.append(row)
    frame = pd.DataFrame(rows)
    criteria = [c for c in frame.columns if c not in RUN_COLUMNS]
    return frame.reindex(columns=[*RUN_COLUMNS, *criteria])


def summarize(results: pd.DataFrame) -> pd.DataFrame:
    columns = ["runs", "unsolved", "failures", "mean_iterations", "max_iterations", "mean_seconds"]
    if results.empty:
        return pd.DataFrame(columns=columns)
    grouped = results.groupby("algorithm", sort=True)
    return pd.DataFrame(
        {
            "runs": grouped.size(),
            "unsolved": grouped["status"].apply(lambda s: int((s != "solved").sum())),
            "failures": grouped["failed"].sum().astype(int),
            "mean_iterations": grouped["iterations"].mean(),
            "max_iterations": grouped["iterations"].max(),
            "mean_seconds": grouped["elapsed_seconds"].mean(),
        }
    )[columns]


__all__ = ["iteration_bound", "run_bench", "summarize"]

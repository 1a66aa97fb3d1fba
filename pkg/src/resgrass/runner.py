"""Experiment runner: executes the registered suites and writes reports."""

from __future__ import annotations

import json
from pathlib import Path

from .config import SUITES, ExperimentConfig
from .convergence import convergence_study, rows_to_csv
from .errors import ConfigError
from .suites import SuiteReport, run_suite

__all__ = ["run", "reports_to_json", "write_reports", "convergence_csv_path"]


def run(config: ExperimentConfig) -> list[SuiteReport]:
    """Run every suite of ``config`` in registration order.

    Suite randomness depends only on ``(seed, suite index, trial index)``,
    so selecting a subset of suites does not change their results.
    """
    reports = []
    for name in config.suites:
        if name not in SUITES:
            raise ConfigError(f"unknown suite {name!r}")
        reports.append(run_suite(name, SUITES.index(name), config))
    return reports


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"


def convergence_csv_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".convergence.csv")


def write_reports(reports, config: ExperimentConfig, path=None) -> Path | None:
    """Write the JSON report, and the convergence table when that suite ran.

    Raises :class:`ConfigError` when the destination cannot be written.
    """
    path = path if path is not None else config.output_path
    if path is None:
        return None
    path = Path(path)
    try:
        path.write_text(reports_to_json(reports))
        if "convergence" in config.suites and len(config.sizes) >= 3:
            convergence_csv_path(path).write_text(rows_to_csv(convergence_study(config)))
    except OSError as exc:
        raise ConfigError(f"cannot write report to {path}: {exc}") from exc
    return path

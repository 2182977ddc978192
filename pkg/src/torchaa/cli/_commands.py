"""Subcommands of the batch front end."""

__all__ = ["cmd_analyze", "cmd_chart", "cmd_emit", "cmd_catalog", "write_report"]

import json
import logging

from pathlib import Path

import numpy as np

from .. import _functional
from ..base.errors import ActionAngleError, ConfigError, HypothesisError, NonInvolutiveError
from ..catalog import catalog_get, catalog_list
from ..chart import (
    Chart,
    build_chart,
    check_integrals_of_actions,
    gauge_fix,
    load_chart,
    save_chart,
    verify_canonical,
)
from ..symplectic import check_involution, sample_points
from ..utils import to_jsonable
from ._config import JobConfig
from ._emit import action_curves, orbit_trace, residual_map, write_csv

logger = logging.getLogger(__name__)

ANALYSIS_FILE = "analysis.json"
CHART_FILE = "chart.json"
RAW_CHART_FILE = "chart-raw.json"
REPORT_FILE = "report.json"
ORBIT_FILE = "orbit.csv"
RESIDUAL_FILE = "residuals.csv"
ACTIONS_FILE = "actions.csv"


def write_report(path: str | Path, document: dict) -> Path:
    """Write a report document as sorted, indented JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(to_jsonable(document), indent=1, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n")
    return path


def _status(passed: bool) -> str:
    return "pass" if passed else "fail"


def _error(err: ActionAngleError, stage: str) -> dict:
    err.stage = stage
    return {"stage": stage, "type": type(err).__name__, "message": str(err)}


def cmd_analyze(config: JobConfig) -> dict:
    """
    Check the hypotheses of the construction and write ``analysis.json``.

    Parameters
    ----------
    config : JobConfig
        Job configuration.

    Returns
    -------
    dict
        Report document; ``status`` is ``"pass"``, ``"fail"`` (a hypothesis
        does not hold) or ``"error"`` (a numerical stage failed, named
        by ``error.stage``).

    """
    report = _functional.analyze_system(
        config.system,
        config.box,
        config.seed,
        config.chart,
        config.lattice,
        config.integrator,
        config.involution_tol,
        config.involution_samples,
        config.rng,
    )
    document = {"command": "analyze", "config": config.to_dict(), "analysis": report.to_dict()}
    if report.error is not None:
        document["status"] = "error"
        document["error"] = {"stage": report.stage, "message": report.error}
    else:
        passed = report.passed
        if passed and config.expected_rank is not None and report.rank != config.expected_rank:
            report.notes.append(f"expected rank {config.expected_rank}, found {report.rank}")
            document["analysis"]["notes"] = list(report.notes)
            passed = False
        document["status"] = _status(passed)
    path = write_report(config.output / ANALYSIS_FILE, document)
    logger.info("analysis %s, written to %s", document["status"], path)
    return document


def cmd_chart(config: JobConfig) -> dict:
    """
    Build, gauge-fix and verify a chart.

    Writes ``chart-raw.json`` once the chart is built, ``chart.json``
    once the gauge is fixed and ``report.json`` in every case, so the
    artifacts of completed stages survive a later failure.

    Parameters
    ----------
    config : JobConfig
        Job configuration.

    Returns
    -------
    dict
        Report document with ``status`` as in :func:`cmd_analyze`.

    """
    out = config.output
    out.mkdir(parents=True, exist_ok=True)
    rng = config.rng
    document = {"command": "chart", "config": config.to_dict(), "artifacts": {}}
    stage = "involution"
    try:
        points = np.vstack(
            [
                config.seed,
                sample_points(
                    config.seed,
                    0.1 * max(1.0, float(np.max(np.abs(config.seed)))),
                    config.involution_samples,
                    rng,
                ),
            ]
        )
        involution = check_involution(config.system, points, config.involution_tol)
        document["involution"] = involution.to_dict()
        if not involution.passed:
            raise NonInvolutiveError(involution.max_bracket)

        stage = "chart"
        chart = build_chart(
            config.system,
            config.box,
            config.seed,
            config.chart,
            config.lattice,
            config.integrator,
            config.expected_rank,
        )
        document["artifacts"]["raw_chart"] = save_chart(chart, out / RAW_CHART_FILE).name
        document["rank"] = chart.rank

        stage = "gauge"
        chart, fit = gauge_fix(chart, options=config.gauge, opts=config.integrator)
        document["gauge"] = fit.to_dict()
        document["artifacts"]["chart"] = save_chart(chart, out / CHART_FILE).name

        stage = "verify"
        verification = verify_canonical(chart, options=config.verify, rng=rng)
        document["verification"] = verification.to_dict()
        integrals = check_integrals_of_actions(chart, verification.samples, config.verify.integral_tol)
        document["integrals"] = integrals.to_dict()
        document["status"] = _status(verification.passed and integrals.passed)
    except HypothesisError as err:
        document["status"] = "fail"
        document["error"] = _error(err, stage)
        logger.error("chart stopped at stage %s: %s", stage, err)
    except ActionAngleError as err:
        document["status"] = "error"
        document["error"] = _error(err, stage)
        logger.error("chart stopped at stage %s: %s", stage, err)

    document["artifacts"]["report"] = REPORT_FILE
    path = write_report(out / REPORT_FILE, document)
    logger.info("chart %s, report written to %s", document["status"], path)
    return document


def cmd_emit(config: JobConfig, chart: Chart | None = None) -> dict:
    """
    Write the CSV data series of a chart.

    Parameters
    ----------
    config : JobConfig
        Job configuration.
    chart : Chart, optional
        Chart; the default reads ``chart.json`` from the output directory.

    Returns
    -------
    dict
        Document listing the written files.

    Raises
    ------
    ConfigError
        If no chart is given and none was written by ``chart``.

    """
    out = config.output
    if chart is None:
        path = out / CHART_FILE
        if not path.exists():
            raise ConfigError(f"no chart at {path}; run the chart command first")
        try:
            chart = load_chart(path)
        except (KeyError, TypeError, ValueError) as err:
            raise ConfigError(f"{path} is not a valid chart: {err}") from err
    out.mkdir(parents=True, exist_ok=True)

    document = {"command": "emit", "files": {}}
    stage = "orbit"
    try:
        header, rows = orbit_trace(chart, config.emit, config.integrator)
        document["files"]["orbit"] = write_csv(out / ORBIT_FILE, header, rows).name
        stage = "residuals"
        header, rows = residual_map(chart, config.emit, config.verify, config.rng)
        document["files"]["residuals"] = write_csv(out / RESIDUAL_FILE, header, rows).name
        stage = "actions"
        header, rows = action_curves(chart, config.emit)
        document["files"]["actions"] = write_csv(out / ACTIONS_FILE, header, rows).name
        document["status"] = "pass"
    except ActionAngleError as err:
        document["status"] = "error"
        document["error"] = _error(err, stage)
        logger.error("emit stopped at stage %s: %s", stage, err)
    return document


def cmd_catalog(name: str | None = None) -> dict:
    """
    Describe one catalog entry, or all of them.

    Raises
    ------
    ConfigError
        If the name is unknown.

    """
    if name is None:
        return {"command": "catalog", "entries": [entry.to_dict() for entry in catalog_list()], "status": "pass"}
    try:
        entry = catalog_get(name)
    except (ValueError, ActionAngleError) as err:
        raise ConfigError(str(err)) from err
    return {"command": "catalog", "entries": [entry.to_dict()], "status": "pass"}

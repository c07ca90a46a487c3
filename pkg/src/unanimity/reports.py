"""Byte-stable CSV/JSON rendering shared by the CLI and the verify suites.

Floats are written with 17 significant digits so identical runs produce
identical bytes, making output files usable as regression baselines.
"""

from __future__ import annotations

import json
from typing import Iterable

from .analysis import FitResult
from .dynamics import EnsembleStats


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def csv_lines(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(fmt(v) for v in row))
    return "\n".join(out) + "\n"


def ensemble_csv(stats: EnsembleStats) -> str:
    """Fixed-order ensemble table: round,mean_size,stderr_size,acceptance_rate.

    Row 0 is the initial state (rate written as 0)."""
    rows = []
    for t in range(stats.rounds + 1):
        rate = stats.acceptance_rate[t - 1] if t >= 1 else 0.0
        rows.append(
            (t, float(stats.mean_size[t]), float(stats.stderr_size[t]), float(rate))
        )
    return csv_lines(("round", "mean_size", "stderr_size", "acceptance_rate"), rows)


def ensemble_sidecar(stats: EnsembleStats, config: dict) -> str:
    doc = {
        "config": config,
        "domain": stats.domain,
        "rounds": stats.rounds,
        "trials": stats.trials,
        "k": stats.k,
        "master_seed": stats.master_seed,
        "final_mean_size": float(stats.mean_size[-1]),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def estimates_csv(rows: Iterable[tuple]) -> str:
    """Fixed-order estimator table: cap_param,method,value,stderr,samples."""
    return csv_lines(("cap_param", "method", "value", "stderr", "samples"), rows)


def fit_json(result: FitResult, extra: dict | None = None) -> str:
    doc = {
        "model": result.model.value,
        "params": [float(p) for p in result.params],
        "r_squared": float(result.r_squared),
        "residual_rms": float(result.residual_rms),
    }
    if result.model.value == "power":
        doc["beta"] = float(result.params[1])
    if result.model.value == "decay":
        doc["gamma"] = float(result.params[1])
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"

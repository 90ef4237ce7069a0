"""Machine-readable outputs: per-point CSV files and structured JSON summaries.

Every file embeds the full run configuration (seed, grid, tolerances,
package version), so identical configurations reproduce byte-identical
files.  Floats are written in Python's shortest round-trip representation,
which preserves full precision.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .sweep import EnsembleRun, ScalingSummary

SWEEP_COLUMNS = "instance_id,n,s,e0,e1,gap,entropy_bits,schmidt_rank"
GROVER_COLUMNS = "n,s,gap,entropy_bits"


def _fmt(x) -> str:
    return repr(float(x))


def _config_header(config: dict) -> str:
    return "# config: " + json.dumps(config, sort_keys=True) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and obj != obj:  # NaN has no JSON literal
        return None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_sweep_csv(path, runs: dict[int, EnsembleRun], config: dict) -> None:
    """One row per sweep point, all sizes concatenated, sorted by (n, id, s)."""
    lines = [_config_header(config), SWEEP_COLUMNS + "\n"]
    for n in sorted(runs):
        for result in runs[n].results:
            for p in result.points:
                lines.append(
                    f"{result.instance_id},{result.n},{_fmt(p.s)},{_fmt(p.e0)},{_fmt(p.e1)},"
                    f"{_fmt(p.gap)},{_fmt(p.entropy_bits)},{p.schmidt_rank}\n"
                )
    Path(path).write_text("".join(lines))


def summary_to_dict(summary: ScalingSummary, config: dict, failures: dict[int, int] | None = None) -> dict:
    """JSON-ready dict with per-size stats, fits, and the config echo."""
    doc = {
        "config": config,
        "groups": [],
        "fits": {
            "entropy_vs_n": _jsonable(asdict(summary.entropy_fit)) if summary.entropy_fit else None,
            "gap_vs_inverse_n": _jsonable(asdict(summary.gap_fit)) if summary.gap_fit else None,
            "peak_shape": _jsonable(asdict(summary.peak_fit)) if summary.peak_fit else None,
        },
    }
    for g in summary.groups:
        entry = {
            "n": g.n,
            "count": g.count,
            "excluded": (failures or {}).get(g.n, 0),
            "entropy_max": {"mean": g.entropy_max_mean, "ci95": g.entropy_max_ci95},
            "gap_min": {"mean": g.gap_min_mean, "ci95": g.gap_min_ci95},
            "s_peak": {"mean": g.s_peak_mean, "ci95": g.s_peak_ci95},
            "s_gapmin": {"mean": g.s_gapmin_mean, "ci95": g.s_gapmin_ci95},
            "worst_entropy": {"instance_id": g.worst_entropy_instance, "value": g.worst_entropy_max},
            "worst_gap": {"instance_id": g.worst_gap_instance, "value": g.worst_gap_min},
            "gap_entropy_rank_corr": g.gap_entropy_rank_corr,
            "mean_entropy_curve": {"s": g.grid_s, "entropy_bits": g.mean_entropy_curve},
            "mean_gap_curve": {"s": g.grid_s, "gap": g.mean_gap_curve},
        }
        doc["groups"].append(_jsonable(entry))
    return doc


def write_summary_json(path, summary: ScalingSummary, config: dict, failures: dict[int, int] | None = None) -> None:
    Path(path).write_text(json.dumps(summary_to_dict(summary, config, failures), indent=2) + "\n")


def load_summary(path) -> dict:
    return json.loads(Path(path).read_text())


def write_grover_csv(path, rows, config: dict) -> None:
    """Rows of (n, s, gap, entropy_bits) from the closed-form scan."""
    lines = [_config_header(config), GROVER_COLUMNS + "\n"]
    for n, s, gap, entropy in rows:
        lines.append(f"{n},{_fmt(s)},{_fmt(gap)},{_fmt(entropy)}\n")
    Path(path).write_text("".join(lines))


def read_csv_rows(path) -> tuple[dict, list[str], list[list[str]]]:
    """Parse a package CSV back into (config, header, data rows)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# config: "):
        raise ValueError(f"{path} lacks the config header line")
    config = json.loads(lines[0][len("# config: "):])
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if line]
    return config, header, rows

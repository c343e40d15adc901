"""Result files: delimited tables and the run manifest that describes them.

CSV cells are formatted with ``repr`` (shortest round-trip form) and contain
no timestamps, so a rerun with the same parameters and seed produces a
byte-identical file.  Every file-producing command writes a
``<output>.manifest.json`` sidecar recording the command, its full parameter
set, the master seed, the package version, the output paths and the wall
time; everything except the wall time is part of the run's identity.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from . import __version__
from .analytics import GridCell
from .capital import CapitalCell
from .wheel import BiasModel

__all__ = [
    "capital_csv",
    "distribution_csv",
    "fmt",
    "grid_csv",
    "manifest_path",
    "write_manifest",
    "write_rows",
]

GRID_HEADER = ["family", "param", "xi", "N", "omega", "std_error", "trials"]
CAPITAL_HEADER = ["omega", "j_avg", "C", "M", "S", "f", "residual", "roots_found"]
DIST_HEADER = ["k", "probability"]


def fmt(value: object) -> str:
    """Deterministic cell text: shortest round-trip form for floats."""
    if isinstance(value, float):
        # normalize numpy scalars, whose repr is not round-trippable text
        return repr(float(value))
    return str(value)


def write_rows(path: str | Path, header: list[str], rows: list[list[object]]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(cell) for cell in row])
    return path


def distribution_csv(model: BiasModel, path: str | Path) -> Path:
    rows = [[k, float(p)] for k, p in enumerate(model.probabilities)]
    return write_rows(path, DIST_HEADER, rows)


def grid_csv(cells: list[GridCell], path: str | Path) -> Path:
    rows = [
        [
            c.family,
            c.param,
            c.xi,
            c.window,
            c.estimate.omega,
            c.estimate.std_error,
            c.estimate.trials,
        ]
        for c in cells
    ]
    return write_rows(path, GRID_HEADER, rows)


def capital_csv(cells: list[CapitalCell], path: str | Path) -> Path:
    """Capital sweep table; cells without a solution carry nan placeholders
    and a zero root count (the API-level table keeps the error text)."""
    rows: list[list[object]] = []
    for c in cells:
        if c.solution is None:
            rows.append([c.omega, c.j_avg] + [float("nan")] * 5 + [0])
        else:
            s = c.solution
            rows.append(
                [c.omega, c.j_avg, s.capital, s.mean_spins, s.losing_streak,
                 s.frequency, s.residual, s.roots_found]
            )
    return write_rows(path, CAPITAL_HEADER, rows)


def manifest_path(output: str | Path) -> Path:
    return Path(str(output) + ".manifest.json")


def write_manifest(
    command: str,
    params: dict,
    seed: int | None,
    outputs: list[str | Path],
    wall_time_s: float,
) -> Path:
    """Write the manifest sidecar next to the first output file."""
    payload = {
        "version": __version__,
        "command": command,
        "params": params,
        "seed": seed,
        "outputs": [str(p) for p in outputs],
        "wall_time_s": round(wall_time_s, 3),
    }
    path = manifest_path(outputs[0])
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path

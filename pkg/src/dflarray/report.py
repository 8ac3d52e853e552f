"""CSV/JSON writers for curves, estimates, sweeps and array factors.

Floats are written with ``repr`` (shortest round-trip form), ``.`` as the
decimal separator and LF line endings, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def _fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _write_rows(path: Path, header, rows) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_curve_csv(path, curve) -> Path:
    rows = ((_fmt(g), _fmt(d), _fmt(r)) for g, d, r in zip(curve.gammas, np.degrees(curve.gammas), curve.ratios))
    return _write_rows(Path(path), ("gamma_rad", "gamma_deg", "power_ratio"), rows)


def estimate_record(est) -> dict:
    return {
        "gamma_hat_rad": float(est.gamma_hat),
        "gamma_hat_deg": float(est.gamma_hat_deg),
        "attenuation_db": float(est.attenuation_db),
        "p0": float(est.p0),
        "py": float(est.py),
    }


def write_estimate_json(path, est) -> Path:
    path = Path(path)
    # json.dumps uses float.__repr__, which round-trips.
    path.write_text(json.dumps(estimate_record(est), indent=2) + "\n", encoding="utf-8")
    return path


def sweep_header(axis, n_antennas: int):
    M = n_antennas // 2
    per_antenna = [f"attenuation_db_m{m:+d}" for m in range(-M, M + 1)]
    return [axis.column, "gamma_hat_rad", "gamma_hat_deg", "attenuation_db", "p0", "py_at_gamma_hat",
            *per_antenna, "seed", "error"]


def write_sweep_csv(path, axis, rows, n_antennas: int) -> Path:
    def cells(row):
        per = row.antenna_attenuation_db or (math.nan,) * n_antennas
        return [_fmt(row.value), _fmt(row.gamma_hat_rad), _fmt(row.gamma_hat_deg), _fmt(row.attenuation_db),
                _fmt(row.p0), _fmt(row.py_at_gamma_hat), *(_fmt(a) for a in per), str(row.seed), row.error]

    return _write_rows(Path(path), sweep_header(axis, n_antennas), (cells(r) for r in rows))


def write_factor_csv(path, gammas, planar, nonplanar) -> Path:
    rows = ((_fmt(d), _fmt(p), _fmt(q)) for d, p, q in zip(np.degrees(gammas), np.abs(planar), np.abs(nonplanar)))
    return _write_rows(Path(path), ("gamma_deg", "abs_factor_planar", "abs_factor_nonplanar"), rows)


def read_csv(path):
    """Read one of the files above back as ``(header, list of rows)``."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)

"""CSV and plot-data writers.

Numbers are written with 17 significant digits so that reading them back
reproduces the doubles exactly; lines end with LF.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from ..errors import ConfigError

TRACE_HEADER = ("round", "cum_loss", "cum_comparator", "regret")
TABLE_HEADER = ("cell_id", "param_json", "mean_regret", "std_regret", "n_seeds", "theorem_bound")


def fmt(value) -> str:
    return format(float(value), ".17g")


def _write(path, text: str) -> None:
    path = Path(path)
    try:
        if path.parent != Path("."):
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def trace_csv(trace) -> str:
    cum_loss, cum_comp, regret = trace.cum_loss, trace.cum_comparator, trace.regret
    lines = [",".join(TRACE_HEADER)]
    for t in range(trace.T):
        lines.append(f"{t + 1},{fmt(cum_loss[t])},{fmt(cum_comp[t])},{fmt(regret[t])}")
    return "\n".join(lines) + "\n"


def table_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for row in rows:
        writer.writerow([row.cell_id, row.param_json, fmt(row.mean_regret), fmt(row.std_regret),
                         row.n_seeds, fmt(row.theorem_bound)])
    return buf.getvalue()


def emit_csv(obj, path) -> None:
    """Write a RegretTrace or a list of sweep rows."""
    text = table_csv(obj) if isinstance(obj, list) else trace_csv(obj)
    _write(path, text)


def read_trace_csv(path) -> dict:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != TRACE_HEADER:
            raise ValueError(f"unexpected trace header {header}")
        data = np.array([[float(v) for v in row] for row in reader])
    return {name: data[:, i] for i, name in enumerate(TRACE_HEADER)}


def read_table_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != TABLE_HEADER:
            raise ValueError(f"unexpected table header {reader.fieldnames}")
        rows = []
        for rec in reader:
            rows.append({
                "cell_id": int(rec["cell_id"]),
                "params": json.loads(rec["param_json"]),
                "mean_regret": float(rec["mean_regret"]),
                "std_regret": float(rec["std_regret"]),
                "n_seeds": int(rec["n_seeds"]),
                "theorem_bound": float(rec["theorem_bound"]),
            })
    return rows


def _as_records(table) -> list[dict]:
    if table and isinstance(table[0], dict):
        return table
    return [{"params": r.params, "mean_regret": r.mean_regret, "std_regret": r.std_regret,
             "theorem_bound": r.theorem_bound} for r in table]


def plot_rows(table, x_param: str) -> list[tuple[float, ...]]:
    out = []
    for rec in _as_records(table):
        if x_param not in rec["params"]:
            raise ConfigError(f"table has no x-axis parameter {x_param!r}")
        try:
            x = float(rec["params"][x_param])
        except (TypeError, ValueError):
            raise ConfigError(f"x-axis parameter {x_param!r} is not numeric") from None
        mean, std = rec["mean_regret"], rec["std_regret"]
        out.append((x, mean, mean - std, mean + std, rec["theorem_bound"]))
    return out


def emit_plotdata(table, path, x_param: str, loglog: bool = False) -> None:
    """Columns: x, mean, mean-std, mean+std, theorem_bound (whitespace separated).

    With ``loglog`` a companion ``<path>.loglog`` holds log10 of each column
    (nan where a value is not positive).
    """
    rows = plot_rows(table, x_param)
    _write(path, "".join(" ".join(fmt(v) for v in row) + "\n" for row in rows))
    if loglog:
        def lg(v):
            return math.log10(v) if v > 0 else math.nan
        _write(f"{path}.loglog", "".join(" ".join(fmt(lg(v)) for v in row) + "\n" for row in rows))

"""Counts-file parsing and the JSON estimate report.

Counts files come as JSON, ``{"axes": [{"axis": 1, "n_plus": ..,
"n_minus": ..}, x3]}``, or as CSV with header ``axis,n_plus,n_minus`` and
exactly three rows.  Floats in reports are serialized in Python's shortest
round-trip decimal form (up to 17 significant digits), so parsing a report
back recovers bit-identical doubles.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math

import numpy as np

from .core import CountRecord, InvalidInputError, norm_squared, temporal_estimate
from .oracle import OracleConfig, empirical_kl, oracle_mle
from .projector import project_mle

COUNTS_CSV_HEADER = ["axis", "n_plus", "n_minus"]


def _require_int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInputError(f"{field}: expected an integer, got {value!r}")
    return value


def parse_counts_json(text: str) -> CountRecord:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "axes" not in doc:
        raise InvalidInputError("axes: missing top-level field")
    axes = doc["axes"]
    if not isinstance(axes, list) or len(axes) != 3:
        raise InvalidInputError("axes: expected a list of exactly 3 records")
    plus = {}
    minus = {}
    for idx, rec in enumerate(axes):
        if not isinstance(rec, dict):
            raise InvalidInputError(f"axes[{idx}]: expected an object")
        for key in ("axis", "n_plus", "n_minus"):
            if key not in rec:
                raise InvalidInputError(f"axes[{idx}].{key}: missing field")
        axis = _require_int(rec["axis"], f"axes[{idx}].axis")
        if axis not in (1, 2, 3):
            raise InvalidInputError(f"axes[{idx}].axis: expected 1, 2, or 3, got {axis}")
        if axis in plus:
            raise InvalidInputError(f"axes[{idx}].axis: duplicate axis {axis}")
        plus[axis] = _require_int(rec["n_plus"], f"axes[{idx}].n_plus")
        minus[axis] = _require_int(rec["n_minus"], f"axes[{idx}].n_minus")
    return CountRecord((plus[1], plus[2], plus[3]), (minus[1], minus[2], minus[3]))


def parse_counts_csv(text: str) -> CountRecord:
    rows = list(csv.reader(_io.StringIO(text)))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows or [c.strip() for c in rows[0]] != COUNTS_CSV_HEADER:
        raise InvalidInputError(f"header: expected {','.join(COUNTS_CSV_HEADER)}")
    if len(rows) != 4:
        raise InvalidInputError(f"expected exactly 3 data rows, got {len(rows) - 1}")
    plus = {}
    minus = {}
    for idx, row in enumerate(rows[1:]):
        if len(row) != 3:
            raise InvalidInputError(f"row {idx + 1}: expected 3 columns, got {len(row)}")
        try:
            axis = int(row[0])
        except ValueError:
            raise InvalidInputError(f"row {idx + 1} axis: not an integer: {row[0]!r}") from None
        if axis not in (1, 2, 3) or axis in plus:
            raise InvalidInputError(f"row {idx + 1} axis: bad or duplicate axis {row[0]!r}")
        try:
            plus[axis] = int(row[1])
        except ValueError:
            raise InvalidInputError(f"row {idx + 1} n_plus: not an integer: {row[1]!r}") from None
        try:
            minus[axis] = int(row[2])
        except ValueError:
            raise InvalidInputError(f"row {idx + 1} n_minus: not an integer: {row[2]!r}") from None
    return CountRecord((plus[1], plus[2], plus[3]), (minus[1], minus[2], minus[3]))


def parse_counts(text: str, fmt: str = "auto") -> CountRecord:
    if not text.strip():
        raise InvalidInputError("empty input (expected a JSON or CSV counts file)")
    if fmt == "json":
        return parse_counts_json(text)
    if fmt == "csv":
        return parse_counts_csv(text)
    if text.lstrip().startswith("{"):
        return parse_counts_json(text)
    return parse_counts_csv(text)


def counts_to_json(counts: CountRecord) -> str:
    doc = {
        "axes": [
            {"axis": i + 1, "n_plus": counts.n_plus[i], "n_minus": counts.n_minus[i]}
            for i in range(3)
        ]
    }
    return json.dumps(doc, indent=2) + "\n"


def counts_to_csv(counts: CountRecord) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COUNTS_CSV_HEADER)
    for i in range(3):
        writer.writerow([i + 1, counts.n_plus[i], counts.n_minus[i]])
    return buf.getvalue()


def build_estimate_report(
    counts: CountRecord,
    with_oracle: bool = False,
    oracle_config: OracleConfig | None = None,
) -> dict:
    """Run the full estimation pipeline and collect a reportable document."""
    xi_hat, s_hat = temporal_estimate(counts)
    result = project_mle(xi_hat, s_hat)
    report = {
        "xi_hat": xi_hat.tolist(),
        "s_hat": s_hat.tolist(),
        "xi_hat_norm": math.sqrt(norm_squared(xi_hat)),
        "was_projected": result.was_projected,
        "xi_star": result.xi_star.tolist(),
        "kl_empirical_to_mle": float(empirical_kl(xi_hat, s_hat, result.xi_star)),
        "iterations": result.iterations,
    }
    if result.was_projected:
        report["lambda_star"] = result.lambda_star
        report["norm_residual"] = result.norm_residual
        report["equation_residuals"] = list(result.equation_residuals)
    if with_oracle:
        direct = oracle_mle(xi_hat, s_hat, oracle_config)
        report["oracle"] = {
            "xi": direct.tolist(),
            "max_discrepancy": float(np.max(np.abs(direct - result.xi_star))),
        }
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"

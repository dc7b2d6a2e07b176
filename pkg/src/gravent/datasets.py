"""CSV/JSON serialisation of sweep curves, bound-check reports, fits and flat tables.

CSV files start with '#'-prefixed provenance lines (kind, meta, units and, for
reports and fits, a JSON summary), followed by a header row and data rows.
JSON files hold one object with "meta" and "data" keys. Extended-precision
numbers are written as decimal strings carrying the full digit count.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from .boundcheck import SampleReport, SaturationRecord
from .gaussian import StandardFormParams
from .sweeps import CurvePoint, FitResult

CURVE_COLUMNS = ("x", "nu", "one_minus_nu", "log_negativity")
CURVE_UNITS = {"nu": "1", "one_minus_nu": "1", "log_negativity": "bits"}
SATURATION_COLUMNS = ("family", "phase", "relative_change")
FIT_COLUMNS = ("T", "omega_opt")


def _is_mp(x) -> bool:
    return isinstance(x, mpmath.mpf)


def format_number(x, digits: Optional[int] = None) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, int)) and not isinstance(x, float):
        return str(x)
    if _is_mp(x):
        # enough digits to recover the binary value exactly at the working precision
        with mpmath.workdps(digits or mpmath.mp.dps):
            n = mpmath.libmp.repr_dps(mpmath.mp.prec)
            return mpmath.nstr(x, n, min_fixed=1, max_fixed=0)
    return format(float(x), ".17g")


def _parse_number(text: str, digits: Optional[int]):
    """Number from its serialised form; non-numeric text is returned unchanged."""
    if text == "":
        return None
    try:
        if digits:
            with mpmath.workdps(digits):
                return mpmath.mpf(text)
        return float(text)
    except ValueError:
        return text


def _json_number(x, digits: Optional[int]):
    if x is None:
        return None
    if _is_mp(x):
        return format_number(x, digits)
    if isinstance(x, (bool, int, str)):
        return x
    return float(x)


def _kind_of(data) -> str:
    if isinstance(data, SampleReport):
        return "sample_report"
    if isinstance(data, FitResult):
        return "fit"
    items = list(data)
    if items and isinstance(items[0], CurvePoint):
        return "curve"
    if items and isinstance(items[0], dict):
        return "table"
    return "curve"


def _report_summary(report: SampleReport) -> Dict[str, Any]:
    p = report.argmin_params
    return {
        "n_samples": report.n_samples,
        "eps": report.eps,
        "min_relative_change": report.min_relative_change,
        "argmin_params": None if p is None else [float(v) for v in p.astuple()],
        "violations": report.violations,
        "phases": list(report.phases),
        "phase_minima": list(report.phase_minima),
        "acceptance_rate": report.acceptance_rate,
        "digits": report.digits,
        "tol_factor": report.tol_factor,
    }


def _report_from(summary: Dict[str, Any], rows: List[Dict[str, Any]]) -> SampleReport:
    p = summary["argmin_params"]
    return SampleReport(
        n_samples=int(summary["n_samples"]),
        eps=summary["eps"],
        min_relative_change=summary["min_relative_change"],
        argmin_params=None if p is None else StandardFormParams(*p),
        violations=int(summary["violations"]),
        saturating_families_checked=[
            SaturationRecord(r["family"], float(r["phase"]), float(r["relative_change"])) for r in rows
        ],
        phases=tuple(summary["phases"]),
        phase_minima=tuple(summary["phase_minima"]),
        acceptance_rate=summary["acceptance_rate"],
        digits=summary["digits"],
        tol_factor=summary["tol_factor"],
    )


def _rows_for(kind: str, data) -> Tuple[Sequence[str], List[Dict[str, Any]], Optional[Dict[str, Any]]]:
    if kind == "curve":
        return CURVE_COLUMNS, [{c: getattr(pt, c) for c in CURVE_COLUMNS} for pt in data], None
    if kind == "sample_report":
        rows = [asdict(r) for r in data.saturating_families_checked]
        return SATURATION_COLUMNS, rows, _report_summary(data)
    if kind == "fit":
        rows = [{"T": t, "omega_opt": w} for t, w in zip(data.temperatures, data.omega_opt)]
        summary = {"prefactor": data.prefactor, "exponent": data.exponent, "residual": data.residual}
        return FIT_COLUMNS, rows, summary
    rows = list(data)
    columns = list(rows[0].keys()) if rows else []
    return columns, rows, None


def emit_dataset(data, fmt: str = "csv", meta: Optional[Dict[str, Any]] = None, units: Optional[Dict[str, str]] = None) -> bytes:
    """Serialise a curve, report, fit or table (list of dicts) to CSV or JSON bytes."""
    kind = _kind_of(data)
    meta = dict(meta or {})
    meta["kind"] = kind
    digits = meta.get("digits")
    columns, rows, summary = _rows_for(kind, data)
    if fmt == "json":
        payload = {
            "meta": meta,
            "data": {
                "columns": list(columns),
                "rows": [{c: _json_number(r.get(c), digits) for c in columns} for r in rows],
            },
        }
        if summary is not None:
            payload["data"]["summary"] = summary
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    buf.write(f"# kind: {kind}\n")
    buf.write(f"# meta: {json.dumps(meta, sort_keys=True, separators=(',', ':'))}\n")
    if units is None and kind == "curve":
        units = CURVE_UNITS
    if units:
        buf.write("# units: " + ", ".join(f"{k}={v}" for k, v in units.items()) + "\n")
    if summary is not None:
        buf.write(f"# summary: {json.dumps(summary, sort_keys=True, separators=(',', ':'))}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([v if isinstance(v, str) else format_number(v, digits) for v in (r.get(c) for c in columns)])
    return buf.getvalue().encode("utf-8")


def parse_dataset(blob: bytes, fmt: str = "csv") -> Tuple[Dict[str, Any], Any]:
    """Inverse of :func:`emit_dataset`; returns ``(meta, data)``."""
    text = blob.decode("utf-8")
    if fmt == "json":
        payload = json.loads(text)
        meta = payload["meta"]
        digits = meta.get("digits")
        rows = [
            {k: (_parse_number(v, digits) if isinstance(v, str) else v) for k, v in r.items()}
            for r in payload["data"]["rows"]
        ]
        if digits is None:
            rows = [{k: (float(v) if isinstance(v, int) and not isinstance(v, bool) else v) for k, v in r.items()} for r in rows]
        summary = payload["data"].get("summary")
        return meta, _build(meta["kind"], rows, summary, payload["data"]["columns"])
    meta: Dict[str, Any] = {}
    summary = None
    body = []
    for line in text.splitlines():
        if line.startswith("# meta: "):
            meta = json.loads(line[len("# meta: "):])
        elif line.startswith("# summary: "):
            summary = json.loads(line[len("# summary: "):])
        elif line.startswith("#"):
            continue
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader, [])
    digits = meta.get("digits")
    rows = []
    for rec in reader:
        rows.append({c: _parse_number(v, digits) for c, v in zip(columns, rec)})
    return meta, _build(meta.get("kind", "table"), rows, summary, columns)


def _build(kind: str, rows, summary, columns):
    if kind == "curve":
        return [CurvePoint(**{c: r[c] for c in CURVE_COLUMNS}) for r in rows]
    if kind == "sample_report":
        return _report_from(summary, rows)
    if kind == "fit":
        return FitResult(
            summary["prefactor"],
            summary["exponent"],
            summary["residual"],
            tuple(float(r["T"]) for r in rows),
            tuple(float(r["omega_opt"]) for r in rows),
        )
    return rows

"""CSV and JSON serialization of convergence reports (byte-stable for identical inputs)."""

import csv
import io
import json
import math

CSV_COLUMNS = ("xi", "error_lp", "omega", "bound", "ratio", "local_slope")


def fmt(value):
    """12 significant digits; missing values become empty cells."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return format(float(value), ".12g")


def local_slopes(xi, err):
    """Two-point slope of ``ln err`` vs ``ln ξ`` to the previous row (``None`` for the first)."""
    out = [None]
    for (x0, e0), (x1, e1) in zip(zip(xi, err), zip(xi[1:], err[1:])):
        if e0 and e1 and e0 > 0 and e1 > 0:
            out.append(math.log(e1 / e0) / math.log(x1 / x0))
        else:
            out.append(None)
    return out


def report_csv(report, *, raw_error=False):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(CSV_COLUMNS) + (["raw_error"] if raw_error else [])
    writer.writerow(header)
    slopes = local_slopes(report.xi_values, report.error_lp)
    for i, xi in enumerate(report.xi_values):
        row = [xi, report.error_lp[i], report.omega[i], report.bound[i], report.ratio[i], slopes[i]]
        if raw_error:
            row.append(report.raw_error[i] if report.raw_error else None)
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float):
        return None if not math.isfinite(obj) else float(format(obj, ".12g"))
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def to_json(payload):
    """Deterministic JSON text (sorted keys, 12-digit floats)."""
    return json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)

"""Experiment reports and their canonical JSON / CSV serializations.

Both writers are bit-stable: keys are sorted, floats are written with
``%.17g`` and nothing time- or host-dependent is recorded.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__

CSV_MAGIC = "# hlgauge-report v1"
_INT_RE = re.compile(r"^-?\d+$")
_FLOAT_RE = re.compile(r"^-?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")


def versions() -> dict:
    return {"hlgauge": __version__, "numpy": np.__version__, "python": platform.python_version()}


@dataclass
class ExperimentReport:
    kind: str
    config: dict
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    versions: dict = field(default_factory=versions)

    @property
    def status(self) -> str:
        return self.summary.get("status", "pass")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "config": self.config, "records": self.records,
                "summary": self.summary, "notes": self.notes, "versions": self.versions}

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(data["kind"], data["config"], data.get("records", []), data.get("summary", {}),
                   data.get("notes", []), data.get("versions", {}))


def _plain(x):
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def _float_text(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = "%.17g" % x
    # keep floats recognizable as floats after a round trip
    return text if any(c in text for c in ".en") else text + ".0"


def canonical_json(obj, indent: int = 0) -> str:
    """Deterministic JSON text: sorted keys, ``%.17g`` floats, 2-space indent."""
    obj = _plain(obj)
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float_text(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(_plain(v), (list, tuple, dict)) for v in obj):
            return "[" + ", ".join(canonical_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + canonical_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        body = ",\n".join(f"{pad}{json.dumps(str(k))}: {canonical_json(v, indent + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _compact(obj) -> str:
    return re.sub(r"\n\s*", " ", canonical_json(obj))


def _cell(v) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _float_text(v)
    if isinstance(v, (list, tuple, dict)):
        return _compact(v)
    return str(v)


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if text in ("NaN", "Infinity", "-Infinity"):
        return float(text.replace("Infinity", "inf"))
    if _INT_RE.match(text):
        return int(text)
    if _FLOAT_RE.match(text):
        return float(text)
    if text[0] in "[{":
        return json.loads(text)
    return text


def report_to_csv(report: ExperimentReport) -> str:
    meta = report.to_dict()
    meta.pop("records")
    out = io.StringIO()
    out.write(CSV_MAGIC + "\n")
    out.write("# meta " + _compact(meta) + "\n")
    columns = sorted({k for rec in report.records for k in rec})
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for rec in report.records:
        writer.writerow([_cell(rec.get(c)) for c in columns])
    return out.getvalue()


def report_from_csv(text: str) -> ExperimentReport:
    lines = text.splitlines(keepends=True)
    if len(lines) < 3 or lines[0].strip() != CSV_MAGIC or not lines[1].startswith("# meta "):
        raise ValueError("not a hlgauge CSV report")
    meta = json.loads(lines[1][len("# meta "):])
    reader = csv.reader(io.StringIO("".join(lines[2:])))
    header = next(reader)
    records = [{c: _parse_cell(v) for c, v in zip(header, row)} for row in reader]
    meta["records"] = records
    return ExperimentReport.from_dict(meta)


def render_report(report: ExperimentReport, fmt: str = "json") -> str:
    if fmt == "json":
        return canonical_json(report.to_dict()) + "\n"
    if fmt == "csv":
        return report_to_csv(report)
    raise ValueError(f"unknown report format {fmt!r}; expected json or csv")


def write_report(report: ExperimentReport, path, fmt: str = "json") -> None:
    text = render_report(report, fmt)
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc


def read_report(path) -> ExperimentReport:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read report {path}: {exc.strerror}") from exc
    if text.startswith(CSV_MAGIC):
        return report_from_csv(text)
    return ExperimentReport.from_dict(json.loads(text))

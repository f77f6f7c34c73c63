"""BoundReport records and their text/JSON/CSV serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SIG_DIGITS = 12
TEXT_DIGITS = 4


class BoundKind(str, Enum):
    UPPER = "upper"
    LOWER = "lower"
    EXACT = "exact"
    APPROX = "approx"


def quantize(x: float, digits: int = SIG_DIGITS) -> float:
    """Round to ``digits`` significant digits; the result round-trips through repr."""
    if not math.isfinite(x) or x == 0:
        return float(x)
    return float(f"{x:.{digits}g}")


def _encode(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return quantize(v)


def _decode(v):
    if v in ("inf", "-inf", "nan"):
        return float(v)
    return v


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    kind: BoundKind
    provenance: str
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("provenance must be non-empty")
        object.__setattr__(self, "kind", BoundKind(self.kind))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": _encode(self.value),
            "kind": self.kind.value,
            "provenance": self.provenance,
            "context": {k: _encode(v) for k, v in self.context.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> BoundReport:
        return cls(
            data["name"],
            float(_decode(data["value"])),
            BoundKind(data["kind"]),
            data["provenance"],
            {k: _decode(v) for k, v in data.get("context", {}).items()},
        )

    def quantized(self) -> BoundReport:
        """The report exactly as it reads back from JSON."""
        return BoundReport.from_dict(json.loads(json.dumps(self.to_dict())))


def to_json(reports: list[BoundReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def from_json(text: str) -> list[BoundReport]:
    return [BoundReport.from_dict(d) for d in json.loads(text)]


def to_csv(reports: list[BoundReport]) -> str:
    keys: list[str] = []
    for r in reports:
        keys.extend(k for k in r.context if k not in keys)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys + ["name", "value", "kind", "provenance"])
    for r in reports:
        d = r.to_dict()
        ctx = d["context"]
        writer.writerow([_csv_cell(ctx.get(k, "")) for k in keys]
                        + [d["name"], _csv_cell(d["value"]), d["kind"], d["provenance"]])
    return buf.getvalue()


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def _text_value(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{v:.{TEXT_DIGITS}g}"
    return str(v)


def to_text(reports: list[BoundReport]) -> str:
    if not reports:
        return ""
    width = max(len(r.name) for r in reports)
    lines = []
    for r in reports:
        ctx = ", ".join(f"{k}={_text_value(v)}" for k, v in r.context.items())
        line = f"{r.name:<{width}}  {r.kind.value:<6}  {_text_value(r.value):>11}  [{r.provenance}]"
        lines.append(line + (f"  {ctx}" if ctx else ""))
    return "\n".join(lines)

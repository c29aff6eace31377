"""Tabular output: report, membership-curve, trend and reference-delta tables.

Every CSV starts with ``#`` comment lines carrying the run manifest, then a
header row. Floats are written with ``repr`` (shortest round-trip form).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .fuzzy import SpreadSpec
from .measures import PARAMETERS, InvariantViolation, PointMeasures, ReliabilityReport


def fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def spread_label(s: float) -> str:
    return SpreadSpec(s).label


@dataclass
class RunManifest:
    command: str
    model: str
    t: float
    spreads: Sequence[float] = ()
    alpha_levels: int | None = None
    mode: str | None = None
    grid_points: int | None = None
    seed: int | None = None
    version: str = ""
    extra: dict = field(default_factory=dict)

    def items(self):
        yield "command", self.command
        yield "model", self.model
        yield "t", fmt(float(self.t))
        yield "spreads", ",".join(fmt(float(s)) for s in self.spreads)
        for key in ("alpha_levels", "mode", "grid_points", "seed"):
            value = getattr(self, key)
            if value is not None:
                yield key, fmt(value)
        yield "version", self.version
        yield from self.extra.items()

    def as_dict(self) -> dict:
        return dict(self.items())


def csv_text(manifest: RunManifest | None, header, rows, notes=()) -> str:
    buf = io.StringIO()
    if manifest is not None:
        for k, v in manifest.items():
            buf.write(f"# {k}: {v}\n")
    for note in notes:
        buf.write(f"# {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse one of our CSV files back, skipping comment lines; numeric cells become floats."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    out = []
    for row in csv.DictReader(lines):
        parsed = {}
        for k, v in row.items():
            try:
                parsed[k] = float(v)
            except ValueError:
                parsed[k] = v
        out.append(parsed)
    return out


def report_rows(point: PointMeasures, reports: Sequence[ReliabilityReport]):
    header = ["parameter", "crisp"] + [f"defuzz_{spread_label(r.spread)}" for r in reports]
    crisp = point.as_dict()
    rows = [[p, crisp[p]] + [r[p].defuzzified for r in reports] for p in PARAMETERS]
    return header, rows


def membership_rows(report: ReliabilityReport):
    header = ["parameter", "alpha", "left", "right"]
    rows = []
    for p in PARAMETERS:
        prof = report[p].fuzzy
        for a, lo, hi in zip(prof.alphas, prof.lows, prof.highs):
            rows.append([p, float(a), float(lo), float(hi)])
    return header, rows


def _direction(values: Sequence[float]) -> str:
    diffs = [b - a for a, b in zip(values, values[1:])]
    if all(d > 0 for d in diffs):
        return "increase"
    if all(d < 0 for d in diffs):
        return "decrease"
    if all(d == 0 for d in diffs):
        return "flat"
    return "mixed"


def trend_rows(reports: Sequence[ReliabilityReport], claimed: dict | None = None):
    """Observed direction of each defuzzified parameter as the spread grows."""
    ordered = sorted(reports, key=lambda r: r.spread)
    header = ["parameter"] + [f"defuzz_{spread_label(r.spread)}" for r in ordered] + [
        "observed",
        "claimed",
        "agrees",
    ]
    rows = []
    for p in PARAMETERS:
        vals = [r[p].defuzzified for r in ordered]
        obs = _direction(vals)
        claim = (claimed or {}).get(p, "")
        agrees = "" if not claim else ("yes" if claim == obs else "no")
        rows.append([p] + vals + [obs, claim, agrees])
    return header, rows


def load_reference(path) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: reference file must be a JSON object")
    return doc


def reference_rows(point: PointMeasures, reports: Sequence[ReliabilityReport], ref: dict):
    """Computed vs reference values with relative deltas."""
    header = ["parameter", "column", "computed", "reference", "rel_delta"]
    rows = []
    crisp = point.as_dict()
    ref_crisp = ref.get("crisp", {})
    ref_defuzz = ref.get("defuzzified", {})
    for p in PARAMETERS:
        if p in ref_crisp:
            rows.append(_delta_row(p, "crisp", crisp[p], ref_crisp[p]))
        for r in reports:
            col = spread_label(r.spread)
            table = ref_defuzz.get(col, {})
            if p in table:
                rows.append(_delta_row(p, f"defuzz_{col}", r[p].defuzzified, table[p]))
    return header, rows


def _delta_row(p, col, computed, reference):
    reference = float(reference)
    return [p, col, float(computed), reference, (computed - reference) / reference]


def reference_flags(rates, ref: dict) -> list[str]:
    """Comment lines flagging where computed system rates depart from the reference."""
    notes = []
    system = ref.get("system", {})
    for key, value in (("lambda_s", rates.lambda_s), ("tau_s", rates.tau_s)):
        if key in system:
            r = float(system[key])
            notes.append(
                f"flag: computed {key} {fmt(float(value))} vs reference {fmt(r)} "
                f"(rel delta {fmt((value - r) / r)})"
            )
    crisp = ref.get("crisp", {})
    if "lambda_s" in system and "tau_s" in system and "mtbf" in crisp:
        implied = 1.0 / float(system["lambda_s"]) + float(system["tau_s"])
        printed = float(crisp["mtbf"])
        if not math.isclose(implied, printed, rel_tol=1e-6):
            notes.append(
                f"flag: reference mtbf {fmt(printed)} differs from 1/lambda_s + tau_s = "
                f"{fmt(implied)} of its own rates (rel delta {fmt((printed - implied) / implied)})"
            )
    return notes


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def render_table(header, rows) -> str:
    cells = [list(map(str, header))] + [[fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def check_roundtrip(text: str, rows) -> None:
    """Confirm a CSV reproduces the numbers it was written from."""
    back = read_csv(text)
    if len(back) != len(rows):
        raise InvariantViolation("CSV row count changed on re-read")
    for parsed, row in zip(back, rows):
        for got, want in zip(parsed.values(), row):
            if isinstance(want, float) and got != want and not (math.isnan(got) and math.isnan(want)):
                raise InvariantViolation(f"CSV value {want!r} re-read as {got!r}")

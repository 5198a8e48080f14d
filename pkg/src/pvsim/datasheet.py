"""Datasheet file parsing, bundled reference panels, CSV export.

Datasheet files are flat JSON objects, one panel per file:

    {
      "voc_stc": 43.5,
      "isc_stc": 4.75,
      "vmp_stc": 34.5,
      "imp_stc": 4.35,
      "cell_count": 72,
      "alpha_isc": 0.00065,
      "beta_voc": -0.16,
      "name": "BP SX 150"
    }

All seven numeric keys are required, ``name`` is optional, unknown keys
are rejected.  CSV output uses the shortest decimal representation that
round-trips to the same float, so downstream consumers can compare
values bit for bit.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping

from .errors import DatasheetError
from .estimation import PanelDatasheet
from .simulation import IvCurve

REQUIRED_KEYS = ("voc_stc", "isc_stc", "vmp_stc", "imp_stc",
                 "cell_count", "alpha_isc", "beta_voc")
OPTIONAL_KEYS = ("name",)

_BUNDLED: dict[str, PanelDatasheet] = {
    "bp_sx_150": PanelDatasheet(
        voc_stc=43.5,
        isc_stc=4.75,
        vmp_stc=34.5,
        imp_stc=4.35,
        cell_count=72,
        alpha_isc=0.00065,
        beta_voc=-0.16,
        name="BP SX 150",
    ),
}


def datasheet_from_mapping(data: Mapping) -> PanelDatasheet:
    """Validate a parsed key-value mapping into a PanelDatasheet.

    Every failure names the offending key or invariant; nothing is
    silently defaulted.
    """
    unknown = sorted(set(data) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS))
    if unknown:
        raise DatasheetError(f"unknown key(s): {', '.join(unknown)}")
    missing = [key for key in REQUIRED_KEYS if key not in data]
    if missing:
        raise DatasheetError(f"missing required key(s): {', '.join(missing)}")

    values: dict[str, float] = {}
    for key in REQUIRED_KEYS:
        raw = data[key]
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise DatasheetError(f"value for {key} is not a number: {raw!r}")
        value = float(raw)
        if not math.isfinite(value):
            raise DatasheetError(f"value for {key} is not finite: {raw!r}")
        values[key] = value

    cells = values.pop("cell_count")
    if cells != int(cells):
        raise DatasheetError(
            f"cell_count must be a whole number, got {data['cell_count']!r}")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise DatasheetError(f"name must be text, got {name!r}")
    return PanelDatasheet(cell_count=int(cells), name=name, **values)


def parse_datasheet(text: str) -> PanelDatasheet:
    """Parse a JSON datasheet document into a validated PanelDatasheet."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasheetError(f"datasheet is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DatasheetError(
            f"datasheet must be a JSON object, got {type(data).__name__}")
    return datasheet_from_mapping(data)


def load_datasheet(path: str) -> PanelDatasheet:
    """Read and parse a datasheet file (UTF-8)."""
    with open(path, encoding="utf-8") as handle:
        return parse_datasheet(handle.read())


def serialize_datasheet(datasheet: PanelDatasheet) -> str:
    """Serialize to the JSON document format; inverse of parse_datasheet."""
    data: dict[str, object] = {key: getattr(datasheet, key) for key in REQUIRED_KEYS}
    if datasheet.name is not None:
        data["name"] = datasheet.name
    return json.dumps(data, indent=2) + "\n"


def bundled_panel(name: str) -> PanelDatasheet:
    """Return a built-in reference datasheet by its registry name."""
    try:
        return _BUNDLED[name]
    except KeyError:
        available = ", ".join(sorted(_BUNDLED))
        raise DatasheetError(
            f"unknown bundled panel {name!r}; available: {available}") from None


def bundled_panel_names() -> tuple[str, ...]:
    return tuple(sorted(_BUNDLED))


def format_decimal(value: float) -> str:
    """Shortest decimal string that round-trips to the same float.

    Integral values drop the trailing ".0" (0.0 -> "0", 43.5 -> "43.5")
    to keep CSV output compact while staying exactly parseable.
    """
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def export_curve_csv(curve: IvCurve) -> str:
    """Render a curve as CSV: header plus one row per sample."""
    lines = ["voltage_V,current_A,power_W"]
    for v, i, p in zip(curve.voltage, curve.current, curve.power):
        lines.append(f"{format_decimal(v)},{format_decimal(i)},{format_decimal(p)}")
    return "\n".join(lines) + "\n"

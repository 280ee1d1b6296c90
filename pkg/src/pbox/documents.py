"""JSON document format for p-boxes and machine-readable result exports.

Input documents look like::

    {
      "name": "example",
      "domain": ["x1", "x2", "x3"],
      "lower": ["0", "1/4", "1"],
      "upper": ["0.5", "3/4", "1"]
    }

Values are strings (or integers), either exact fractions ``"a/b"`` or decimal
literals, which parse exactly (``"0.2"`` becomes 1/5).  JSON numbers with a
fractional part are rejected to keep binary floating point out of the
pipeline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .core import Domain, PBox
from .cones import GeneratorSet, POS
from .extremes import ExtremePoint, FanGraph


class ParseError(ValueError):
    pass


def parse_rational(raw: Any) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"not a rational value: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        raise ParseError(
            f"refusing float {raw!r}: quote the value as a string like \"0.2\" or \"1/5\""
        )
    if isinstance(raw, str):
        try:
            return Fraction(raw.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed rational {raw!r}: {exc}") from exc
    raise ParseError(f"not a rational value: {raw!r}")


@dataclass(frozen=True)
class PBoxDocument:
    domain_labels: tuple[str, ...]
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]
    name: str = ""
    description: str = ""

    def to_pbox(self) -> PBox:
        return PBox(Domain(self.domain_labels), self.lower, self.upper)


def parse_document(data: Any) -> PBoxDocument:
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    for key in ("domain", "lower", "upper"):
        if key not in data:
            raise ParseError(f"missing key {key!r}")
        if not isinstance(data[key], list):
            raise ParseError(f"key {key!r} must be a list")
    labels = tuple(str(x) for x in data["domain"])
    lower = tuple(parse_rational(v) for v in data["lower"])
    upper = tuple(parse_rational(v) for v in data["upper"])
    return PBoxDocument(
        labels,
        lower,
        upper,
        name=str(data.get("name", "")),
        description=str(data.get("description", "")),
    )


def load_document(path: str) -> PBoxDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_document(data)


def frac_str(value: Fraction) -> str:
    return str(value)


def frac_decimal(value: Fraction, places: int = 6) -> str:
    return f"~{float(value):.{places}g}"


def generator_to_json(g: GeneratorSet) -> dict:
    return {
        "chain": [[i, "+" if s == POS else "-"] for i, s in g.chain],
        "singletons": list(g.singletons),
    }


def generator_from_json(data: dict, n: int) -> GeneratorSet:
    chain = tuple((int(i), POS if s == "+" else -1) for i, s in data["chain"])
    return GeneratorSet(n, chain, tuple(int(s) for s in data["singletons"]))


def extremes_to_json(pbox: PBox, points: tuple[ExtremePoint, ...]) -> dict:
    return {
        "n": pbox.n,
        "domain": list(pbox.domain.labels),
        "lower": [frac_str(v) for v in pbox.low],
        "upper": [frac_str(v) for v in pbox.up],
        "extremes": [
            {
                "F": [frac_str(v) for v in p.cdf.values],
                "mass": [frac_str(v) for v in p.mass().values],
                "witnesses": [generator_to_json(g) for g in p.witnesses],
            }
            for p in points
        ],
    }


def fan_to_json(fan: FanGraph) -> dict:
    return {
        "n": fan.pbox.n,
        "nodes": [
            {
                "family": node.describe(),
                "generators": generator_to_json(node),
                "F": [frac_str(v) for v in fan.cdfs[i].values],
            }
            for i, node in enumerate(fan.nodes)
        ],
        "edges": [
            {
                "a": e.a,
                "b": e.b,
                "removed": sorted(e.removed),
                "added": sorted(e.added),
                "kind": "cross" if e.cross else "same",
            }
            for e in fan.edges
        ],
    }


def fan_to_dot(fan: FanGraph) -> str:
    """Graphviz export: solid edges join distinct extreme points, dashed stay inside one."""
    lines = ["graph fan {", "  node [shape=box, fontname=monospace];"]
    for i, node in enumerate(fan.nodes):
        f_label = ", ".join(frac_str(v) for v in fan.cdfs[i].values)
        label = f"{node.describe()}\\nF = ({f_label})"
        lines.append(f'  n{i} [label="{label}"];')
    for e in fan.edges:
        style = "solid" if e.cross else "dashed"
        lines.append(f"  n{e.a} -- n{e.b} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

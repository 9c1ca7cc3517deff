"""On-disk graph documents.

A graph document is a UTF-8 JSON object mirroring the description type
field for field::

    {
      "vertices": ["v", "h"],
      "blue_edges": [{"id": "a", "range": "v", "source": "h"}, ...],
      "red_edges":  [...],
      "squares":    [{"blue_in": ..., "red_in": ..., "red_out": ..., "blue_out": ...}, ...]
    }

Squares are mandatory: silently completing a factorisation would pick one
of possibly many different rank-2 graphs over the same skeleton.  The
canonical serialisation sorts edges by id and squares by their incoming
pair, keeps vertices in declaration order (the order is semantic: it fixes
matrix rows), and is what gets hashed to identify a graph.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .graphs import Edge, Square, TwoGraph, TwoGraphDescription, validate

SCHEMA_NAME = "twograph-document/1"


class DocumentError(ValueError):
    """A document failed to parse; carries a position when one is known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise DocumentError(message)


def description_from_dict(data: Any) -> TwoGraphDescription:
    _expect(isinstance(data, dict), "document must be a JSON object")
    for key in ("vertices", "blue_edges", "red_edges", "squares"):
        _expect(key in data, f"missing required key {key!r}")
    extra = set(data) - {"vertices", "blue_edges", "red_edges", "squares"}
    _expect(not extra, f"unknown keys {sorted(extra)}")
    _expect(isinstance(data["vertices"], list) and all(isinstance(v, str) for v in data["vertices"]),
            "vertices must be a list of strings")

    def parse_edges(key: str) -> tuple[Edge, ...]:
        _expect(isinstance(data[key], list), f"{key} must be a list")
        out = []
        for item in data[key]:
            _expect(isinstance(item, dict), f"{key} entries must be objects")
            _expect(set(item) == {"id", "range", "source"},
                    f"{key} entries need exactly id, range, source")
            _expect(all(isinstance(item[k], str) for k in ("id", "range", "source")),
                    f"{key} entry fields must be strings")
            out.append(Edge(item["id"], item["range"], item["source"]))
        return tuple(out)

    def parse_squares() -> tuple[Square, ...]:
        _expect(isinstance(data["squares"], list), "squares must be a list")
        out = []
        fields = ("blue_in", "red_in", "red_out", "blue_out")
        for item in data["squares"]:
            _expect(isinstance(item, dict), "squares entries must be objects")
            _expect(set(item) == set(fields), "squares entries need exactly blue_in, red_in, red_out, blue_out")
            _expect(all(isinstance(item[k], str) for k in fields), "square fields must be strings")
            out.append(Square(item["blue_in"], item["red_in"], item["red_out"], item["blue_out"]))
        return tuple(out)

    return TwoGraphDescription(
        vertices=tuple(data["vertices"]),
        blue_edges=parse_edges("blue_edges"),
        red_edges=parse_edges("red_edges"),
        squares=parse_squares(),
    )


def parse_description(text: str) -> TwoGraphDescription:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    return description_from_dict(data)


def description_to_dict(description: TwoGraphDescription) -> dict:
    return {
        "vertices": list(description.vertices),
        "blue_edges": [{"id": e.id, "range": e.range, "source": e.source}
                       for e in sorted(description.blue_edges, key=lambda e: e.id)],
        "red_edges": [{"id": e.id, "range": e.range, "source": e.source}
                      for e in sorted(description.red_edges, key=lambda e: e.id)],
        "squares": [{"blue_in": s.blue_in, "red_in": s.red_in,
                     "red_out": s.red_out, "blue_out": s.blue_out}
                    for s in sorted(description.squares, key=lambda s: (s.blue_in, s.red_in))],
    }


def serialize_description(description: TwoGraphDescription) -> str:
    return json.dumps(description_to_dict(description), indent=2, sort_keys=True) + "\n"


def graph_hash(description: TwoGraphDescription) -> str:
    """Hash of the canonical serialisation; identifies a graph presentation.

    Assumption tokens for certificates are these hashes, so an assumption
    granted for one graph can never silently apply to another.
    """
    blob = json.dumps(description_to_dict(description), sort_keys=True,
                      separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def load_description(path: str) -> TwoGraphDescription:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_description(fh.read())


def load_graph(path: str) -> TwoGraph:
    return validate(load_description(path))

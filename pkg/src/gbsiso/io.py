"""JSON graph documents.

A document looks like::

    {"vertices": ["v"],
     "edges": [{"id": "t", "from": "v", "to": "v", "label_from": "2", "label_to": "3"}]}

Labels are written as decimal strings so that large integers survive any
JSON reader; plain JSON integers are accepted on input.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseError
from .graph import Edge, LabeledGraph, validate

_EDGE_FIELDS = ("id", "from", "to", "label_from", "label_to")


def _label(raw: object, where: str) -> int:
    if isinstance(raw, bool):
        raise ParseError("label must be an integer", field=where)
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        text = raw.strip()
        body = text[1:] if text[:1] in "+-" else text
        if body.isdigit():
            return int(text)
    raise ParseError(f"label {raw!r} is not a decimal integer", field=where)


def _string(raw: object, where: str) -> str:
    if not isinstance(raw, str) or not raw:
        raise ParseError(f"expected a non-empty string, got {raw!r}", field=where)
    return raw


def graph_from_document(doc: object) -> LabeledGraph:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in doc:
            raise ParseError("missing key", field=key)
        if not isinstance(doc[key], list):
            raise ParseError("expected a list", field=key)
    vertices = [_string(v, f"vertices[{i}]") for i, v in enumerate(doc["vertices"])]
    edges = []
    for i, raw in enumerate(doc["edges"]):
        where = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise ParseError("edge must be an object", field=where)
        missing = [k for k in _EDGE_FIELDS if k not in raw]
        if missing:
            raise ParseError(f"missing {', '.join(missing)}", field=where)
        edges.append(
            Edge(
                _string(raw["id"], f"{where}.id"),
                _string(raw["from"], f"{where}.from"),
                _string(raw["to"], f"{where}.to"),
                _label(raw["label_from"], f"{where}.label_from"),
                _label(raw["label_to"], f"{where}.label_to"),
            )
        )
    return validate(vertices, edges)


def parse_graph(text: str) -> LabeledGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return graph_from_document(doc)


def load_graph(path: str | Path) -> LabeledGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def graph_to_document(g: LabeledGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [
            {
                "id": e.id,
                "from": e.origin,
                "to": e.terminus,
                "label_from": str(e.label_from),
                "label_to": str(e.label_to),
            }
            for e in g.edges
        ],
    }


def emit_graph(g: LabeledGraph) -> str:
    return json.dumps(graph_to_document(g), indent=2, sort_keys=True) + "\n"

"""JSON documents consumed by the command-line tool.

A graph document looks like::

    {
      "version": 1,
      "vertices": [{"id": "u", "genus": 0}, {"id": "w", "genus": 0}],
      "edges": [{"id": "e0", "endpoints": ["u", "w"]}, ...],
      "polarization": {"u": "1/2", "w": "1/2"},            # optional
      "sheaf": {"vertex_data": {...}, "edge_data": {...}},  # optional
      "tree": {"root": "v0", "r": 2, "root_degree": null,   # optional
               "vertices": {"v1": {"h": null, "r0": 1, "deg": null}}}
    }

A matrix document is ``{"version": 1, "p": 3, "matrix": [[...], ...]}`` with
integer or ``"p/q"`` entries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import jsonschema

from nodalstab.degree_accounting import TreeSheafData
from nodalstab.errors import GraphError, NodalStabError
from nodalstab.filtration import DvrMatrixModel
from nodalstab.graph_core import DualGraph, Edge, Vertex, orient_tree
from nodalstab.polarization import PolarizationDegree, fraction_str, parse_fraction
from nodalstab.sheaf import DepthOneSheafModel

FORMAT_VERSION = 1

_FRACTION = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+\s*(/\s*\d+\s*)?$"},
    ]
}
_NAT = {"type": "integer", "minimum": 0}
_MAYBE_INT = {"type": ["integer", "null"]}

GRAPH_SCHEMA = {
    "type": "object",
    "required": ["version", "vertices", "edges"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "vertices": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "genus"],
                "additionalProperties": False,
                "properties": {"id": {"type": "string"}, "genus": _NAT},
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "endpoints"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "endpoints": {
                        "type": "array",
                        "items": {"type": "string"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                },
            },
        },
        "polarization": {"type": "object", "additionalProperties": _FRACTION},
        "sheaf": {
            "type": "object",
            "required": ["vertex_data", "edge_data"],
            "additionalProperties": False,
            "properties": {
                "vertex_data": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "required": ["rank", "degree"],
                        "additionalProperties": False,
                        "properties": {"rank": _NAT, "degree": {"type": "integer"}},
                    },
                },
                "edge_data": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "required": ["b_left", "h", "b_right"],
                        "additionalProperties": False,
                        "properties": {"b_left": _NAT, "h": _NAT, "b_right": _NAT},
                    },
                },
            },
        },
        "tree": {
            "type": "object",
            "required": ["root", "r"],
            "additionalProperties": False,
            "properties": {
                "root": {"type": "string"},
                "r": {"type": "integer", "minimum": 1},
                "root_degree": _MAYBE_INT,
                "vertices": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {"h": _MAYBE_INT, "r0": _MAYBE_INT, "deg": _MAYBE_INT},
                    },
                },
            },
        },
    },
}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["version", "p", "matrix"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "p": {"type": "integer"},
        "matrix": {"type": "array", "items": {"type": "array", "items": _FRACTION}},
    },
}


class DocumentError(NodalStabError, ValueError):
    """Unparseable or schema-invalid input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


def _locate(text: str, path) -> int | None:
    """Best-effort line number of the JSON value at ``path``.

    Walks the text with the decoder, following object keys and array
    indices; returns ``None`` if the walk gets lost.
    """
    dec = json.JSONDecoder()
    pos = 0

    def skip_ws(i):
        while i < len(text) and text[i] in " \t\r\n":
            i += 1
        return i

    try:
        pos = skip_ws(pos)
        for step in path:
            if text[pos] == "{":
                i = skip_ws(pos + 1)
                while True:
                    key, i = dec.raw_decode(text, i)
                    i = skip_ws(i)
                    assert text[i] == ":"
                    i = skip_ws(i + 1)
                    if key == step:
                        pos = i
                        break
                    _, i = dec.raw_decode(text, i)
                    i = skip_ws(i)
                    assert text[i] == ","
                    i = skip_ws(i + 1)
            elif text[pos] == "[":
                i = skip_ws(pos + 1)
                for _ in range(int(step)):
                    _, i = dec.raw_decode(text, i)
                    i = skip_ws(i)
                    assert text[i] == ","
                    i = skip_ws(i + 1)
                pos = i
            else:
                return None
    except (AssertionError, IndexError, ValueError):
        return None
    return text.count("\n", 0, pos) + 1


def load_json(text: str, schema: dict) -> Any:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        where = "/".join(map(str, path)) or "<root>"
        raise DocumentError(f"schema error at {where}: {err.message}", _locate(text, path))
    return data


@dataclass(frozen=True)
class GraphDocument:
    graph: DualGraph
    polarization: PolarizationDegree | None = None
    sheaf: DepthOneSheafModel | None = None
    tree: TreeSheafData | None = None
    version: int = FORMAT_VERSION

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "version": self.version,
            "vertices": [{"id": v.id, "genus": v.genus} for v in self.graph.vertices],
            "edges": [{"id": e.id, "endpoints": list(e.ends)} for e in self.graph.edges],
        }
        if self.polarization is not None:
            out["polarization"] = self.polarization.to_json()
        if self.sheaf is not None:
            out["sheaf"] = self.sheaf.to_json()
        if self.tree is not None:
            tj = self.tree.to_json()
            out["tree"] = {
                "root": tj["root"],
                "r": tj["r"],
                "root_degree": tj["root_degree"],
                "vertices": tj["vertices"],
            }
        return out


def graph_from_json(data: dict) -> DualGraph:
    return DualGraph(
        tuple(Vertex(v["id"], v["genus"]) for v in data["vertices"]),
        tuple(Edge(e["id"], tuple(e["endpoints"])) for e in data["edges"]),
    )


def parse_graph_document(text: str) -> GraphDocument:
    data = load_json(text, GRAPH_SCHEMA)
    try:
        g = graph_from_json(data)
    except GraphError as exc:
        raise DocumentError(str(exc)) from None
    pol = sheaf = tree = None
    try:
        if "polarization" in data:
            pol = PolarizationDegree.from_json(data["polarization"])
            pol.check_graph(g)
        if "sheaf" in data:
            sheaf = DepthOneSheafModel.from_json(g, data["sheaf"])
        if "tree" in data:
            t = data["tree"]
            tree = TreeSheafData.from_json(orient_tree(g, t["root"]), t)
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        if isinstance(exc, NodalStabError) and not isinstance(exc, GraphError):
            raise
        raise DocumentError(str(exc)) from None
    return GraphDocument(g, pol, sheaf, tree, data["version"])


def parse_matrix_document(text: str) -> DvrMatrixModel:
    data = load_json(text, MATRIX_SCHEMA)
    try:
        f = tuple(tuple(parse_fraction(x) for x in row) for row in data["matrix"])
        return DvrMatrixModel(data["p"], f)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(str(exc)) from None


def dumps(data) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def matrix_to_json(m: DvrMatrixModel) -> dict:
    return {
        "version": FORMAT_VERSION,
        "p": m.p,
        "matrix": [[fraction_str(Fraction(x)) for x in row] for row in m.f],
    }

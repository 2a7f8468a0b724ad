"""Depth-1 sheaves on a nodal curve, reduced to their numerical data.

On each component ``C_v`` a sheaf is recorded by the rank ``r_v`` and
degree ``d_v`` of its torsion-free restriction, so that
``chi(F_v) = d_v + r_v (1 - g_v)``. At a node ``e`` joining ``v`` and ``w``
the stalk splits as ``O_{C_v}^b_v + O_node^h + O_{C_w}^b_w`` with
``r_v = b_v + h`` and ``r_w = b_w + h``; the node costs ``h`` in the Euler
characteristic.

Edge data is stored as ``(b_left, h, b_right)`` where *left* is the
lexicographically smaller endpoint id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from nodalstab.errors import AssumptionError, GraphError
from nodalstab.graph_core import DualGraph, genus
from nodalstab.polarization import PolarizationDegree


@dataclass(frozen=True)
class VertexSheaf:
    rank: int
    degree: int


@dataclass(frozen=True)
class NodeGluing:
    b_left: int
    h: int
    b_right: int


def oriented_ends(g: DualGraph, edge_id: str) -> tuple[str, str]:
    a, b = g.edge_map[edge_id].ends
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class DepthOneSheafModel:
    graph: DualGraph
    vertex_data: dict[str, VertexSheaf]
    edge_data: dict[str, NodeGluing]

    def __post_init__(self):
        g = self.graph
        vd = {v: x if isinstance(x, VertexSheaf) else VertexSheaf(*x) for v, x in self.vertex_data.items()}
        ed = {e: x if isinstance(x, NodeGluing) else NodeGluing(*x) for e, x in self.edge_data.items()}
        object.__setattr__(self, "vertex_data", vd)
        object.__setattr__(self, "edge_data", ed)
        loops = [e.id for e in g.edges if e.is_loop]
        if loops:
            raise AssumptionError("ii", f"self-loop edges {loops}")
        if set(vd) != set(g.vertex_ids):
            raise GraphError("vertex data must cover exactly the graph's vertices")
        if set(ed) != set(g.edge_map):
            raise GraphError("edge data must cover exactly the graph's edges")
        for v, x in vd.items():
            if x.rank < 0:
                raise ValueError(f"vertex {v!r}: negative rank")
        for e, x in ed.items():
            if min(x.b_left, x.h, x.b_right) < 0:
                raise ValueError(f"edge {e!r}: gluing numbers must be non-negative")
            left, right = oriented_ends(g, e)
            if vd[left].rank != x.b_left + x.h:
                raise ValueError(
                    f"edge {e!r}: rank of {left!r} is {vd[left].rank}, "
                    f"but b_left + h = {x.b_left + x.h}"
                )
            if vd[right].rank != x.b_right + x.h:
                raise ValueError(
                    f"edge {e!r}: rank of {right!r} is {vd[right].rank}, "
                    f"but b_right + h = {x.b_right + x.h}"
                )

    def scaled(self, r: int) -> DepthOneSheafModel:
        """Multiply every rank, degree and gluing number by ``r``."""
        return DepthOneSheafModel(
            self.graph,
            {v: VertexSheaf(x.rank * r, x.degree * r) for v, x in self.vertex_data.items()},
            {e: NodeGluing(x.b_left * r, x.h * r, x.b_right * r) for e, x in self.edge_data.items()},
        )

    def to_json(self) -> dict:
        return {
            "vertex_data": {
                v: {"rank": x.rank, "degree": x.degree} for v, x in sorted(self.vertex_data.items())
            },
            "edge_data": {
                e: {"b_left": x.b_left, "h": x.h, "b_right": x.b_right}
                for e, x in sorted(self.edge_data.items())
            },
        }

    @classmethod
    def from_json(cls, graph: DualGraph, data: Mapping) -> DepthOneSheafModel:
        vd = {v: VertexSheaf(int(x["rank"]), int(x["degree"])) for v, x in data["vertex_data"].items()}
        ed = {
            e: NodeGluing(int(x["b_left"]), int(x["h"]), int(x["b_right"]))
            for e, x in data["edge_data"].items()
        }
        return cls(graph, vd, ed)


def trivial_sheaf(g: DualGraph, r: int = 1) -> DepthOneSheafModel:
    """The free sheaf ``O^r``: rank ``r`` and degree 0 everywhere, glued fully."""
    return DepthOneSheafModel(
        g,
        {v: VertexSheaf(r, 0) for v in g.vertex_ids},
        {e.id: NodeGluing(0, r, 0) for e in g.edges},
    )


def vertex_euler_char(m: DepthOneSheafModel, v: str) -> int:
    x = m.vertex_data[v]
    return x.degree + x.rank * (1 - m.graph.genera[v])


def euler_char(m: DepthOneSheafModel) -> int:
    return sum(vertex_euler_char(m, v) for v in m.graph.vertex_ids) - sum(
        x.h for x in m.edge_data.values()
    )


def a_rank(m: DepthOneSheafModel, a: PolarizationDegree) -> Fraction:
    a.check_graph(m.graph)
    return sum((a[v] * x.rank for v, x in m.vertex_data.items()), Fraction(0))


def a_slope(m: DepthOneSheafModel, a: PolarizationDegree) -> Fraction:
    ar = a_rank(m, a)
    if ar == 0:
        raise ZeroDivisionError("torsion sheaf has no slope")
    return Fraction(euler_char(m)) / ar


def _check_mden(a: PolarizationDegree, mden: int):
    if mden <= 0:
        raise ValueError("mden must be positive")
    bad = [v for v, x in a.weights.items() if (x * mden).denominator != 1]
    if bad:
        raise ValueError(f"{mden} is not a common denominator of the weights (fails at {bad})")


def twist(m: DepthOneSheafModel, a: PolarizationDegree, n: int, mden: int) -> DepthOneSheafModel:
    """Tensor with ``L^n`` where ``L = O(sum m_v Q_v)``, ``a_v = m_v / mden``.

    Each ``Q_v`` is a smooth point, so only the vertex degrees move:
    ``d_v -> d_v + n m_v r_v``.
    """
    _check_mden(a, mden)
    if n < 0:
        raise ValueError("n must be non-negative")
    vd = {}
    for v, x in m.vertex_data.items():
        mv = int(a[v] * mden)
        vd[v] = VertexSheaf(x.rank, x.degree + n * mv * x.rank)
    return DepthOneSheafModel(m.graph, vd, m.edge_data)


def twist_euler_char(m: DepthOneSheafModel, a: PolarizationDegree, n: int, mden: int) -> int:
    """``chi(F (x) L^n) = chi(F) + n * mden * a-rk(F)``."""
    _check_mden(a, mden)
    if n < 0:
        raise ValueError("n must be non-negative")
    value = euler_char(m) + n * mden * a_rank(m, a)
    if value.denominator != 1:
        raise ArithmeticError("twisted Euler characteristic is not integral")
    return int(value)


def hl_slope(m: DepthOneSheafModel, a: PolarizationDegree) -> Fraction:
    """Slope w.r.t. the ample bundle ``L``: the a-slope shifted by ``-(1 - g)``."""
    return a_slope(m, a) - (1 - genus(m.graph))

"""Polarization degrees on a dual graph.

A polarization degree is a choice of rationals ``a_v > 0`` summing to 1.
Two constructions are provided: :func:`polarize_bridgeless` for graphs
without disconnecting edges, and :func:`polarize_general`, which glues the
bridgeless weights of the pieces of the bridge decomposition and hands a
small weight ``1/(sNg)`` to each rational piece.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

from nodalstab.errors import AssumptionError, GraphError
from nodalstab.graph_core import (
    DualGraph,
    bridgeless_decomposition,
    bridges,
    genus,
    is_automorphism,
    is_connected,
)


@dataclass(frozen=True)
class PolarizationDegree:
    weights: dict[str, Fraction]

    def __post_init__(self):
        w = {v: Fraction(x) for v, x in self.weights.items()}
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValueError("polarization needs at least one vertex")
        bad = [v for v, x in w.items() if x <= 0]
        if bad:
            raise ValueError(f"weights must be positive; offending vertices {bad}")
        total = sum(w.values())
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")

    def __getitem__(self, v: str) -> Fraction:
        return self.weights[v]

    @property
    def common_denominator(self) -> int:
        return lcm(*(x.denominator for x in self.weights.values()))

    def check_graph(self, g: DualGraph):
        if set(self.weights) != set(g.vertex_ids):
            raise GraphError("polarization vertices do not match the graph")

    def to_json(self) -> dict:
        """``{vertex: "p/q"}`` in lowest terms, sorted by vertex id."""
        return {v: fraction_str(x) for v, x in sorted(self.weights.items())}

    @classmethod
    def from_json(cls, data: Mapping) -> PolarizationDegree:
        return cls({v: parse_fraction(d) for v, d in data.items()})


def fraction_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(d) -> Fraction:
    """Accept ``"p/q"``, an integer, or ``{"num": p, "den": q}``; floats are refused."""
    if isinstance(d, bool) or isinstance(d, float):
        raise ValueError(f"inexact value {d!r}; write fractions as \"p/q\"")
    if isinstance(d, Mapping):
        return Fraction(int(d["num"]), int(d["den"]))
    if isinstance(d, str) and not re.fullmatch(r"\s*-?\d+\s*(/\s*\d+\s*)?", d):
        raise ValueError(f"not an exact fraction: {d!r}")
    return Fraction(d)


def _check_common(g: DualGraph) -> int:
    if not is_connected(g):
        raise GraphError("polarization requires a connected graph")
    loops = [e.id for e in g.edges if e.is_loop]
    if loops:
        raise AssumptionError("ii", f"self-loop edges {loops}")
    bad = [v.id for v in g.vertices if v.genus == 0 and g.degree(v.id) < 2]
    if bad:
        raise AssumptionError("i", f"rational vertices {bad} meet the rest in fewer than two points")
    total = genus(g)
    if total < 1:
        raise AssumptionError("genus", "the curve must have genus >= 1")
    return total


def bridgeless_weights(g: DualGraph) -> dict[str, Fraction]:
    """``(g_v + s_v/2 - 1 + 1/|V|) / g`` for every vertex, unchecked."""
    total = genus(g)
    n = len(g.vertices)
    return {
        v.id: (v.genus + Fraction(g.degree(v.id), 2) - 1 + Fraction(1, n)) / total
        for v in g.vertices
    }


def polarize_bridgeless(g: DualGraph) -> PolarizationDegree:
    total = _check_common(g)
    br = bridges(g)
    if br:
        raise AssumptionError("iii", f"disconnecting edges {sorted(br)}")
    w = bridgeless_weights(g)
    n = len(g.vertices)
    for v, x in w.items():
        # g*a_v - 1/|V| = g_v + s_v/2 - 1 >= 0 under (i)
        if total * x < Fraction(1, n):
            raise ArithmeticError(f"weight of {v!r} below 1/(g|V|)")
    return PolarizationDegree(w)


def polarize_general(g: DualGraph, N: int | None = None) -> PolarizationDegree:
    total = _check_common(g)
    if N is None:
        N = total + 1
    if N <= total:
        raise ValueError("N must exceed genus")
    dec = bridgeless_decomposition(g)
    t = len(dec.components)
    s = sum(1 for gi in dec.component_genera if gi == 0)
    weights: dict[str, Fraction] = {}
    for comp, gi in zip(dec.components, dec.component_genera):
        if gi == 0:
            if len(comp) != 1:
                raise ArithmeticError("rational bridgeless piece with more than one vertex")
            (v,) = comp
            weights[v] = Fraction(1, s * N * total)
            continue
        piece = g.induced_subgraph(comp)
        tilde = bridgeless_weights(piece)
        for v in comp:
            a = Fraction(gi, total) * tilde[v]
            if s:
                a -= Fraction(1, (t - s) * len(comp) * N * total)
            weights[v] = a
    return PolarizationDegree({v: weights[v] for v in g.vertex_ids})


def check_invariance(g: DualGraph, a: PolarizationDegree, sigma: Mapping[str, str]) -> bool:
    a.check_graph(g)
    if not is_automorphism(g, sigma):
        raise GraphError("sigma is not an automorphism of the graph")
    return all(a[sigma[v]] == a[v] for v in g.vertex_ids)

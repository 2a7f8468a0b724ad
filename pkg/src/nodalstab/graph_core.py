"""Dual graphs of semistable curves.

A :class:`DualGraph` is a genus-weighted multigraph: one vertex per
irreducible component (carrying its geometric genus), one edge per node.
Parallel edges are distinct edges with their own ids. Self-loops can be
represented, but every operation that needs distinct endpoints rejects them.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from nodalstab.errors import AssumptionError, GraphError

ASSUMPTION_FLAGS = ("i", "ii", "iii")


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    def other(self, v: str) -> str:
        a, b = self.ends
        return b if v == a else a


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for v in self.vertices:
            if not isinstance(v.id, str):
                raise GraphError(f"vertex id {v.id!r} is not a string")
            if v.id in seen:
                raise GraphError(f"duplicate vertex id {v.id!r}")
            if not isinstance(v.genus, int) or isinstance(v.genus, bool) or v.genus < 0:
                raise GraphError(f"vertex {v.id!r}: genus must be a non-negative integer")
            seen.add(v.id)
        eseen = set()
        for e in self.edges:
            if not isinstance(e.id, str):
                raise GraphError(f"edge id {e.id!r} is not a string")
            if e.id in eseen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            eseen.add(e.id)
            if len(e.ends) != 2:
                raise GraphError(f"edge {e.id!r} must have exactly two endpoints")
            for x in e.ends:
                if x not in seen:
                    raise GraphError(f"edge {e.id!r} references unknown vertex {x!r}")

    @classmethod
    def build(cls, genera: Mapping[str, int], edges: Iterable) -> DualGraph:
        """Build from ``{vertex: genus}`` and edges.

        Edges are ``(u, w)`` pairs (named ``e0, e1, ...`` in order) or
        ``(id, u, w)`` triples.
        """
        vs = [Vertex(v, g) for v, g in genera.items()]
        es = []
        for k, item in enumerate(edges):
            if len(item) == 2:
                es.append(Edge(f"e{k}", (item[0], item[1])))
            else:
                es.append(Edge(item[0], (item[1], item[2])))
        return cls(tuple(vs), tuple(es))

    # lookups

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def genera(self) -> dict[str, int]:
        return {v.id: v.genus for v in self.vertices}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def incident(self) -> dict[str, tuple[Edge, ...]]:
        inc = defaultdict(list)
        for e in self.edges:
            inc[e.ends[0]].append(e)
            if not e.is_loop:
                inc[e.ends[1]].append(e)
        return {v: tuple(inc[v]) for v in self.vertex_ids}

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertex_ids)}

    def degree(self, v: str) -> int:
        """Number of edge-ends at ``v`` (a loop contributes two)."""
        return sum(2 if e.is_loop else 1 for e in self.incident[v])

    def outer_degree(self, v: str) -> int:
        """Number of edges joining ``v`` to a different vertex."""
        return sum(1 for e in self.incident[v] if not e.is_loop)

    @property
    def has_loops(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def multiplicities(self) -> Counter:
        return Counter(frozenset(e.ends) for e in self.edges)

    def induced_subgraph(self, vertex_set: Iterable[str]) -> DualGraph:
        keep = set(vertex_set)
        unknown = keep - set(self.vertex_ids)
        if unknown:
            raise GraphError(f"unknown vertices {sorted(unknown)}")
        vs = tuple(v for v in self.vertices if v.id in keep)
        es = tuple(e for e in self.edges if e.ends[0] in keep and e.ends[1] in keep)
        return DualGraph(vs, es)

    def without_edges(self, edge_ids: Iterable[str]) -> DualGraph:
        drop = set(edge_ids)
        return DualGraph(self.vertices, tuple(e for e in self.edges if e.id not in drop))

    def relabel(self, vmap: Mapping[str, str], emap: Mapping[str, str] | None = None) -> DualGraph:
        emap = emap or {}
        vs = tuple(Vertex(vmap[v.id], v.genus) for v in self.vertices)
        es = tuple(
            Edge(emap.get(e.id, e.id), (vmap[e.ends[0]], vmap[e.ends[1]])) for e in self.edges
        )
        return DualGraph(vs, es)


def connected_components(g: DualGraph) -> list[list[str]]:
    """Vertex sets of the connected components, in vertex order."""
    seen = set()
    comps = []
    for start in g.vertex_ids:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for e in g.incident[v]:
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp, key=g.index.__getitem__))
    return comps


def is_connected(g: DualGraph) -> bool:
    return len(g.vertices) > 0 and len(connected_components(g)) == 1


def _require_connected(g: DualGraph, what: str):
    if not is_connected(g):
        raise GraphError(f"{what} undefined for disconnected graph")


def _require_loopless(g: DualGraph):
    loops = [e.id for e in g.edges if e.is_loop]
    if loops:
        raise AssumptionError("ii", f"self-loop edges {loops}")


def cycle_rank(g: DualGraph) -> int:
    """First Betti number, counted as the edges left out of a spanning forest."""
    _require_connected(g, "cycle rank")
    parent = {v: v for v in g.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    left_out = 0
    for e in g.edges:
        a, b = find(e.ends[0]), find(e.ends[1])
        if a == b:
            left_out += 1
        else:
            parent[a] = b
    return left_out


def genus(g: DualGraph) -> int:
    """Arithmetic genus ``rho + sum(g_v)`` with ``rho = 1 + |S| - |V|``."""
    _require_connected(g, "genus")
    rho = 1 + len(g.edges) - len(g.vertices)
    return rho + sum(v.genus for v in g.vertices)


def genus_halfdegree_form(g: DualGraph):
    """``1 + sum(g_v + s_v/2 - 1)``; a Fraction, integral on loopless graphs."""
    from fractions import Fraction

    return 1 + sum(Fraction(v.genus) + Fraction(g.degree(v.id), 2) - 1 for v in g.vertices)


def bridges(g: DualGraph) -> frozenset[str]:
    """Ids of the disconnecting edges.

    Lowlink DFS that skips only the edge it arrived by, so a parallel
    copy of that edge counts as a back edge.
    """
    _require_connected(g, "bridges")
    order: dict[str, int] = {}
    low: dict[str, int] = {}
    found = set()
    root = g.vertex_ids[0]
    order[root] = low[root] = 0
    counter = 1
    # frames: (vertex, id of edge used to enter it, iterator over incident edges)
    stack = [(root, None, iter(g.incident[root]))]
    while stack:
        v, via, it = stack[-1]
        advanced = False
        for e in it:
            if e.id == via or e.is_loop:
                continue
            w = e.other(v)
            if w in order:
                low[v] = min(low[v], order[w])
            else:
                order[w] = low[w] = counter
                counter += 1
                stack.append((w, e.id, iter(g.incident[w])))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        if stack:
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if low[v] > order[u]:
                found.add(via)
    return frozenset(found)


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    flags: dict[str, bool]
    details: dict[str, list[str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.connected and all(self.flags.values())


def validate_graph(g: DualGraph, assumptions: Iterable[str] = ASSUMPTION_FLAGS) -> ValidationReport:
    """Check the requested standing assumptions; never raises.

    (i) genus-0 vertices meet other vertices along >= 2 edges;
    (ii) no self-loops; (iii) no disconnecting edges.
    """
    wanted = tuple(assumptions)
    for a in wanted:
        if a not in ASSUMPTION_FLAGS:
            raise ValueError(f"unknown assumption flag {a!r}")
    connected = is_connected(g)
    flags = {}
    details = {}
    if "i" in wanted:
        bad = [v.id for v in g.vertices if v.genus == 0 and g.outer_degree(v.id) < 2]
        flags["i"] = not bad
        details["i"] = bad
    if "ii" in wanted:
        bad = [e.id for e in g.edges if e.is_loop]
        flags["ii"] = not bad
        details["ii"] = bad
    if "iii" in wanted:
        if connected:
            bad = sorted(bridges(g))
        else:
            # per component; a disconnected graph still has well-defined bridges
            bad = []
            for comp in connected_components(g):
                bad.extend(sorted(bridges(g.induced_subgraph(comp))))
        flags["iii"] = not bad
        details["iii"] = bad
    return ValidationReport(connected, flags, details)


@dataclass(frozen=True)
class BridgelessDecomposition:
    """Components of the graph after deleting every bridge.

    ``quotient_tree`` has vertex ``str(i)`` for component ``i`` (with
    genus ``component_genera[i]``) and one edge per bridge, carrying the
    bridge's id.
    """

    components: tuple[frozenset[str], ...]
    component_edges: tuple[frozenset[str], ...]
    component_genera: tuple[int, ...]
    quotient_tree: DualGraph
    bridge_ids: frozenset[str]

    def component_of(self, v: str) -> int:
        for i, comp in enumerate(self.components):
            if v in comp:
                return i
        raise KeyError(v)


def bridgeless_decomposition(g: DualGraph) -> BridgelessDecomposition:
    _require_connected(g, "bridgeless decomposition")
    _require_loopless(g)
    br = bridges(g)
    rest = g.without_edges(br)
    comps = connected_components(rest)
    comps.sort(key=lambda c: g.index[c[0]])
    where = {v: i for i, c in enumerate(comps) for v in c}
    comp_edges = [set() for _ in comps]
    for e in rest.edges:
        comp_edges[where[e.ends[0]]].add(e.id)
    genera = tuple(genus(g.induced_subgraph(c)) for c in comps)
    tree_vs = tuple(Vertex(str(i), genera[i]) for i in range(len(comps)))
    tree_es = tuple(
        Edge(e.id, (str(where[e.ends[0]]), str(where[e.ends[1]]))) for e in g.edges if e.id in br
    )
    return BridgelessDecomposition(
        components=tuple(frozenset(c) for c in comps),
        component_edges=tuple(frozenset(s) for s in comp_edges),
        component_genera=genera,
        quotient_tree=DualGraph(tree_vs, tree_es),
        bridge_ids=br,
    )


def is_tree(g: DualGraph) -> bool:
    return is_connected(g) and len(g.edges) == len(g.vertices) - 1


@dataclass(frozen=True)
class OrientedTree:
    """A tree with every edge pointing away from ``root``.

    ``parent`` maps each non-root vertex to ``(parent vertex, edge id)``;
    the edge into a vertex is its unique in-edge.
    """

    tree: DualGraph
    root: str
    parent: dict[str, tuple[str, str]]

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        ch = defaultdict(list)
        for v in self.tree.vertex_ids:
            if v in self.parent:
                ch[self.parent[v][0]].append(v)
        return {v: tuple(ch[v]) for v in self.tree.vertex_ids}

    @property
    def non_root(self) -> tuple[str, ...]:
        return tuple(v for v in self.tree.vertex_ids if v != self.root)

    def in_edge(self, v: str) -> str:
        return self.parent[v][1]

    def depth(self, v: str) -> int:
        d = 0
        while v != self.root:
            v = self.parent[v][0]
            d += 1
        return d


def orient_tree(g: DualGraph, root: str) -> OrientedTree:
    if root not in g.genera:
        raise GraphError(f"unknown root {root!r}")
    if not is_tree(g):
        raise GraphError("graph is not a tree")
    parent = {}
    stack = [root]
    seen = {root}
    while stack:
        v = stack.pop()
        for e in g.incident[v]:
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                parent[w] = (v, e.id)
                stack.append(w)
    return OrientedTree(g, root, parent)


def _check_permutation(g: DualGraph, sigma: Mapping[str, str]):
    ids = set(g.vertex_ids)
    if set(sigma) != ids or set(sigma.values()) != ids:
        raise GraphError("sigma is not a permutation of the vertex set")


def is_automorphism(g: DualGraph, sigma: Mapping[str, str]) -> bool:
    """True iff ``sigma`` preserves genera and edge multiplicities."""
    _check_permutation(g, sigma)
    gen = g.genera
    if any(gen[sigma[v]] != gen[v] for v in g.vertex_ids):
        return False
    mult = g.multiplicities()
    moved = Counter({frozenset(sigma[x] for x in pair): k for pair, k in mult.items()})
    return moved == mult


def automorphisms(g: DualGraph, max_vertices: int = 8) -> Iterator[dict[str, str]]:
    """All vertex automorphisms by brute-force permutation search."""
    n = len(g.vertices)
    if n > max_vertices:
        raise GraphError(f"automorphism search limited to {max_vertices} vertices")
    ids = g.vertex_ids
    gen = g.genera
    for perm in itertools.permutations(ids):
        sigma = dict(zip(ids, perm))
        if any(gen[sigma[v]] != gen[v] for v in ids):
            continue
        if is_automorphism(g, sigma):
            yield sigma

"""Named graphs and brute-force oracles shared by the test modules."""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction

from nodalstab.graph_core import DualGraph


def banana():
    return DualGraph.build({"u": 0, "w": 0}, [("u", "w"), ("u", "w")])


def theta():
    return DualGraph.build({"u": 0, "w": 0}, [("u", "w")] * 3)


def three_bridge():
    """u(1) -e1- v(0) -e2- w(1): two bridges, a rational middle piece.

    The middle vertex meets the rest in two points, so (i) holds.
    """
    return DualGraph.build({"u": 1, "v": 0, "w": 1}, [("e1", "u", "v"), ("e2", "v", "w")])


def elliptic_pair():
    """Two genus-1 vertices joined by a single bridge."""
    return DualGraph.build({"x": 1, "y": 1}, [("b", "x", "y")])


def double_banana():
    """Two banana blocks joined by one edge ``j``."""
    return DualGraph.build(
        {"a": 0, "b": 0, "c": 0, "d": 0},
        [("p1", "a", "b"), ("p2", "a", "b"), ("j", "b", "c"), ("q1", "c", "d"), ("q2", "c", "d")],
    )


# --- oracles ----------------------------------------------------------------


def components_oracle(vertices, edges):
    """Connected components by repeated flood fill over an adjacency list."""
    adj = defaultdict(set)
    for u, w in edges:
        adj[u].add(w)
        adj[w].add(u)
    left = set(vertices)
    comps = []
    while left:
        start = min(left)
        comp = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    frontier.append(y)
        comps.append(comp)
        left -= comp
    return comps


def bridges_oracle(g: DualGraph) -> set[str]:
    """Edges whose removal increases the number of components."""
    base = len(components_oracle(g.vertex_ids, [e.ends for e in g.edges]))
    out = set()
    for e in g.edges:
        rest = [f.ends for f in g.edges if f.id != e.id]
        if len(components_oracle(g.vertex_ids, rest)) > base:
            out.add(e.id)
    return out


def genus_oracle(g: DualGraph) -> int:
    """``1 + sum(g_v + s_v/2 - 1)`` computed with explicit degree counting."""
    deg = defaultdict(int)
    for e in g.edges:
        deg[e.ends[0]] += 1
        deg[e.ends[1]] += 1
    total = 1 + sum(Fraction(v.genus) + Fraction(deg[v.id], 2) - 1 for v in g.vertices)
    assert total.denominator == 1
    return int(total)


def ideal_chi_oracle(g: DualGraph, support) -> int:
    """Euler characteristic of the ideal sheaf of the complement of ``support``.

    Restricting O to the subcurve on ``support`` and twisting down by the
    points where it meets the rest: chi(O_sub) - #boundary points, with
    chi(O_sub) = sum over components (1 - genus of the component).
    """
    S = set(support)
    inner = [e.ends for e in g.edges if e.ends[0] in S and e.ends[1] in S]
    boundary = sum(1 for e in g.edges if (e.ends[0] in S) != (e.ends[1] in S))
    chi = 0
    for comp in components_oracle(S, inner):
        ce = [x for x in inner if x[0] in comp]
        rho = len(ce) - len(comp) + 1
        chi += 1 - (rho + sum(g.genera[v] for v in comp))
    return chi - boundary


def brute_stability(g: DualGraph, a):
    """(stable, violations) by direct evaluation of every proper support."""
    from nodalstab.graph_core import genus

    n = len(g.vertex_ids)
    target = 1 - genus(g)
    bad = []
    for k in range(1, n):
        for S in itertools.combinations(g.vertex_ids, k):
            chi = ideal_chi_oracle(g, S)
            ar = sum(a[v] for v in S)
            if Fraction(chi) / ar >= target:
                bad.append(S)
    return not bad, bad


# --- degree accounting oracles ---------------------------------------------------


def _vertex_options(t, v):
    """Every (h, deg) in the box meeting the local constraints at ``v``."""
    r = t.r
    x = t.vertex_data[v]
    hs = [x.h] if x.h is not None else range(0, r + 1)
    ds = [x.deg] if x.deg is not None else range(-r, 1)
    return [
        (h, d)
        for h in hs
        for d in ds
        if d <= 0 and d <= -(r - x.r0) and h >= x.r0
    ]


def _roots(t):
    lo = -t.r * len(t.tree.tree.vertices)
    if t.root_degree is not None:
        return [t.root_degree] if lo <= t.root_degree <= 0 else []
    return list(range(lo, 1))


def forcing_product_oracle(t):
    """All solutions by iterating the full product of per-vertex boxes."""
    import itertools

    vs = list(t.tree.non_root)
    r = t.r
    sols = []
    roots = set(_roots(t))
    for combo in itertools.product(*[_vertex_options(t, v) for v in vs]):
        root = -sum(d + r for _, d in combo) + sum(h for h, _ in combo)
        if root in roots:
            sols.append((root, dict(zip(vs, combo))))
    return sols


def forcing_count_oracle(t):
    """(number of solutions, one solution) by convolving per-vertex contributions.

    Exhaustive like the product oracle, but grouped by partial sums so it
    scales to 8 vertices.
    """
    r = t.r
    table = {0: (1, {})}
    for v in t.tree.non_root:
        nxt = {}
        for total, (count, witness) in table.items():
            for h, d in _vertex_options(t, v):
                key = total + h - d - r
                c, w = nxt.get(key, (0, None))
                nxt[key] = (c + count, w if w is not None else {**witness, v: (h, d)})
        table = nxt
    count = 0
    witness = None
    for root in _roots(t):
        if root in table:
            count += table[root][0]
            witness = witness or (root, table[root][1])
    return count, witness

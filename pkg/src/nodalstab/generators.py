"""Seeded random inputs: multigraphs, oriented trees, p-adic matrices."""

from __future__ import annotations

import random
from fractions import Fraction

from nodalstab.filtration import DvrMatrixModel, _det
from nodalstab.graph_core import DualGraph, OrientedTree, bridges, genus, orient_tree, validate_graph


def random_multigraph(
    rng: random.Random,
    max_vertices: int = 10,
    max_edges: int = 15,
    max_genus: int = 2,
    min_vertices: int = 1,
) -> DualGraph:
    """Connected loopless multigraph: a random spanning tree plus extra parallel/cross edges."""
    n = rng.randint(min_vertices, max_vertices)
    names = [f"v{i}" for i in range(n)]
    pairs = []
    for i in range(1, n):
        pairs.append((names[rng.randrange(i)], names[i]))
    extra_cap = max_edges - len(pairs)
    if n > 1 and extra_cap > 0:
        for _ in range(rng.randint(0, extra_cap)):
            u, w = rng.sample(names, 2)
            pairs.append((u, w))
    genera = {v: rng.randint(0, max_genus) for v in names}
    return DualGraph.build(genera, pairs)


def random_valid_graph(
    rng: random.Random,
    max_vertices: int = 6,
    max_edges: int = 10,
    max_genus: int = 2,
    bridgeless: bool = False,
    tries: int = 10_000,
    min_vertices: int = 1,
) -> DualGraph:
    """Rejection-sample a graph satisfying (i), genus >= 1 and optionally no bridges."""
    for _ in range(tries):
        g = random_multigraph(rng, max_vertices, max_edges, max_genus, min_vertices)
        if genus(g) < 1 or not validate_graph(g, ("i",)).ok:
            continue
        if bridgeless and bridges(g):
            continue
        return g
    raise RuntimeError("no valid graph found")


def random_oriented_tree(rng: random.Random, max_vertices: int = 8) -> OrientedTree:
    n = rng.randint(1, max_vertices)
    names = ["v0"] + [f"v{i}" for i in range(1, n)]
    pairs = [(names[rng.randrange(i)], names[i]) for i in range(1, n)]
    tree = DualGraph.build({v: 0 for v in names}, pairs)
    return orient_tree(tree, "v0")


def random_dvr_matrix(
    rng: random.Random, p: int, max_n: int = 6, bound: int = 20
) -> DvrMatrixModel:
    """Random integer matrix with non-zero determinant that is not 0 mod p."""
    while True:
        n = rng.randint(1, max_n)
        f = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if all(x % p == 0 for row in f for x in row):
            continue
        if _det([[Fraction(x) for x in row] for row in f]) == 0:
            continue
        return DvrMatrixModel(p, tuple(tuple(row) for row in f))

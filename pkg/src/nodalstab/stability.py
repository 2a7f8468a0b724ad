"""Stability of the structure sheaf against saturated ideal subsheaves.

A saturated proper ideal ``I`` of ``O`` is determined by its support
``V_D`` (the components where ``I_v != 0``): on a supported component
``I_v`` is the ideal of the points where ``C_v`` meets an unsupported
component, and a node is fully glued exactly when both branches are
supported. Hence

    chi(I) = sum over components D_i of the induced subgraph on V_D of
             (1 - genus(D_i)) - #(edges leaving D_i)

which telescopes to ``sum_{v in V_D} (1 - g_v - s_v) + e(V_D)`` where
``e(V_D)`` counts edges with both ends in the support. The verifier walks
all ``2^|V| - 2`` supports in Gray-code order using the telescoped form;
:func:`ideal_euler_char` keeps the component-wise form.

The verifier proves stability over a superset of the realizable supports.
A violation on a support that no actual ideal realizes would be a false
alarm; none arise for the two built-in polarizations.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator

from nodalstab.errors import AssumptionError, EnumerationCapError, GraphError
from nodalstab.graph_core import DualGraph, connected_components, genus, is_connected
from nodalstab.polarization import PolarizationDegree
from nodalstab.sheaf import DepthOneSheafModel, NodeGluing, VertexSheaf, oriented_ends

DEFAULT_CAP = 22
RECORD_LIMIT = 1000
PARALLEL_MIN_VERTICES = 12


def _require_loopless_connected(g: DualGraph):
    if not is_connected(g):
        raise GraphError("graph must be connected")
    loops = [e.id for e in g.edges if e.is_loop]
    if loops:
        raise AssumptionError("ii", f"self-loop edges {loops}")


def support_mask(g: DualGraph, support) -> int:
    return sum(1 << g.index[v] for v in support)


def mask_support(g: DualGraph, mask: int) -> tuple[str, ...]:
    return tuple(v for i, v in enumerate(g.vertex_ids) if mask >> i & 1)


@dataclass(frozen=True)
class IdealSheafModel:
    """Combinatorial type of a saturated ideal, given by its vertex support.

    Local edge types: ``a`` both ends supported (node fully glued), ``b``
    only the left end supported, ``c`` only the right end, ``d`` neither.
    Left/right follow the lexicographic convention of the sheaf module.
    """

    graph: DualGraph
    support: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        ids = set(self.graph.vertex_ids)
        if not self.support:
            raise ValueError("support must be non-empty (zero ideal)")
        if not self.support <= ids:
            raise ValueError(f"unknown support vertices {sorted(self.support - ids)}")
        if self.support == ids:
            raise ValueError("support must be proper (I = O)")

    @property
    def mask(self) -> int:
        return support_mask(self.graph, self.support)

    @cached_property
    def edge_types(self) -> dict[str, str]:
        types = {}
        for e in self.graph.edges:
            left, right = oriented_ends(self.graph, e.id)
            lin, rin = left in self.support, right in self.support
            types[e.id] = "a" if lin and rin else "b" if lin else "c" if rin else "d"
        return types

    @cached_property
    def subgraph(self) -> DualGraph:
        return self.graph.induced_subgraph(self.support)

    @cached_property
    def components(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(c) for c in connected_components(self.subgraph))

    def boundary(self, v: str) -> int:
        """``s_v - s_{D,v}``: edges at ``v`` whose other end is unsupported."""
        return sum(1 for e in self.graph.incident[v] if e.other(v) not in self.support)

    def as_sheaf_model(self) -> DepthOneSheafModel:
        """The ideal as a depth-1 sheaf model: ``I_v = O_{C_v}(-boundary)``."""
        vd = {}
        for v in self.graph.vertex_ids:
            if v in self.support:
                vd[v] = VertexSheaf(1, -self.boundary(v))
            else:
                vd[v] = VertexSheaf(0, 0)
        ed = {}
        for e, t in self.edge_types.items():
            ed[e] = {
                "a": NodeGluing(0, 1, 0),
                "b": NodeGluing(1, 0, 0),
                "c": NodeGluing(0, 0, 1),
                "d": NodeGluing(0, 0, 0),
            }[t]
        return DepthOneSheafModel(self.graph, vd, ed)


def enumerate_ideal_models(g: DualGraph, cap: int = DEFAULT_CAP) -> Iterator[IdealSheafModel]:
    """One model per non-empty proper support, in increasing subset rank.

    The rank of a support is its bitmask over the graph's vertex order.
    """
    _require_loopless_connected(g)
    n = len(g.vertices)
    if n > cap:
        raise EnumerationCapError(
            f"{n} vertices exceeds the enumeration cap {cap}; use sampled mode"
        )
    for mask in range(1, (1 << n) - 1):
        yield IdealSheafModel(g, frozenset(mask_support(g, mask)))


def ideal_euler_char(g: DualGraph, i: IdealSheafModel) -> int:
    if i.graph != g:
        raise ValueError("ideal model belongs to a different graph")
    chi = 0
    for comp in i.components:
        piece = g.induced_subgraph(comp)
        lost = sum(g.degree(v) - piece.degree(v) for v in comp)
        chi += (1 - genus(piece)) - lost
    return chi


def ideal_a_rank(i: IdealSheafModel, a: PolarizationDegree) -> Fraction:
    return sum((a[v] for v in i.support), Fraction(0))


# --- verification engine ----------------------------------------------------


@dataclass(frozen=True)
class SubsetRecord:
    support: tuple[str, ...]
    mask: int
    chi: int
    a_rank: Fraction
    slope: Fraction

    def to_json(self) -> dict:
        return {
            "support": list(self.support),
            "rank": self.mask,
            "chi": self.chi,
            "a_rank": _frac(self.a_rank),
            "a_slope": _frac(self.slope),
        }


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    mode: str
    genus: int
    target_slope: Fraction
    checked: int
    worst_case: SubsetRecord | None
    violations: tuple[SubsetRecord, ...]
    violation_count: int
    bound_holds: bool
    bound_failures: tuple[SubsetRecord, ...]
    bound_failure_count: int
    rank_multiplier: int = 1
    notes: tuple[str, ...] = field(default=())

    @property
    def worst_margin(self) -> Fraction | None:
        """``a-mu(I) - (1 - g)`` at the worst support; negative iff strictly stable there."""
        if self.worst_case is None:
            return None
        return self.worst_case.slope - self.target_slope

    def to_json(self) -> dict:
        return {
            "stable": self.stable,
            "mode": self.mode,
            "genus": self.genus,
            "target_slope": _frac(self.target_slope),
            "checked": self.checked,
            "rank_multiplier": self.rank_multiplier,
            "worst_case": None if self.worst_case is None else self.worst_case.to_json(),
            "worst_margin": None if self.worst_margin is None else _frac(self.worst_margin),
            "violation_count": self.violation_count,
            "violations": [r.to_json() for r in self.violations],
            "bound_holds": self.bound_holds,
            "bound_failure_count": self.bound_failure_count,
            "bound_failures": [r.to_json() for r in self.bound_failures],
        }


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class _Problem:
    """Integer data for the scan: everything scaled by the common denominator."""

    n: int
    genus: int
    denom: int
    weight: tuple[int, ...]  # a_v * denom
    base: tuple[int, ...]  # 1 - g_v - s_v
    nbrs: tuple[tuple[tuple[int, int], ...], ...]  # (neighbour index, multiplicity)
    r: int


def _problem(g: DualGraph, a: PolarizationDegree, r: int) -> _Problem:
    idx = g.index
    D = a.common_denominator
    mult = [dict() for _ in g.vertex_ids]
    for e in g.edges:
        i, j = idx[e.ends[0]], idx[e.ends[1]]
        mult[i][j] = mult[i].get(j, 0) + 1
        mult[j][i] = mult[j].get(i, 0) + 1
    return _Problem(
        n=len(g.vertices),
        genus=genus(g),
        denom=D,
        weight=tuple(int(a[v] * D) for v in g.vertex_ids),
        base=tuple(1 - g.genera[v] - g.degree(v) for v in g.vertex_ids),
        nbrs=tuple(tuple(sorted(m.items())) for m in mult),
        r=r,
    )


def _direct(P: _Problem, mask: int) -> tuple[int, int]:
    chi = 0
    A = 0
    inner = 0
    for i in range(P.n):
        if mask >> i & 1:
            chi += P.base[i]
            A += P.weight[i]
            inner += sum(k for j, k in P.nbrs[i] if mask >> j & 1)
    return chi + inner // 2, A


class _Accumulator:
    def __init__(self, limit: int):
        self.limit = limit
        self.checked = 0
        self.worst = None  # (chi, A, mask)
        self.viol = []
        self.viol_count = 0
        self.bfail = []
        self.bfail_count = 0

    def _keep(self, lst, item):
        lst.append(item)
        if len(lst) > 2 * self.limit:
            lst.sort()
            del lst[self.limit:]

    def visit(self, P: _Problem, mask: int, chi: int, A: int):
        r = P.r
        chi_r, A_r = r * chi, r * A
        self.checked += 1
        # a-mu(I) = chi_r * D / A_r ; compare with 1 - g without dividing
        if not chi_r * P.denom < (1 - P.genus) * A_r:
            self.viol_count += 1
            self._keep(self.viol, (mask, chi_r, A_r))
        if not chi_r * P.denom <= -P.genus * A_r:
            self.bfail_count += 1
            self._keep(self.bfail, (mask, chi_r, A_r))
        w = self.worst
        if w is None:
            self.worst = (chi_r, A_r, mask)
        else:
            lhs, rhs = chi_r * w[1], w[0] * A_r
            if lhs > rhs or (lhs == rhs and mask < w[2]):
                self.worst = (chi_r, A_r, mask)

    def merge(self, other: _Accumulator):
        self.checked += other.checked
        self.viol_count += other.viol_count
        self.bfail_count += other.bfail_count
        for item in other.viol:
            self._keep(self.viol, item)
        for item in other.bfail:
            self._keep(self.bfail, item)
        if other.worst is not None:
            c, A, mask = other.worst
            if self.worst is None:
                self.worst = other.worst
            else:
                lhs, rhs = c * self.worst[1], self.worst[0] * A
                if lhs > rhs or (lhs == rhs and mask < self.worst[2]):
                    self.worst = other.worst

    def finish(self):
        self.viol.sort()
        del self.viol[self.limit:]
        self.bfail.sort()
        del self.bfail[self.limit:]


def _scan_gray(P: _Problem, lo: int, hi: int, limit: int) -> _Accumulator:
    """Visit the supports with Gray-code indices ``lo <= k < hi``."""
    acc = _Accumulator(limit)
    full = (1 << P.n) - 1
    k = max(lo, 1)
    if k >= hi:
        return acc
    mask = k ^ (k >> 1)
    chi, A = _direct(P, mask)
    while True:
        if mask != full:
            acc.visit(P, mask, chi, A)
        k += 1
        if k >= hi:
            break
        bit = (k & -k).bit_length() - 1
        link = sum(m for j, m in P.nbrs[bit] if mask >> j & 1)
        if mask >> bit & 1:
            mask ^= 1 << bit
            chi -= P.base[bit] + link
            A -= P.weight[bit]
        else:
            chi += P.base[bit] + link
            A += P.weight[bit]
            mask ^= 1 << bit
    return acc


def _scan_masks(P: _Problem, masks, limit: int) -> _Accumulator:
    acc = _Accumulator(limit)
    for mask in masks:
        chi, A = _direct(P, mask)
        acc.visit(P, mask, chi, A)
    return acc


def _scan_gray_job(args):
    return _scan_gray(*args)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("NODALSTAB_WORKERS", "1")))
    except ValueError:
        return 1


def verify_structure_sheaf_stability(
    g: DualGraph,
    a: PolarizationDegree,
    mode: str = "exhaustive",
    *,
    seed: int = 0,
    samples: int = 10000,
    workers: int | None = None,
    cap: int = DEFAULT_CAP,
    rank_multiplier: int = 1,
    record_limit: int = RECORD_LIMIT,
    parallel_min_vertices: int = PARALLEL_MIN_VERTICES,
) -> StabilityReport:
    """Check ``a-mu(I) < 1 - g`` for every (or a sample of) support.

    The non-strict bound ``chi(I) <= -g a-rk(I)`` is evaluated and
    reported on its own; ``stable`` reflects the slope inequality only.
    With ``rank_multiplier = r`` every Euler characteristic and a-rank is
    scaled by ``r``, which models the summands ``I^r`` of ``O^r``.
    """
    _require_loopless_connected(g)
    a.check_graph(g)
    total = genus(g)
    if total < 1:
        raise AssumptionError("genus", "the curve must have genus >= 1")
    if rank_multiplier < 1:
        raise ValueError("rank_multiplier must be positive")
    P = _problem(g, a, rank_multiplier)
    n = P.n
    space = (1 << n) - 2
    workers = default_workers() if workers is None else max(1, workers)

    if mode == "exhaustive":
        if n > cap:
            raise EnumerationCapError(
                f"{n} vertices exceeds the enumeration cap {cap}; use sampled mode"
            )
        end = 1 << n
        if workers > 1 and n >= parallel_min_vertices and space > 0:
            step = -(-end // workers)
            jobs = [(P, lo, min(lo + step, end), record_limit) for lo in range(0, end, step)]
            acc = _Accumulator(record_limit)
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for part in pool.map(_scan_gray_job, jobs):
                    acc.merge(part)
        else:
            acc = _scan_gray(P, 0, end, record_limit)
        mode_label = "exhaustive"
    elif mode == "sampled":
        rng = random.Random(seed)
        if space <= 0:
            masks = []
        elif samples >= space:
            masks = range(1, space + 1)
        else:
            picked = set()
            while len(picked) < samples:
                picked.add(rng.randrange(1, space + 1))
            masks = sorted(picked)
        acc = _scan_masks(P, masks, record_limit)
        mode_label = f"sampled(seed={seed}, count={samples})"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    acc.finish()

    def record(item):
        mask, chi, A = item
        ar = Fraction(A, P.denom)
        return SubsetRecord(mask_support(g, mask), mask, chi, ar, Fraction(chi) / ar)

    worst = None
    if acc.worst is not None:
        c, A, mask = acc.worst
        worst = record((mask, c, A))
    return StabilityReport(
        stable=acc.viol_count == 0,
        mode=mode_label,
        genus=total,
        target_slope=Fraction(1 - total),
        checked=acc.checked,
        worst_case=worst,
        violations=tuple(record(x) for x in acc.viol),
        violation_count=acc.viol_count,
        bound_holds=acc.bfail_count == 0,
        bound_failures=tuple(record(x) for x in acc.bfail),
        bound_failure_count=acc.bfail_count,
        rank_multiplier=rank_multiplier,
    )


def scaling_invariance(g: DualGraph, a: PolarizationDegree, ranks=(1, 2, 3), **kw) -> bool:
    """Semistability of ``O^r`` from stability of ``O``.

    Scaling every rank by ``r`` must leave the verdict and the arg-max
    support of the worst slope unchanged.
    """
    reports = [verify_structure_sheaf_stability(g, a, rank_multiplier=r, **kw) for r in ranks]
    first = reports[0]
    return all(
        rep.stable == first.stable
        and (rep.worst_case is None) == (first.worst_case is None)
        and (rep.worst_case is None or rep.worst_case.mask == first.worst_case.mask)
        and (rep.worst_case is None or rep.worst_case.slope == first.worst_case.slope)
        for rep in reports
    )

"""Euler-characteristic bookkeeping on an oriented tree of components.

The root ``v0`` is a component of genus ``g``; every other vertex is a
rational component. A rank-``r`` depth-1 sheaf restricts to ``F_v`` on each
vertex, and the in-edge of a non-root vertex ``v`` carries the gluing
number ``h_v``. Since ``chi(F) = r(1 - g)``,

    deg F_{v0} = -sum_{v != v0} (deg F_v + r) + sum_{v != v0} h_v.

With ``deg F_v <= -(r - r0_v)``, ``h_v >= r0_v`` and ``deg F_{v0} <= 0``
every term of the right-hand side is non-negative, which forces
``deg F_{v0} = 0``, ``h_v = r0_v`` and ``deg F_v = -(r - r0_v)``.

Unknown values are ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from nodalstab.graph_core import OrientedTree


@dataclass(frozen=True)
class TreeVertexData:
    h: int | None = None
    r0: int | None = None
    deg: int | None = None


@dataclass(frozen=True)
class TreeSheafData:
    tree: OrientedTree
    r: int
    root_degree: int | None = None
    vertex_data: dict[str, TreeVertexData] = field(default_factory=dict)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("rank must be >= 1")
        vd = {v: self.vertex_data.get(v, TreeVertexData()) for v in self.tree.non_root}
        extra = set(self.vertex_data) - set(vd)
        if extra:
            raise ValueError(f"vertex data given for root or unknown vertices {sorted(extra)}")
        for v, x in vd.items():
            for name in ("h", "r0"):
                val = getattr(x, name)
                if val is not None and not 0 <= val <= self.r:
                    raise ValueError(f"vertex {v!r}: {name}={val} outside [0, {self.r}]")
        object.__setattr__(self, "vertex_data", vd)

    def to_json(self) -> dict:
        return {
            "root": self.tree.root,
            "r": self.r,
            "root_degree": self.root_degree,
            "vertices": {
                v: {"h": x.h, "r0": x.r0, "deg": x.deg} for v, x in sorted(self.vertex_data.items())
            },
        }

    @classmethod
    def from_json(cls, tree: OrientedTree, data: Mapping) -> TreeSheafData:
        vd = {
            v: TreeVertexData(x.get("h"), x.get("r0"), x.get("deg"))
            for v, x in data.get("vertices", {}).items()
        }
        return cls(tree, int(data["r"]), data.get("root_degree"), vd)


def root_degree_identity(t: TreeSheafData) -> int:
    missing = [
        v for v, x in t.vertex_data.items() if x.deg is None or x.h is None
    ]
    if missing:
        raise ValueError(f"deg and h must be known at {sorted(missing)}")
    return -sum(x.deg + t.r for x in t.vertex_data.values()) + sum(
        x.h for x in t.vertex_data.values()
    )


def total_euler_char(t: TreeSheafData, g: int) -> int:
    """``sum_v chi(F_v) - sum_e h_e`` with the root of genus ``g``, the rest rational."""
    if t.root_degree is None:
        raise ValueError("root degree unknown")
    root_degree_identity(t)  # validates the vertex data
    chi = t.root_degree + t.r * (1 - g)
    chi += sum(x.deg + t.r for x in t.vertex_data.values())
    return chi - sum(x.h for x in t.vertex_data.values())


@dataclass(frozen=True)
class ForcingResult:
    status: str  # "forced", "contradiction" or "underdetermined"
    root_degree: int | None = None
    h: dict[str, int] = field(default_factory=dict)
    deg: dict[str, int] = field(default_factory=dict)
    violated: str | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "root_degree": self.root_degree,
            "h": dict(sorted(self.h.items())),
            "deg": dict(sorted(self.deg.items())),
            "violated": self.violated,
        }


def infer_forced_values(t: TreeSheafData) -> ForcingResult:
    """Solve the constraint system for the unknown degrees and gluing numbers.

    Each non-root vertex contributes ``h_v - deg_v - r``, bounded below by
    ``h_min - deg_max - r`` with ``h_min = r0_v`` and
    ``deg_max = -(r - r0_v)`` (or the known values). The root degree is
    their sum and must be ``<= 0``.
    """
    r = t.r
    lows = {}
    for v, x in t.vertex_data.items():
        if x.r0 is None:
            raise ValueError(f"r0 unknown at {v!r}")
        if x.r0 > r:
            raise ValueError(f"r0 at {v!r} exceeds the rank")
        deg_cap = min(0, -(r - x.r0))
        if x.h is not None and x.h < x.r0:
            return ForcingResult("contradiction", violated=f"h_{v} >= r0_{v}")
        if x.deg is not None and x.deg > 0:
            return ForcingResult("contradiction", violated=f"deg_{v} <= 0")
        if x.deg is not None and x.deg > deg_cap:
            return ForcingResult("contradiction", violated=f"deg_{v} <= -(r - r0_{v})")
        h_min = x.r0 if x.h is None else x.h
        deg_max = deg_cap if x.deg is None else x.deg
        lows[v] = (h_min, deg_max, h_min - deg_max - r)
    floor = sum(low for _, _, low in lows.values())
    if t.root_degree is not None and t.root_degree > 0:
        return ForcingResult("contradiction", violated="root_degree <= 0")
    ceiling = 0 if t.root_degree is None else t.root_degree
    if floor > ceiling:
        if t.root_degree is None:
            return ForcingResult("contradiction", violated="root_degree <= 0")
        return ForcingResult("contradiction", violated="root degree identity")
    if floor < ceiling:
        return ForcingResult("underdetermined")
    # floor == ceiling: every term sits at its minimum, attained at a single point
    return ForcingResult(
        "forced",
        root_degree=floor,
        h={v: lo[0] for v, lo in lows.items()},
        deg={v: lo[1] for v, lo in lows.items()},
    )


@dataclass(frozen=True)
class MonotonicityReport:
    passes: bool
    failures: tuple[tuple[str, str, str], ...]  # (edge id, source, target)

    def to_json(self) -> dict:
        return {
            "passes": self.passes,
            "failures": [{"edge": e, "source": s, "target": w} for e, s, w in self.failures],
        }


def monotonicity_check(t: TreeSheafData) -> MonotonicityReport:
    """``r0`` weakly increases along every edge leaving a non-root vertex."""
    failures = []
    for w in t.tree.non_root:
        v, e = t.tree.parent[w]
        if v == t.tree.root:
            continue
        rv, rw = t.vertex_data[v].r0, t.vertex_data[w].r0
        if rv is None or rw is None:
            raise ValueError("r0 must be known at every non-root vertex")
        if rv > rw:
            failures.append((e, v, w))
    failures.sort()
    return MonotonicityReport(not failures, tuple(failures))

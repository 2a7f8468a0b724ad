"""Exact combinatorics of sheaf stability on nodal curves.

Dual graphs of semistable curves, polarization degrees, depth-1 sheaf
slopes, stability of the structure sheaf, a dvr filtration comparison,
Frobenius destabilization bounds and tree degree accounting.
"""

from nodalstab.errors import (
    AssumptionError,
    EnumerationCapError,
    GraphError,
    NodalStabError,
)
from nodalstab.graph_core import (
    BridgelessDecomposition,
    DualGraph,
    Edge,
    OrientedTree,
    Vertex,
    bridgeless_decomposition,
    bridges,
    cycle_rank,
    genus,
    is_automorphism,
    orient_tree,
    validate_graph,
)
from nodalstab.polarization import (
    PolarizationDegree,
    check_invariance,
    polarize_bridgeless,
    polarize_general,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionError",
    "BridgelessDecomposition",
    "DualGraph",
    "Edge",
    "EnumerationCapError",
    "GraphError",
    "NodalStabError",
    "OrientedTree",
    "PolarizationDegree",
    "Vertex",
    "bridgeless_decomposition",
    "bridges",
    "check_invariance",
    "cycle_rank",
    "genus",
    "is_automorphism",
    "orient_tree",
    "polarize_bridgeless",
    "polarize_general",
    "validate_graph",
]

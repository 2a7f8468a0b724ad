import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import banana, double_banana, elliptic_pair, theta, three_bridge
from nodalstab.errors import AssumptionError, GraphError
from nodalstab.generators import random_valid_graph
from nodalstab.graph_core import DualGraph, automorphisms, bridges, genus
from nodalstab.polarization import (
    PolarizationDegree,
    check_invariance,
    parse_fraction,
    polarize_bridgeless,
    polarize_general,
)


class TestPolarizationDegree:
    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            PolarizationDegree({"a": F(0), "b": F(1)})

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError, match="sum"):
            PolarizationDegree({"a": F(1, 2), "b": F(1, 3)})

    def test_json_round_trip(self):
        a = PolarizationDegree({"w": F(2, 3), "u": F(1, 3)})
        data = a.to_json()
        assert data == {"u": "1/3", "w": "2/3"}
        assert list(data) == ["u", "w"]
        assert PolarizationDegree.from_json(data) == a

    def test_parse_fraction(self):
        assert parse_fraction("5/12") == F(5, 12)
        assert parse_fraction(3) == F(3)
        assert parse_fraction({"num": 1, "den": 6}) == F(1, 6)
        with pytest.raises(ValueError):
            parse_fraction(0.5)
        with pytest.raises(ValueError):
            parse_fraction("0.5")


class TestBridgeless:
    def test_single_vertex(self):
        for gg in (1, 2, 5):
            a = polarize_bridgeless(DualGraph.build({"c": gg}, []))
            assert a["c"] == 1

    def test_banana(self):
        a = polarize_bridgeless(banana())
        assert a.weights == {"u": F(1, 2), "w": F(1, 2)}

    def test_theta(self):
        a = polarize_bridgeless(theta())
        assert a.weights == {"u": F(1, 2), "w": F(1, 2)}

    def test_asymmetric_hand_value(self):
        # u(2) = v(0) double edge: g = 3, s = 2 each
        g = DualGraph.build({"u": 2, "v": 0}, [("u", "v"), ("u", "v")])
        a = polarize_bridgeless(g)
        # (2 + 1 - 1 + 1/2)/3 and (0 + 1 - 1 + 1/2)/3
        assert a.weights == {"u": F(5, 6), "v": F(1, 6)}

    def test_bridge_rejected(self):
        with pytest.raises(AssumptionError) as exc:
            polarize_bridgeless(three_bridge())
        assert exc.value.label == "iii"

    def test_pendant_rational_rejected(self):
        g = DualGraph.build({"r": 0, "e": 1}, [("r", "e")])
        with pytest.raises(AssumptionError) as exc:
            polarize_bridgeless(g)
        assert exc.value.label == "i"

    def test_loop_rejected(self):
        g = DualGraph.build({"a": 1}, [("a", "a")])
        with pytest.raises(AssumptionError) as exc:
            polarize_bridgeless(g)
        assert exc.value.label == "ii"

    def test_genus_zero_rejected(self):
        g = DualGraph.build({"a": 0}, [])
        with pytest.raises(AssumptionError):
            polarize_bridgeless(g)

    def test_disconnected_rejected(self):
        g = DualGraph.build({"a": 1, "b": 1}, [])
        with pytest.raises(GraphError):
            polarize_bridgeless(g)


class TestGeneral:
    def test_bridge_free_matches_bridgeless(self):
        for g in (banana(), theta()):
            for N in (genus(g) + 1, 7):
                assert polarize_general(g, N) == polarize_bridgeless(g)

    def test_elliptic_pair(self):
        a = polarize_general(elliptic_pair())
        assert a.weights == {"x": F(1, 2), "y": F(1, 2)}

    def test_three_bridge(self):
        a = polarize_general(three_bridge(), 3)
        assert a.weights == {"u": F(5, 12), "v": F(1, 6), "w": F(5, 12)}

    def test_three_bridge_default_n(self):
        # N = g + 1 = 3 is the default
        assert polarize_general(three_bridge()) == polarize_general(three_bridge(), 3)

    def test_n_must_exceed_genus(self):
        with pytest.raises(ValueError, match="N must exceed genus"):
            polarize_general(three_bridge(), 2)

    def test_double_banana(self):
        # two genus-1 pieces of two vertices each, s = 0: a_v = (1/2) * (1/2)
        a = polarize_general(double_banana())
        assert set(a.weights.values()) == {F(1, 4)}

    @given(st.integers(0, 2**32 - 1), st.sampled_from(["g+1", "10g", "g+7"]))
    @settings(max_examples=150, deadline=None)
    def test_random_sum_and_positivity(self, seed, which):
        g = random_valid_graph(random.Random(seed), 7, 11)
        gg = genus(g)
        N = {"g+1": gg + 1, "10g": 10 * gg if gg > 1 else 11, "g+7": gg + 7}[which]
        a = polarize_general(g, N)
        assert sum(a.weights.values()) == 1
        assert all(x > 0 for x in a.weights.values())
        if not bridges(g):
            b = polarize_bridgeless(g)
            assert all(gg * x >= F(1, len(g.vertices)) for x in b.weights.values())

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_relabeling_determinism(self, seed):
        rng = random.Random(seed)
        g = random_valid_graph(rng, 6, 9)
        ids = list(g.vertex_ids)
        shuffled = ids[:]
        rng.shuffle(shuffled)
        vmap = dict(zip(ids, [f"x{v}" for v in shuffled]))
        h = g.relabel(vmap)
        # reorder vertices and edges too
        from nodalstab.graph_core import DualGraph as DG

        h = DG(tuple(sorted(h.vertices, key=lambda v: v.id)), tuple(reversed(h.edges)))
        a, b = polarize_general(g), polarize_general(h)
        assert all(a[v] == b[vmap[v]] for v in ids)


class TestInvariance:
    def test_banana_swap(self):
        g = banana()
        a = polarize_bridgeless(g)
        assert check_invariance(g, a, {"u": "w", "w": "u"})

    def test_three_bridge_swap(self):
        g = three_bridge()
        a = polarize_general(g, 3)
        assert check_invariance(g, a, {"u": "w", "v": "v", "w": "u"})

    def test_non_automorphism_raises(self):
        g = three_bridge()
        a = polarize_general(g, 3)
        with pytest.raises(GraphError):
            check_invariance(g, a, {"u": "v", "v": "u", "w": "w"})

    def test_detects_non_invariant_weights(self):
        g = banana()
        a = PolarizationDegree({"u": F(1, 4), "w": F(3, 4)})
        assert not check_invariance(g, a, {"u": "w", "w": "u"})

    def test_cycle_of_bananas(self):
        # vertex-transitive: 4 rational vertices in a ring of double edges
        pairs = []
        for i in range(4):
            pairs += [(f"v{i}", f"v{(i+1)%4}")] * 2
        g = DualGraph.build({f"v{i}": 0 for i in range(4)}, pairs)
        a = polarize_bridgeless(g)
        for sigma in automorphisms(g):
            assert check_invariance(g, a, sigma)

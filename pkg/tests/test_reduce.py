import random

import pytest
from hypothesis import given, settings

from cliquehomotopy.cliques import clique_graph, contains_induced_octahedron, triangles_in_unique_cliques
from cliquehomotopy.errors import InvalidCertificate, TraceCorruptionError
from cliquehomotopy.graph import (
    Graph,
    bits,
    complete,
    cycle,
    is_isomorphic,
    is_low_degree,
    mask,
    octahedron,
    path,
    sun3,
)
from cliquehomotopy.homology import homotopy_signature
from cliquehomotopy.reduce import (
    RemoveDominatedVertex,
    RemoveEdge,
    RemoveTwinClass,
    ReductionTrace,
    apply_move,
    build_h_clique_level,
    build_h_invariance,
    dismantle,
    hash_retract,
    is_dismantlable_exhaustive,
    low_degree_reduce,
    removable_edges,
    replay,
)

from oracles import random_graph
from test_cliques import FIG2
from test_graph import graphs

TWO_K4 = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2)] + [(v, w) for v in (3, 4) for w in (0, 1, 2)])


class TestMoves:
    def test_removable_edges(self):
        assert removable_edges(complete(3)) == [(0, 1), (0, 2), (1, 2)]
        assert removable_edges(cycle(4)) == []
        assert len(removable_edges(complete(4))) == 6

    def test_apply_rejects_unjustified(self):
        with pytest.raises(ValueError):
            apply_move(cycle(5), RemoveDominatedVertex(0, 1))
        with pytest.raises(ValueError):
            apply_move(cycle(4), RemoveEdge(0, 1))
        with pytest.raises(ValueError):
            apply_move(cycle(4), RemoveTwinClass(0, (1,)))

    def test_twin_class(self):
        h = apply_move(TWO_K4, RemoveTwinClass(0, (1, 2)))
        assert is_isomorphic(h, path(3))

    @settings(max_examples=120, deadline=None)
    @given(graphs(max_n=8))
    def test_single_moves_preserve_signature(self, g):
        sig = homotopy_signature(g)
        for x in range(g.n):
            for y in bits(g.adj[x]):
                if g.closed(x) & ~g.closed(y) == 0:
                    assert homotopy_signature(apply_move(g, RemoveDominatedVertex(x, y))) == sig
        for u, v in removable_edges(g):
            assert homotopy_signature(apply_move(g, RemoveEdge(u, v))) == sig


class TestTrace:
    def test_text_round_trip(self):
        red = low_degree_reduce(sun3())
        text = red.trace.to_text()
        assert text.startswith("trace 6 9 ")
        back = ReductionTrace.from_text(text)
        assert back.moves == [RemoveEdge(m.u, m.v) for m in red.trace.moves]
        assert replay(back) == red.graph

    def test_twinclass_line(self):
        t = ReductionTrace(TWO_K4, [RemoveTwinClass(0, (1, 2))])
        t.final = replay(t)
        assert "twinclass 0 1 2" in t.to_text()
        assert replay(ReductionTrace.from_text(t.to_text())) == t.final

    def test_replay_examples(self):
        assert replay(dismantle(complete(5)).trace) == complete(1)
        assert replay(low_degree_reduce(cycle(7)).trace) == cycle(7)

    def test_tampered(self):
        trace = ReductionTrace(complete(3), [RemoveEdge(0, 1), RemoveEdge(0, 1)])
        with pytest.raises(TraceCorruptionError) as info:
            replay(trace)
        assert info.value.index == 1

    def test_wrong_final(self):
        trace = dismantle(complete(4)).trace
        trace.final = complete(2)
        with pytest.raises(TraceCorruptionError):
            replay(trace)


class TestDismantle:
    def test_examples(self):
        d = dismantle(complete(5))
        assert d.core == complete(1) and d.dismantlable
        d = dismantle(cycle(5))
        assert d.core == cycle(5) and not d.dismantlable and d.trace.moves == []
        d = dismantle(sun3())
        assert d.dismantlable
        assert d.trace.moves[0] == RemoveDominatedVertex(3, 0)
        assert len(d.trace.moves) == 5 and d.core == complete(1)

    @settings(max_examples=150)
    @given(graphs(max_n=7))
    def test_greedy_matches_exhaustive(self, g):
        assert dismantle(g).dismantlable == is_dismantlable_exhaustive(g)


class TestHashRetract:
    def test_examples(self):
        h, cert = hash_retract(complete(4), 1, {1: 0, 2: 0, 3: 0})
        assert h == complete(1)
        h, _ = hash_retract(sun3(), sun3().vertices, {})
        assert h == sun3()
        with pytest.raises(InvalidCertificate, match="vertex 4"):
            hash_retract(cycle(5), mask([0, 1, 2, 3]), {4: 0})

    def test_dominator_must_be_kept(self):
        with pytest.raises(InvalidCertificate, match="not kept"):
            hash_retract(complete(3), 1, {1: 2, 2: 0})


class TestBuildH:
    def test_invariance_examples(self):
        assert build_h_invariance(cycle(5))[0] == cycle(5)
        assert build_h_invariance(sun3())[0] == sun3()
        h, cert = build_h_invariance(TWO_K4)
        assert bits(cert.kept) == [0, 3, 4] and cert.dominators == {1: 0, 2: 0}
        assert is_isomorphic(h, path(3))

    def test_invariance_requires_low_degree(self):
        with pytest.raises(ValueError):
            build_h_invariance(octahedron(3))

    def test_clique_level_examples(self):
        h, cert = build_h_clique_level(sun3())
        assert h == complete(3)
        assert bits(cert.kept) == [1, 2, 3]
        h, _ = build_h_clique_level(cycle(6))
        assert h == clique_graph(cycle(6)).kg

    def test_clique_level_shared_edge(self):
        # two internal triangles {0,1,2} and {0,1,3} share the edge 01: one survives
        h, cert = build_h_clique_level(FIG2)
        assert cert.dominators == {1: 0}
        assert h.n == 5
        assert homotopy_signature(h) == homotopy_signature(clique_graph(FIG2).kg)

    @settings(max_examples=150, deadline=None)
    @given(graphs(max_n=8))
    def test_constructions_on_random_low_degree(self, g):
        if not is_low_degree(g):
            return
        h4, _ = build_h_invariance(g)
        h5, _ = build_h_clique_level(g)
        for h in (h4, h5):
            assert triangles_in_unique_cliques(h) and not contains_induced_octahedron(h)
        assert homotopy_signature(h4) == homotopy_signature(g)
        assert homotopy_signature(h5) == homotopy_signature(clique_graph(g).kg)


class TestWedge:
    def test_k5(self):
        red = low_degree_reduce(complete(5))
        assert red.graph == complete(1) and red.wedge_count == 0
        assert replay(red.trace) == complete(1)

    def test_sun(self):
        red = low_degree_reduce(sun3())
        assert red.wedge_count == 0
        assert red.graph.m == red.graph.n - 1 and red.graph.is_connected()

    def test_cycle(self):
        red = low_degree_reduce(cycle(7))
        assert red.graph == cycle(7) and red.wedge_count == 1 and red.trace.moves == []

    def test_rejects_octahedron(self):
        with pytest.raises(ValueError):
            low_degree_reduce(octahedron(3))

    def test_random_low_degree(self):
        rng = random.Random(11)
        seen = 0
        while seen < 150:
            g = random_graph(rng, rng.randint(1, 10), rng.uniform(0.2, 0.6))
            if not is_low_degree(g):
                continue
            seen += 1
            red = low_degree_reduce(g)
            out = red.graph
            assert out.is_connected()
            assert not any(out.adj[u] & out.adj[v] for u, v in out.edges())
            sig = homotopy_signature(g)
            assert len(sig.betti) <= 2
            assert red.wedge_count == (sig.betti[1] if len(sig.betti) > 1 else 0)
            assert replay(red.trace) == out

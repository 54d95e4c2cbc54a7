import pytest
from hypothesis import given, settings

from cliquehomotopy.errors import EmptyGraphError, SimplexBudgetExceeded
from cliquehomotopy.graph import Graph, complete, cycle, octahedron, sun3
from cliquehomotopy.homology import (
    HomotopySignature,
    betti_gf2,
    clique_complex,
    euler_characteristic,
    gf2_rank,
    homotopy_signature,
)

from oracles import brute_betti, complete_subsets, component_count, gf2_rank_dense
from test_graph import graphs


class TestComplex:
    @pytest.mark.parametrize(
        "g, f",
        [(complete(3), (3, 3, 1)), (octahedron(3), (6, 12, 8)), (cycle(5), (5, 5))],
    )
    def test_f_vector(self, g, f):
        assert clique_complex(g).f_vector() == f

    def test_cap(self):
        assert clique_complex(complete(4), max_dim=3).f_vector() == (4, 6, 4, 1)
        with pytest.raises(ValueError, match="truncate"):
            clique_complex(complete(4), max_dim=2)

    def test_budget_refusal(self):
        with pytest.raises(SimplexBudgetExceeded):
            homotopy_signature(complete(12), budget=1000)

    def test_empty(self):
        with pytest.raises(EmptyGraphError):
            clique_complex(Graph.empty(0))

    @given(graphs(max_n=8))
    def test_downward_closed_and_complete(self, g):
        cx = clique_complex(g)
        assert cx.faces[0] == tuple(1 << v for v in range(g.n))
        present = {s for fs in cx.faces for s in fs}
        for fs in cx.faces[1:]:
            for s in fs:
                t = s
                while t:
                    low = t & -t
                    assert s & ~low in present
                    t ^= low
        assert len(present) == len(complete_subsets(g))


class TestBetti:
    def test_euler(self):
        assert euler_characteristic(clique_complex(octahedron(3))) == 2
        assert euler_characteristic(clique_complex(cycle(5))) == 0
        assert euler_characteristic(clique_complex(complete(4))) == 1

    def test_spheres(self):
        assert homotopy_signature(octahedron(3)) == HomotopySignature(2, (1, 0, 1))
        assert homotopy_signature(octahedron(4)) == HomotopySignature(0, (1, 0, 0, 1))
        assert homotopy_signature(cycle(5)).betti == (1, 1)

    def test_signatures(self):
        assert homotopy_signature(complete(5)).betti == (1,)
        assert homotopy_signature(sun3()) == HomotopySignature(1, (1,))
        assert homotopy_signature(Graph.empty(2)).betti == (2,)

    def test_format(self):
        s = homotopy_signature(cycle(7))
        assert str(s) == "chi=0 betti=1,1"
        assert HomotopySignature.parse(str(s)) == s

    def test_rank(self):
        assert gf2_rank([0b011, 0b110, 0b101]) == 2
        assert gf2_rank([]) == 0

    @settings(max_examples=150)
    @given(graphs(max_n=8))
    def test_matches_dense_elimination(self, g):
        sig = homotopy_signature(g)
        assert sig.betti == brute_betti(g)
        assert sig.euler == sum((-1) ** i * b for i, b in enumerate(sig.betti))
        assert sig.betti[0] == component_count(g)

    @given(graphs(max_n=9))
    def test_triangle_free_connected(self, g):
        if g.is_connected() and not any(g.adj[u] & g.adj[v] for u, v in g.edges()):
            b1 = g.m - g.n + 1
            assert homotopy_signature(g).betti == ((1, b1) if b1 else (1,))

    def test_rank_against_dense(self):
        import random

        rng = random.Random(3)
        for _ in range(50):
            rows = [rng.getrandbits(12) for _ in range(rng.randint(1, 10))]
            dense = [[r >> c & 1 for c in range(12)] for r in rows]
            assert gf2_rank(rows) == gf2_rank_dense(dense)


def test_betti_of_built_complex():
    cx = clique_complex(octahedron(2))
    assert betti_gf2(cx) == HomotopySignature(0, (1, 1))

"""Brute-force reference implementations used only by the tests.

They work on plain Python sets and itertools, sharing no code with the
bit-mask implementations they check.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

from cliquehomotopy.graph import Graph


def adjacency_sets(g: Graph) -> list[set[int]]:
    return [{u for u in range(g.n) if g.adj[v] >> u & 1} for v in range(g.n)]


def complete_subsets(g: Graph) -> list[frozenset[int]]:
    nb = adjacency_sets(g)
    out = []
    for k in range(1, g.n + 1):
        for s in combinations(range(g.n), k):
            if all(b in nb[a] for a, b in combinations(s, 2)):
                out.append(frozenset(s))
    return out


def brute_maximal_cliques(g: Graph) -> list[frozenset[int]]:
    comp = complete_subsets(g)
    comp_set = set(comp)
    out = [c for c in comp if not any(c | {v} in comp_set for v in range(g.n) if v not in c)]
    return sorted(out, key=sorted)


def brute_clique_graph(g: Graph) -> tuple[list[set[int]], list[frozenset[int]]]:
    cl = brute_maximal_cliques(g)
    adj = [{j for j in range(len(cl)) if j != i and cl[i] & cl[j]} for i in range(len(cl))]
    return adj, cl


def graph_from_sets(adj: list[set[int]]) -> Graph:
    return Graph.from_edges(len(adj), [(i, j) for i in range(len(adj)) for j in adj[i] if i < j])


def brute_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    eg = {frozenset(e) for e in g.edges()}
    eh = {frozenset(e) for e in h.edges()}
    for p in permutations(range(g.n)):
        if {frozenset((p[a], p[b])) for a, b in eg} == eh:
            return True
    return False


def gf2_rank_dense(matrix: list[list[int]]) -> int:
    rows = [r[:] for r in matrix]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def brute_betti(g: Graph) -> tuple[int, ...]:
    """Mod-2 Betti numbers from dense boundary matrices, trailing zeros trimmed."""
    simp = complete_subsets(g)
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for s in simp:
        by_dim.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
    top = max(by_dim)
    ranks = {0: 0, top + 1: 0}
    for d in range(1, top + 1):
        lower = {s: i for i, s in enumerate(by_dim[d - 1])}
        mat = []
        for s in by_dim[d]:
            row = [0] * len(lower)
            for f in combinations(s, d):
                row[lower[f]] = 1
            mat.append(row)
        ranks[d] = gf2_rank_dense(mat)
    betti = [len(by_dim[d]) - ranks[d] - ranks[d + 1] for d in range(top + 1)]
    while len(betti) > 1 and betti[-1] == 0:
        betti.pop()
    return tuple(betti)


def component_count(g: Graph) -> int:
    nb = adjacency_sets(g)
    seen: set[int] = set()
    count = 0
    for s in range(g.n):
        if s in seen:
            continue
        count += 1
        stack = [s]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(nb[v] - seen)
    return count


def graph6_by_hand(g: Graph) -> str:
    """graph6 for n < 63 written directly from the format description."""
    assert g.n < 63
    bitstring = "".join("1" if g.has_edge(i, j) else "0" for j in range(1, g.n) for i in range(j))
    bitstring += "0" * (-len(bitstring) % 6)
    return chr(63 + g.n) + "".join(chr(63 + int(bitstring[k:k + 6], 2)) for k in range(0, len(bitstring), 6))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])

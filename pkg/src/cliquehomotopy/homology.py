"""Clique complexes and their mod-2 homology.

This module is the independent check on every homotopy claim: it never looks
at reductions or clique graphs, only at the complete subgraphs of a graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyGraphError, SimplexBudgetExceeded
from .graph import Graph, bits

DEFAULT_SIMPLEX_BUDGET = 2_000_000


@dataclass(frozen=True)
class SimplicialComplex:
    # faces[d] holds the d-simplices as vertex masks, lexicographically ordered
    faces: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self.faces)


@dataclass(frozen=True)
class HomotopySignature:
    euler: int
    betti: tuple[int, ...]

    def __str__(self) -> str:
        return f"chi={self.euler} betti={','.join(map(str, self.betti))}"

    @classmethod
    def parse(cls, text: str) -> HomotopySignature:
        chi, betti = text.split()
        return cls(int(chi.removeprefix("chi=")), tuple(int(b) for b in betti.removeprefix("betti=").split(",")))

    def is_wedge_of_circles(self) -> bool:
        return len(self.betti) <= 2 and self.betti[0] == 1


def _clique_number(g: Graph) -> int:
    # branch and bound over vertices in index order
    best = 1
    adj = g.adj

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if not cand:
            best = max(best, size)
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            grow(size + 1, cand & adj[v])

    grow(0, g.vertices)
    return best


def clique_complex(g: Graph, max_dim: int | None = None, budget: int = DEFAULT_SIMPLEX_BUDGET) -> SimplicialComplex:
    """All complete subgraphs of ``g`` grouped by dimension.

    A ``max_dim`` below ``omega(g) - 1`` is refused rather than truncating,
    and so is a complex with more than ``budget`` simplices.
    """
    if g.n == 0:
        raise EmptyGraphError("clique complex of the graph with no vertices")
    if max_dim is not None:
        omega = _clique_number(g)
        if max_dim < omega - 1:
            raise ValueError(f"max_dim={max_dim} would truncate: the complex has dimension {omega - 1}")
    adj = g.adj
    layers: list[list[int]] = [[1 << v for v in range(g.n)]]
    # each simplex carries its common-neighbour candidates above its top vertex
    frontier = [(1 << v, adj[v] >> (v + 1) << (v + 1)) for v in range(g.n)]
    total = g.n
    while frontier:
        nxt = []
        for s, cand in frontier:
            while cand:
                low = cand & -cand
                cand ^= low
                v = low.bit_length() - 1
                nxt.append((s | low, cand & adj[v]))
        if not nxt:
            break
        total += len(nxt)
        if total > budget:
            raise SimplexBudgetExceeded(f"clique complex exceeds {budget} simplices")
        layers.append(sorted((s for s, _ in nxt), key=bits))
        frontier = nxt
    return SimplicialComplex(tuple(tuple(layer) for layer in layers))


def euler_characteristic(cx: SimplicialComplex) -> int:
    return sum((-1) ** d * len(fs) for d, fs in enumerate(cx.faces))


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of a matrix whose rows are bit masks."""
    pivots: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = r
                rank += 1
                break
            r ^= p
    return rank


def boundary_rows(cx: SimplicialComplex, d: int) -> list[int]:
    """Boundary of each d-simplex as a mask over the (d-1)-simplices."""
    index = {s: i for i, s in enumerate(cx.faces[d - 1])}
    rows = []
    for s in cx.faces[d]:
        row = 0
        for v in bits(s):
            row |= 1 << index[s & ~(1 << v)]
        rows.append(row)
    return rows


def betti_gf2(cx: SimplicialComplex) -> HomotopySignature:
    ranks = [0] + [gf2_rank(boundary_rows(cx, d)) for d in range(1, len(cx.faces))] + [0]
    betti = [len(fs) - ranks[d] - ranks[d + 1] for d, fs in enumerate(cx.faces)]
    while len(betti) > 1 and betti[-1] == 0:
        betti.pop()
    return HomotopySignature(euler_characteristic(cx), tuple(betti))


def homotopy_signature(g: Graph, budget: int = DEFAULT_SIMPLEX_BUDGET) -> HomotopySignature:
    return betti_gf2(clique_complex(g, budget=budget))

"""Homotopy-preserving reductions: dominated vertices, removable edges, twins.

Moves name vertices by their index in the graph the move is applied to, so a
trace is replayed move by move from its initial graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .cliques import (
    clique_graph,
    contains_induced_octahedron,
    find_triangle_in_two_cliques,
    internal_triangles,
    maximal_cliques,
)
from .errors import EmptyGraphError, InvalidCertificate, InvariantViolation, TraceCorruptionError
from .graph import (
    Graph,
    bits,
    from_graph6,
    induced,
    is_dominated,
    is_low_degree,
    octahedron_order,
    remove_edge,
    remove_vertex,
    to_graph6,
)


# --- moves ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RemoveDominatedVertex:
    x: int
    dominator: int

    def to_line(self) -> str:
        return f"dom {self.x} {self.dominator}"


@dataclass(frozen=True)
class RemoveEdge:
    u: int
    v: int
    closed_edge_neighborhood: int = 0

    def to_line(self) -> str:
        return f"edge {self.u} {self.v}"


@dataclass(frozen=True)
class RemoveTwinClass:
    kept: int
    removed: tuple[int, ...]

    def to_line(self) -> str:
        return "twinclass " + " ".join(map(str, (self.kept, *self.removed)))


Move = RemoveDominatedVertex | RemoveEdge | RemoveTwinClass


def is_removable_edge(g: Graph, u: int, v: int) -> bool:
    """``{u, v}`` is properly inside ``N[e]`` and ``N[e]`` is complete."""
    if not g.has_edge(u, v):
        return False
    ne = g.edge_closed(u, v)
    return ne != (1 << u) | (1 << v) and g.is_complete_set(ne)


def removable_edges(g: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u, v in g.edges() if is_removable_edge(g, u, v)]


def apply_move(g: Graph, move: Move) -> Graph:
    """Apply ``move`` after re-checking that it is justified in ``g``."""
    if isinstance(move, RemoveDominatedVertex):
        x, y = move.x, move.dominator
        if not (0 <= x < g.n and 0 <= y < g.n) or x == y:
            raise ValueError(f"bad vertices for domination: {x}, {y}")
        if not is_dominated(g, x, y):
            raise ValueError(f"{x} is not dominated by {y}")
        return remove_vertex(g, x)[0]
    if isinstance(move, RemoveEdge):
        u, v = move.u, move.v
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise ValueError(f"no edge {{{u}, {v}}}")
        if not is_removable_edge(g, u, v):
            raise ValueError(f"edge {{{u}, {v}}} is not removable")
        return remove_edge(g, u, v)
    if isinstance(move, RemoveTwinClass):
        k = move.kept
        if not 0 <= k < g.n:
            raise ValueError(f"vertex {k} out of range")
        drop = 0
        for r in move.removed:
            if not 0 <= r < g.n or r == k or g.closed(r) != g.closed(k):
                raise ValueError(f"{r} is not a twin of {k}")
            drop |= 1 << r
        return induced(g, g.vertices & ~drop)[0]
    raise TypeError(f"unknown move {move!r}")


def parse_move(line: str) -> Move:
    parts = line.split()
    try:
        nums = [int(p) for p in parts[1:]]
    except ValueError:
        raise ValueError(f"non-integer field in {line!r}") from None
    if parts and parts[0] == "dom" and len(nums) == 2:
        return RemoveDominatedVertex(*nums)
    if parts and parts[0] == "edge" and len(nums) == 2:
        return RemoveEdge(*nums)
    if parts and parts[0] == "twinclass" and len(nums) >= 2:
        return RemoveTwinClass(nums[0], tuple(nums[1:]))
    raise ValueError(f"unrecognised move {line!r}")


@dataclass
class ReductionTrace:
    initial: Graph
    moves: list[Move] = field(default_factory=list)
    final: Graph | None = None

    def to_text(self) -> str:
        g = self.initial
        lines = [f"trace {g.n} {g.m} {to_graph6(g)}"]
        lines += [mv.to_line() for mv in self.moves]
        lines.append(f"final {to_graph6(self.final if self.final is not None else g)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> ReductionTrace:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if len(lines) < 2 or not lines[0].startswith("trace ") or not lines[-1].startswith("final "):
            raise ValueError("trace must start with 'trace' and end with 'final'")
        head = lines[0].split()
        if len(head) != 4:
            raise ValueError("trace header is 'trace <n> <m> <graph6>'")
        initial = from_graph6(head[3])
        if (initial.n, initial.m) != (int(head[1]), int(head[2])):
            raise ValueError("trace header sizes disagree with its graph6")
        moves = [parse_move(ln) for ln in lines[1:-1]]
        return cls(initial, moves, from_graph6(lines[-1].split()[1]))


class _Recorder:
    def __init__(self, g: Graph):
        self.graph = g
        self.trace = ReductionTrace(g)

    def apply(self, move: Move) -> None:
        self.graph = apply_move(self.graph, move)
        self.trace.moves.append(move)

    def finish(self) -> ReductionTrace:
        self.trace.final = self.graph
        return self.trace


def replay(trace: ReductionTrace) -> Graph:
    g = trace.initial
    for i, mv in enumerate(trace.moves):
        try:
            g = apply_move(g, mv)
        except ValueError as exc:
            raise TraceCorruptionError(i, str(exc)) from None
    if trace.final is not None and g != trace.final:
        raise TraceCorruptionError(len(trace.moves), "replayed graph differs from the recorded final graph")
    return g


# --- dismantling ---------------------------------------------------------------------


class Dismantling(NamedTuple):
    core: Graph
    trace: ReductionTrace
    dismantlable: bool


def _first_domination(g: Graph) -> tuple[int, int] | None:
    for x in range(g.n):
        cx = g.closed(x)
        for y in bits(g.adj[x]):
            if cx & ~g.closed(y) == 0:
                return x, y
    return None


def dismantle(g: Graph) -> Dismantling:
    """Greedily strip the smallest dominated vertex (by its smallest dominator)."""
    if g.n == 0:
        raise EmptyGraphError("cannot dismantle the graph with no vertices")
    rec = _Recorder(g)
    while (pair := _first_domination(rec.graph)) is not None:
        rec.apply(RemoveDominatedVertex(*pair))
    core = rec.graph
    return Dismantling(core, rec.finish(), core.n == 1)


def is_dismantlable_exhaustive(g: Graph) -> bool:
    """Search every removal order; only for small graphs."""
    if g.n == 0:
        raise EmptyGraphError("cannot dismantle the graph with no vertices")
    adj = g.adj

    @lru_cache(maxsize=None)
    def ok(s: int) -> bool:
        if s.bit_count() == 1:
            return True
        for x in bits(s):
            cx = (adj[x] | (1 << x)) & s
            for y in bits(adj[x] & s):
                if cx & ~(adj[y] | (1 << y)) == 0 and ok(s & ~(1 << x)):
                    return True
        return False

    return ok(g.vertices)


# --- retractions -------------------------------------------------------------------


@dataclass(frozen=True)
class HashRetraction:
    source: Graph
    kept: int
    dominators: dict[int, int]

    def validate(self) -> None:
        g = self.source
        if not self.kept:
            raise InvalidCertificate("kept set is empty")
        if self.kept & ~g.vertices:
            raise InvalidCertificate("kept set has vertices outside the graph")
        for v in bits(g.vertices & ~self.kept):
            d = self.dominators.get(v)
            if d is None:
                raise InvalidCertificate(f"vertex {v} has no dominator")
            if not 0 <= d < g.n or not self.kept >> d & 1:
                raise InvalidCertificate(f"dominator {d} of vertex {v} is not kept")
            if not is_dominated(g, v, d):
                raise InvalidCertificate(f"vertex {v} is not dominated by {d}")


def hash_retract(g: Graph, kept: int, dominators: dict[int, int]) -> tuple[Graph, HashRetraction]:
    """Induced subgraph on ``kept``, certified by dominations in ``g`` itself."""
    cert = HashRetraction(g, kept, dict(dominators))
    cert.validate()
    return induced(g, kept)[0], cert


def _check_h(h: Graph, where: str) -> None:
    t = find_triangle_in_two_cliques(h)
    if t is not None:
        raise InvariantViolation(f"{where}: triangle {bits(t)} lies in two cliques of H")
    if contains_induced_octahedron(h):
        raise InvariantViolation(f"{where}: H contains an induced octahedron")


def _require_low_degree(g: Graph) -> None:
    if not is_low_degree(g):
        raise ValueError("input is not a low degree graph")


def build_h_invariance(g: Graph) -> tuple[Graph, HashRetraction]:
    """Drop two vertices of every triangle that lies in two cliques of ``g``.

    In a low degree graph such a triangle is a class of three mutual twins;
    its smallest vertex is kept and dominates the other two.
    """
    _require_low_degree(g)
    cliques = maximal_cliques(g)
    kept = g.vertices
    dominators: dict[int, int] = {}
    classes: dict[int, int] = {}
    for v in range(g.n):
        classes[g.closed(v)] = classes.get(g.closed(v), 0) | (1 << v)
    for cls in classes.values():
        if cls.bit_count() < 3:
            continue
        for a, b, c in _triples(cls):
            t = (1 << a) | (1 << b) | (1 << c)
            if sum(1 for q in cliques if q & t == t) >= 2:
                keep = bits(cls)[0]
                for v in bits(cls)[1:]:
                    dominators[v] = keep
                    kept &= ~(1 << v)
                break
    h, cert = hash_retract(g, kept, dominators)
    _check_h(h, "twin reduction of G")
    return h, cert


def _triples(s: int):
    vs = bits(s)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            for k in range(j + 1, len(vs)):
                yield vs[i], vs[j], vs[k]


def build_h_clique_level(g: Graph) -> tuple[Graph, HashRetraction]:
    """Retract K(g) by removing internal triangles of ``g``.

    Internal triangles that share an edge are twins in K(g); one per
    connected class survives.  A lone internal triangle is dominated in K(g)
    by one of its ears and is removed.
    """
    _require_low_degree(g)
    res = clique_graph(g)
    kg, labels = res.kg, res.labels
    index = {q: i for i, q in enumerate(labels)}
    tris = [index[t] for t in internal_triangles(g)]

    parent = {i: i for i in tris}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(len(tris)):
        for b in range(a + 1, len(tris)):
            if (labels[tris[a]] & labels[tris[b]]).bit_count() == 2:
                ra, rb = find(tris[a]), find(tris[b])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in tris:
        groups.setdefault(find(i), []).append(i)

    kept = kg.vertices
    dominators: dict[int, int] = {}
    for members in groups.values():
        members.sort()
        if len(members) >= 2:
            for i in members[1:]:
                dominators[i] = members[0]
                kept &= ~(1 << i)
            continue
        (t,) = members
        ears = [j for j, q in enumerate(labels) if j != t and (q & labels[t]).bit_count() >= 2]
        for j in ears:
            if is_dominated(kg, t, j):
                dominators[t] = j
                kept &= ~(1 << t)
                break
        else:
            raise InvariantViolation(f"no ear dominates the internal triangle {bits(labels[t])} in K(G)")
    h, cert = hash_retract(kg, kept, dominators)
    _check_h(h, "internal-triangle reduction of K(G)")
    return h, cert


# --- wedge of circles --------------------------------------------------------------------


class WedgeReduction(NamedTuple):
    graph: Graph
    trace: ReductionTrace
    wedge_count: int


def _four_clique_move(g: Graph, q: int) -> RemoveDominatedVertex | RemoveEdge:
    vs = bits(q)
    for v in vs:
        if g.adj[v] & ~q == 0:
            return RemoveDominatedVertex(v, next(u for u in vs if u != v))
    for i, x in enumerate(vs):
        for y in vs[i + 1:]:
            if g.adj[x] & g.adj[y] & ~q:
                return RemoveDominatedVertex(x, y)
    return RemoveEdge(vs[0], vs[1], q)


def _check_not_octahedron(g: Graph) -> None:
    if octahedron_order(g) == 3:
        raise InvariantViolation("reduction produced the octahedron")


def low_degree_reduce(g: Graph) -> WedgeReduction:
    """Reduce a low degree graph to a homotopy equivalent triangle-free graph.

    ``wedge_count`` is the cycle rank ``m - n + 1`` of the result, i.e. the
    number of circles in the wedge.
    """
    _require_low_degree(g)
    rec = _Recorder(g)
    if any(q.bit_count() >= 5 for q in maximal_cliques(g)):
        if g.n != 5 or g.m != 10:
            raise InvariantViolation("a low degree graph with a 5-clique must be K_5")
        while rec.graph.n > 1:
            rec.apply(RemoveDominatedVertex(0, 1))
        return WedgeReduction(rec.graph, rec.finish(), 0)

    while True:
        fours = [q for q in maximal_cliques(rec.graph) if q.bit_count() == 4]
        if not fours:
            break
        rec.apply(_four_clique_move(rec.graph, fours[0]))
        _check_not_octahedron(rec.graph)

    while True:
        h = rec.graph
        with_triangle = [(u, v) for u, v in h.edges() if h.adj[u] & h.adj[v]]
        if not with_triangle:
            break
        for u, v in with_triangle:
            ne = h.edge_closed(u, v)
            if ne.bit_count() == 3:
                rec.apply(RemoveEdge(u, v, ne))
                break
        else:
            raise InvariantViolation("every triangle is internal but the graph is not the octahedron")
        _check_not_octahedron(rec.graph)

    out = rec.graph
    if not out.is_connected():
        raise InvariantViolation("reduction disconnected the graph")
    return WedgeReduction(out, rec.finish(), out.m - out.n + 1)

"""Maximal cliques, the clique graph operator, Helly testing and neckties.

Throughout, "clique" means a *maximal* complete subgraph.  Cliques of a graph
are bit masks over its vertices; vertices of the clique graph are indices
into the canonical clique list, so a set of cliques is again a bit mask.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

from .errors import EmptyGraphError, InvariantViolation
from .graph import Graph, bits, is_isomorphic, is_low_degree, MAX_EXACT_ISO

log = logging.getLogger(__name__)

RETAIN_LIMIT = 4096


class _TooMany(Exception):
    pass


def _require_vertices(g: Graph) -> None:
    if g.n == 0:
        raise EmptyGraphError("operation undefined on the graph with no vertices")


def _bron_kerbosch(g: Graph, limit: int | None = None) -> list[int]:
    adj = g.adj
    found: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p:
            if not x:
                found.append(r)
                if limit is not None and len(found) > limit:
                    raise _TooMany
            return
        # Tomita pivot: candidate maximising |P & N(u)|
        pu = max(bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in bits(p & ~adj[pu]):
            expand(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, g.vertices, 0)
    return found


def _canonical(cliques: list[int]) -> list[int]:
    return sorted(cliques, key=bits)


def maximal_cliques(g: Graph) -> list[int]:
    """All maximal cliques of ``g`` in lexicographic order of sorted members."""
    _require_vertices(g)
    return _canonical(_bron_kerbosch(g))


def clique_number(g: Graph) -> int:
    return max(q.bit_count() for q in maximal_cliques(g))


def intersection_graph(sets: list[int]) -> Graph:
    rows = []
    for i, a in enumerate(sets):
        row = 0
        for j, b in enumerate(sets):
            if i != j and a & b:
                row |= 1 << j
        rows.append(row)
    return Graph(len(sets), tuple(rows))


@dataclass(frozen=True)
class CliqueGraphResult:
    kg: Graph
    labels: list[int]


def clique_graph(g: Graph) -> CliqueGraphResult:
    labels = maximal_cliques(g)
    return CliqueGraphResult(intersection_graph(labels), labels)


def clique_graph_capped(g: Graph, max_vertices: int) -> CliqueGraphResult | None:
    """Like :func:`clique_graph`, but None once more than ``max_vertices`` cliques turn up."""
    _require_vertices(g)
    try:
        labels = _bron_kerbosch(g, limit=max_vertices)
    except _TooMany:
        return None
    labels = _canonical(labels)
    return CliqueGraphResult(intersection_graph(labels), labels)


# --- iteration ----------------------------------------------------------------------


@dataclass(frozen=True)
class Completed:
    steps: int


@dataclass(frozen=True)
class BudgetExceeded:
    step: int
    vertex_count: int
    exact: bool


@dataclass(frozen=True)
class FixedPointDetected:
    step: int


@dataclass
class IterationOutcome:
    sizes: list[int]
    graphs: list[Graph]
    status: Completed | BudgetExceeded | FixedPointDetected

    def as_dict(self) -> dict:
        st = self.status
        out: dict = {"sizes": self.sizes, "retained": len(self.graphs)}
        if isinstance(st, Completed):
            out["status"] = {"kind": "completed", "steps": st.steps}
        elif isinstance(st, BudgetExceeded):
            out["status"] = {"kind": "budget_exceeded", "step": st.step,
                             "vertex_count": st.vertex_count, "exact": st.exact}
        else:
            out["status"] = {"kind": "fixed_point", "step": st.step}
        return out


def iterate_clique_graph(g: Graph, steps: int, max_vertices: int) -> IterationOutcome:
    """Compute K^0(g), ..., K^steps(g) until the budget or a fixed point stops it.

    A fixed point is only claimed when two consecutive iterates are exactly
    isomorphic, which is checked only while both are small enough; reaching
    one on the last requested step counts as completion.  An iterate with
    more than ``max_vertices`` vertices is never built; when clique
    enumeration stops early the reported count is a lower bound.
    """
    _require_vertices(g)
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if max_vertices < g.n:
        raise ValueError(f"budget {max_vertices} is smaller than the input ({g.n} vertices)")
    sizes = [g.n]
    graphs = [g]
    current = g
    for step in range(1, steps + 1):
        res = clique_graph_capped(current, max_vertices)
        if res is None:
            return IterationOutcome(sizes, graphs, BudgetExceeded(step, max_vertices + 1, exact=False))
        nxt = res.kg
        sizes.append(nxt.n)
        # full graphs are kept only while small; sizes are always recorded
        if nxt.n <= RETAIN_LIMIT and len(graphs) == step:
            graphs.append(nxt)
        if nxt.n <= MAX_EXACT_ISO and current.n <= MAX_EXACT_ISO and is_isomorphic(current, nxt):
            if step < steps:
                return IterationOutcome(sizes, graphs, FixedPointDetected(step))
        current = nxt
    return IterationOutcome(sizes, graphs, Completed(steps))


# --- stars and neckties ---------------------------------------------------------------


def star(g: Graph, cliques: list[int], x: int) -> int:
    """Indices of the cliques containing ``x``, as a mask over ``cliques``."""
    if not 0 <= x < g.n:
        raise ValueError(f"vertex {x} out of range for n={g.n}")
    s = 0
    for i, q in enumerate(cliques):
        if q >> x & 1:
            s |= 1 << i
    return s


def _common(cliques: list[int], members: int) -> int:
    inter = -1
    for i in bits(members):
        inter &= cliques[i]
    return inter if members else 0


def is_normal_vertex(g: Graph, x: int) -> bool:
    """Whether the star of ``x`` is a maximal complete subgraph of K(g)."""
    cliques = maximal_cliques(g)
    s = star(g, cliques, x)
    members = [cliques[i] for i in bits(s)]
    for j, q in enumerate(cliques):
        if not s >> j & 1 and all(q & p for p in members):
            return False
    return True


@dataclass(frozen=True)
class Star:
    clique: int          # Q, a mask over clique indices of g
    x: int               # smallest vertex whose star is Q
    all_x: tuple[int, ...] = field(default=())


@dataclass(frozen=True)
class Necktie:
    clique: int
    center: int | None = None           # vertex mask of g
    ears: tuple[int, ...] | None = None  # vertex masks of g

    def describe(self, labels: list[int]) -> str:
        qs = ["{" + ",".join(map(str, bits(labels[i]))) + "}" for i in bits(self.clique)]
        return "necktie " + " ".join(qs)


def necktie_shape(cliques: list[int], members: int) -> tuple[int, tuple[int, int, int]]:
    """Center and ears of a necktie in a low degree graph.

    Raises InvariantViolation unless the necktie is four triangles, one of
    which meets each of the other three in a distinct edge.
    """
    qs = [cliques[i] for i in bits(members)]
    if len(qs) != 4 or any(q.bit_count() != 3 for q in qs):
        raise InvariantViolation(f"necktie is not four triangles: {[bits(q) for q in qs]}")
    for t in qs:
        ears = [q for q in qs if q != t]
        edges = {t & q for q in ears}
        if len(edges) == 3 and all(e.bit_count() == 2 for e in edges):
            return t, tuple(ears)
    raise InvariantViolation(f"necktie has no center triangle: {[bits(q) for q in qs]}")


def classify_k2_vertices(g: Graph) -> list[Star | Necktie]:
    """Classify each clique of K(g) as the star of a vertex or a necktie.

    In a low degree graph every necktie is checked to be centred on an
    internal triangle.
    """
    res = clique_graph(g)
    low = is_low_degree(g)
    internal = set(internal_triangles(g)) if low else set()
    out: list[Star | Necktie] = []
    for qmask in maximal_cliques(res.kg):
        common = _common(res.labels, qmask)
        if common:
            xs = tuple(bits(common))
            out.append(Star(qmask, xs[0], xs))
        elif low:
            center, ears = necktie_shape(res.labels, qmask)
            if center not in internal:
                raise InvariantViolation(f"necktie center {bits(center)} is not an internal triangle")
            out.append(Necktie(qmask, center, ears))
        else:
            out.append(Necktie(qmask))
    return out


def helly_witness(g: Graph) -> Necktie | None:
    """One necktie of ``g``, or None when ``g`` is Helly."""
    for c in classify_k2_vertices(g):
        if isinstance(c, Necktie):
            return c
    return None


def is_helly(g: Graph) -> bool:
    return helly_witness(g) is None


# --- triangles -------------------------------------------------------------------------


def internal_triangles(g: Graph) -> list[int]:
    """Triangles that are cliques and whose every edge lies in another clique."""
    if g.n == 0:
        return []
    cliques = maximal_cliques(g)
    out = []
    for t in cliques:
        if t.bit_count() != 3:
            continue
        ok = True
        for u, v in combinations(bits(t), 2):
            e = (1 << u) | (1 << v)
            if not any(q != t and q & e == e for q in cliques):
                ok = False
                break
        if ok:
            out.append(t)
    return out


def necktie_of(g: Graph, t: int) -> int:
    """Q_T: cliques meeting the internal triangle ``t`` in at least two vertices."""
    cliques = maximal_cliques(g)
    if t not in internal_triangles(g):
        raise ValueError(f"{bits(t)} is not an internal triangle")
    qt = 0
    for i, q in enumerate(cliques):
        if (q & t).bit_count() >= 2:
            qt |= 1 << i
    if is_low_degree(g):
        center, _ = necktie_shape(cliques, qt)
        if center != t:
            raise InvariantViolation(f"Q_T for {bits(t)} is centred on {bits(center)}")
    return qt


def find_induced_octahedron(g: Graph) -> int | None:
    """Vertex mask of an induced O_3 in ``g``, or None."""
    adj = g.adj
    for v in range(g.n):
        nb = adj[v]
        if nb.bit_count() < 4:
            continue
        # only neighbours with two other neighbours in N(v) can sit on the 4-cycle
        cand = [u for u in bits(nb) if (adj[u] & nb).bit_count() >= 2 and adj[u].bit_count() >= 4]
        for quad in combinations(cand, 4):
            s = 0
            for u in quad:
                s |= 1 << u
            if any((adj[u] & s).bit_count() != 2 for u in quad):
                continue
            # antipode of v: adjacent to the whole 4-cycle, not to v
            common = -1
            for u in quad:
                common &= adj[u]
            common &= ~nb & ~(1 << v)
            if common:
                return s | (1 << v) | (common & -common)
    return None


def contains_induced_octahedron(g: Graph) -> bool:
    return find_induced_octahedron(g) is not None


def triangles_in_unique_cliques(g: Graph) -> bool:
    """Whether every triangle of ``g`` lies in exactly one maximal clique.

    The cliques through a triangle ``t`` correspond to the maximal cliques of
    the common neighbourhood of ``t``, so uniqueness means that
    neighbourhood is complete.
    """
    return find_triangle_in_two_cliques(g) is None


def find_triangle_in_two_cliques(g: Graph) -> int | None:
    adj = g.adj
    for a in range(g.n):
        for b in bits(adj[a] >> (a + 1) << (a + 1)):
            ab = adj[a] & adj[b]
            for c in bits(ab >> (b + 1) << (b + 1)):
                common = ab & adj[c]
                if not g.is_complete_set(common):
                    return (1 << a) | (1 << b) | (1 << c)
    return None

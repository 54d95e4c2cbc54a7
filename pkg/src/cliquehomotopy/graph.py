"""Simple undirected graphs over dense integer vertices with bit-set rows.

A vertex set is a plain ``int`` used as a bit mask: vertex ``v`` belongs to
``s`` iff ``s >> v & 1``.  Graphs are immutable; every operation that changes
the vertex set reindexes order-preservingly and hands back the old->new map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import GraphFormatError, IsomorphismTooLarge

MAX_EXACT_ISO = 12


def bits(s: int) -> list[int]:
    """Members of a bit mask in increasing order."""
    out = []
    while s:
        low = s & -s
        out.append(low.bit_length() - 1)
        s ^= low
    return out


def mask(vertices: Iterable[int]) -> int:
    s = 0
    for v in vertices:
        s |= 1 << v
    return s


def lowest(s: int) -> int:
    return (s & -s).bit_length() - 1


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    def validate(self) -> None:
        """Check symmetry, irreflexivity and range of every row."""
        if len(self.adj) != self.n:
            raise ValueError(f"{len(self.adj)} rows for n={self.n}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"row {v} has members outside [0, {self.n})")
            if row >> v & 1:
                raise ValueError(f"vertex {v} is adjacent to itself")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"edge {v}->{u} is not symmetric")

    @property
    def vertices(self) -> int:
        return (1 << self.n) - 1

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def closed(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def max_degree(self) -> int:
        return max((row.bit_count() for row in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_closed(self, u: int, v: int) -> int:
        """Closed neighbourhood of the edge ``{u, v}``: ``N[u] & N[v]``."""
        return self.closed(u) & self.closed(v)

    def is_complete_set(self, s: int) -> bool:
        return all(s & ~self.closed(v) == 0 for v in bits(s))

    def components(self) -> list[int]:
        seen = 0
        comps = []
        for v in range(self.n):
            if seen >> v & 1:
                continue
            comp = frontier = 1 << v
            while frontier:
                nxt = 0
                for u in bits(frontier):
                    nxt |= self.adj[u]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def complement(self) -> Graph:
        full = self.vertices
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def relabel(self, perm: list[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        rows = [0] * self.n
        for v, row in enumerate(self.adj):
            rows[perm[v]] = mask(perm[u] for u in bits(row))
        return Graph(self.n, tuple(rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, graph6={to_graph6(self)!r})"


# --- graph6 -----------------------------------------------------------------

_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return chr(126) * 2 + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    out = [_encode_n(g.n)]
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    base = len(text) - len(text.lstrip())
    line = text.strip()
    if line.startswith(_HEADER):
        line = line[len(_HEADER):]
        base += len(_HEADER)
    for i, ch in enumerate(line):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"character {ch!r} outside graph6 range", base + i)
    if not line:
        raise GraphFormatError("empty graph6 string", base)
    vals = [ord(ch) - 63 for ch in line]
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 4 and vals[1] < 63:
        n, pos = (vals[1] << 12) | (vals[2] << 6) | vals[3], 4
    elif len(vals) >= 8 and vals[1] == 63:
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    else:
        raise GraphFormatError("truncated length field", base)
    need = (n * (n - 1) // 2 + 5) // 6
    if len(vals) - pos != need:
        raise GraphFormatError(
            f"expected {need} data bytes for n={n}, found {len(vals) - pos}", base + min(len(vals), pos + need)
        )
    rows = [0] * n
    k = 0
    total = n * (n - 1) // 2
    for j in range(1, n):
        for i in range(j):
            if vals[pos + k // 6] >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if total % 6:
        pad = 6 - total % 6
        if vals[-1] & ((1 << pad) - 1):
            raise GraphFormatError("nonzero padding bits", base + len(vals) - 1)
    return Graph(n, tuple(rows))


# --- DIMACS-like edge list ----------------------------------------------------


def from_edge_list(text: str) -> Graph:
    """Parse ``p edge <n> <m>`` followed by ``m`` lines ``e <u> <v>`` (1-based)."""
    n = declared = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphFormatError(f"line {lineno}: expected 'p edge <n> <m>'")
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer size") from None
            if n < 0 or declared < 0:
                raise GraphFormatError(f"line {lineno}: negative size")
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer vertex") from None
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex out of range 1..{n}")
            edges.append((u - 1, v - 1))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing 'p edge' line")
    if len(edges) != declared:
        raise GraphFormatError(f"declared {declared} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    es = g.edges()
    lines = [f"p edge {g.n} {len(es)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in es]
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    """Decode one graph, auto-detecting DIMACS or graph6.

    In graph6 mode the first line that is not a ``c `` comment is used, so the
    annotated output of ``kgraph`` can be piped back in.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    if any(ln.startswith("p ") for ln in lines):
        return from_edge_list(text)
    for ln in lines:
        if ln and not ln.startswith("c "):
            return from_graph6(ln)
    raise GraphFormatError("no graph found in input")


# --- generators -----------------------------------------------------------------


def octahedron(k: int) -> Graph:
    """O_k: 2k vertices, vertex 2i missing only 2i+1."""
    if k < 1:
        raise ValueError("octahedron needs k >= 1")
    n = 2 * k
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) & ~(1 << (v ^ 1)) for v in range(n)))


def cycle(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycle needs k >= 3")
    return Graph.from_edges(k, ((i, (i + 1) % k) for i in range(k)))


def complete(k: int) -> Graph:
    if k < 1:
        raise ValueError("complete graph needs k >= 1")
    full = (1 << k) - 1
    return Graph(k, tuple(full & ~(1 << v) for v in range(k)))


def path(k: int) -> Graph:
    if k < 1:
        raise ValueError("path needs k >= 1")
    return Graph.from_edges(k, ((i, i + 1) for i in range(k - 1)))


def sun3() -> Graph:
    """Triangle 0,1,2 with ear triangles {0,1,3}, {1,2,4}, {0,2,5}."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5)])


# --- predicates -------------------------------------------------------------------


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")


def is_dominated(g: Graph, x: int, y: int) -> bool:
    """True iff ``N[x]`` is contained in ``N[y]``; requires ``x != y``."""
    _check_vertex(g, x)
    _check_vertex(g, y)
    if x == y:
        raise ValueError("a vertex cannot dominate itself here; need x != y")
    return g.closed(x) & ~g.closed(y) == 0


def are_twins(g: Graph, x: int, y: int) -> bool:
    _check_vertex(g, x)
    _check_vertex(g, y)
    if x == y:
        raise ValueError("twins must be distinct vertices")
    return g.closed(x) == g.closed(y)


def octahedron_order(g: Graph) -> int | None:
    """``k`` if ``g`` is O_k (complement a perfect matching), else None."""
    if g.n == 0 or g.n % 2:
        return None
    if any(row.bit_count() != g.n - 2 for row in g.adj):
        return None
    return g.n // 2


def is_octahedron(g: Graph) -> bool:
    return octahedron_order(g) is not None


def is_low_degree(g: Graph) -> bool:
    return g.n > 0 and g.is_connected() and g.max_degree() <= 4 and octahedron_order(g) != 3


# --- vertex and edge removal ----------------------------------------------------------


def induced(g: Graph, keep: int) -> tuple[Graph, dict[int, int]]:
    if keep & ~g.vertices:
        raise ValueError("vertex set has members outside the graph")
    old = bits(keep)
    relabel = {v: i for i, v in enumerate(old)}
    rows = []
    for v in old:
        rows.append(mask(relabel[u] for u in bits(g.adj[v] & keep)))
    return Graph(len(old), tuple(rows)), relabel


def remove_vertex(g: Graph, x: int) -> tuple[Graph, dict[int, int]]:
    _check_vertex(g, x)
    return induced(g, g.vertices & ~(1 << x))


def remove_edge(g: Graph, u: int, v: int) -> Graph:
    _check_vertex(g, u)
    _check_vertex(g, v)
    if not g.has_edge(u, v):
        raise ValueError(f"no edge {{{u}, {v}}}")
    rows = list(g.adj)
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    return Graph(g.n, tuple(rows))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    return Graph(g.n + h.n, g.adj + tuple(row << g.n for row in h.adj))


# --- isomorphism -------------------------------------------------------------------


def _refine(graphs: list[Graph]) -> list[list[int]]:
    """Joint colour refinement; colours are comparable across ``graphs``."""
    colors = [[row.bit_count() for row in g.adj] for g in graphs]
    while True:
        table: dict[tuple, int] = {}
        new = []
        for g, col in zip(graphs, colors):
            sig = [(col[v], tuple(sorted(col[u] for u in bits(g.adj[v])))) for v in range(g.n)]
            new.append(sig)
        for key in sorted({s for sig in new for s in sig}):
            table[key] = len(table)
        new_colors = [[table[s] for s in sig] for sig in new]
        if all(len(set(a)) == len(set(b)) for a, b in zip(colors, new_colors)):
            return new_colors
        colors = new_colors


def invariant_key(g: Graph) -> tuple:
    """Isomorphism invariant used to bucket graphs before exact comparison."""
    local = []
    for v in range(g.n):
        nb = g.adj[v]
        tri = sum((g.adj[u] & nb).bit_count() for u in bits(nb)) // 2
        local.append((nb.bit_count(), tri, tuple(sorted(g.adj[u].bit_count() for u in bits(nb)))))
    return (g.n, g.m, tuple(sorted(local)))


def find_isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """A map ``phi`` with ``u~v in g`` iff ``phi[u]~phi[v] in h``, or None."""
    if g.n > MAX_EXACT_ISO or h.n > MAX_EXACT_ISO:
        raise IsomorphismTooLarge(
            f"too large for exact isomorphism ({g.n} and {h.n} vertices, limit {MAX_EXACT_ISO})"
        )
    if g.n != h.n or g.m != h.m:
        return None
    if g.n == 0:
        return []
    cg, ch = _refine([g, h])
    if sorted(cg) != sorted(ch):
        return None
    classes: dict[int, list[int]] = {}
    for w, c in enumerate(ch):
        classes.setdefault(c, []).append(w)
    size = {c: len(ws) for c, ws in classes.items()}

    # most constrained first, then stay adjacent to what is already placed
    order: list[int] = []
    placed = 0
    remaining = set(range(g.n))
    while remaining:
        touching = [v for v in remaining if g.adj[v] & placed]
        pool = touching or list(remaining)
        v = min(pool, key=lambda u: (size[cg[u]], -(g.adj[u] & placed).bit_count(), u))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)

    phi = [-1] * g.n
    used = 0

    def extend(i: int) -> bool:
        nonlocal used
        if i == g.n:
            return True
        v = order[i]
        for w in classes[cg[v]]:
            if used >> w & 1:
                continue
            ok = True
            for u in order[:i]:
                if g.has_edge(u, v) != h.has_edge(phi[u], w):
                    ok = False
                    break
            if not ok:
                continue
            phi[v] = w
            used |= 1 << w
            if extend(i + 1):
                return True
            used &= ~(1 << w)
            phi[v] = -1
        return False

    return phi if extend(0) else None


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None

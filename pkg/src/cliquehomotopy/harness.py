"""Exhaustive small-graph corpora and check-by-check verification reports."""

from __future__ import annotations

import json
import logging
import signal
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, TextIO

from .cliques import (
    classify_k2_vertices,
    clique_graph,
    find_induced_octahedron,
    helly_witness,
    iterate_clique_graph,
    Necktie,
)
from .errors import GraphFormatError
from .graph import (
    Graph,
    bits,
    find_isomorphism,
    from_graph6,
    invariant_key,
    is_low_degree,
    octahedron_order,
    to_graph6,
)
from .homology import homotopy_signature
from .reduce import (
    build_h_clique_level,
    build_h_invariance,
    dismantle,
    is_dismantlable_exhaustive,
    low_degree_reduce,
)

log = logging.getLogger(__name__)

MAX_GENERATED_N = 8
DEFAULT_TIME_BUDGET = 10.0


@dataclass(frozen=True)
class CorpusSpec:
    max_n: int
    path: str | None = None          # graph6 file; generated corpus when None
    dedup: bool = True
    include_octahedron: bool = False
    max_degree: int | None = 4
    min_n: int = 1

    def validate(self) -> None:
        if self.path is None:
            if not 1 <= self.max_n <= MAX_GENERATED_N:
                raise ValueError(f"generated corpora need 1 <= max_n <= {MAX_GENERATED_N}")
            if self.min_n < 1 or self.min_n > self.max_n:
                raise ValueError("need 1 <= min_n <= max_n")


# --- generation -----------------------------------------------------------------------


def _dedup(graphs: Iterable[Graph]) -> list[Graph]:
    buckets: dict[tuple, list[Graph]] = {}
    out = []
    for g in graphs:
        reps = buckets.setdefault(invariant_key(g), [])
        if any(find_isomorphism(g, h) is not None for h in reps):
            continue
        reps.append(g)
        out.append(g)
    return out


def _all_graphs_by_order(max_n: int, max_degree: int | None) -> list[list[Graph]]:
    """Non-isomorphic graphs (connected or not) on 0..max_n vertices.

    Every graph on k vertices arises from one on k-1 vertices by adding a
    vertex, and deleting a vertex never raises the maximum degree, so growing
    the representatives one vertex at a time reaches every class.
    """
    cap = max_degree if max_degree is not None else max_n
    levels = [[Graph.empty(0)]]
    for k in range(1, max_n + 1):
        cands = []
        for g in levels[-1]:
            room = [v for v in range(g.n) if g.degree(v) < cap]
            for nb in range(1 << len(room)):
                chosen = 0
                for i, v in enumerate(room):
                    if nb >> i & 1:
                        chosen |= 1 << v
                if chosen.bit_count() > cap:
                    continue
                rows = [row | ((chosen >> v & 1) << (k - 1)) for v, row in enumerate(g.adj)]
                rows.append(chosen)
                cands.append(Graph(k, tuple(rows)))
        levels.append(_dedup(cands))
    return levels


def _labeled_graphs(n: int, max_degree: int | None) -> Iterator[Graph]:
    pairs = [(u, v) for v in range(n) for u in range(v)]
    cap = max_degree if max_degree is not None else n
    deg = [0] * n
    rows = [0] * n

    def rec(i: int) -> Iterator[Graph]:
        if i == len(pairs):
            yield Graph(n, tuple(rows))
            return
        yield from rec(i + 1)
        u, v = pairs[i]
        if deg[u] < cap and deg[v] < cap:
            deg[u] += 1
            deg[v] += 1
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            yield from rec(i + 1)
            deg[u] -= 1
            deg[v] -= 1
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)

    yield from rec(0)


def _keep(spec: CorpusSpec, g: Graph) -> bool:
    if spec.max_degree is not None and g.max_degree() > spec.max_degree:
        return False
    if not spec.include_octahedron and octahedron_order(g) == 3:
        return False
    return True


def read_graph6_lines(path: str) -> Iterator[tuple[str, Graph | None, str | None]]:
    """``(line, graph, error)`` for every graph6 line of a file."""
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("c "):
                continue
            try:
                yield line, from_graph6(line), None
            except GraphFormatError as exc:
                yield line, None, str(exc)


def enumerate_corpus(spec: CorpusSpec) -> Iterator[Graph]:
    """Connected graphs of the corpus in a deterministic order.

    Generated corpora are ordered by vertex count; file corpora keep file
    order and fail on the first undecodable line.
    """
    spec.validate()
    if spec.path is not None:
        for line, g, err in read_graph6_lines(spec.path):
            if g is None:
                raise GraphFormatError(f"{line!r}: {err}")
            if g.n <= spec.max_n and _keep(spec, g):
                yield g
        return
    if spec.dedup:
        levels = _all_graphs_by_order(spec.max_n, spec.max_degree)
        for k in range(spec.min_n, spec.max_n + 1):
            for g in levels[k]:
                if g.is_connected() and _keep(spec, g):
                    yield g
    else:
        for k in range(spec.min_n, spec.max_n + 1):
            for g in _labeled_graphs(k, spec.max_degree):
                if g.is_connected() and _keep(spec, g):
                    yield g


# --- checks -----------------------------------------------------------------------------


class CheckFailed(Exception):
    """Raised inside a check with the witness for its failure."""


def _fail(msg: str) -> None:
    raise CheckFailed(msg)


class _Context:
    """Lazily computed objects shared by the checks on one graph."""

    def __init__(self, g: Graph):
        self.g = g
        self._cache: dict[str, object] = {}

    def get(self, key: str, fn: Callable[[], object]):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def kg(self) -> Graph:
        return self.get("kg", lambda: clique_graph(self.g).kg)

    @property
    def k2g(self) -> Graph:
        return self.get("k2g", lambda: clique_graph(self.kg).kg)

    def sig(self, which: str):
        graph = {"g": lambda: self.g, "kg": lambda: self.kg, "k2g": lambda: self.k2g}[which]
        return self.get("sig_" + which, lambda: homotopy_signature(graph()))


def check_k2_helly(c: _Context) -> None:
    w = helly_witness(c.k2g)
    if w is not None:
        _fail(f"K^2(G) has a necktie over cliques {bits(w.clique)}")


def check_kg_o3_free(c: _Context) -> None:
    s = find_induced_octahedron(c.kg)
    if s is not None:
        _fail(f"K(G) has an induced octahedron on {bits(s)}")


def check_signature_chain(c: _Context) -> None:
    a, b, d = c.sig("g"), c.sig("kg"), c.sig("k2g")
    if not a == b == d:
        _fail(f"G: {a}; K(G): {b}; K^2(G): {d}")


def check_wedge_reduction(c: _Context) -> None:
    red = low_degree_reduce(c.g)
    out = red.graph
    if any(out.adj[u] & out.adj[v] for u, v in out.edges()):
        _fail("reduction left a triangle")
    b = c.sig("g").betti
    b1 = b[1] if len(b) > 1 else 0
    if red.wedge_count != b1:
        _fail(f"cycle rank {red.wedge_count} but b1 = {b1}")
    if homotopy_signature(out) != c.sig("g"):
        _fail(f"reduced graph has {homotopy_signature(out)}, input {c.sig('g')}")


def check_betti_wedge_form(c: _Context) -> None:
    s = c.sig("g")
    if not s.is_wedge_of_circles():
        _fail(f"signature {s} is not that of a wedge of circles")


def check_h_constructions(c: _Context) -> None:
    h4, _ = build_h_invariance(c.g)
    if homotopy_signature(h4) != c.sig("g"):
        _fail(f"H from G has {homotopy_signature(h4)}, G has {c.sig('g')}")
    h5, _ = build_h_clique_level(c.g)
    if homotopy_signature(h5) != c.sig("kg"):
        _fail(f"H from K(G) has {homotopy_signature(h5)}, K(G) has {c.sig('kg')}")


def check_necktie_structure(c: _Context) -> None:
    # classification validates every necktie of a low degree graph as it goes
    for item in classify_k2_vertices(c.g):
        if isinstance(item, Necktie) and item.center is None:
            _fail("necktie left unvalidated")


def check_helly_preservation(c: _Context) -> None:
    if helly_witness(c.g) is not None:
        return
    if helly_witness(c.kg) is not None:
        _fail("G is Helly but K(G) is not")
    if c.sig("g") != c.sig("kg"):
        _fail(f"G is Helly but G has {c.sig('g')} and K(G) has {c.sig('kg')}")


def check_null_contractible(c: _Context, budget: int = 2000, steps: int = 8) -> None:
    out = iterate_clique_graph(c.g, steps, max(budget, c.g.n))
    if 1 in out.sizes and c.sig("g").betti != (1,):
        _fail(f"null graph with signature {c.sig('g')}")


def check_dismantle_agreement(c: _Context) -> None:
    greedy = dismantle(c.g).dismantlable
    exhaustive = is_dismantlable_exhaustive(c.g)
    if greedy != exhaustive:
        _fail(f"greedy says {greedy}, exhaustive search says {exhaustive}")


def check_graph6_roundtrip(c: _Context) -> None:
    text = to_graph6(c.g)
    if from_graph6(text) != c.g or to_graph6(from_graph6(text)) != text:
        _fail(f"round trip changed {text!r}")


# name -> (check, needs a low degree graph)
CHECKS: dict[str, tuple[Callable[[_Context], None], bool]] = {
    "k2_helly": (check_k2_helly, True),
    "kg_o3_free": (check_kg_o3_free, True),
    "signature_chain": (check_signature_chain, True),
    "wedge_reduction": (check_wedge_reduction, True),
    "betti_wedge_form": (check_betti_wedge_form, True),
    "h_constructions": (check_h_constructions, True),
    "necktie_structure": (check_necktie_structure, True),
    "null_contractible": (check_null_contractible, True),
    "helly_preservation": (check_helly_preservation, False),
    "dismantle_agreement": (check_dismantle_agreement, False),
    "graph6_roundtrip": (check_graph6_roundtrip, False),
}

DEFAULT_CHECKS = (
    "k2_helly",
    "kg_o3_free",
    "signature_chain",
    "wedge_reduction",
    "betti_wedge_form",
    "h_constructions",
    "necktie_structure",
)


class _Timeout(Exception):
    pass


def _alarm(signum, frame):
    raise _Timeout


def _can_alarm() -> bool:
    return hasattr(signal, "setitimer") and threading.current_thread() is threading.main_thread()


def verify_graph(
    g: Graph,
    checks: Iterable[str] = DEFAULT_CHECKS,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    timings: bool = True,
) -> dict:
    """Run the named checks on ``g``; failures become entries, never exceptions."""
    names = list(checks)
    for name in names:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}")
    record = {"graph6": to_graph6(g), "n": g.n, "m": g.m, "checks": {}}
    ctx = _Context(g)
    low = is_low_degree(g)
    use_alarm = time_budget is not None and _can_alarm()
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    old = signal.signal(signal.SIGALRM, _alarm) if use_alarm else None
    try:
        for name in names:
            fn, needs_low = CHECKS[name]
            start = time.perf_counter()
            result = {"pass": True, "witness": None}
            if needs_low and not low:
                result = {"pass": False, "witness": "precondition: not a low degree graph"}
            elif deadline is not None and time.monotonic() >= deadline:
                result = {"pass": False, "witness": "timeout"}
            else:
                try:
                    if use_alarm:
                        signal.setitimer(signal.ITIMER_REAL, max(deadline - time.monotonic(), 1e-3))
                    try:
                        fn(ctx)
                    finally:
                        if use_alarm:
                            signal.setitimer(signal.ITIMER_REAL, 0)
                except CheckFailed as exc:
                    result = {"pass": False, "witness": str(exc)}
                except _Timeout:
                    result = {"pass": False, "witness": "timeout"}
                except Exception as exc:  # lower-level invariant violations are findings too
                    result = {"pass": False, "witness": f"{type(exc).__name__}: {exc}"}
            result["ms"] = int((time.perf_counter() - start) * 1000) if timings else 0
            record["checks"][name] = result
    finally:
        if use_alarm:
            signal.signal(signal.SIGALRM, old)
    return record


# --- corpus runs ---------------------------------------------------------------------------


def _parse_failure(line: str, err: str) -> dict:
    return {"graph6": line, "n": None, "m": None,
            "checks": {"parse": {"pass": False, "witness": err, "ms": 0}}}


def _work(item: tuple[str, tuple[str, ...], float | None, bool]) -> dict:
    text, checks, budget, timings = item
    return verify_graph(from_graph6(text), checks, budget, timings)


def _entries(spec: CorpusSpec) -> Iterator[tuple[str, str | None]]:
    """``(graph6, parse error)`` in corpus order; file corpora keep bad lines."""
    if spec.path is None:
        for g in enumerate_corpus(spec):
            yield to_graph6(g), None
        return
    for line, g, err in read_graph6_lines(spec.path):
        if g is None:
            yield line, err
        elif g.n <= spec.max_n and _keep(spec, g):
            yield line, None


def summarize(records: Iterable[dict]) -> dict:
    total = failed = 0
    by_check: dict[str, dict[str, int]] = {}
    for rec in records:
        total += 1
        bad = False
        for name, res in rec["checks"].items():
            slot = by_check.setdefault(name, {"pass": 0, "fail": 0})
            if res["pass"]:
                slot["pass"] += 1
            else:
                slot["fail"] += 1
                bad = True
        failed += bad
    return {"total": total, "failed": failed, "by_check": dict(sorted(by_check.items()))}


def iter_reports(
    spec: CorpusSpec,
    checks: Iterable[str] = DEFAULT_CHECKS,
    jobs: int = 1,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    timings: bool = True,
) -> Iterator[dict]:
    """Per-graph records in corpus order, whatever the parallelism."""
    checks = tuple(checks)
    for name in checks:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}")
    entries = list(_entries(spec))
    work = [(text, checks, time_budget, timings) for text, err in entries if err is None]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = iter(pool.map(_work, work, chunksize=max(1, len(work) // (jobs * 8))))
            for text, err in entries:
                yield _parse_failure(text, err) if err is not None else next(done)
    else:
        for text, err in entries:
            yield _parse_failure(text, err) if err is not None else _work((text, checks, time_budget, timings))


def run_corpus(
    spec: CorpusSpec,
    checks: Iterable[str] = DEFAULT_CHECKS,
    jobs: int = 1,
    out: TextIO | None = None,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    timings: bool = True,
) -> dict:
    """Verify every corpus graph, writing JSONL records then a summary line."""
    records = []
    for rec in iter_reports(spec, checks, jobs, time_budget, timings):
        records.append(rec)
        if out is not None:
            out.write(json.dumps(rec, sort_keys=False) + "\n")
    summary = summarize(records)
    if out is not None:
        out.write(json.dumps(summary) + "\n")
        out.flush()
    log.info("verified %d graphs, %d failed", summary["total"], summary["failed"])
    return summary

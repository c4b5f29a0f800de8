"""Finite directed graphs, paths, and distinguished-edge choices.

Conventions used throughout the package:

* A path traverses its edges first-to-last: ``Path(source, target, (a, b))``
  walks edge ``a`` and then edge ``b``.  When printing we follow the usual
  right-to-left composition order, so that path renders as ``"b.a"``.
* ``compose(p, q)`` is the composite that traverses ``q`` first; it is
  defined exactly when ``s(p) = t(q)``.
* The two truncations of a nonempty path drop the last traversed edge
  (``hat``) and the first traversed edge (``tilde``) respectively.
* A *special* edge choice picks one outgoing edge per vertex (possible only
  when the graph has no sinks); an *associated* choice picks one incoming
  edge per vertex (no sources).  These drive the admissible-pair and
  associated-pair predicates that index everything else in the package.

Graphs are immutable after construction and compare by identity; paths and
pairs are plain value objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

SPECIAL = "special"
ASSOCIATED = "associated"


class GraphError(ValueError):
    """Problem with a graph description, an edge choice, or a path operation."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Path:
    """A directed path; ``edges`` are listed in traversal order.

    Trivial paths have no edges and ``source == target``.  Equality compares
    endpoints and the edge sequence, so trivial paths at distinct vertices
    are distinct values.
    """

    source: str
    target: str
    edges: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    def sort_key(self):
        return (len(self.edges), self.edges, self.source)

    def __str__(self) -> str:
        if not self.edges:
            return f"e_{self.source}"
        return ".".join(reversed(self.edges))


def compose(p: Path, q: Path) -> Optional[Path]:
    """Composite path traversing ``q`` first, or None when ``s(p) != t(q)``."""
    if p.source != q.target:
        return None
    return Path(q.source, p.target, q.edges + p.edges)


def opposite_path(p: Path) -> Path:
    """The same walk in the opposite graph: endpoints swap, edges reverse."""
    return Path(p.target, p.source, tuple(reversed(p.edges)))


class Graph:
    """A finite directed graph with named vertices and edges.

    Vertex and edge identifiers are case-sensitive strings, unique within
    their own namespace.  Parallel edges and loops are allowed.  Instances
    are immutable and hash/compare by identity.
    """

    def __init__(self, vertices: Iterable[str],
                 edges: Iterable[tuple[str, str, str]], name: str = "graph"):
        self.name = name
        vs = list(vertices)
        if len(vs) != len(set(vs)):
            dup = sorted(v for v in set(vs) if vs.count(v) > 1)
            raise GraphError(f"duplicate vertex id {dup[0]!r}")
        self.vertices: tuple[str, ...] = tuple(sorted(vs))
        vset = set(self.vertices)
        src: dict[str, str] = {}
        dst: dict[str, str] = {}
        for eid, s, t in edges:
            if eid in src:
                raise GraphError(f"duplicate edge id {eid!r}")
            if s not in vset:
                raise GraphError(f"edge {eid!r} starts at unknown vertex {s!r}")
            if t not in vset:
                raise GraphError(f"edge {eid!r} ends at unknown vertex {t!r}")
            src[eid] = s
            dst[eid] = t
        self.edges: tuple[str, ...] = tuple(sorted(src))
        self._src = src
        self._dst = dst
        self._out = {v: tuple(e for e in self.edges if src[e] == v) for v in self.vertices}
        self._in = {v: tuple(e for e in self.edges if dst[e] == v) for v in self.vertices}
        self._opposite: Graph | None = None

    def __repr__(self) -> str:
        return (f"Graph({self.name!r}, {len(self.vertices)} vertices, "
                f"{len(self.edges)} edges)")

    def src(self, edge: str) -> str:
        return self._src[edge]

    def dst(self, edge: str) -> str:
        return self._dst[edge]

    def has_edge(self, edge: str) -> bool:
        return edge in self._src

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def out_edges(self, v: str) -> tuple[str, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[str, ...]:
        return self._in[v]

    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._out[v])

    def sources(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._in[v])

    def has_sinks(self) -> bool:
        return bool(self.sinks())

    def has_sources(self) -> bool:
        return bool(self.sources())

    # -- path construction -------------------------------------------------

    def trivial_path(self, v: str) -> Path:
        if v not in self._out:
            raise GraphError(f"unknown vertex {v!r}")
        return Path(v, v)

    def edge_path(self, e: str) -> Path:
        return Path(self._src[e], self._dst[e], (e,))

    def path(self, edges: Sequence[str], at: str | None = None) -> Path:
        """Build a path from edge ids in traversal order; validates composability."""
        if not edges:
            if at is None:
                raise GraphError("a trivial path needs its base vertex")
            return self.trivial_path(at)
        for a, b in zip(edges, edges[1:]):
            if self._dst[a] != self._src[b]:
                raise GraphError(f"edges {a!r} and {b!r} do not compose")
        return Path(self._src[edges[0]], self._dst[edges[-1]], tuple(edges))

    def truncations(self, p: Path) -> tuple[Path, Path]:
        """Drop the last traversed edge (hat) and the first one (tilde)."""
        if p.is_trivial:
            raise GraphError("trivial paths have no truncations")
        hat = Path(p.source, self._src[p.edges[-1]], p.edges[:-1])
        tilde = Path(self._dst[p.edges[0]], p.target, p.edges[1:])
        return hat, tilde

    # -- opposite graph -----------------------------------------------------

    def opposite(self) -> "Graph":
        """The graph with every edge reversed; memoized so it is an involution."""
        if self._opposite is None:
            op = Graph(self.vertices,
                       [(e, self._dst[e], self._src[e]) for e in self.edges],
                       name=self.name + "^op")
            op._opposite = self
            self._opposite = op
        return self._opposite

    def opposite_path(self, p: Path) -> Path:
        return opposite_path(p)

    # -- enumeration ----------------------------------------------------------

    def enumerate_paths(self, max_len: int, source: str | None = None,
                        target: str | None = None) -> list[Path]:
        """All paths of length <= max_len, ordered by length then edge ids."""
        out: list[Path] = []
        level = [Path(v, v) for v in self.vertices
                 if source is None or v == source]
        out.extend(p for p in level if target is None or p.target == target)
        for _ in range(max_len):
            level = [Path(p.source, self._dst[e], p.edges + (e,))
                     for p in level for e in self._out[p.target]]
            out.extend(p for p in level if target is None or p.target == target)
        return out


class EdgeChoice:
    """A per-vertex distinguished edge.

    ``kind == "special"`` picks an outgoing edge at every vertex and
    ``kind == "associated"`` an incoming one.  Construction validates the
    endpoint condition and completeness eagerly, naming the offending
    vertex; a missing pick at a sink (resp. source) reports that the mode
    is unavailable for the graph.
    """

    def __init__(self, graph: Graph, kind: str, picks: Mapping[str, str]):
        if kind not in (SPECIAL, ASSOCIATED):
            raise GraphError(f"unknown edge-choice kind {kind!r}")
        self.graph = graph
        self.kind = kind
        endpoint = graph.src if kind == SPECIAL else graph.dst
        for v, e in picks.items():
            if not graph.has_edge(e):
                raise GraphError(f"{kind} edge {e!r} does not exist")
            if endpoint(e) != v:
                word = "start at" if kind == SPECIAL else "end at"
                raise GraphError(f"{kind} edge {e!r} does not {word} vertex {v!r}")
        for v in graph.vertices:
            if v not in picks:
                if kind == SPECIAL and not graph.out_edges(v):
                    raise GraphError(f"vertex {v!r} is a sink; no special edge exists")
                if kind == ASSOCIATED and not graph.in_edges(v):
                    raise GraphError(f"vertex {v!r} is a source; no associated edge exists")
                raise GraphError(f"no {kind} edge chosen at vertex {v!r}")
        self.picks: dict[str, str] = {v: picks[v] for v in graph.vertices}

    @classmethod
    def from_edges(cls, graph: Graph, kind: str, edge_ids: Iterable[str]) -> "EdgeChoice":
        endpoint = graph.src if kind == SPECIAL else graph.dst
        picks: dict[str, str] = {}
        for e in edge_ids:
            if not graph.has_edge(e):
                raise GraphError(f"{kind} edge {e!r} does not exist")
            v = endpoint(e)
            if v in picks and picks[v] != e:
                raise GraphError(f"two {kind} edges chosen at vertex {v!r}: "
                                 f"{picks[v]!r} and {e!r}")
            picks[v] = e
        return cls(graph, kind, picks)

    def __eq__(self, other) -> bool:
        return (isinstance(other, EdgeChoice) and other.graph is self.graph
                and other.kind == self.kind and other.picks == self.picks)

    def __repr__(self) -> str:
        inner = ",".join(self.picks[v] for v in self.graph.vertices)
        return f"EdgeChoice({self.kind}:{inner})"

    def chosen_at(self, v: str) -> str:
        return self.picks[v]

    def is_chosen(self, e: str) -> bool:
        endpoint = self.graph.src if self.kind == SPECIAL else self.graph.dst
        return self.picks[endpoint(e)] == e

    def siblings(self, e: str) -> tuple[str, ...]:
        """Edges sharing the chosen edge's relevant endpoint, excluding it.

        This is S(e) for a special edge (same source) and T(e) for an
        associated edge (same target).
        """
        if not self.is_chosen(e):
            raise GraphError(f"edge {e!r} is not a {self.kind} edge")
        g = self.graph
        around = g.out_edges(g.src(e)) if self.kind == SPECIAL else g.in_edges(g.dst(e))
        return tuple(b for b in around if b != e)

    def with_pick(self, e: str) -> "EdgeChoice":
        """A copy of this choice with the pick at e's endpoint replaced by e."""
        if not self.graph.has_edge(e):
            raise GraphError(f"{self.kind} edge {e!r} does not exist")
        endpoint = self.graph.src if self.kind == SPECIAL else self.graph.dst
        picks = dict(self.picks)
        picks[endpoint(e)] = e
        return EdgeChoice(self.graph, self.kind, picks)

    def opposite(self) -> "EdgeChoice":
        """The induced choice on the opposite graph (kind flips, picks stay)."""
        other = ASSOCIATED if self.kind == SPECIAL else SPECIAL
        return EdgeChoice(self.graph.opposite(), other, dict(self.picks))


def S_set(choice: EdgeChoice, e: str) -> tuple[str, ...]:
    """Edges sharing the source of the special edge ``e``, excluding ``e``."""
    if choice.kind != SPECIAL:
        raise GraphError("S_set needs a special edge choice")
    return choice.siblings(e)


def T_set(choice: EdgeChoice, e: str) -> tuple[str, ...]:
    """Edges sharing the target of the associated edge ``e``, excluding ``e``."""
    if choice.kind != ASSOCIATED:
        raise GraphError("T_set needs an associated edge choice")
    return choice.siblings(e)


# -- pair predicates ---------------------------------------------------------

def is_admissible(graph: Graph, choice: EdgeChoice, p: Path, q: Path) -> bool:
    """Admissible pair predicate for a special edge choice.

    Nonempty paths must share their target and must not both end (last
    traversed edge) with the same special edge; a trivial path is allowed
    only at the other path's target.
    """
    if choice.kind != SPECIAL:
        raise GraphError("is_admissible needs a special edge choice")
    if p.is_trivial and q.is_trivial:
        return p.source == q.source
    if p.is_trivial:
        return p.source == q.target
    if q.is_trivial:
        return q.source == p.target
    if p.target != q.target:
        return False
    a, b = p.edges[-1], q.edges[-1]
    return a != b or not choice.is_chosen(a)


def is_associated_pair(graph: Graph, choice: EdgeChoice, p: Path, q: Path) -> bool:
    """Mirror predicate on first edges and sources, for an associated choice."""
    if choice.kind != ASSOCIATED:
        raise GraphError("is_associated_pair needs an associated edge choice")
    if p.is_trivial and q.is_trivial:
        return p.source == q.source
    if p.is_trivial:
        return p.source == q.source
    if q.is_trivial:
        return q.source == p.source
    if p.source != q.source:
        return False
    a, b = p.edges[0], q.edges[0]
    return a != b or not choice.is_chosen(a)


def pair_is_valid(graph: Graph, choice: EdgeChoice, p: Path, q: Path) -> bool:
    if choice.kind == SPECIAL:
        return is_admissible(graph, choice, p, q)
    return is_associated_pair(graph, choice, p, q)


def iter_index_pairs(graph: Graph, choice: EdgeChoice, i: str, l: int,
                     N: int) -> Iterator[tuple[Path, Path]]:
    """Pairs indexing the degree-l component at vertex i, path lengths <= N.

    With a special choice these are the admissible pairs with s(q) = i;
    with an associated choice the associated pairs with t(p) = i.  Yields
    in ascending (len(p), p, q) order.
    """
    if N < 0:
        raise GraphError("path-length cap must be >= 0")
    if i not in graph._out:
        raise GraphError(f"unknown vertex {i!r}")
    injective = choice.kind == SPECIAL
    all_paths = graph.enumerate_paths(N)
    by_len: dict[int, list[Path]] = {}
    by_len_ends: dict[tuple[int, str, str], list[Path]] = {}
    for path in all_paths:
        by_len.setdefault(path.length, []).append(path)
        by_len_ends.setdefault((path.length, path.source, path.target), []).append(path)
    for lp in range(N + 1):
        lq = lp + l
        if not 0 <= lq <= N:
            continue
        for p in by_len.get(lp, ()):
            if injective:
                qs = by_len_ends.get((lq, i, p.target), ())
                for q in qs:
                    if is_admissible(graph, choice, p, q):
                        yield p, q
            else:
                if p.target != i:
                    continue
                for q in by_len.get(lq, ()):
                    if q.source == p.source and is_associated_pair(graph, choice, p, q):
                        yield p, q


def enumerate_index_set(graph: Graph, choice: EdgeChoice, i: str, l: int,
                        N: int) -> list[tuple[Path, Path]]:
    return list(iter_index_pairs(graph, choice, i, l, N))


# -- graph file format --------------------------------------------------------

@dataclass
class ParsedGraph:
    graph: Graph
    special: EdgeChoice | None
    associated: EdgeChoice | None


def parse_graph(text: str, name: str = "graph") -> ParsedGraph:
    """Parse the line-oriented graph format.

    Directives (one per line, ``#`` starts a comment)::

        vertex <id>
        edge <id> <src-vertex> <dst-vertex>
        special <edge-id>
        associated <edge-id>

    A file may declare both kinds of choices; each declared kind must be
    complete (one pick per vertex) and is validated here.
    """
    vertices: list[str] = []
    vertex_lines: dict[str, int] = {}
    edges: list[tuple[str, str, str]] = []
    edge_lines: dict[str, int] = {}
    chosen: dict[str, list[tuple[str, int]]] = {SPECIAL: [], ASSOCIATED: []}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "vertex":
            if len(parts) != 2:
                raise GraphError("expected: vertex <id>", lineno)
            v = parts[1]
            if v in vertex_lines:
                raise GraphError(f"duplicate vertex id {v!r} "
                                 f"(first declared on line {vertex_lines[v]})", lineno)
            vertex_lines[v] = lineno
            vertices.append(v)
        elif kw == "edge":
            if len(parts) != 4:
                raise GraphError("expected: edge <id> <src> <dst>", lineno)
            e = parts[1]
            if e in edge_lines:
                raise GraphError(f"duplicate edge id {e!r} "
                                 f"(first declared on line {edge_lines[e]})", lineno)
            edge_lines[e] = lineno
            edges.append((e, parts[2], parts[3]))
        elif kw in (SPECIAL, ASSOCIATED):
            if len(parts) != 2:
                raise GraphError(f"expected: {kw} <edge-id>", lineno)
            chosen[kw].append((parts[1], lineno))
        else:
            raise GraphError(f"unknown directive {kw!r}", lineno)

    for e, s, t in edges:
        for v in (s, t):
            if v not in vertex_lines:
                raise GraphError(f"edge {e!r} references unknown vertex {v!r}",
                                 edge_lines[e])
    graph = Graph(vertices, edges, name=name)

    def build(kind: str) -> EdgeChoice | None:
        decls = chosen[kind]
        if not decls:
            return None
        endpoint = graph.src if kind == SPECIAL else graph.dst
        picks: dict[str, str] = {}
        for e, lineno in decls:
            if e not in edge_lines:
                raise GraphError(f"{kind} edge {e!r} does not exist", lineno)
            v = endpoint(e)
            if v in picks and picks[v] != e:
                raise GraphError(f"two {kind} edges chosen at vertex {v!r}: "
                                 f"{picks[v]!r} and {e!r}", lineno)
            picks[v] = e
        return EdgeChoice(graph, kind, picks)

    return ParsedGraph(graph, build(SPECIAL), build(ASSOCIATED))

"""Undirected simple graphs with exact, deterministic shortest-path tie-breaking.

Distances are measured in hops.  Ties between equal-hop paths are broken by an
exact binary fraction over canonical edge ids, so every subgraph has a unique
minimum path between any reachable pair and every prefix of that path is itself
minimal.  No floating point is involved anywhere.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class _Unreachable:
    """Singleton marker for 'no path exists'.  Compares equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNREACHABLE"

    def __bool__(self):
        return False


UNREACHABLE = _Unreachable()


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph with canonical edge ids.

    Edge ids are the ranks of the (min endpoint, max endpoint) pairs in
    lexicographic order, so they are stable across runs for the same edge set
    regardless of input order.
    """

    __slots__ = ("n", "edges", "adj", "_ids")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        seen = set()
        norm = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            e = _norm_edge(u, v)
            if e in seen:
                raise GraphError(f"parallel edge ({u},{v})")
            seen.add(e)
            norm.append(e)
        norm.sort()
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(norm)
        self._ids = {e: i for i, e in enumerate(norm)}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(norm):
            adj[u].append((v, i))
            adj[v].append((u, i))
        self.adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._ids[_norm_edge(u, v)]
        except KeyError:
            raise GraphError(f"no edge ({u},{v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self._ids

    def endpoints(self, edge_id: int) -> tuple[int, int]:
        return self.edges[edge_id]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(u for u, _ in self.adj[v])

    def incident_edge_ids(self, v: int) -> frozenset[int]:
        return frozenset(eid for _, eid in self.adj[v])

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_ids(self, edges: Iterable) -> frozenset[int]:
        """Normalize a mix of edge ids and vertex pairs to a set of edge ids."""
        out = set()
        for e in edges:
            if isinstance(e, int):
                if not 0 <= e < self.m:
                    raise GraphError(f"edge id {e} out of range")
                out.add(e)
            else:
                u, v = e
                out.add(self.edge_id(u, v))
        return frozenset(out)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class PathKey:
    """Composite path weight: hop count, then an exact edge-id tiebreak.

    The tiebreak is the binary fraction sum(2**-(i+1) for i in edge ids).
    Distinct edge sets always give distinct fractions, so keys of distinct
    simple paths never compare equal.
    """

    __slots__ = ("hops", "mask")

    def __init__(self, hops: int = 0, mask: int = 0):
        self.hops = hops
        self.mask = mask

    @property
    def edge_ids(self) -> frozenset[int]:
        ids, m, i = set(), self.mask, 0
        while m:
            if m & 1:
                ids.add(i)
            m >>= 1
            i += 1
        return frozenset(ids)

    def contains_edge(self, edge_id: int) -> bool:
        return bool(self.mask >> edge_id & 1)

    def extend(self, edge_id: int) -> "PathKey":
        bit = 1 << edge_id
        if self.mask & bit:
            raise ValueError(f"edge {edge_id} already on path")
        return PathKey(self.hops + 1, self.mask | bit)

    def _cmp(self, other) -> int:
        if self.hops != other.hops:
            return -1 if self.hops < other.hops else 1
        diff = self.mask ^ other.mask
        if not diff:
            return 0
        # Lowest differing edge id carries the largest fractional weight;
        # whichever key holds it has the larger fraction.
        low = diff & -diff
        return 1 if self.mask & low else -1

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        return isinstance(other, PathKey) and self.hops == other.hops and self.mask == other.mask

    def __hash__(self):
        return hash((self.hops, self.mask))

    def __repr__(self):
        return f"PathKey(hops={self.hops}, edges={sorted(self.edge_ids)})"


@dataclass(frozen=True)
class Path:
    """A simple path: vertex sequence plus its ordered edge ids."""

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    @classmethod
    def from_vertices(cls, graph: Graph, vertices: Sequence[int]) -> "Path":
        verts = tuple(vertices)
        if len(set(verts)) != len(verts):
            raise GraphError(f"path revisits a vertex: {verts}")
        ids = tuple(graph.edge_id(a, b) for a, b in zip(verts, verts[1:]))
        return cls(verts, ids)

    @property
    def hops(self) -> int:
        return len(self.edge_ids)

    @property
    def key(self) -> PathKey:
        mask = 0
        for eid in self.edge_ids:
            mask |= 1 << eid
        return PathKey(len(self.edge_ids), mask)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def last_edge(self) -> int:
        if not self.edge_ids:
            raise GraphError("empty path has no last edge")
        return self.edge_ids[-1]

    def index_of(self, v: int) -> int:
        return self.vertices.index(v)

    def segment(self, a: int, b: int) -> "Path":
        """Subpath from vertex a to vertex b, following stored direction."""
        i, j = self.index_of(a), self.index_of(b)
        if i > j:
            raise GraphError(f"{a} occurs after {b} on this path")
        return Path(self.vertices[i : j + 1], self.edge_ids[i:j])

    def prefix_to(self, v: int) -> "Path":
        return self.segment(self.vertices[0], v)

    def suffix_from(self, v: int) -> "Path":
        return self.segment(v, self.vertices[-1])

    def concat(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise GraphError("paths do not share a junction vertex")
        verts = self.vertices + other.vertices[1:]
        if len(set(verts)) != len(verts):
            raise GraphError("concatenation revisits a vertex")
        return Path(verts, self.edge_ids + other.edge_ids)

    def __len__(self):
        return len(self.edge_ids)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)


@dataclass(frozen=True)
class GraphView:
    """A graph restriction: the base graph minus some vertices and edges."""

    base: Graph
    removed_vertices: frozenset[int]
    removed_edges: frozenset[int]

    def sssp(self, source, extra_edges=frozenset(), extra_vertices=frozenset()):
        return unique_sssp(
            self.base,
            source,
            forbidden_edges=self.removed_edges | frozenset(extra_edges),
            forbidden_vertices=self.removed_vertices | frozenset(extra_vertices),
        )


def restricted_graph(graph: Graph, pi: Path, u_k: int, u_ell: int) -> GraphView:
    """View that forces replacement paths to leave `pi` at u_k.

    Removes the vertices of the pi-segment strictly between u_k and u_ell,
    plus u_ell itself when it is not the path's final vertex.  The degenerate
    call with u_k == u_ell removes nothing.
    """
    if u_k not in pi.vertices:
        raise GraphError(f"vertex {u_k} not on the given path")
    if u_ell not in pi.vertices:
        raise GraphError(f"vertex {u_ell} not on the given path")
    i, j = pi.index_of(u_k), pi.index_of(u_ell)
    if i > j:
        raise GraphError(f"{u_k} occurs after {u_ell} on the path")
    removed = set(pi.vertices[i + 1 : j])
    if u_ell != pi.end:
        removed |= {u_ell} if u_ell != u_k else set()
    return GraphView(graph, frozenset(removed), frozenset())


class SsspResult:
    """Unique shortest paths from one source under the exact tiebreak.

    Keys are packed as integers (hops in the high bits, the bit-reversed
    tiebreak mask in the low bits) so that plain integer comparison matches
    PathKey order; the public accessors unpack on demand.
    """

    __slots__ = ("graph", "source", "_packed", "_pred_vertex", "_pred_edge", "_shift")

    def __init__(self, graph, source, packed, pred_vertex, pred_edge, shift):
        self.graph = graph
        self.source = source
        self._packed = packed
        self._pred_vertex = pred_vertex
        self._pred_edge = pred_edge
        self._shift = shift

    def reachable(self, v: int) -> bool:
        return self._packed[v] is not None

    def hops(self, v: int):
        p = self._packed[v]
        return UNREACHABLE if p is None else p >> self._shift

    def key(self, v: int):
        p = self._packed[v]
        if p is None:
            return UNREACHABLE
        mask = 0
        rev = p & ((1 << self._shift) - 1)
        for eid in range(self._shift):
            if rev >> (self._shift - 1 - eid) & 1:
                mask |= 1 << eid
        return PathKey(p >> self._shift, mask)

    def predecessor(self, v: int):
        return self._pred_vertex[v]

    def path_to(self, v: int):
        if self._packed[v] is None:
            return UNREACHABLE
        verts, eids = [], []
        cur = v
        while cur != self.source:
            verts.append(cur)
            eids.append(self._pred_edge[cur])
            cur = self._pred_vertex[cur]
        verts.append(self.source)
        return Path(tuple(reversed(verts)), tuple(reversed(eids)))

    def tree_edge_ids(self) -> frozenset[int]:
        return frozenset(e for e in self._pred_edge if e is not None)

    def reachable_vertices(self) -> list[int]:
        return [v for v in range(self.graph.n) if self._packed[v] is not None]


def unique_sssp(
    graph: Graph,
    source: int,
    forbidden_edges: Iterable = frozenset(),
    forbidden_vertices: Iterable[int] = frozenset(),
) -> SsspResult:
    """Dijkstra over (hops, tiebreak) keys; valid because key extension is
    strictly monotone and keys are totally ordered."""
    bad_e = graph.edge_ids(forbidden_edges)
    bad_v = frozenset(forbidden_vertices)
    if source in bad_v:
        raise GraphError(f"source {source} is forbidden")
    n, m = graph.n, graph.m
    shift = m
    packed: list[int | None] = [None] * n
    pred_vertex: list[int | None] = [None] * n
    pred_edge: list[int | None] = [None] * n
    hop_unit = 1 << shift
    packed[source] = 0
    heap = [(0, source)]
    adj = graph.adj
    while heap:
        k, u = heapq.heappop(heap)
        if packed[u] != k:
            continue
        for v, eid in adj[u]:
            if eid in bad_e or v in bad_v:
                continue
            bit = 1 << (shift - 1 - eid)
            if k & bit:  # edge already on the path to u; cannot improve v
                continue
            nk = k + hop_unit + bit
            cur = packed[v]
            if cur is None or nk < cur:
                packed[v] = nk
                pred_vertex[v] = u
                pred_edge[v] = eid
                heapq.heappush(heap, (nk, v))
    return SsspResult(graph, source, packed, pred_vertex, pred_edge, shift)


def bfs_distances(
    graph: Graph,
    source: int,
    forbidden_edges: Iterable = frozenset(),
    forbidden_vertices: Iterable[int] = frozenset(),
) -> list[int]:
    """Plain hop distances from source; -1 marks unreachable vertices."""
    bad_e = graph.edge_ids(forbidden_edges) if forbidden_edges else frozenset()
    bad_v = frozenset(forbidden_vertices)
    dist = [-1] * graph.n
    if source in bad_v:
        raise GraphError(f"source {source} is forbidden")
    dist[source] = 0
    q = deque([source])
    adj = graph.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v, eid in adj[u]:
            if dist[v] < 0 and eid not in bad_e and v not in bad_v:
                dist[v] = du
                q.append(v)
    return dist


def bfs_distance(
    graph: Graph,
    source: int,
    target: int,
    forbidden_edges: Iterable = frozenset(),
    forbidden_vertices: Iterable[int] = frozenset(),
) -> int:
    """Hop distance source -> target with early exit; -1 if unreachable."""
    bad_e = graph.edge_ids(forbidden_edges) if forbidden_edges else frozenset()
    bad_v = frozenset(forbidden_vertices)
    if source in bad_v:
        raise GraphError(f"source {source} is forbidden")
    if source == target:
        return 0
    dist = [-1] * graph.n
    dist[source] = 0
    q = deque([source])
    adj = graph.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v, eid in adj[u]:
            if dist[v] < 0 and eid not in bad_e and v not in bad_v:
                if v == target:
                    return du
                dist[v] = du
                q.append(v)
    return -1


def parse_edge_list(text: str) -> Graph:
    """Parse the one-edge-per-line text format.

    Lines starting with '#' are comments.  The first non-comment line may be
    an optional header `p <n> <m>`; otherwise n = max vertex id + 1.
    """
    header_n = None
    header_m = None
    edges = []
    saw_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if not saw_content and parts[0] == "p":
            if len(parts) != 3:
                raise ParseError("header must be 'p <n> <m>'", lineno)
            try:
                header_n, header_m = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("non-integer header fields", lineno) from None
            if header_n < 0 or header_m < 0:
                raise ParseError("negative header fields", lineno)
            saw_content = True
            continue
        saw_content = True
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError("negative vertex id", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
    max_id = max((max(u, v) for u, v in edges), default=-1)
    n = header_n if header_n is not None else max_id + 1
    if max_id >= n:
        raise ParseError(f"vertex id {max_id} exceeds declared n={n}")
    if header_m is not None and header_m != len(edges):
        raise ParseError(f"header declares m={header_m} but found {len(edges)} edges")
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(graph: Graph, header: bool = True) -> str:
    lines = []
    if header:
        lines.append(f"p {graph.n} {graph.m}")
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def write_edge_list(graph: Graph, path, header: bool = True) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(graph, header=header))

"""Replacement paths around one or two edge failures.

All constructions pick, among equally short candidates, the path whose
divergence from the base shortest path is as close to the source as possible;
dual-fault paths whose second failure sits on a detour additionally minimize
the divergence point from that detour.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .graph import (
    UNREACHABLE,
    Graph,
    GraphError,
    Path,
    bfs_distance,
    unique_sssp,
)

KIND_SINGLE = "single"
KIND_PI_PI = "pi_pi"
KIND_PI_D = "pi_d"


class InvariantError(RuntimeError):
    """A construction step contradicted a property the algorithm relies on."""


@dataclass(frozen=True)
class FaultSet:
    """One or two failed edges, stored by canonical edge id."""

    edges: frozenset[int]

    def __post_init__(self):
        if not 1 <= len(self.edges) <= 2:
            raise GraphError("fault set must contain 1 or 2 edges")

    @classmethod
    def of(cls, *edge_ids: int) -> "FaultSet":
        return cls(frozenset(edge_ids))

    def __iter__(self):
        return iter(sorted(self.edges))

    def __len__(self):
        return len(self.edges)

    def __contains__(self, edge_id: int) -> bool:
        return edge_id in self.edges


@dataclass(frozen=True)
class Detour:
    """The off-tree segment of a single-fault replacement path.

    `segment` runs from the divergence vertex x to the merge vertex y on the
    base path; it is edge-disjoint from the base path and protects
    `protected_edge`, which lies between x and y.
    """

    protected_edge: int
    segment: Path
    target: int

    @property
    def x(self) -> int:
        return self.segment.start

    @property
    def y(self) -> int:
        return self.segment.end

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.segment.vertices)

    def edge_id_set(self) -> frozenset[int]:
        return frozenset(self.segment.edge_ids)


@dataclass(frozen=True)
class ReplacementPath:
    target: int
    faults: FaultSet
    path: Path
    divergence: int                  # first vertex where the path leaves the base path
    detour_divergence: Optional[int] = None
    new_ending: bool = False
    kind: str = KIND_SINGLE

    @property
    def last_edge(self) -> int:
        return self.path.last_edge

    def first_fault(self, tree: "SourceTree") -> int:
        """The fault edge lying on the base path (the shallower one for pairs)."""
        pi = tree.path_to(self.target)
        on_pi = [e for e in self.faults if e in pi.edge_ids]
        if not on_pi:
            raise GraphError("no fault on the base path")
        return min(on_pi, key=pi.edge_ids.index)

    def second_fault(self, tree: "SourceTree") -> Optional[int]:
        if len(self.faults) < 2:
            return None
        first = self.first_fault(tree)
        return next(e for e in self.faults if e != first)


class SourceTree:
    """The tie-broken shortest-path tree of one source, with cached base paths."""

    def __init__(self, graph: Graph, source: int):
        self.graph = graph
        self.source = source
        self.sssp = unique_sssp(graph, source)
        self.tree_edges = self.sssp.tree_edge_ids()
        self._paths: dict[int, Path] = {}
        self._incident_tree: dict[int, frozenset[int]] = {}

    def depth(self, v: int):
        return self.sssp.hops(v)

    def path_to(self, v: int):
        if v in self._paths:
            return self._paths[v]
        p = self.sssp.path_to(v)
        if p is not UNREACHABLE:
            self._paths[v] = p
        return p

    def tree_edge_ids_at(self, v: int) -> frozenset[int]:
        if v not in self._incident_tree:
            self._incident_tree[v] = frozenset(
                eid for _, eid in self.graph.adj[v] if eid in self.tree_edges
            )
        return self._incident_tree[v]


def _segment_removal(pi: Path, k: int, j: int) -> set[int]:
    """Vertices to drop so a path must leave `pi` at index k: the segment
    interior between indices k and j, plus pi[j] unless it is the path's
    endpoint.  k == j removes nothing (the view equals the whole graph)."""
    removed = set(pi.vertices[k + 1 : j])
    if j != len(pi.vertices) - 1 and j != k:
        removed.add(pi.vertices[j])
    return removed


def _first_divergence(path: Path, pi_vertices: tuple[int, ...]) -> int:
    """First vertex where `path` leaves `pi` (both start at the source)."""
    limit = min(len(path.vertices), len(pi_vertices))
    for i in range(limit):
        if path.vertices[i] != pi_vertices[i]:
            return path.vertices[i - 1]
    return path.vertices[limit - 1]


def _min_index_matching(lo: int, hi: int, dist_at, target: int) -> Optional[int]:
    """Minimal index in [lo, hi] where dist_at(index) == target.

    dist_at is monotone nonincreasing in the index and never below target
    (larger index removes fewer vertices), so binary search finds the same
    index that a linear top-down scan would.
    """
    d_hi = dist_at(hi)
    if d_hi != target:
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if dist_at(mid) == target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def single_fault_rp(tree: SourceTree, v: int, fault):
    """Replacement path and detour for one failed base-path edge.

    Among shortest candidates, picks the one diverging closest to the source,
    then decomposes it into base-prefix, detour and base-suffix.
    Returns UNREACHABLE when removing the edge disconnects v.
    """
    G = tree.graph
    s = tree.source
    e_id = next(iter(G.edge_ids([fault])))
    pi = tree.path_to(v)
    if pi is UNREACHABLE:
        raise GraphError(f"target {v} unreachable from source")
    if e_id not in pi.edge_ids:
        raise GraphError(f"edge {G.endpoints(e_id)} not on the base path to {v}")
    i = pi.edge_ids.index(e_id)  # fault spans pi indices i..i+1
    target = bfs_distance(G, s, v, forbidden_edges=(e_id,))
    if target < 0:
        return UNREACHABLE

    def dist_at(k: int) -> int:
        removed = _segment_removal(pi, k, i)
        return bfs_distance(G, s, v, forbidden_edges=(e_id,), forbidden_vertices=removed)

    k0 = _min_index_matching(0, i, dist_at, target)
    if k0 is None:
        raise InvariantError("single-fault divergence scan found no admissible vertex")
    removed = _segment_removal(pi, k0, i)
    res = unique_sssp(G, s, forbidden_edges=(e_id,), forbidden_vertices=removed)
    path = res.path_to(v)
    if path is UNREACHABLE or path.hops != target:
        raise InvariantError("restricted graph lost the replacement distance")

    b = _first_divergence(path, pi.vertices)
    pi_set = set(pi.vertices)
    bi = path.index_of(b)
    y = next(u for u in path.vertices[bi + 1 :] if u in pi_set)
    detour_seg = path.segment(b, y)
    if set(detour_seg.vertices[1:-1]) & pi_set:
        raise InvariantError("detour touches the base path between its endpoints")
    if path.suffix_from(y).vertices != pi.suffix_from(y).vertices:
        raise InvariantError("replacement suffix deviates from the base path")
    rp = ReplacementPath(
        target=v,
        faults=FaultSet.of(e_id),
        path=path,
        divergence=b,
        new_ending=path.last_edge != pi.last_edge,
        kind=KIND_SINGLE,
    )
    return rp, Detour(protected_edge=e_id, segment=detour_seg, target=v)


def pipi_rp(tree: SourceTree, v: int, fault_a, fault_b, detours: Mapping[int, Detour]):
    """Replacement path for two failures on the base path.

    First tries to stitch the two precomputed detours through their last
    common vertex; falls back to a fresh tie-broken shortest path otherwise.
    """
    G = tree.graph
    s = tree.source
    ids = sorted(G.edge_ids([fault_a, fault_b]))
    pi = tree.path_to(v)
    if pi is UNREACHABLE:
        raise GraphError(f"target {v} unreachable from source")
    for e in ids:
        if e not in pi.edge_ids:
            raise GraphError(f"edge {G.endpoints(e)} not on the base path to {v}")
    if len(ids) != 2:
        raise GraphError("fault pair must contain two distinct edges")
    e_i, e_j = sorted(ids, key=pi.edge_ids.index)  # e_i above e_j
    target = bfs_distance(G, s, v, forbidden_edges=ids)
    if target < 0:
        return UNREACHABLE

    d_i, d_j = detours.get(e_i), detours.get(e_j)
    path = None
    if d_i is not None and d_j is not None:
        common = d_i.vertex_set() & d_j.vertex_set()
        if common:
            w = next(u for u in reversed(d_j.segment.vertices) if u in common)
            try:
                stitched = (
                    pi.prefix_to(d_i.x)
                    .concat(d_i.segment.prefix_to(w))
                    .concat(d_j.segment.suffix_from(w))
                    .concat(pi.suffix_from(d_j.y))
                )
            except GraphError:
                stitched = None  # revisits a vertex; cannot have optimal length
            if stitched is not None and stitched.hops == target:
                path = stitched
    if path is None:
        path = unique_sssp(G, s, forbidden_edges=ids).path_to(v)
        if path is UNREACHABLE or path.hops != target:
            raise InvariantError("fresh dual-fault path missing or too long")
    return ReplacementPath(
        target=v,
        faults=FaultSet.of(*ids),
        path=path,
        divergence=_first_divergence(path, pi.vertices),
        new_ending=path.last_edge != pi.last_edge,
        kind=KIND_PI_PI,
    )


def order_fault_pairs(tree: SourceTree, v: int, detours: Mapping[int, Detour]) -> list[tuple[int, int]]:
    """All (base edge, detour edge) fault pairs for v, deepest first.

    Primary key: depth of the base edge, descending.  Ties: position of the
    detour edge along its detour, descending.
    """
    pi = tree.path_to(v)
    if pi is UNREACHABLE:
        return []
    pairs = []
    for e_id, det in detours.items():
        if det is None:
            continue
        e_depth = pi.edge_ids.index(e_id) + 1
        for pos, t_id in enumerate(det.segment.edge_ids):
            pairs.append((-e_depth, -pos, e_id, t_id))
    pairs.sort()
    return [(e, t) for _, _, e, t in pairs]


@dataclass
class _PidOutcome:
    status: str                      # "unreachable" | "satisfied" | "new"
    rp: Optional[ReplacementPath] = None


def _pid_step(
    tree: SourceTree,
    v: int,
    e_id: int,
    t_id: int,
    detour: Detour,
    allowed_last: frozenset[int],
    want_satisfied_path: bool = False,
) -> _PidOutcome:
    G = tree.graph
    s = tree.source
    pi = tree.path_to(v)
    faults = (e_id, t_id)
    target = bfs_distance(G, s, v, forbidden_edges=faults)
    if target < 0:
        return _PidOutcome("unreachable")

    blocked = G.incident_edge_ids(v) - allowed_last
    if bfs_distance(G, s, v, forbidden_edges=blocked | set(faults)) == target:
        rp = None
        if want_satisfied_path:
            path = unique_sssp(G, s, forbidden_edges=blocked | set(faults)).path_to(v)
            rp = ReplacementPath(
                target=v,
                faults=FaultSet.of(*faults),
                path=path,
                divergence=_first_divergence(path, pi.vertices),
                new_ending=False,
                kind=KIND_PI_D,
            )
        return _PidOutcome("satisfied", rp)

    # A new last edge is unavoidable; push the divergence point as close to
    # the source as the replacement distance allows.
    i = pi.edge_ids.index(e_id)
    last_idx = len(pi.vertices) - 1

    def dist_at(k: int) -> int:
        removed = _segment_removal(pi, k, last_idx)
        return bfs_distance(G, s, v, forbidden_edges=faults, forbidden_vertices=removed)

    k0 = _min_index_matching(0, i, dist_at, target)
    if k0 is None:
        raise InvariantError("no divergence vertex preserves the replacement distance")
    b = pi.vertices[k0]

    if b != detour.x:
        removed = _segment_removal(pi, k0, last_idx)
        path = unique_sssp(G, s, forbidden_edges=faults, forbidden_vertices=removed).path_to(v)
        if path is UNREACHABLE or path.hops != target:
            raise InvariantError("divergence-restricted path lost the distance")
        if _first_divergence(path, pi.vertices) != b:
            raise InvariantError("constructed path diverges at an unexpected vertex")
        return _PidOutcome(
            "new",
            ReplacementPath(
                target=v,
                faults=FaultSet.of(*faults),
                path=path,
                divergence=b,
                new_ending=True,
                kind=KIND_PI_D,
            ),
        )

    # Diverges exactly where the detour does: additionally minimize the
    # divergence point from the detour itself.
    seg = detour.segment
    j = seg.edge_ids.index(t_id)  # second fault spans detour indices j..j+1
    base_removed = _segment_removal(pi, k0, last_idx)

    def removal_for(ell: int) -> set[int]:
        removed = set(base_removed)
        removed |= set(seg.vertices[ell + 1 :])
        removed.discard(v)
        return removed

    def dist_at_detour(ell: int) -> int:
        return bfs_distance(G, s, v, forbidden_edges=faults, forbidden_vertices=removal_for(ell))

    ell0 = _min_index_matching(0, j, dist_at_detour, target)
    if ell0 is None:
        raise InvariantError("no detour divergence vertex preserves the distance")
    w = seg.vertices[ell0]
    removed = removal_for(ell0)
    suffix = unique_sssp(G, w, forbidden_edges=faults, forbidden_vertices=removed).path_to(v)
    if suffix is UNREACHABLE:
        raise InvariantError("detour-restricted suffix lost reachability")
    path = pi.prefix_to(detour.x).concat(seg.prefix_to(w)).concat(suffix)
    if path.hops != target:
        raise InvariantError("composed replacement path has the wrong length")
    return _PidOutcome(
        "new",
        ReplacementPath(
            target=v,
            faults=FaultSet.of(*faults),
            path=path,
            divergence=b,
            detour_divergence=w,
            new_ending=True,
            kind=KIND_PI_D,
        ),
    )


def pid_rp(
    tree: SourceTree,
    v: int,
    pair: tuple,
    current_edges: Iterable[int],
    detours: Mapping[int, Detour],
):
    """Replacement path for one base-path fault plus one fault on its detour.

    `current_edges` is the set of v-incident edge ids already available; when
    they realize the replacement distance the path is not new-ending and no
    edge needs to be introduced.  Returns UNREACHABLE when v is disconnected.
    """
    G = tree.graph
    e_raw, t_raw = pair
    e_id = next(iter(G.edge_ids([e_raw])))
    t_id = next(iter(G.edge_ids([t_raw])))
    detour = detours.get(e_id)
    if detour is None or t_id not in detour.segment.edge_ids:
        raise GraphError("pair is not a (base edge, detour edge) combination for this target")
    allowed = frozenset(G.edge_ids(current_edges))
    out = _pid_step(tree, v, e_id, t_id, detour, allowed, want_satisfied_path=True)
    if out.status == "unreachable":
        return UNREACHABLE
    return out.rp

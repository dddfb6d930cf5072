"""Ground-truth brute force: exhaustive fault enumeration and plain BFS.

Everything here is deliberately independent of the exact tie-breaking
machinery; distances are plain hop counts so the verifier can serve as an
oracle for the constructive modules.
"""

from __future__ import annotations

import json
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .graph import UNREACHABLE, Graph, GraphError

MAX_EXHAUSTIVE_F = 3


@dataclass(frozen=True)
class Violation:
    source: int
    vertex: int
    faults: tuple[tuple[int, int], ...]
    dist_structure: Optional[int]
    dist_graph: Optional[int]


@dataclass
class VerifyReport:
    ok: bool
    f: int
    sources: tuple[int, ...]
    fault_sets_checked: int
    violations: list[Violation] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "ok": self.ok,
            "f": self.f,
            "sources": list(self.sources),
            "fault_sets_checked": self.fault_sets_checked,
            "violations": [
                {
                    "source": v.source,
                    "vertex": v.vertex,
                    "faults": [list(e) for e in v.faults],
                    "dist_structure": v.dist_structure,
                    "dist_graph": v.dist_graph,
                }
                for v in self.violations
            ],
        }


def _structure_edge_pairs(structure, graph: Graph) -> list[tuple[int, int]]:
    from .builder import FtStructure

    if isinstance(structure, FtStructure):
        return structure.edge_pairs()
    if isinstance(structure, Graph):
        return list(structure.edges)
    pairs = []
    for e in structure:
        if isinstance(e, int):
            pairs.append(graph.endpoints(e))
        else:
            u, v = e
            pairs.append((min(u, v), max(u, v)))
    return pairs


def _adjacency_matrix(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    a = np.zeros((n, n), dtype=bool)
    for u, v in pairs:
        a[u, v] = True
        a[v, u] = True
    return a


def _bfs_matrix(a: np.ndarray, source: int) -> np.ndarray:
    n = a.shape[0]
    dist = np.full(n, -1, dtype=np.int32)
    frontier = np.zeros(n, dtype=bool)
    frontier[source] = True
    visited = frontier.copy()
    dist[source] = 0
    d = 0
    while frontier.any():
        d += 1
        nxt = a[frontier].any(axis=0) & ~visited
        if not nxt.any():
            break
        dist[nxt] = d
        visited |= nxt
        frontier = nxt
    return dist


def enumerate_fault_sets(m: int, f: int):
    """All fault sets of size <= f in lexicographic edge-id order."""
    yield ()
    for size in range(1, f + 1):
        yield from combinations(range(m), size)


def _check_chunk(args):
    n, g_pairs, h_pairs, sources, fault_sets = args
    a_g = _adjacency_matrix(n, g_pairs)
    a_h = _adjacency_matrix(n, h_pairs)
    h_pair_set = {tuple(p) for p in h_pairs}
    violations = []
    for fs in fault_sets:
        for u, v in fs:
            a_g[u, v] = a_g[v, u] = False
            if (u, v) in h_pair_set:
                a_h[u, v] = a_h[v, u] = False
        for s in sources:
            dg = _bfs_matrix(a_g, s)
            dh = _bfs_matrix(a_h, s)
            if not np.array_equal(dg, dh):
                for v in np.nonzero(dg != dh)[0]:
                    violations.append(
                        (s, int(v), fs, int(dh[v]), int(dg[v]))
                    )
        for u, v in fs:
            a_g[u, v] = a_g[v, u] = True
            if (u, v) in h_pair_set:
                a_h[u, v] = a_h[v, u] = True
    return violations


def verify_ft(
    structure,
    graph: Graph,
    sources: Iterable[int],
    f: int,
    early_exit: bool = False,
    jobs: int = 1,
) -> VerifyReport:
    """Exhaustively check that the structure preserves all source distances
    under every fault set of size <= f.  Mutual unreachability counts as
    agreement."""
    if f > MAX_EXHAUSTIVE_F:
        raise GraphError(f"exhaustive verification is capped at f={MAX_EXHAUSTIVE_F}")
    sources = tuple(sources)
    for s in sources:
        if not 0 <= s < graph.n:
            raise GraphError(f"source {s} out of range")
    h_pairs = _structure_edge_pairs(structure, graph)
    for u, v in h_pairs:
        if not graph.has_edge(u, v):
            raise GraphError(f"structure edge ({u},{v}) is not an edge of the graph")

    fault_pairs = [tuple(graph.endpoints(e) for e in fs) for fs in enumerate_fault_sets(graph.m, f)]
    checked = len(fault_pairs)

    if jobs > 1 and not early_exit and checked > jobs:
        chunks = [fault_pairs[i::jobs] for i in range(jobs)]
        payload = [
            (graph.n, list(graph.edges), h_pairs, sources, chunk) for chunk in chunks if chunk
        ]
        raw: list[tuple] = []
        with ProcessPoolExecutor(max_workers=len(payload)) as pool:
            for part in pool.map(_check_chunk, payload):
                raw.extend(part)
        raw.sort(key=lambda r: (r[2], r[0], r[1]))
    else:
        raw = []
        a_g = _adjacency_matrix(graph.n, graph.edges)
        a_h = _adjacency_matrix(graph.n, h_pairs)
        h_pair_set = set(h_pairs)
        for fs in fault_pairs:
            for u, v in fs:
                a_g[u, v] = a_g[v, u] = False
                if (u, v) in h_pair_set:
                    a_h[u, v] = a_h[v, u] = False
            for s in sources:
                dg = _bfs_matrix(a_g, s)
                dh = _bfs_matrix(a_h, s)
                if not np.array_equal(dg, dh):
                    for v in np.nonzero(dg != dh)[0]:
                        raw.append((s, int(v), fs, int(dh[v]), int(dg[v])))
            for u, v in fs:
                a_g[u, v] = a_g[v, u] = True
                if (u, v) in h_pair_set:
                    a_h[u, v] = a_h[v, u] = True
            if early_exit and raw:
                break

    violations = [
        Violation(
            source=s,
            vertex=v,
            faults=fs,
            dist_structure=None if dh < 0 else dh,
            dist_graph=None if dg < 0 else dg,
        )
        for s, v, fs, dh, dg in raw
    ]
    return VerifyReport(
        ok=not violations,
        f=f,
        sources=sources,
        fault_sets_checked=checked,
        violations=violations,
    )


def oracle_distance(graph: Graph, source: int, target: int, faults: Iterable = ()) -> object:
    """Plain BFS hop distance in the graph minus the faults; UNREACHABLE if none."""
    bad = graph.edge_ids(faults) if faults else frozenset()
    if source == target:
        return 0
    dist = [-1] * graph.n
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v, eid in graph.adj[u]:
            if dist[v] < 0 and eid not in bad:
                if v == target:
                    return du
                dist[v] = du
                q.append(v)
    return UNREACHABLE


def witness_is_valid(graph: Graph, sources: Iterable[int], faults: Iterable, edge) -> bool:
    """True if removing `edge` under the fault set strictly hurts some source
    distance (treating newly-unreachable vertices as hurt)."""
    e_id = next(iter(graph.edge_ids([edge])))
    bad = graph.edge_ids(faults) if faults else frozenset()
    if e_id in bad:
        return False
    a = _adjacency_matrix(graph.n, graph.edges)
    for eid in bad:
        u, v = graph.endpoints(eid)
        a[u, v] = a[v, u] = False
    u, v = graph.endpoints(e_id)
    for s in sources:
        base = _bfs_matrix(a, s)
        a[u, v] = a[v, u] = False
        pruned = _bfs_matrix(a, s)
        a[u, v] = a[v, u] = True
        base_r = base >= 0
        worse = (pruned != base) & base_r
        if worse.any():
            return True
    return False


def edge_necessity(
    graph: Graph, sources: Iterable[int], f: int, edge
) -> tuple[bool, Optional[tuple[int, int, tuple[tuple[int, int], ...]]]]:
    """Decide whether every valid structure must contain `edge`.

    Scans fault sets in lexicographic order and returns the first witness
    (source, vertex, faults) whose distances degrade once `edge` is removed.
    """
    if f > MAX_EXHAUSTIVE_F:
        raise GraphError(f"exhaustive search is capped at f={MAX_EXHAUSTIVE_F}")
    e_id = next(iter(graph.edge_ids([edge])))
    eu, ev = graph.endpoints(e_id)
    sources = tuple(sources)
    a = _adjacency_matrix(graph.n, graph.edges)
    for fs in enumerate_fault_sets(graph.m, f):
        if e_id in fs:
            continue
        pairs = [graph.endpoints(e) for e in fs]
        for u, v in pairs:
            a[u, v] = a[v, u] = False
        found = None
        for s in sources:
            base = _bfs_matrix(a, s)
            a[eu, ev] = a[ev, eu] = False
            pruned = _bfs_matrix(a, s)
            a[eu, ev] = a[ev, eu] = True
            mism = np.nonzero((pruned != base) & (base >= 0))[0]
            if mism.size:
                found = (s, int(mism[0]), tuple(pairs))
                break
        for u, v in pairs:
            a[u, v] = a[v, u] = True
        if found is not None:
            return True, found
    return False, None


@dataclass
class FtDiameterReport:
    value: Optional[int]
    unreachable_pairs: int
    fault_sets_checked: int


def ft_diameter(graph: Graph, source: int, f: int) -> FtDiameterReport:
    """Largest finite source eccentricity over all fault sets of size <= f-1,
    with a count of (vertex, fault set) combinations left unreachable."""
    if f < 1:
        raise GraphError("fault budget must be at least 1")
    if f - 1 > MAX_EXHAUSTIVE_F:
        raise GraphError(f"exhaustive enumeration is capped at f={MAX_EXHAUSTIVE_F + 1}")
    a = _adjacency_matrix(graph.n, graph.edges)
    best: Optional[int] = None
    unreachable = 0
    checked = 0
    for fs in enumerate_fault_sets(graph.m, f - 1):
        checked += 1
        pairs = [graph.endpoints(e) for e in fs]
        for u, v in pairs:
            a[u, v] = a[v, u] = False
        dist = _bfs_matrix(a, source)
        for u, v in pairs:
            a[u, v] = a[v, u] = True
        finite = dist[dist >= 0]
        unreachable += int((dist < 0).sum())
        top = int(finite.max())
        if best is None or top > best:
            best = top
    return FtDiameterReport(value=best, unreachable_pairs=unreachable, fault_sets_checked=checked)


def write_report(report: VerifyReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")

"""Assembly of dual-failure fault-tolerant BFS structures.

For every target vertex the builder harvests the last edge of a replacement
path for each relevant fault set: single failures on the base path, failure
pairs on the base path, and pairs of one base-path failure plus one failure on
its detour.  The union of those last edges with the shortest-path tree is the
output structure.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .graph import UNREACHABLE, Graph, GraphError, Path, format_edge_list
from .replacement import (
    Detour,
    FaultSet,
    KIND_PI_D,
    ReplacementPath,
    SourceTree,
    _pid_step,
    order_fault_pairs,
    pipi_rp,
    single_fault_rp,
)

STEP_TREE = "TREE"
STEP_E1 = "E1"
STEP_E2 = "E2"
STEP_E3 = "E3"


@dataclass(frozen=True)
class Provenance:
    target: int
    faults: frozenset[int]
    step: str


@dataclass(frozen=True)
class IntroducedEdge:
    edge_id: int
    step: str
    rp: ReplacementPath


@dataclass
class VertexStats:
    e1_size: int = 0
    e2_size: int = 0
    pid_pairs: int = 0
    pid_satisfied: int = 0
    pid_new: int = 0
    unreachable_singles: int = 0
    unreachable_pi_pairs: int = 0
    unreachable_pid_pairs: int = 0


@dataclass
class VertexBuildRecord:
    """Full trace of one per-vertex harvest, for diagnostics and analysis."""

    target: int
    pi: Optional[Path]
    tree_edges_at_target: frozenset[int] = frozenset()
    detours: dict[int, Detour] = field(default_factory=dict)
    single_rps: dict[int, ReplacementPath] = field(default_factory=dict)
    pipi_rps: list[ReplacementPath] = field(default_factory=list)
    introduced: list[IntroducedEdge] = field(default_factory=list)
    stats: VertexStats = field(default_factory=VertexStats)

    def new_edge_paths(self) -> list[IntroducedEdge]:
        """First introducing path for every harvested edge outside the tree."""
        return [it for it in self.introduced if it.edge_id not in self.tree_edges_at_target]


@dataclass(frozen=True)
class FtStructure:
    """A subgraph claimed to preserve distances under up to `f` edge faults."""

    host: Graph
    source_set: tuple[int, ...]
    f: int
    edges: frozenset[int]
    provenance: dict[int, Provenance]
    per_vertex_new: dict[int, frozenset[int]]

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.host.endpoints(e) for e in self.edges)

    def to_graph(self) -> Graph:
        return Graph(self.host.n, self.edge_pairs())

    def max_new_per_vertex(self) -> int:
        return max((len(v) for v in self.per_vertex_new.values()), default=0)

    def step_histogram(self) -> dict[str, int]:
        hist = {STEP_TREE: 0, STEP_E1: 0, STEP_E2: 0, STEP_E3: 0}
        for prov in self.provenance.values():
            hist[prov.step] += 1
        return hist

    def sidecar(self) -> dict:
        return {
            "schema": 1,
            "n": self.host.n,
            "m_H": self.m,
            "source": list(self.source_set) if len(self.source_set) > 1 else self.source_set[0],
            "f": self.f,
            "per_vertex_new_counts": {
                str(v): len(edges) for v, edges in sorted(self.per_vertex_new.items()) if edges
            },
            "step_histograms": self.step_histogram(),
        }

    def write(self, edges_path, sidecar_path=None) -> None:
        with open(edges_path, "w", encoding="utf-8") as fh:
            fh.write(f"p {self.host.n} {self.m}\n")
            for u, v in self.edge_pairs():
                fh.write(f"{u} {v}\n")
        if sidecar_path is not None:
            with open(sidecar_path, "w", encoding="utf-8") as fh:
                json.dump(self.sidecar(), fh, indent=2, sort_keys=True)
                fh.write("\n")


def build_h_of_v(tree: SourceTree, v: int, trace: bool = False) -> tuple[frozenset[int], VertexBuildRecord]:
    """Harvest the last edges of all replacement paths targeting v.

    Returns the harvested edge set together with the per-vertex build record
    (statistics always, full path traces only when `trace` is set).
    """
    G = tree.graph
    if v == tree.source:
        raise GraphError("the source needs no harvested edges")
    pi = tree.path_to(v)
    if pi is UNREACHABLE:
        return frozenset(), VertexBuildRecord(target=v, pi=None)
    rec = VertexBuildRecord(target=v, pi=pi, tree_edges_at_target=tree.tree_edge_ids_at(v))
    stats = rec.stats

    harvested: list[tuple[int, str, ReplacementPath]] = []
    detours: dict[int, Detour] = {}

    for e_id in pi.edge_ids:
        res = single_fault_rp(tree, v, e_id)
        if res is UNREACHABLE:
            stats.unreachable_singles += 1
            continue
        rp, det = res
        detours[e_id] = det
        harvested.append((rp.last_edge, STEP_E1, rp))
        if trace:
            rec.detours[e_id] = det
            rec.single_rps[e_id] = rp
    e1 = {edge for edge, _, _ in harvested}
    stats.e1_size = len(e1)

    pi_edges = pi.edge_ids
    for a in range(len(pi_edges)):
        for b in range(a + 1, len(pi_edges)):
            rp = pipi_rp(tree, v, pi_edges[a], pi_edges[b], detours)
            if rp is UNREACHABLE:
                stats.unreachable_pi_pairs += 1
                continue
            harvested.append((rp.last_edge, STEP_E2, rp))
            if trace:
                rec.pipi_rps.append(rp)
    e2 = {edge for edge, step, _ in harvested if step == STEP_E2}
    stats.e2_size = len(e2)

    current = set(tree.tree_edge_ids_at(v)) | e1 | e2
    for e_id, t_id in order_fault_pairs(tree, v, detours):
        stats.pid_pairs += 1
        out = _pid_step(tree, v, e_id, t_id, detours[e_id], frozenset(current))
        if out.status == "unreachable":
            stats.unreachable_pid_pairs += 1
        elif out.status == "satisfied":
            stats.pid_satisfied += 1
        else:
            stats.pid_new += 1
            rp = out.rp
            harvested.append((rp.last_edge, STEP_E3, rp))
            current.add(rp.last_edge)

    h_v = {pi.last_edge} | {edge for edge, _, _ in harvested}

    seen: set[int] = set()
    for edge, step, rp in harvested:
        if edge not in seen:
            seen.add(edge)
            rec.introduced.append(IntroducedEdge(edge, step, rp))
    return frozenset(h_v), rec


def _build_range(args):
    n, edges, source, vertices, trace = args
    tree = SourceTree(Graph(n, edges), source)
    return [(v, *build_h_of_v(tree, v, trace=trace)) for v in vertices]


def build_ftbfs(
    graph: Graph,
    source: int,
    jobs: int = 1,
    trace: bool = False,
) -> tuple[FtStructure, dict[int, VertexBuildRecord]]:
    """Build the dual-failure structure for one source.

    Per-vertex harvests are independent; `jobs` > 1 fans them out across
    processes and merges in canonical (ascending vertex) order.
    """
    tree = SourceTree(graph, source)
    targets = [v for v in range(graph.n) if v != source]
    results: list[tuple[int, frozenset[int], VertexBuildRecord]] = []
    if jobs > 1 and len(targets) > 1:
        chunks = [targets[i::jobs] for i in range(jobs)]
        payload = [(graph.n, graph.edges, source, chunk, trace) for chunk in chunks if chunk]
        with ProcessPoolExecutor(max_workers=len(payload)) as pool:
            for part in pool.map(_build_range, payload):
                results.extend(part)
        results.sort(key=lambda item: item[0])
    else:
        for v in targets:
            h_v, rec = build_h_of_v(tree, v, trace=trace)
            results.append((v, h_v, rec))

    edges: set[int] = set(tree.tree_edges)
    provenance: dict[int, Provenance] = {}
    for eid in sorted(tree.tree_edges):
        u, w = graph.endpoints(eid)
        child = u if tree.depth(u) > tree.depth(w) else w
        provenance[eid] = Provenance(target=child, faults=frozenset(), step=STEP_TREE)

    per_vertex_new: dict[int, frozenset[int]] = {}
    records: dict[int, VertexBuildRecord] = {}
    for v, h_v, rec in results:
        records[v] = rec
        edges |= h_v
        per_vertex_new[v] = h_v - tree.tree_edge_ids_at(v)
        for item in rec.introduced:
            if item.edge_id not in provenance:
                provenance[item.edge_id] = Provenance(
                    target=v, faults=item.rp.faults.edges, step=item.step
                )

    structure = FtStructure(
        host=graph,
        source_set=(source,),
        f=2,
        edges=frozenset(edges),
        provenance=provenance,
        per_vertex_new=per_vertex_new,
    )
    return structure, records


def build_f_pi_only(graph: Graph, source: int, f: int) -> FtStructure:
    """Diagnostic structure: last edges of replacement paths whose fault sets
    are confined to each target's base path, up to f failures at once."""
    if f < 1:
        raise GraphError("fault budget must be at least 1")
    from itertools import combinations

    tree = SourceTree(graph, source)
    from .graph import unique_sssp

    edges: set[int] = set(tree.tree_edges)
    provenance: dict[int, Provenance] = {}
    for eid in sorted(tree.tree_edges):
        u, w = graph.endpoints(eid)
        child = u if tree.depth(u) > tree.depth(w) else w
        provenance[eid] = Provenance(target=child, faults=frozenset(), step=STEP_TREE)
    per_vertex_new: dict[int, frozenset[int]] = {}
    for v in range(graph.n):
        if v == source:
            continue
        pi = tree.path_to(v)
        if pi is UNREACHABLE:
            continue
        h_v = {pi.last_edge}
        for size in range(1, f + 1):
            for faults in combinations(pi.edge_ids, size):
                res = unique_sssp(graph, source, forbidden_edges=faults)
                path = res.path_to(v)
                if path is UNREACHABLE:
                    continue
                h_v.add(path.last_edge)
                if path.last_edge not in provenance:
                    provenance[path.last_edge] = Provenance(
                        target=v, faults=frozenset(faults), step=STEP_E1 if size == 1 else STEP_E2
                    )
        edges |= h_v
        per_vertex_new[v] = frozenset(h_v) - tree.tree_edge_ids_at(v)
    return FtStructure(
        host=graph,
        source_set=(source,),
        f=f,
        edges=frozenset(edges),
        provenance=provenance,
        per_vertex_new=per_vertex_new,
    )

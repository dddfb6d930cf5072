"""Structural diagnostics for detours and new-ending replacement paths.

Covers the pairwise geometry of detours on a common base path, the kernel
subgraph assembled from detour prefixes, excluded detour segments, and the
five-way classification of the paths that introduced new edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graph import Graph, GraphError, Path
from .replacement import KIND_PI_D, Detour, ReplacementPath

NON_NESTED = "non_nested"
NESTED = "nested"
INTERLEAVED = "interleaved"
X_INTERLEAVED = "x_interleaved"
Y_INTERLEAVED = "y_interleaved"
XY_INTERLEAVED = "xy_interleaved"
SAME_SPAN = "same_span"  # identical endpoints; not covered by the six-way taxonomy

FW = "fw"
REV = "rev"

CLASS_PI = "pi_pi"
CLASS_NODET = "nodet"
CLASS_INDEP = "indep"
CLASS_I_PI = "i_pi"
CLASS_I_D = "i_d"
PATH_CLASSES = (CLASS_PI, CLASS_NODET, CLASS_INDEP, CLASS_I_PI, CLASS_I_D)


@dataclass(frozen=True)
class DetourConfig:
    kind: str
    dependent: bool
    direction: Optional[str] = None


def _positions(pi: Path) -> dict[int, int]:
    return {v: i for i, v in enumerate(pi.vertices)}


def first_common(d1: Detour, d2: Detour) -> Optional[int]:
    """First vertex along d1 that also lies on d2."""
    other = d2.vertex_set()
    for v in d1.segment.vertices:
        if v in other:
            return v
    return None


def last_common(d1: Detour, d2: Detour) -> Optional[int]:
    """Last vertex along d1 that also lies on d2."""
    other = d2.vertex_set()
    for v in reversed(d1.segment.vertices):
        if v in other:
            return v
    return None


def classify_pair(d1: Detour, d2: Detour, pi: Path) -> DetourConfig:
    """Configuration of two detours of the same target, by endpoint order.

    The pair is canonically ordered by (x, y) position before classification,
    so callers may pass the detours either way around.
    """
    if d1.target != d2.target:
        raise GraphError("detours protect different target vertices")
    pos = _positions(pi)
    try:
        a = (pos[d1.x], pos[d1.y])
        b = (pos[d2.x], pos[d2.y])
    except KeyError as exc:
        raise GraphError(f"detour endpoint {exc} not on the base path") from None
    if b < a:
        d1, d2 = d2, d1
        a, b = b, a
    (x1, y1), (x2, y2) = a, b

    if (x1, y1) == (x2, y2):
        kind = SAME_SPAN
    elif y1 < x2:
        kind = NON_NESTED
    elif x1 == x2:
        kind = X_INTERLEAVED
    elif y1 == x2:
        kind = XY_INTERLEAVED
    elif y1 == y2:
        kind = Y_INTERLEAVED
    elif y2 < y1:
        kind = NESTED
    else:
        kind = INTERLEAVED

    dependent = bool(d1.vertex_set() & d2.vertex_set())
    direction = None
    if dependent and kind == XY_INTERLEAVED:
        # One detour ends where the other begins, so any shared segment is
        # necessarily walked in opposite directions.
        direction = REV
    elif dependent and kind == INTERLEAVED:
        direction = FW if first_common(d1, d2) == first_common(d2, d1) else REV
    return DetourConfig(kind=kind, dependent=dependent, direction=direction)


def excluded_segment(d1: Detour, d2: Detour, pi: Path) -> Optional[Path]:
    """Suffix of d1 that can hold no second fault of a path owning d1.

    Defined for dependent pairs with x1 <= x2 <= y1 < y2; the suffix starts at
    the last vertex of d2 that is common to d1.  Returns None when the
    configuration does not apply.
    """
    pos = _positions(pi)
    x1, y1 = pos[d1.x], pos[d1.y]
    x2, y2 = pos[d2.x], pos[d2.y]
    if not (x1 <= x2 <= y1 < y2):
        return None
    w = last_common(d2, d1)
    if w is None:
        return None
    return d1.segment.suffix_from(w)


@dataclass(frozen=True)
class KernelGraph:
    """Union of detour prefixes under the (x, y)-ordering.

    Each detour contributes its segment up to the first vertex already present
    (its cut vertex); detours cut before their merge vertex are `truncated`
    and point to the earlier detour whose fragment absorbed them (`breakers`).
    """

    ordering: tuple[Detour, ...]
    fragments: tuple[Path, ...]
    cuts: tuple[int, ...]
    truncated: tuple[bool, ...]
    breakers: dict[int, int]

    def edge_ids(self) -> frozenset[int]:
        out: set[int] = set()
        for frag in self.fragments:
            out.update(frag.edge_ids)
        return frozenset(out)

    def vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for frag in self.fragments:
            out.update(frag.vertices)
        return frozenset(out)

    def stats(self) -> dict:
        return {
            "detours": len(self.ordering),
            "fragment_edges": len(self.edge_ids()),
            "truncated": sum(self.truncated),
            "breakers": {str(j): i for j, i in sorted(self.breakers.items())},
        }


def build_kernel(detours: Sequence[Detour], pi: Path) -> KernelGraph:
    """Assemble the kernel subgraph of a detour collection for one target."""
    pos = _positions(pi)
    ordered = sorted(
        detours,
        key=lambda d: (-pos[d.x], -pos[d.y], pi.edge_ids.index(d.protected_edge)),
    )
    fragments: list[Path] = []
    cuts: list[int] = []
    truncated: list[bool] = []
    breakers: dict[int, int] = {}
    seen: set[int] = set()
    for i, det in enumerate(ordered):
        seg = det.segment
        cut = seg.end
        if i > 0:
            for v in seg.vertices:
                if v in seen:
                    cut = v
                    break
        frag = seg.prefix_to(cut)
        fragments.append(frag)
        cuts.append(cut)
        is_trunc = cut != seg.end
        truncated.append(is_trunc)
        if is_trunc:
            for j in range(i):
                if cut in set(fragments[j].vertices):
                    breakers[i] = j
                    break
        seen.update(frag.vertices)
    return KernelGraph(
        ordering=tuple(ordered),
        fragments=tuple(fragments),
        cuts=tuple(cuts),
        truncated=tuple(truncated),
        breakers=breakers,
    )


def _split_faults(rp: ReplacementPath, pi: Path) -> tuple[int, Optional[int]]:
    """(fault on the base path, remaining fault) for a replacement path."""
    pi_edges = set(pi.edge_ids)
    on_pi = sorted((e for e in rp.faults if e in pi_edges), key=pi.edge_ids.index)
    if not on_pi:
        raise GraphError("replacement path has no fault on the base path")
    first = on_pi[0]
    rest = [e for e in rp.faults if e != first]
    return first, (rest[0] if rest else None)


def _detour_edge_endpoints_ordered(det: Detour, t_id: int) -> tuple[int, int]:
    """Endpoints of a detour edge ordered along the detour direction."""
    idx = det.segment.edge_ids.index(t_id)
    return det.segment.vertices[idx], det.segment.vertices[idx + 1]


def interferes(p_i: ReplacementPath, p_j: ReplacementPath, pi: Path, detours) -> bool:
    """p_i blocks p_j: p_j's detour fault lies on p_i outside p_i's own detour."""
    e_i, _ = _split_faults(p_i, pi)
    _, t_j = _split_faults(p_j, pi)
    if t_j is None:
        return False
    d_i = detours[e_i]
    return t_j in set(p_i.path.edge_ids) - d_i.edge_id_set()


def interference_type(p_i: ReplacementPath, p_j: ReplacementPath, pi: Path, detours) -> str:
    """How p_i blocks p_j: via its base-path fault, its detour fault, both or
    neither, judged against the escape route along p_j's detour suffix."""
    e_i, t_i = _split_faults(p_i, pi)
    e_j, t_j = _split_faults(p_j, pi)
    d_j = detours[e_j]
    _, q2 = _detour_edge_endpoints_ordered(d_j, t_j)
    pi_suffix_edges = set(pi.suffix_from(d_j.y).edge_ids)
    pi_hit = e_i in pi_suffix_edges
    d_hit = t_i is not None and t_i in set(d_j.segment.suffix_from(q2).edge_ids)
    if pi_hit and d_hit:
        return "both"
    if pi_hit:
        return "pi"
    if d_hit:
        return "d"
    return "none"


@dataclass
class PathClassReport:
    vertex: int
    counts: dict[str, int] = field(default_factory=lambda: {c: 0 for c in PATH_CLASSES})
    interference_edges: list[dict] = field(default_factory=list)
    new_edges: int = 0

    def to_json(self) -> dict:
        return {
            "v": self.vertex,
            "classes": dict(self.counts),
            "interference_edges": list(self.interference_edges),
        }


def classify_new_ending(graph: Graph, source: int, v: int, record) -> PathClassReport:
    """Partition the paths that introduced v's new edges into the five classes.

    Requires a build record with retained traces.  Priority order: all faults
    on the base path; detour-avoiding; independent; blocking only via the
    base path; remainder.
    """
    if record is None or record.pi is None:
        raise GraphError("classification requires a traced build record")
    pi = record.pi
    new_items = [it for it in record.introduced if it.edge_id not in record.tree_edges_at_target]
    report = PathClassReport(vertex=v, new_edges=len(new_items))

    pd_items = [it for it in new_items if it.rp.kind == KIND_PI_D]
    for it in pd_items:
        e_id, t_id = _split_faults(it.rp, pi)
        if e_id not in record.detours:
            raise GraphError("trace missing the detour for a replacement path")

    pi_edge_set = set(pi.edge_ids)
    out_sets: dict[int, list] = {}
    in_sets: dict[int, list] = {}
    for it in pd_items:
        out_sets[it.edge_id] = []
        in_sets[it.edge_id] = []
    for a in pd_items:
        for b in pd_items:
            if a.edge_id == b.edge_id:
                continue
            if interferes(a.rp, b.rp, pi, record.detours):
                out_sets[a.edge_id].append(b)
                in_sets[b.edge_id].append(a)
                report.interference_edges.append(
                    {
                        "src": list(graph.endpoints(a.edge_id)),
                        "dst": list(graph.endpoints(b.edge_id)),
                        "type": interference_type(a.rp, b.rp, pi, record.detours),
                    }
                )

    for it in new_items:
        rp = it.rp
        if set(rp.faults) <= pi_edge_set:
            report.counts[CLASS_PI] += 1
            continue
        e_id, _ = _split_faults(rp, pi)
        det = record.detours[e_id]
        if not (set(rp.path.edge_ids) & det.edge_id_set()):
            report.counts[CLASS_NODET] += 1
            continue
        blocked = out_sets[it.edge_id]
        blocking = in_sets[it.edge_id]
        if not blocked and not blocking:
            report.counts[CLASS_INDEP] += 1
        elif all(
            interference_type(rp, other.rp, pi, record.detours) in ("pi", "both")
            for other in blocked
        ):
            report.counts[CLASS_I_PI] += 1
        else:
            report.counts[CLASS_I_D] += 1
    return report


# --- structural claim checks -------------------------------------------------


@dataclass(frozen=True)
class StructuralViolation:
    claim: str
    vertex: int
    detail: str


def _segment_between(det: Detour, a: int, b: int) -> tuple[int, ...]:
    verts = det.segment.vertices
    i, j = verts.index(a), verts.index(b)
    if i <= j:
        return verts[i : j + 1]
    return verts[j : i + 1]


def check_joint_segments(detours: Sequence[Detour], pi: Path, v: int) -> list[StructuralViolation]:
    """Dependent detours agree, up to direction, between any two shared vertices."""
    out = []
    for i in range(len(detours)):
        for j in range(i + 1, len(detours)):
            d1, d2 = detours[i], detours[j]
            shared = sorted(d1.vertex_set() & d2.vertex_set())
            for a_i in range(len(shared)):
                for b_i in range(a_i + 1, len(shared)):
                    a, b = shared[a_i], shared[b_i]
                    s1 = _segment_between(d1, a, b)
                    s2 = _segment_between(d2, a, b)
                    if s1 != s2 and s1 != tuple(reversed(s2)):
                        out.append(
                            StructuralViolation(
                                "joint_segments",
                                v,
                                f"detours of {d1.protected_edge}/{d2.protected_edge} "
                                f"disagree between {a} and {b}",
                            )
                        )
    return out


def check_configuration_claims(
    detours: Sequence[Detour], pi: Path, v: int
) -> list[StructuralViolation]:
    """Non-nested and nested pairs are vertex-disjoint; dependent pairs put
    the first fault between the divergence vertices and the second fault
    between the merge vertices; opposite-entry pairs are reverse or
    xy-interleaved, and xy pairs always run reversed."""
    out = []
    pos = _positions(pi)
    for i in range(len(detours)):
        for j in range(i + 1, len(detours)):
            d1, d2 = sorted(
                (detours[i], detours[j]), key=lambda d: (pos[d.x], pos[d.y])
            )
            cfg = classify_pair(d1, d2, pi)
            if cfg.kind == NON_NESTED and cfg.dependent:
                out.append(StructuralViolation("non_nested_independent", v, f"{d1} vs {d2}"))
            if cfg.kind == NESTED and cfg.dependent:
                out.append(StructuralViolation("nested_independent", v, f"{d1} vs {d2}"))
            if cfg.dependent and pos[d1.x] <= pos[d2.x] <= pos[d1.y] <= pos[d2.y]:
                if pos[d1.x] != pos[d2.x]:
                    span = set(pi.segment(d1.x, d2.x).edge_ids)
                    if d1.protected_edge not in span:
                        out.append(
                            StructuralViolation(
                                "fault_location_first", v, f"{d1.protected_edge} not in [x1,x2]"
                            )
                        )
                if pos[d1.y] != pos[d2.y]:
                    span = set(pi.segment(d1.y, d2.y).edge_ids)
                    if d2.protected_edge not in span:
                        out.append(
                            StructuralViolation(
                                "fault_location_second", v, f"{d2.protected_edge} not in [y1,y2]"
                            )
                        )
            if cfg.dependent:
                mismatch = first_common(d1, d2) != first_common(d2, d1)
                if mismatch and not (
                    cfg.kind == XY_INTERLEAVED
                    or (cfg.kind == INTERLEAVED and cfg.direction == REV)
                ):
                    out.append(
                        StructuralViolation(
                            "opposite_entry_configuration", v, f"{cfg.kind} with entry mismatch"
                        )
                    )
                if (
                    cfg.kind == XY_INTERLEAVED
                    and len(d1.vertex_set() & d2.vertex_set()) > 1
                    and not mismatch
                ):
                    out.append(
                        StructuralViolation(
                            "xy_interleaved_direction", v, "shared segment walked the same way"
                        )
                    )
    return out


def check_excluded_segments(record, pi: Path, v: int) -> list[StructuralViolation]:
    """No path's detour fault falls in an excluded suffix of its own detour."""
    out = []
    pd_paths = [it.rp for it in record.introduced if it.rp.kind == KIND_PI_D]
    all_detours = list(record.detours.values())
    for rp in pd_paths:
        e_id, t_id = _split_faults(rp, pi)
        own = record.detours[e_id]
        for other in all_detours:
            if other.protected_edge == own.protected_edge:
                continue
            if not (own.vertex_set() & other.vertex_set()):
                continue
            seg = excluded_segment(own, other, pi)
            if seg is not None and t_id in set(seg.edge_ids):
                out.append(
                    StructuralViolation(
                        "excluded_segment",
                        v,
                        f"fault {t_id} of detour {own.protected_edge} inside excluded "
                        f"suffix against {other.protected_edge}",
                    )
                )
    return out


def check_kernel_coverage(record, pi: Path, v: int) -> list[StructuralViolation]:
    """The kernel of the new-ending paths' detours contains each path's detour
    prefix up to its fault."""
    out = []
    pd_items = [it for it in record.introduced if it.rp.kind == KIND_PI_D]
    dets = {}
    for it in pd_items:
        e_id, _ = _split_faults(it.rp, pi)
        dets[e_id] = record.detours[e_id]
    if not dets:
        return out
    kernel = build_kernel(list(dets.values()), pi)
    kernel_edges = kernel.edge_ids()
    for it in pd_items:
        e_id, t_id = _split_faults(it.rp, pi)
        det = dets[e_id]
        _, q2 = _detour_edge_endpoints_ordered(det, t_id)
        prefix = det.segment.prefix_to(q2)
        if not set(prefix.edge_ids) <= kernel_edges:
            out.append(
                StructuralViolation(
                    "kernel_coverage",
                    v,
                    f"prefix of detour {e_id} up to fault {t_id} leaves the kernel",
                )
            )
    return out


def check_single_fault_suffixes(record, pi: Path, v: int) -> list[StructuralViolation]:
    """New-ending single-fault paths have pairwise vertex-disjoint suffixes."""
    out = []
    reps = {}
    for rp in record.single_rps.values():
        if rp.new_ending and rp.last_edge not in reps:
            reps[rp.last_edge] = rp
    suffixes = [
        set(rp.path.suffix_from(rp.divergence).vertices) - {v} for rp in reps.values()
    ]
    for i in range(len(suffixes)):
        for j in range(i + 1, len(suffixes)):
            if suffixes[i] & suffixes[j]:
                out.append(
                    StructuralViolation(
                        "single_fault_suffix_disjoint", v, f"suffixes {i} and {j} intersect"
                    )
                )
    return out


def check_unique_divergence(record, pi: Path, v: int) -> list[StructuralViolation]:
    """New-ending paths touch the base path only at their divergence vertex and
    the target once they leave it."""
    out = []
    pi_vertices = set(pi.vertices)
    for it in record.introduced:
        rp = it.rp
        if rp.kind != KIND_PI_D or not rp.new_ending:
            continue
        tail = rp.path.suffix_from(rp.divergence)
        touched = set(tail.vertices) & pi_vertices
        if touched != {rp.divergence, v}:
            out.append(
                StructuralViolation(
                    "unique_divergence", v, f"path for {sorted(rp.faults)} re-enters at {touched}"
                )
            )
        if set(tail.edge_ids) & set(pi.edge_ids):
            out.append(
                StructuralViolation(
                    "suffix_edge_disjoint", v, f"path for {sorted(rp.faults)} reuses base edges"
                )
            )
    return out


def check_detour_divergence_distinct(record, pi: Path, v: int) -> list[StructuralViolation]:
    """Paths that follow part of their detour leave it at pairwise distinct vertices."""
    out = []
    seen: dict[int, frozenset] = {}
    for it in record.introduced:
        rp = it.rp
        if rp.kind != KIND_PI_D or not rp.new_ending:
            continue
        e_id, _ = _split_faults(rp, pi)
        det = record.detours[e_id]
        if not (set(rp.path.edge_ids) & det.edge_id_set()):
            continue
        c = rp.detour_divergence
        if c is None:
            continue
        if c in seen:
            out.append(
                StructuralViolation(
                    "detour_divergence_distinct",
                    v,
                    f"paths {sorted(seen[c])} and {sorted(rp.faults)} share divergence {c}",
                )
            )
        else:
            seen[c] = rp.faults.edges
    return out


def run_structural_checks(graph: Graph, source: int, records: dict) -> list[StructuralViolation]:
    """All structural claims over every traced per-vertex record."""
    out: list[StructuralViolation] = []
    for v, rec in sorted(records.items()):
        if rec.pi is None:
            continue
        dets = list(rec.detours.values())
        out += check_joint_segments(dets, rec.pi, v)
        out += check_configuration_claims(dets, rec.pi, v)
        out += check_excluded_segments(rec, rec.pi, v)
        out += check_kernel_coverage(rec, rec.pi, v)
        out += check_single_fault_suffixes(rec, rec.pi, v)
        out += check_unique_divergence(rec, rec.pi, v)
        out += check_detour_divergence_distinct(rec, rec.pi, v)
    return out

"""Independent brute-force oracles for the test suite.

These deliberately avoid the package's search machinery: adjacency is rebuilt
from raw edge lists and paths are enumerated recursively, so any agreement
with the library is meaningful.
"""

from __future__ import annotations

from collections import deque


def naive_adjacency(n, edges, forbidden_edges=(), forbidden_vertices=()):
    forbidden = {tuple(sorted(e)) for e in forbidden_edges}
    blocked = set(forbidden_vertices)
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        if tuple(sorted((u, v))) in forbidden or u in blocked or v in blocked:
            continue
        adj[u].append(v)
        adj[v].append(u)
    return adj


def naive_bfs(n, edges, source, forbidden_edges=(), forbidden_vertices=()):
    adj = naive_adjacency(n, edges, forbidden_edges, forbidden_vertices)
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist  # missing key == unreachable


def all_simple_paths(n, edges, source, target, forbidden_edges=(), forbidden_vertices=(), max_len=None):
    """Every simple source->target path as a vertex tuple."""
    adj = naive_adjacency(n, edges, forbidden_edges, forbidden_vertices)
    out = []
    stack = [source]
    on_stack = {source}

    def rec():
        u = stack[-1]
        if u == target:
            out.append(tuple(stack))
            return
        if max_len is not None and len(stack) > max_len:
            return
        for v in adj[u]:
            if v not in on_stack:
                stack.append(v)
                on_stack.add(v)
                rec()
                stack.pop()
                on_stack.remove(v)

    rec()
    return out


def all_shortest_paths(n, edges, source, target, forbidden_edges=(), forbidden_vertices=()):
    """Every hop-shortest source->target path, via the shortest-path DAG."""
    dist = naive_bfs(n, edges, source, forbidden_edges, forbidden_vertices)
    if target not in dist:
        return []
    adj = naive_adjacency(n, edges, forbidden_edges, forbidden_vertices)
    out = []

    def rec(v, tail):
        if v == source:
            out.append((source,) + tail)
            return
        for u in adj[v]:
            if u in dist and dist[u] + 1 == dist[v]:
                rec(u, (v,) + tail)

    rec(target, ())
    return out


def path_rank(edge_index, verts):
    """(hops, exact tiebreak fraction) of a vertex path, independent of the
    package: the fraction is compared via the sorted edge-id tuple trick."""
    ids = sorted(edge_index[tuple(sorted((a, b)))] for a, b in zip(verts, verts[1:]))
    # Smaller fraction == lexicographically larger id sequence is wrong in
    # general; compare via exact Fraction arithmetic instead.
    from fractions import Fraction

    frac = sum(Fraction(1, 2 ** (i + 1)) for i in ids)
    return (len(verts) - 1, frac)


def edge_index_of(edges):
    norm = sorted(tuple(sorted(e)) for e in edges)
    return {e: i for i, e in enumerate(norm)}


def min_key_paths(n, edges, source, target, forbidden_edges=(), forbidden_vertices=()):
    """All hop-shortest paths achieving the minimal exact rank, plus the rank."""
    idx = edge_index_of(edges)
    paths = all_shortest_paths(n, edges, source, target, forbidden_edges, forbidden_vertices)
    if not paths:
        return [], None
    ranked = [(path_rank(idx, p), p) for p in paths]
    best = min(r for r, _ in ranked)
    return [p for r, p in ranked if r == best], best

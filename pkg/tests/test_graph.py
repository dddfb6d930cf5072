import pytest
from hypothesis import given, settings, strategies as st

from ftbfs import (
    UNREACHABLE,
    Graph,
    GraphError,
    ParseError,
    Path,
    PathKey,
    bfs_distance,
    bfs_distances,
    format_edge_list,
    parse_edge_list,
    restricted_graph,
    unique_sssp,
)
from ftbfs.generate import complete_graph, cycle_graph, gnp_graph, path_graph

from helpers import min_key_paths, naive_bfs


def test_edge_ids_are_lexicographic_and_input_order_independent():
    g1 = Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    g2 = Graph(4, [(2, 3), (2, 1), (2, 0), (1, 0)])
    assert g1.edges == g2.edges == ((0, 1), (0, 2), (1, 2), (2, 3))
    assert g1.edge_id(3, 2) == 3
    assert g2.edge_id(1, 0) == 0


def test_graph_rejects_self_loops_and_parallel_edges():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 5)])


def test_adjacency_is_symmetric_and_sorted():
    g = Graph(4, [(2, 3), (0, 2), (0, 1)])
    for v in range(4):
        for u in g.neighbors(v):
            assert v in g.neighbors(u)
        assert list(g.neighbors(v)) == sorted(g.neighbors(v))


class TestPathKey:
    def test_hops_dominate(self):
        assert PathKey(1, 0b10) < PathKey(2, 0b01)

    def test_fraction_tiebreak_lowest_id_is_heaviest(self):
        # {0} = 1/2 beats {1,2} = 1/4 + 1/8 = 3/8
        assert PathKey(1, 0b110) < PathKey(1, 0b001)
        assert PathKey(1, 0b001) > PathKey(1, 0b110)

    def test_distinct_edge_sets_never_equal(self):
        a, b = PathKey(2, 0b0011), PathKey(2, 0b0101)
        assert a != b and (a < b or b < a)

    def test_extend_increments_and_rejects_duplicates(self):
        k = PathKey().extend(3).extend(0)
        assert k.hops == 2 and k.edge_ids == {0, 3}
        with pytest.raises(ValueError):
            k.extend(3)

    @given(st.sets(st.integers(0, 30)), st.sets(st.integers(0, 30)))
    def test_fraction_order_matches_exact_arithmetic(self, ids_a, ids_b):
        from fractions import Fraction

        frac = lambda ids: sum(Fraction(1, 2 ** (i + 1)) for i in ids)
        mask = lambda ids: sum(1 << i for i in ids)
        a, b = PathKey(5, mask(ids_a)), PathKey(5, mask(ids_b))
        assert (a < b) == (frac(ids_a) < frac(ids_b))
        assert (a == b) == (ids_a == ids_b)


class TestUniqueSssp:
    def test_cycle_distances_by_hops(self):
        g = cycle_graph(5)
        res = unique_sssp(g, 0)
        assert res.hops(2) == 2
        assert res.path_to(2).vertices == (0, 1, 2)

    def test_k4_forbidden_edge_tiebreak_against_brute_force(self):
        # Lower edge ids weigh more (2**-(id+1)), so the route through vertex 3,
        # whose edges have the higher ids, carries the smaller tiebreak fraction.
        g = complete_graph(4)
        res = unique_sssp(g, 0, forbidden_edges=[(0, 1)])
        got = res.path_to(1).vertices
        best, _ = min_key_paths(4, g.edges, 0, 1, forbidden_edges=[(0, 1)])
        assert len(best) == 1
        assert got == best[0] == (0, 3, 1)

    def test_unreachable_after_bridge_removal(self):
        g = path_graph(3)
        res = unique_sssp(g, 0, forbidden_edges=[(0, 1)])
        assert res.key(1) is UNREACHABLE
        assert res.key(2) is UNREACHABLE
        assert res.path_to(2) is UNREACHABLE

    def test_forbidden_source_rejected(self):
        g = path_graph(3)
        with pytest.raises(GraphError):
            unique_sssp(g, 0, forbidden_vertices=[0])

    def test_key_exposes_exact_tiebreak_edges(self):
        g = cycle_graph(5)
        res = unique_sssp(g, 0)
        key = res.key(2)
        assert key.hops == 2
        assert key.edge_ids == {g.edge_id(0, 1), g.edge_id(1, 2)}

    @pytest.mark.parametrize("seed", range(6))
    def test_hop_agreement_with_plain_bfs(self, seed):
        g = gnp_graph(14, 0.3, seed)
        res = unique_sssp(g, 0)
        oracle = naive_bfs(g.n, g.edges, 0)
        for v in range(g.n):
            if v in oracle:
                assert res.hops(v) == oracle[v]
            else:
                assert res.key(v) is UNREACHABLE

    @pytest.mark.parametrize("seed", range(4))
    def test_prefix_consistency(self, seed):
        g = gnp_graph(12, 0.35, seed)
        res = unique_sssp(g, 0)
        for v in range(1, g.n):
            p = res.path_to(v)
            if p is UNREACHABLE:
                continue
            for u in p.vertices[1:-1]:
                assert res.path_to(u).vertices == p.prefix_to(u).vertices

    @pytest.mark.parametrize("seed", range(4))
    def test_uniqueness_of_minimum_on_small_graphs(self, seed):
        g = gnp_graph(9, 0.4, seed)
        res = unique_sssp(g, 0)
        for v in range(1, g.n):
            best, _ = min_key_paths(g.n, g.edges, 0, v)
            if not best:
                assert res.key(v) is UNREACHABLE
                continue
            assert len(best) == 1
            assert res.path_to(v).vertices == best[0]


class TestRestrictedGraph:
    def test_path_endpoint_case_removes_interior_only(self):
        g = path_graph(4)
        pi = unique_sssp(g, 0).path_to(3)
        view = restricted_graph(g, pi, 0, 3)
        assert view.removed_vertices == {1, 2}

    def test_degenerate_same_vertex_removes_nothing(self):
        g = cycle_graph(5)
        pi = unique_sssp(g, 0).path_to(2)
        view = restricted_graph(g, pi, 1, 1)
        assert view.removed_vertices == set()

    def test_cycle_segment_removes_interior_and_upper_end(self):
        g = cycle_graph(5)
        pi = unique_sssp(g, 0).path_to(2)  # [0, 1, 2]
        view = restricted_graph(g, pi, 0, 2)
        assert view.removed_vertices == {1}
        res = view.sssp(0)
        assert res.path_to(2).vertices == (0, 4, 3, 2)

    def test_midpath_vertex_is_removed_when_not_target(self):
        g = path_graph(4)
        pi = unique_sssp(g, 0).path_to(3)
        view = restricted_graph(g, pi, 0, 2)
        assert view.removed_vertices == {1, 2}

    def test_rejects_vertices_off_the_path(self):
        g = cycle_graph(5)
        pi = unique_sssp(g, 0).path_to(2)
        with pytest.raises(GraphError):
            restricted_graph(g, pi, 0, 4)
        with pytest.raises(GraphError):
            restricted_graph(g, pi, 2, 0)


class TestPath:
    def test_segment_and_concat(self):
        g = path_graph(5)
        p = unique_sssp(g, 0).path_to(4)
        seg = p.segment(1, 3)
        assert seg.vertices == (1, 2, 3)
        joined = p.prefix_to(2).concat(p.suffix_from(2))
        assert joined.vertices == p.vertices

    def test_from_vertices_validates(self):
        g = path_graph(4)
        with pytest.raises(GraphError):
            Path.from_vertices(g, [0, 2])
        with pytest.raises(GraphError):
            Path.from_vertices(g, [0, 1, 0])


class TestEdgeListFormat:
    def test_round_trip_with_header(self):
        g = gnp_graph(10, 0.4, 7)
        text = format_edge_list(g)
        g2 = parse_edge_list(text)
        assert g2.n == g.n and g2.edges == g.edges

    def test_header_optional_and_n_inferred(self):
        g = parse_edge_list("# comment\n0 1\n1 2\n")
        assert g.n == 3 and g.m == 2

    def test_isolated_trailing_vertices_need_header(self):
        g = parse_edge_list("p 5 1\n0 1\n")
        assert g.n == 5

    def test_malformed_line_names_line_number(self):
        with pytest.raises(ParseError) as err:
            parse_edge_list("0 1\n2 x\n")
        assert "line 2" in str(err.value)

    def test_header_mismatch_rejected(self):
        with pytest.raises(ParseError):
            parse_edge_list("p 3 5\n0 1\n")
        with pytest.raises(ParseError):
            parse_edge_list("p 2 1\n0 5\n")


def test_bfs_helpers_agree_with_oracle():
    g = gnp_graph(15, 0.25, 3)
    oracle = naive_bfs(g.n, g.edges, 2, forbidden_edges=[g.edges[0]])
    dist = bfs_distances(g, 2, forbidden_edges=[0])
    for v in range(g.n):
        assert dist[v] == oracle.get(v, -1)
        assert bfs_distance(g, 2, v, forbidden_edges=[0]) == oracle.get(v, -1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(6, 14))
def test_property_sssp_hops_equal_bfs(seed, n):
    g = gnp_graph(n, 0.3, seed)
    res = unique_sssp(g, 0)
    dist = bfs_distances(g, 0)
    for v in range(n):
        if dist[v] < 0:
            assert res.key(v) is UNREACHABLE
        else:
            assert res.hops(v) == dist[v]

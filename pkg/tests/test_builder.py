import pytest

from ftbfs import (
    SourceTree,
    build_f_pi_only,
    build_ftbfs,
    build_h_of_v,
    verify_ft,
)
from ftbfs.builder import STEP_E1, STEP_E2, STEP_E3, STEP_TREE
from ftbfs.generate import complete_graph, cycle_graph, gnp_graph, path_graph, star_graph

from helpers import naive_bfs


def pairs_of(structure):
    return set(structure.edge_pairs())


class TestBuildHOfV:
    def test_path_graph_keeps_only_tree_edge(self):
        g = path_graph(4)
        tree = SourceTree(g, 0)
        h3, rec = build_h_of_v(tree, 3)
        assert {g.endpoints(e) for e in h3} == {(2, 3)}
        assert rec.stats.unreachable_singles == 3

    def test_cycle_collects_both_arcs(self):
        g = cycle_graph(5)
        tree = SourceTree(g, 0)
        h2, rec = build_h_of_v(tree, 2)
        assert {g.endpoints(e) for e in h2} == {(1, 2), (2, 3)}
        # every base-detour pair disconnects the target
        assert rec.stats.unreachable_pid_pairs == rec.stats.pid_pairs == 6

    def test_k4_collects_all_incident_edges(self):
        g = complete_graph(4)
        tree = SourceTree(g, 0)
        h1, _ = build_h_of_v(tree, 1)
        assert {g.endpoints(e) for e in h1} == {(0, 1), (1, 2), (1, 3)}

    def test_monotone_edge_growth_per_step(self):
        g = gnp_graph(20, 0.25, 11)
        tree = SourceTree(g, 0)
        for v in range(1, g.n):
            h_v, rec = build_h_of_v(tree, v)
            # each new-ending step introduces exactly one edge
            assert rec.stats.pid_new == len(
                [i for i in rec.introduced if i.step == STEP_E3]
            )

    def test_source_rejected(self):
        g = cycle_graph(5)
        tree = SourceTree(g, 0)
        with pytest.raises(Exception):
            build_h_of_v(tree, 0)


class TestBuildFtbfs:
    def test_tree_input_returns_tree(self):
        g = path_graph(6)
        s, _ = build_ftbfs(g, 0)
        assert pairs_of(s) == set(g.edges)

    def test_star_input_returns_star(self):
        g = star_graph(6)
        s, _ = build_ftbfs(g, 0)
        assert pairs_of(s) == set(g.edges)

    def test_cycle_returns_whole_cycle(self):
        g = cycle_graph(5)
        s, _ = build_ftbfs(g, 0)
        assert pairs_of(s) == set(g.edges)

    def test_k4_returns_whole_graph(self):
        g = complete_graph(4)
        s, _ = build_ftbfs(g, 0)
        assert pairs_of(s) == set(g.edges)

    def test_provenance_covers_exactly_the_structure(self):
        g = gnp_graph(16, 0.3, 23)
        s, _ = build_ftbfs(g, 0)
        assert set(s.provenance) == set(s.edges)
        tree_edges = {e for e, p in s.provenance.items() if p.step == STEP_TREE}
        tree = SourceTree(g, 0)
        assert tree_edges == set(tree.tree_edges)
        for e, p in s.provenance.items():
            if p.step != STEP_TREE:
                assert p.step in (STEP_E1, STEP_E2, STEP_E3)
                assert 1 <= len(p.faults) <= 2

    def test_per_vertex_new_edges_are_incident(self):
        g = gnp_graph(16, 0.3, 24)
        s, _ = build_ftbfs(g, 0)
        for v, edges in s.per_vertex_new.items():
            for e in edges:
                assert v in g.endpoints(e)

    def test_disconnected_graph_handled(self):
        g = gnp_graph(12, 0.12, 3)  # likely disconnected; valid either way
        s, _ = build_ftbfs(g, 0)
        rep = verify_ft(s, g, [0], 2)
        assert rep.ok

    @pytest.mark.parametrize("seed", range(12))
    def test_ft_property_small_random(self, seed):
        g = gnp_graph(14, 0.3, seed + 900)
        s, _ = build_ftbfs(g, 0)
        rep = verify_ft(s, g, [0], 2)
        assert rep.ok, rep.violations[:3]

    def test_jobs_parallel_build_matches_serial(self):
        g = gnp_graph(18, 0.3, 77)
        serial, _ = build_ftbfs(g, 0, jobs=1)
        parallel, _ = build_ftbfs(g, 0, jobs=2)
        assert serial.edges == parallel.edges
        assert serial.provenance == parallel.provenance

    def test_sidecar_schema(self):
        g = cycle_graph(5)
        s, _ = build_ftbfs(g, 0)
        side = s.sidecar()
        assert side["schema"] == 1
        assert side["m_H"] == 5
        assert side["f"] == 2
        assert set(side["step_histograms"]) == {STEP_TREE, STEP_E1, STEP_E2, STEP_E3}


class TestBuildFPiOnly:
    def test_tree_stays_tree(self):
        g = path_graph(5)
        s = build_f_pi_only(g, 0, 1)
        assert pairs_of(s) == set(g.edges)

    def test_cycle_f2_collects_cycle(self):
        g = cycle_graph(5)
        s = build_f_pi_only(g, 0, 2)
        assert pairs_of(s) == set(g.edges)

    def test_k4_f1_single_extra_edge_at_depth_one(self):
        g = complete_graph(4)
        s = build_f_pi_only(g, 0, 1)
        # v=1: the empty fault set keeps (0,1); the single base fault forces the
        # tie-broken replacement ending with (1,3)
        per_v1 = {g.endpoints(e) for e in s.per_vertex_new[1]}
        assert per_v1 == {(1, 3)}

    def test_is_single_fault_resilient_on_base_path_faults_only(self):
        # diagnostic only: check distances under base-path fault sets
        g = gnp_graph(12, 0.35, 5)
        s = build_f_pi_only(g, 0, 1)
        h_pairs = pairs_of(s)
        tree = SourceTree(g, 0)
        from ftbfs import UNREACHABLE

        for v in range(1, g.n):
            pi = tree.path_to(v)
            if pi is UNREACHABLE:
                continue
            for e in pi.edge_ids:
                fault = g.endpoints(e)
                o = naive_bfs(g.n, g.edges, 0, forbidden_edges=[fault])
                h = naive_bfs(g.n, list(h_pairs), 0, forbidden_edges=[fault])
                assert o.get(v) == h.get(v)

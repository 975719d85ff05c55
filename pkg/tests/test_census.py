from fractions import Fraction

import pytest
from django.test import override_settings
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from ramsey_lab.census import (DENSE_PAIRS, census, count_copies, count_k2_10, count_k2_10_plus,
                               dense_pair_violations, densest_subgraph, densest_subgraph_flow,
                               densest_vertex_subset, enumerate_copies, four_cycle_containment, get_pattern,
                               greedy_edge_disjoint_triangles, max_subgraph_density, minus_copies_containing,
                               observed_packing_density, p2_copy_bound, p3_k210_bound, p4_triangle_packing,
                               pattern_from_graph, pattern_library, triangles)
from ramsey_lab.contrib import oracles
from ramsey_lab.exceptions import HostTooLarge, InvalidGraph, PatternTooLarge
from ramsey_lab.graphs import Graph, RngSpec, sample_gnp
from tests import mocks


def complete_bipartite(a, b):
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


class TestLibrary:
    @pytest.mark.parametrize('name,v,e', [
        ('K3', 3, 3),
        ('K4_minus', 4, 5),
        ('F0', 6, 9),
        ('F0_minus', 6, 8),
        ('F1_minus', 5, 7),
        ('F5', 8, 12),
        ('K2_10', 12, 20),
        ('K2_10_plus', 13, 21),
    ])
    def test_sizes(self, name, v, e):
        pattern = pattern_library()[name]
        assert (pattern.v, pattern.e) == (v, e)

    @pytest.mark.parametrize('name,density', [
        ('K4_minus', Fraction(5, 4)),
        ('F0_minus', Fraction(4, 3)),
        ('F1_minus', Fraction(7, 5)),
    ])
    def test_max_subgraph_density(self, name, density):
        assert max_subgraph_density(name) == density

    def test_unknown_pattern(self):
        with pytest.raises(KeyError):
            get_pattern('K7')

    def test_user_patterns_are_size_limited(self):
        path = Graph(14, [(v, v + 1) for v in range(13)])
        with pytest.raises(PatternTooLarge):
            pattern_from_graph('long_path', path)

    def test_disconnected_patterns_need_a_flag(self):
        two_edges = Graph(4, [(0, 1), (2, 3)])
        with pytest.raises(InvalidGraph):
            pattern_from_graph('matching', two_edges)
        assert pattern_from_graph('matching', two_edges, disconnected=True).e == 2


class TestCopies:
    def test_small_hosts(self):
        k4 = Graph.complete(4)
        assert count_copies(mocks.PatternGraphFactory.create('K3'), 'K3') == 1
        assert count_copies(k4, 'K3') == 4
        assert count_copies(k4, 'C4') == 3
        assert count_copies(k4, 'K4_minus') == 6

    def test_copies_are_sorted_and_distinct(self):
        copies = enumerate_copies(Graph.complete(5), 'C4')
        images = [copy.edges for copy in copies]
        assert len(images) == len(set(images)) == 15
        assert images == sorted(images, key=sorted)

    def test_generic_matcher_pattern(self):
        g = sample_gnp(9, 0.5, RngSpec(2))
        assert set(c.edges for c in enumerate_copies(g, 'F2')) == oracles.copies(g, 'F2')

    def test_user_pattern(self):
        star = pattern_from_graph('claw', Graph(4, [(0, 1), (0, 2), (0, 3)]))
        assert count_copies(Graph.complete(5), star) == 5 * 4

    @pytest.mark.parametrize('seed', range(4))
    def test_against_exhaustive_enumeration(self, seed):
        g = sample_gnp(9, 0.4, RngSpec(seed))
        for name in ('K3', 'K12', 'C4', 'C5', 'K4_minus', 'F1_minus', 'F0_minus', 'F0', 'F1', 'F4'):
            assert set(c.edges for c in enumerate_copies(g, name)) == oracles.copies(g, name), name

    def test_k2_10_closed_forms(self):
        g = complete_bipartite(2, 11)
        assert count_k2_10(g) == len(enumerate_copies(g, 'K2_10')) == 11
        assert count_k2_10_plus(g) == len(enumerate_copies(g, 'K2_10_plus')) == 22
        assert count_copies(g, 'K2_10') == 11
        assert p3_k210_bound(g, 0.5)
        assert not p3_k210_bound(g, 0.1)

    def test_census(self):
        result = census(Graph.complete(4), ['K3', 'K4'])
        assert result == {'K3': 4, 'K4': 1}
        assert set(census(mocks.PatternGraphFactory.create('C5'))) == set(pattern_library())


class TestTriangles:
    def test_packing(self):
        assert len(greedy_edge_disjoint_triangles(Graph.complete(4))) == 1
        assert greedy_edge_disjoint_triangles(mocks.PatternGraphFactory.create('C5')) == []
        assert len(greedy_edge_disjoint_triangles(mocks.DisjointGraphFactory.create('K3', 'K3'))) == 2

    def test_restricted_triangles_keep_host_labels(self):
        g = mocks.PatternGraphFactory.create('K3', offset=4)
        assert triangles(g) == [(4, 5, 6)]
        assert triangles(g, restrict=[4, 5, 6, 0]) == [(4, 5, 6)]

    def test_packing_predicates(self):
        g = Graph.complete(6)
        assert observed_packing_density(g, 0.5) == pytest.approx(len(greedy_edge_disjoint_triangles(g)) / 27.0)
        assert p4_triangle_packing(g, 0.0, 0.5)
        assert p2_copy_bound(Graph(10), 'K3', 0.1)


class TestDensity:
    def test_dense_pairs(self):
        assert [(v.v, v.e) for v in dense_pair_violations(Graph.complete(4))] == [(4, 6)]
        assert dense_pair_violations(mocks.PatternGraphFactory.create('C5')) == []
        assert (8, 12) in [(v.v, v.e) for v in dense_pair_violations(mocks.PatternGraphFactory.create('F5'))]

    def test_dense_pair_scan_is_guarded(self):
        with override_settings(DENSE_SCAN_MAX_VERTICES=5):
            with pytest.raises(HostTooLarge):
                dense_pair_violations(Graph(6))

    @pytest.mark.parametrize('seed', range(8))
    def test_dense_pairs_against_subsets(self, seed):
        g = sample_gnp(10, 0.55, RngSpec(seed))
        assert [tuple(v) for v in dense_pair_violations(g)] == oracles.dense_vertex_sets(g, DENSE_PAIRS)

    def test_densest_scan(self):
        density, vertices = densest_vertex_subset(mocks.DisjointGraphFactory.create('K4', 'K3'))
        assert density == Fraction(3, 2)
        assert vertices == (0, 1, 2, 3)

    @hypothesis_settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6), st.floats(min_value=0.1, max_value=0.9))
    def test_flow_agrees_with_scan(self, seed, p):
        g = sample_gnp(10, p, RngSpec(seed))
        density, witness = densest_subgraph_flow(g)
        assert density == oracles.max_density(g) == densest_vertex_subset(g)[0]
        if g.m:
            chosen = set(witness)
            inside = sum(1 for a, b in g.edges if a in chosen and b in chosen)
            assert Fraction(inside, len(chosen)) == density

    def test_densest_switches_to_flow(self):
        g = mocks.DisjointGraphFactory.create('K4', 'C5')
        with override_settings(DENSEST_SCAN_MAX_VERTICES=4):
            assert densest_subgraph(g)[0] == Fraction(3, 2)


class TestFourCycleContainment:
    # cycle y-x-w-z with x=0, y=1, w=2, z=3

    def test_k4_minus(self):
        g = Graph(4, [(0, 1), (0, 2), (2, 3), (1, 3), (0, 3)])
        name, edges, completing = four_cycle_containment(g, 0, 1, 2, 3)
        assert name == 'K4_minus'
        assert count_copies(Graph(4, edges), 'K4_minus') == 1
        assert completing == (1, 2)

    def test_f1_minus(self):
        g = Graph(5, [(0, 1), (0, 2), (2, 3), (1, 3), (0, 4), (1, 4), (2, 4)])
        name, edges, _ = four_cycle_containment(g, 0, 1, 2, 3)
        assert name == 'F1_minus'
        assert count_copies(Graph(5, edges), 'F1_minus') == 1

    def test_f0_minus(self):
        g = Graph(6, [(0, 1), (0, 2), (2, 3), (1, 3), (0, 4), (1, 4), (0, 5), (2, 5)])
        name, edges, completing = four_cycle_containment(g, 0, 1, 2, 3)
        assert name == 'F0_minus'
        assert count_copies(Graph(6, edges), 'F0_minus') == 1
        assert count_copies(Graph(6, edges | {completing}), 'F0') == 1

    def test_missing_triangle(self):
        g = Graph(4, [(0, 1), (0, 2), (2, 3), (1, 3)])
        assert four_cycle_containment(g, 0, 1, 2, 3) is None

    def test_requires_a_cycle(self):
        with pytest.raises(InvalidGraph):
            four_cycle_containment(Graph(4, [(0, 1)]), 0, 1, 2, 3)

    def test_minus_copies_containing(self):
        g = mocks.PatternGraphFactory.create('F1_minus')
        found = minus_copies_containing(g, [(0, 1)])
        assert [name for name, _ in found] == ['F1_minus', 'K4_minus']


@pytest.mark.slow
class TestCensusAtScale:
    @pytest.mark.parametrize('seed', range(200))
    def test_copies_against_exhaustive_enumeration(self, seed):
        g = sample_gnp(12, 0.4, RngSpec(seed, 2))
        for name, pattern in pattern_library().items():
            if pattern.v <= 6:
                assert set(c.edges for c in enumerate_copies(g, name)) == oracles.copies(g, pattern), name

    @pytest.mark.parametrize('seed', range(100))
    def test_dense_pairs_against_subsets(self, seed):
        g = sample_gnp(12, 0.45, RngSpec(seed, 3))
        assert [tuple(v) for v in dense_pair_violations(g)] == oracles.dense_vertex_sets(g, DENSE_PAIRS)

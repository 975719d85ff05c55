from fractions import Fraction

import pytest
from django.test import override_settings

from ramsey_lab.collages import (INDETERMINATE, NO, YES, Collage, CoreExtractionLog, build_collage_hypergraph,
                                 dense_verdict, discharging_verdict, extract_core, is_very_well_behaved,
                                 is_well_behaved, maximal_collages, replay_core_log, sparse_verdict)
from ramsey_lab.exceptions import ExactScanRefused, PreconditionViolation, ReplayMismatch
from ramsey_lab.graphs import Graph, RngSpec, sample_gnp
from tests import mocks


# F0_minus with the triangle 0-1-5 ranked first
F0_MINUS_ORDER = {(0, 1): 0, (0, 5): 1, (1, 5): 2, (0, 2): 3, (0, 4): 4, (2, 4): 5, (1, 3): 6, (2, 3): 7}


class TestHypergraph:
    def test_triangle_free_edges_are_singletons(self):
        hypergraph = build_collage_hypergraph(mocks.PatternGraphFactory.create('C5'))
        assert hypergraph.hyperedges == []
        assert [len(component) for component in hypergraph.components] == [1] * 5

    def test_triangle_and_far_edge(self):
        g = Graph(5, [(0, 1), (0, 2), (1, 2), (3, 4)])
        hypergraph = build_collage_hypergraph(g)
        assert [sorted(component) for component in hypergraph.components] == [
            [(0, 1), (0, 2), (1, 2)], [(3, 4)]]
        assert hypergraph.component_of[(3, 4)] == 1

    def test_k4_is_one_component(self):
        hypergraph = build_collage_hypergraph(Graph.complete(4))
        assert len(hypergraph.components) == 1
        assert len(hypergraph.components[0]) == 6
        assert [h.kind for h in hypergraph.hyperedges] == ['K3'] * 4


class TestMaximalCollages:
    def test_disjoint_triangles(self):
        collages = maximal_collages(mocks.DisjointGraphFactory.create('K3', 'K3'))
        assert [(c.e, c.v) for c in collages] == [(3, 3), (3, 3)]

    def test_f0_is_one_collage(self):
        collages = maximal_collages(mocks.PatternGraphFactory.create('F0'))
        assert len(collages) == 1 and collages[0].e == 9

    @pytest.mark.parametrize('seed', range(5))
    def test_collages_partition_the_edges(self, seed):
        g = sample_gnp(60, 0.05, RngSpec(seed))
        collages = maximal_collages(g)
        edges = [edge for c in collages for edge in c.edges]
        assert len(edges) == len(set(edges)) == g.m

    def test_collage_keeps_host_labels(self):
        c = maximal_collages(mocks.PatternGraphFactory.create('K3', offset=7))[0]
        assert c.vertices() == (7, 8, 9)
        assert c.host_n == 10
        assert c.density == Fraction(1)

    def test_collage_needs_edges(self):
        with pytest.raises(PreconditionViolation):
            Collage(5, [])

    def test_blocks(self):
        assert [b.kind for b in mocks.CollageFactory.create('K3').blocks] == ['triangle']
        assert [b.kind for b in mocks.CollageFactory.create('K4_minus').blocks] == ['k4_minus']
        assert [b.kind for b in mocks.CollageFactory.create('F0_minus').blocks] == ['triangle', 'triangle']
        assert [b.kind for b in mocks.CollageFactory.create('K4').blocks] == ['k4_minus'] * 6


class TestWellBehaved:
    def test_single_triangle(self):
        c = mocks.CollageFactory.create('K3', n=100)
        assert is_well_behaved(c)
        assert is_very_well_behaved(c)

    def test_size_condition(self):
        verdict = is_well_behaved(mocks.CollageFactory.create('K4'))
        assert verdict.status == NO and verdict.condition == 'i'

    def test_k4_is_sparse_but_dense_paired(self):
        c = mocks.CollageFactory.create('K4', n=100)
        verdict = is_well_behaved(c)
        assert verdict.status == YES and verdict.density == Fraction(3, 2)
        very = is_very_well_behaved(c)
        assert very.status == NO and very.condition == 'iii'
        assert (very.witness['v'], very.witness['e']) == (4, 6)

    def test_f5_fails_only_the_dense_pairs(self):
        c = Collage.from_graph(mocks.PatternGraphFactory.create('F5', n=10 ** 6))
        assert is_well_behaved(c).status == YES
        assert dense_verdict(c).status == NO

    def test_exact_mode(self):
        verdict = sparse_verdict(mocks.CollageFactory.create('K4'), 'exact')
        assert verdict.status == YES
        assert verdict.mode == 'exact'
        assert verdict.density == Fraction(3, 2)

    def test_exact_scan_is_guarded(self):
        with override_settings(EXACT_SUBCOLLAGE_MAX_HYPEREDGES=2):
            with pytest.raises(ExactScanRefused):
                sparse_verdict(mocks.CollageFactory.create('K4'), 'exact')

    def test_sufficient_mode_can_be_undecided(self):
        verdict = sparse_verdict(Collage.from_graph(Graph.complete(5)), 'sufficient')
        assert verdict.status == INDETERMINATE
        assert verdict.density == Fraction(2)
        assert verdict.to_dict()['density'] == '2'

    def test_auto_mode_without_exact_scan(self):
        with override_settings(EXACT_SUBCOLLAGE_MAX_HYPEREDGES=1):
            verdict = sparse_verdict(Collage.from_graph(Graph.complete(5)))
        assert verdict.status == INDETERMINATE and verdict.condition == 'ii'

    def test_unknown_density_mode(self):
        with pytest.raises(ValueError):
            sparse_verdict(mocks.CollageFactory.create('K3'), 'guess')

    def test_dense_scan_refusal_is_indeterminate(self):
        with override_settings(DENSE_SCAN_MAX_VERTICES=3):
            verdict = dense_verdict(mocks.CollageFactory.create('K4'))
        assert verdict.status == INDETERMINATE and verdict.condition == 'iii'

    def test_discharging_verdict_ignores_size(self):
        c = mocks.CollageFactory.create('F0_minus')
        assert is_well_behaved(c).status == NO
        assert discharging_verdict(c).status == YES


class TestCoreExtraction:
    def test_single_triangle(self):
        c = mocks.CollageFactory.create('K3', n=100)
        core, log = extract_core(c)
        assert set(core) == set(c.edges)
        assert log.L_V == [0, 1, 2]
        assert log.L_E[0] == (0, 1)
        assert log.L_O == []
        assert log.L_D == [(2, [(0, 2), (1, 2)])]
        assert log.halt == 'exhausted'
        assert log.claim_violations() == []

    def test_size_halt(self):
        _, log = extract_core(mocks.CollageFactory.create('K3', n=10))
        assert log.halt == 'size'

    def test_regular_step(self):
        c = mocks.CollageFactory.create('F0_minus', n=1000)
        core, log = extract_core(c, edge_order=F0_MINUS_ORDER.get)
        assert [step.kind for step in log.steps] == ['seed', 'degenerate', 'regular']
        assert len(log.L_O) == 1 and log.L_O[0] in (1, 2)
        assert log.L_D == [(2, [(0, 5), (1, 5)])]
        assert len(core) == 8
        assert replay_core_log(c, log, F0_MINUS_ORDER.get) == log.L_E

    def test_replay_detects_tampering(self):
        c = mocks.CollageFactory.create('F0_minus', n=1000)
        _, log = extract_core(c, edge_order=F0_MINUS_ORDER.get)
        tampered = CoreExtractionLog.from_dict(log.to_dict())
        tampered.L_V = tampered.L_V[:-1]
        with pytest.raises(ReplayMismatch):
            replay_core_log(c, tampered, F0_MINUS_ORDER.get)
        shuffled = CoreExtractionLog.from_dict(log.to_dict())
        shuffled.L_O = []
        with pytest.raises(ReplayMismatch):
            replay_core_log(c, shuffled, F0_MINUS_ORDER.get)

    def test_log_serialisation(self):
        _, log = extract_core(mocks.CollageFactory.create('F0_minus', n=1000))
        assert CoreExtractionLog.from_dict(log.to_dict()) == log
        assert '"halt": "exhausted"' in log.to_json()

    def test_disconnected_collage(self):
        c = Collage.from_graph(mocks.DisjointGraphFactory.create('K3', 'K3', n=1000))
        with pytest.raises(PreconditionViolation):
            extract_core(c)

    @pytest.mark.parametrize('seed', range(10))
    def test_random_collages(self, seed):
        g = sample_gnp(80, 0.08, RngSpec(seed))
        for c in maximal_collages(g):
            core, log = extract_core(c)
            assert len(log.L_D) <= 7
            assert log.claim_violations() == []
            assert set(core) <= set(c.edges)
            assert replay_core_log(c, log) == log.L_E


@pytest.mark.slow
def test_core_extraction_at_scale():
    for c in mocks.SampledCollagesFactory.create(500, 80, 0.08, accept=lambda c: c.hyperedges, stream=9):
        core, log = extract_core(c)
        assert log.claim_violations() == []
        assert replay_core_log(c, log) == log.L_E

import itertools

import pytest

from ramsey_lab.colourings import BLUE, RED, TwoColouring, monochromatic_triangles
from ramsey_lab.exceptions import FirstRoundFailure, InvalidGraph, PreconditionViolation, ReplayMismatch
from ramsey_lab.games import (FAILURE, FIRST_ROUND_FAILURE, SUCCESS, GameTranscript, StrategySpec, Variant,
                              first_round_colouring, greedy_extend, online_game, online_game_order,
                              replay_transcript, two_round_game)
from ramsey_lab.graphs import Graph, RngSpec, edge_key
from ramsey_lab.lab import threshold_scale
from tests import mocks


def red_triangle_trap():
    """``02``, ``12`` red and ``03``, ``13`` blue; the new edge ``01`` closes both kinds of triangle."""

    g1 = Graph(4, [(0, 2), (1, 2), (0, 3), (1, 3)])
    return g1, mocks.ColouringFactory.create(g1, red=[(0, 2), (1, 2)])


class TestStrategySpec:
    def test_variant_from_value(self):
        assert StrategySpec('naive_triangle_free').variant is Variant.NAIVE_TRIANGLE_FREE
        spec = StrategySpec(Variant.GOOD_COLOURING, budget=10)
        assert StrategySpec.from_dict(spec.to_dict()) == spec

    @pytest.mark.parametrize('kwargs', [
        {'budget': 0},
        {'density_mode': 'guess'},
        {'variant': 'all_blue_greedy', 'budget': 5},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            StrategySpec(**kwargs)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            StrategySpec('lucky')


class TestGreedyExtend:
    def test_blue_then_red(self):
        g1 = Graph(3, [(0, 1), (0, 2)])
        phi1 = TwoColouring.monochromatic(g1, BLUE)
        result = greedy_extend(g1, phi1, Graph.complete(3))
        assert result.success
        assert result.decisions == [(1, 2, RED)]
        assert result.colouring.colour(1, 2) is RED
        assert result.colouring.universe == Graph.complete(3)

    def test_failure(self):
        g1, phi1 = red_triangle_trap()
        result = greedy_extend(g1, phi1, Graph(4, list(g1.edges) + [(0, 1)]))
        assert not result.success
        assert result.failure_edge == (0, 1)
        assert result.red_triangle == (0, 1, 2)
        assert result.blue_witness == (0, 1, 3)
        assert result.colouring.colour(0, 1) is RED

    def test_keeps_first_round_colours(self):
        g1, phi1 = red_triangle_trap()
        g2 = Graph(4, [(0, 2), (2, 3)])
        result = greedy_extend(g1, phi1, g2)
        assert result.colouring.colour(0, 2) is RED
        assert result.decisions == [(2, 3, BLUE)]

    def test_rejects_monochromatic_first_round(self):
        k3 = Graph.complete(3)
        with pytest.raises(PreconditionViolation):
            greedy_extend(k3, TwoColouring.monochromatic(k3, RED), k3)

    def test_order_must_be_a_permutation(self):
        g1, phi1 = red_triangle_trap()
        g2 = Graph(4, [(0, 1), (2, 3)])
        with pytest.raises(InvalidGraph):
            greedy_extend(g1, phi1, g2, [(0, 1)])
        assert greedy_extend(g1, phi1, g2, [(3, 2), (1, 0)]).failure_edge == (0, 1)


class TestFirstRound:
    def test_good_colouring_on_sparse_hosts(self):
        for seed in range(4):
            g = mocks.SparseHostFactory.create(seed=seed, n=40, p=0.1)
            phi = first_round_colouring(g)
            assert phi.is_complete
            assert monochromatic_triangles(phi) == []

    def test_good_colouring_falls_back(self):
        phi = first_round_colouring(Graph.complete(5))
        assert monochromatic_triangles(phi) == []

    def test_naive_on_k6(self):
        with pytest.raises(FirstRoundFailure) as info:
            first_round_colouring(Graph.complete(6), StrategySpec('naive_triangle_free'))
        assert info.value.proven

    def test_good_colouring_on_k6(self):
        with pytest.raises(FirstRoundFailure) as info:
            first_round_colouring(Graph.complete(6))
        assert info.value.proven

    def test_exhausted_budget_is_not_proven(self):
        with pytest.raises(FirstRoundFailure) as info:
            first_round_colouring(Graph.complete(6), StrategySpec('naive_triangle_free', budget=1))
        assert not info.value.proven

    def test_greedy_variant(self):
        c5 = mocks.PatternGraphFactory.create('C5')
        phi = first_round_colouring(c5, StrategySpec('all_blue_greedy'), RngSpec(1))
        assert phi.edges_of(RED) == []
        with pytest.raises(ValueError):
            first_round_colouring(c5, StrategySpec('all_blue_greedy'))


class TestTwoRoundGame:
    def test_empty_second_round(self):
        transcript = two_round_game(30, 0.05, 0.0, rng=RngSpec(2))
        assert transcript.outcome == SUCCESS
        assert transcript.order == [] and transcript.decisions == []
        assert len(transcript.phi1) == len(transcript.g1_edges)

    def test_first_round_failure(self):
        transcript = two_round_game(6, 1.0, 0.5, StrategySpec('naive_triangle_free'), RngSpec(0))
        assert transcript.outcome == FIRST_ROUND_FAILURE
        assert transcript.first_round_proven is True

    def test_dense_second_round_fails(self):
        transcript = two_round_game(12, 0.0, 1.0, rng=RngSpec(5))
        assert transcript.outcome == FAILURE
        u, v = transcript.failure_edge
        assert u in transcript.red_triangle and v in transcript.red_triangle
        assert transcript.decisions[-1][:2] == transcript.failure_edge

    def test_lex_arrival(self):
        transcript = two_round_game(15, 0.0, 0.2, rng=RngSpec(1), arrival='lex')
        assert transcript.order == sorted(transcript.order)

    def test_uniform_model(self):
        transcript = two_round_game(20, model='uniform', m1=10, m2=15, rng=RngSpec(4))
        assert len(transcript.g1_edges) == 10

    @pytest.mark.parametrize('kwargs', [
        {'p': 0.1, 'q': 0.1, 'model': 'poisson'},
        {'p': 0.1, 'q': 0.1, 'arrival': 'backwards'},
        {'p': 1.5, 'q': 0.1},
        {'p': 0.1},
        {'model': 'uniform', 'm1': 3},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            two_round_game(10, **kwargs)

    def test_report(self):
        transcript = two_round_game(25, 0.1, 0.05, rng=RngSpec(3), report=True)
        assert transcript.report['mono_triangles'] == []

    def test_transcript_json(self):
        transcript = two_round_game(40, 0.08, 0.12, rng=RngSpec(3, 1))
        assert GameTranscript.from_json(transcript.to_json()) == transcript

    def test_replay(self):
        transcript = two_round_game(40, 0.08, 0.12, rng=RngSpec(3, 1), report=True)
        fresh = replay_transcript(GameTranscript.from_json(transcript.to_json()))
        assert fresh.to_dict() == transcript.to_dict()

    def test_replay_detects_tampering(self):
        transcript = two_round_game(40, 0.08, 0.12, rng=RngSpec(3, 1))
        transcript.outcome = 'tampered'
        with pytest.raises(ReplayMismatch):
            replay_transcript(transcript)


class TestOnlineGame:
    def test_k4_only_fails_on_the_last_edge(self):
        failures = 0
        for order in itertools.permutations(Graph.complete(4).edges):
            result = online_game_order(4, order)
            assert result.rounds == 6
            failures += not result.survived
        assert 0 < failures < 720

    def test_known_failing_order(self):
        result = online_game_order(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])
        assert not result.survived
        assert result.failure_edge == (2, 3)
        assert result.red_triangle == (1, 2, 3)

    def test_blue_four_cycle_survives(self):
        assert online_game_order(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)]).survived

    def test_rejects_repeated_edges(self):
        with pytest.raises(InvalidGraph):
            online_game_order(4, [(0, 1), (1, 0)])

    @pytest.mark.parametrize('seed', range(5))
    def test_five_edges_always_survive(self, seed):
        assert online_game(10, 1, RngSpec(seed)) == (1, True, None, None)
        assert online_game(10, 5, RngSpec(seed)).survived

    def test_edge_budget(self):
        with pytest.raises(ValueError):
            online_game(4, 7, RngSpec(0))


@pytest.mark.slow
def test_failures_close_both_kinds_of_triangle():
    n = 100
    p = n ** -0.55
    scale = threshold_scale(n, p)
    failures = 0
    for trial in range(2000):
        q = min(1.0, (1, 10, 100)[trial % 3] * scale)
        transcript = two_round_game(n, p, q, rng=RngSpec(13, trial))
        if transcript.outcome != FAILURE:
            continue
        failures += 1
        colours = dict((edge_key(u, v), c) for u, v, c in transcript.phi1 + transcript.decisions[:-1])
        u, v = transcript.failure_edge
        for triangle, colour in ((transcript.red_triangle, RED), (transcript.blue_witness, BLUE)):
            (w,) = set(triangle) - {u, v}
            assert colours[edge_key(u, w)] is colour and colours[edge_key(v, w)] is colour
    assert failures > 0

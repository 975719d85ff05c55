import math

import pytest
from django.test import override_settings
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from ramsey_lab.contrib import oracles
from ramsey_lab.density import (Wedge, completion_threshold, janson_params, overlap_counts, peel_bounded_degree,
                                pi_lower_bound_check, pi_set, wedge_lower_bound_holds, x2_count, xs_family)
from ramsey_lab.exceptions import FamilyTooLarge, PreconditionViolation
from ramsey_lab.graphs import EdgeSubset, Graph, RngSpec, sample_gnp

PATH = Graph(3, [(0, 1), (1, 2)])


def star(leaves, n=None):
    return Graph(leaves + 1 if n is None else n, [(0, v) for v in range(1, leaves + 1)])


def shapes_by_brute_force(family):
    counts = {'path': 0, 'star': 0, 'triangle': 0}
    for first in family:
        for second in family:
            if first == second or not set(first.edges) & set(second.edges):
                continue
            vertices = {first.centre, first.u1, first.u2, second.centre, second.u1, second.u2}
            if first.centre == second.centre:
                counts['star'] += 1
            elif len(vertices) == 3:
                counts['triangle'] += 1
            else:
                counts['path'] += 1
    return counts['path'], counts['star'], counts['triangle']


class TestWedges:
    def test_x2(self):
        assert x2_count(PATH) == 1
        assert x2_count(star(4)) == 6
        assert x2_count(EdgeSubset(6, [(0, 1)])) == 0

    def test_pi(self):
        assert list(pi_set(PATH)) == [(0, 2)]
        assert len(pi_set(Graph.complete(3))) == 3

    def test_xs_family(self):
        assert xs_family(PATH, 4) == [Wedge(3, 0, 2)]
        assert xs_family(PATH) == []
        assert xs_family(PATH, 4, exclude=EdgeSubset(4, [(0, 3)])) == []
        assert Wedge(3, 0, 2).edges == ((0, 3), (2, 3))

    @pytest.mark.parametrize('seed', range(6))
    def test_against_oracles(self, seed):
        g = sample_gnp(9, 0.35, RngSpec(seed))
        assert x2_count(g) == oracles.wedge_count(g)
        assert set(pi_set(g)) == oracles.closing_pairs(g)
        assert set(tuple(w) for w in xs_family(g)) == oracles.four_cycle_wedges(g)


class TestOverlaps:
    def test_shapes(self):
        assert overlap_counts([Wedge(0, 1, 2), Wedge(0, 1, 3)]) == (0, 2, 0)
        assert overlap_counts([Wedge(0, 1, 2), Wedge(1, 0, 3)]) == (2, 0, 0)
        assert overlap_counts([Wedge(0, 1, 2), Wedge(1, 0, 2)]) == (0, 0, 2)
        assert overlap_counts([Wedge(0, 1, 2), Wedge(3, 4, 5)]) == (0, 0, 0)

    @pytest.mark.parametrize('seed', range(4))
    def test_against_brute_force(self, seed):
        family = xs_family(sample_gnp(8, 0.3, RngSpec(seed)))
        assert overlap_counts(family) == shapes_by_brute_force(family)


class TestJansonParams:
    def test_single_member(self):
        report = janson_params(PATH, 4, 0.5)
        assert report.xs_size == 1
        assert report.mu == pytest.approx(0.25)
        assert report.delta1 == report.delta2 == 0.0
        assert report.delta_total == pytest.approx(0.25)
        assert report.mu_sq_over_delta == pytest.approx(0.25)
        assert report.to_dict()['pi_size'] == 1

    def test_moments(self):
        g = sample_gnp(10, 0.3, RngSpec(3))
        p = 0.2
        report = janson_params(g, 10, p)
        paths, stars, tris = shapes_by_brute_force(xs_family(g))
        assert report.mu == pytest.approx(report.xs_size * p ** 2)
        assert report.delta1 == pytest.approx(paths * p ** 3)
        assert report.delta2 == pytest.approx(stars * p ** 3)
        assert report.delta_exact == pytest.approx(report.delta_total + tris * p ** 3)

    def test_exclude_everything(self):
        g = sample_gnp(8, 0.4, RngSpec(1))
        everything = EdgeSubset(8, Graph.complete(8).edges)
        report = janson_params(g, 8, 0.3, exclude=everything)
        assert report.xs_size == 0 and report.mu_sq_over_delta == 0.0

    @pytest.mark.parametrize('p', [0.0, 1.0, -0.1])
    def test_probability_range(self, p):
        with pytest.raises(ValueError):
            janson_params(PATH, 4, p)

    def test_family_cap(self):
        with override_settings(JANSON_FAMILY_CAP=0):
            with pytest.raises(FamilyTooLarge):
                janson_params(PATH, 4, 0.5)


class TestPeeling:
    def test_star_centre_goes(self):
        result = peel_bounded_degree(star(20, n=100), 100, 0.1, 1.0)
        assert result.removed == [0]
        assert len(result.edges) == 0
        assert result.bound == math.inf

    def test_nothing_to_peel(self):
        result = peel_bounded_degree(Graph(100, [(0, 1)]), 100, 0.1, 1.0)
        assert result.removed == [] and list(result.edges) == [(0, 1)]
        assert result.bound == pytest.approx(10 / math.log(1000))

    def test_gives_up_at_half(self):
        assert peel_bounded_degree(Graph.complete(4), 4, 0.5, 0.1) is None

    def test_cap_met_on_the_last_removal(self):
        hubs = [(u, v) for u in range(3) for v in range(u + 1, 6)]
        result = peel_bounded_degree(Graph(6, hubs + [(3, 4)]), 6, 0.9, 0.7)
        assert result.removed == [0, 1, 2]
        assert list(result.edges) == [(3, 4)]
        assert result.bound == pytest.approx(0.7 * 6 * 0.9 / math.log(32.4))

    @pytest.mark.parametrize('args', [
        (Graph(100), 100, 0.1, 1.0),
        (star(20), 21, 0.01, 1.0),
        (star(3, n=100), 100, 0.1, 0.0),
    ])
    def test_preconditions(self, args):
        with pytest.raises(PreconditionViolation):
            peel_bounded_degree(*args)


class TestThreshold:
    N = 10 ** 12

    @pytest.mark.parametrize('exponent,regime', [
        (-0.5, 'zero'),
        (-0.55, 'upper'),
        (-0.6, 'critical_window'),
        (-0.65, 'lower'),
        (-0.7, 'below_range'),
    ])
    def test_regimes(self, exponent, regime):
        assert completion_threshold(self.N, self.N ** exponent).regime == regime

    def test_lower_branch_value(self):
        p = self.N ** -0.65
        evaluation = completion_threshold(self.N, p)
        assert evaluation.value == pytest.approx(self.N ** -3.0 * p ** -3.5)
        assert evaluation.upper_branch == pytest.approx(self.N ** -6.0 * p ** -8.0)

    def test_branches_meet_at_the_lower_end(self):
        p = self.N ** (-2.0 / 3.0)
        evaluation = completion_threshold(self.N, p * 1.01)
        assert evaluation.lower_branch == pytest.approx(evaluation.upper_branch, rel=0.1)
        assert completion_threshold(self.N, self.N ** -0.6).value is None

    def test_window_factor_is_configurable(self):
        with override_settings(CRITICAL_WINDOW_FACTOR=1.0):
            assert completion_threshold(self.N, self.N ** -0.59).regime == 'upper'

    def test_rejects(self):
        with pytest.raises(ValueError):
            completion_threshold(2, 0.5)
        with pytest.raises(ValueError):
            completion_threshold(100, 1.0)


class TestBounds:
    def test_pi_bound_on_a_star(self):
        check = pi_lower_bound_check(star(4), 5, 0.5, theta=0.0)
        assert check.hypotheses_hold
        assert (check.x2, check.pi_size) == (6, 6)
        assert check.holds

    def test_default_theta(self):
        check = pi_lower_bound_check(Graph.complete(6), 6, 0.5)
        assert check.theta > 0

    def test_wedge_bound_is_vacuous_on_sparse_graphs(self):
        assert wedge_lower_bound_holds(PATH)


@hypothesis_settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6), st.floats(min_value=0.3, max_value=1.0))
def test_wedge_lower_bound(seed, p):
    assert wedge_lower_bound_holds(sample_gnp(12, p, RngSpec(seed)))


@pytest.mark.slow
def test_wedge_lower_bound_at_scale():
    vacuous = 0
    for seed in range(500):
        n = 10 + seed % 191
        g = sample_gnp(n, min(1.0, 6.0 / (n - 1)), RngSpec(seed, 10))
        vacuous += g.m < 2 * n
        assert wedge_lower_bound_holds(g), (n, seed)
    assert vacuous < 10

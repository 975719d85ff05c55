"""Counting wedges of a red subgraph and the moments of the 4-cycles they can close.

``S`` is the red part of a colouring. Wedges (``K_{1,2}``) of ``S`` mark the pairs ``Pi(S)``
that can no longer arrive red; the family ``X_S`` collects the wedges of ``K_n`` that close
a 4-cycle with a wedge of ``S``. :func:`janson_params` gives its first and second moment
under edge probability ``p``.
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from math import comb
from typing import NamedTuple, Optional

from ramsey_lab.census import count_k2_10, observed_packing_density
from ramsey_lab.conf import settings
from ramsey_lab.exceptions import CountOverflow, FalsificationError, FamilyTooLarge, PreconditionViolation
from ramsey_lab.graphs import EdgeSubset, Graph, edge_key

logger = logging.getLogger(__name__)

INT64_MAX = 2 ** 63 - 1


class Wedge(NamedTuple):

    """The wedge ``{centre u1, centre u2}`` with ``u1 < u2``."""

    centre: int
    u1: int
    u2: int

    @property
    def edges(self):
        return (edge_key(self.centre, self.u1), edge_key(self.centre, self.u2))


def _as_graph(s, n=None):
    if isinstance(s, Graph):
        return s
    return Graph(s.n if n is None else n, s.pairs)


def _checked(count, what):
    if count > INT64_MAX:
        raise CountOverflow('%s count %d does not fit in 64 bits' % (what, count))
    return count


def x2_count(s):
    """``X_2(S)``: the number of wedges, ``sum_v C(d(v), 2)``."""

    g = _as_graph(s)
    return _checked(sum(comb(len(g.adjacency(v)), 2) for v in g.vertices()), 'wedge')


def _apexes(g):
    """Map each pair ``(u1, u2)`` of ``Pi(S)`` to the set of wedge centres joining it."""

    apexes = defaultdict(set)
    for w in g.vertices():
        neighbours = g.adjacency(w)
        for i, a in enumerate(neighbours):
            for b in neighbours[i + 1:]:
                apexes[edge_key(a, b)].add(w)
    return apexes


def pi_set(s, n=None):
    """``Pi(S)``: pairs of ``K_n`` closing a triangle with a wedge of ``S``."""

    g = _as_graph(s, n)
    return EdgeSubset(g.n, _apexes(g))


def xs_family(s, n=None, exclude=None):
    """``X_S``: wedges ``{x u1, x u2}`` of ``K_n`` closing a 4-cycle ``u1-w-u2-x`` with a wedge of ``S``.

    All four vertices are distinct. Wedges using a pair of ``exclude`` are left out.

    :returns: Sorted list of :class:`Wedge`.
    """

    g = _as_graph(s, n)
    forbidden = exclude.pairs if exclude is not None else frozenset()
    family = []
    for (u1, u2), centres in sorted(_apexes(g).items()):
        for x in range(g.n):
            if x in (u1, u2) or not centres - {x}:
                continue
            wedge = Wedge(x, u1, u2)
            if forbidden.isdisjoint(wedge.edges):
                family.append(wedge)
    family.sort()
    return family


@dataclass
class DensityReport:

    """Moments of ``X_S`` for one red subgraph.

    ``delta_total`` is ``delta1 + delta2 + mu``; ``delta_exact`` adds the ordered pairs whose
    union is a triangle, which neither ``delta1`` nor ``delta2`` covers.
    """

    n: int
    p: float
    edges: int
    x2: int
    pi: EdgeSubset
    xs_size: int
    path_pairs: int
    star_pairs: int
    triangle_pairs: int
    mu: float
    delta1: float
    delta2: float
    delta_total: float
    delta_exact: float
    mu_sq_over_delta: float

    def to_dict(self):
        return {
            'n': self.n,
            'p': self.p,
            'edges': self.edges,
            'x2': self.x2,
            'pi_size': len(self.pi),
            'xs_size': self.xs_size,
            'path_pairs': self.path_pairs,
            'star_pairs': self.star_pairs,
            'triangle_pairs': self.triangle_pairs,
            'mu': self.mu,
            'delta1': self.delta1,
            'delta2': self.delta2,
            'delta_total': self.delta_total,
            'delta_exact': self.delta_exact,
            'mu_sq_over_delta': self.mu_sq_over_delta,
        }


def _pair_shape(first, second):
    if first.centre == second.centre:
        return 'star'
    if set(first.edges) & set(second.edges):
        far_first = first.u1 if first.u2 == second.centre else first.u2
        far_second = second.u1 if second.u2 == first.centre else second.u2
        return 'triangle' if far_first == far_second else 'path'
    return None


def overlap_counts(family):
    """Ordered pairs of distinct wedges sharing an edge, by the shape of their union.

    :returns: ``(path, star, triangle)`` pair counts.
    """

    by_edge = defaultdict(list)
    for index, wedge in enumerate(family):
        for edge in wedge.edges:
            by_edge[edge].append(index)
    counts = {'path': 0, 'star': 0, 'triangle': 0}
    for members in by_edge.values():
        for i in members:
            for j in members:
                if i != j:
                    counts[_pair_shape(family[i], family[j])] += 1
    return (_checked(counts['path'], 'path pair'), _checked(counts['star'], 'star pair'),
            _checked(counts['triangle'], 'triangle pair'))


def janson_params(s, n, p, exclude=None):
    """Exact ``mu``, ``Delta_1`` and ``Delta_2`` of ``X_S`` at edge probability ``p``.

    ``mu = |X_S| p^2``; ``Delta_1`` and ``Delta_2`` count ordered pairs of distinct members
    whose union is a 3-edge path or a ``K_{1,3}``, times ``p^3``.

    :raises FamilyTooLarge: Above ``JANSON_FAMILY_CAP`` members.
    """

    if not 0.0 < p < 1.0:
        raise ValueError('p must lie in (0, 1), got %r' % p)
    g = _as_graph(s, n)
    family = xs_family(g, exclude=exclude)
    if len(family) > settings.JANSON_FAMILY_CAP:
        raise FamilyTooLarge('X_S has %d members (cap %d)' % (len(family), settings.JANSON_FAMILY_CAP))
    paths, stars, tris = overlap_counts(family)
    mu = len(family) * p ** 2
    delta1 = paths * p ** 3
    delta2 = stars * p ** 3
    delta_total = delta1 + delta2 + mu
    report = DensityReport(
        n=g.n, p=p, edges=g.m, x2=x2_count(g), pi=pi_set(g), xs_size=len(family),
        path_pairs=paths, star_pairs=stars, triangle_pairs=tris,
        mu=mu, delta1=delta1, delta2=delta2, delta_total=delta_total,
        delta_exact=delta_total + tris * p ** 3,
        mu_sq_over_delta=mu ** 2 / delta_total if delta_total else 0.0,
    )
    logger.debug('janson parameters for %d edges: |X_S|=%d mu=%g delta=%g',
                 g.m, len(family), mu, delta_total)
    return report


@dataclass
class PeelResult:
    edges: EdgeSubset
    removed: list
    bound: float


def degree_bound(n, p, c, edges):
    """``c n p / (log(n^2 p) - log e)``, the degree cap for a graph with ``edges`` edges."""

    return c * n * p / (settings.log(n * n * p) - settings.log(edges))


def peel_bounded_degree(t, n, p, c):
    """Remove top-degree vertices until the degree cap holds.

    The cap is recomputed from the surviving edge count after each removal; ties between
    vertices of maximum degree go to the least label.

    :returns: A :class:`PeelResult`, or ``None`` when the cap still fails after ``n/2`` removals.
    :raises PreconditionViolation: Unless ``n^2 p > e(t) >= 1`` and ``c > 0``.
    """

    g = _as_graph(t, n)
    if not (n * n * p > g.m >= 1) or c <= 0:
        raise PreconditionViolation('peeling needs n^2 p > e(T) >= 1 and c > 0')
    adjacency = [set(g.adjacency(v)) for v in g.vertices()]
    edges = g.m
    removed = []
    while edges:
        bound = degree_bound(n, p, c, edges)
        top = max(g.vertices(), key=lambda v: (len(adjacency[v]), -v))
        if len(adjacency[top]) <= bound:
            break
        if len(removed) >= n / 2:
            return None
        for u in adjacency[top]:
            adjacency[u].discard(top)
        edges -= len(adjacency[top])
        adjacency[top] = set()
        removed.append(top)
        logger.debug('peeled vertex %d, %d edges left', top, edges)
    else:
        bound = math.inf
    remaining = [(u, v) for u in g.vertices() for v in adjacency[u] if u < v]
    return PeelResult(EdgeSubset(n, remaining), removed, bound)


ZERO, BELOW_RANGE, CRITICAL_WINDOW, UPPER, LOWER = 'zero', 'below_range', 'critical_window', 'upper', 'lower'


class ThresholdEvaluation(NamedTuple):

    """The second-round threshold at ``(n, p)``.

    ``value`` is set in the ``upper``, ``lower`` and ``zero`` regimes; both formulas are
    always reported.
    """

    n: int
    p: float
    regime: str
    value: Optional[float]
    lower_branch: float
    upper_branch: float


def completion_threshold(n, p):
    """Evaluate ``n^-6 p^-8`` above ``n^-3/5`` and ``n^-3 p^-7/2`` between ``n^-2/3`` and ``n^-3/5``.

    Regimes are checked in order: ``zero`` for ``p >= C n^-1/2`` (``ZERO_REGIME_CONSTANT``),
    ``below_range`` for ``p <= n^-2/3``, ``critical_window`` within ``CRITICAL_WINDOW_FACTOR``
    of ``n^-3/5``, then ``upper`` or ``lower``.
    """

    if n < 3:
        raise ValueError('n must be at least 3, got %r' % n)
    if not 0.0 < p < 1.0:
        raise ValueError('p must lie in (0, 1), got %r' % p)
    lower = n ** -3.0 * p ** -3.5
    upper = n ** -6.0 * p ** -8.0
    pivot = n ** -0.6
    factor = settings.CRITICAL_WINDOW_FACTOR
    if p >= settings.ZERO_REGIME_CONSTANT * n ** -0.5:
        regime, value = ZERO, 0.0
    elif p <= n ** (-2.0 / 3.0):
        regime, value = BELOW_RANGE, None
    elif pivot / factor <= p <= pivot * factor:
        regime, value = CRITICAL_WINDOW, None
    elif p > pivot:
        regime, value = UPPER, upper
    else:
        regime, value = LOWER, lower
    return ThresholdEvaluation(n, p, regime, value, lower, upper)


def wedge_lower_bound_holds(s, n=None):
    """``X_2(S) >= 3 e(S)^2 / (2n)`` for graphs with at least ``2n`` edges; vacuous otherwise."""

    g = _as_graph(s, n)
    if g.m < 2 * g.n:
        return True
    return 2 * g.n * x2_count(g) >= 3 * g.m ** 2


@dataclass
class PiBoundCheck:

    """Outcome of :func:`pi_lower_bound_check`.

    ``theta`` is the packing constant used for the edge-count hypothesis; by default the
    observed greedy packing density of ``S``.
    """

    theta: float
    edges_hypothesis: bool
    k210_hypothesis: bool
    x2: int
    pi_size: int
    holds: bool

    @property
    def hypotheses_hold(self):
        return self.edges_hypothesis and self.k210_hypothesis


def pi_lower_bound_check(s, n, p, theta=None):
    """Check ``|Pi(S)| >= X_2(S) / 12`` whenever its hypotheses hold.

    The hypotheses are ``e(S) >= theta n^3 p^3 / 2`` and at most ``n^11 p^18`` copies of
    ``K_{2,10}`` in ``S``.

    :raises FalsificationError: When the hypotheses hold and the bound fails.
    """

    g = _as_graph(s, n)
    theta = observed_packing_density(g, p) if theta is None else theta
    x2 = x2_count(g)
    pi_size = len(pi_set(g))
    check = PiBoundCheck(
        theta=theta,
        edges_hypothesis=g.m >= theta * n ** 3 * p ** 3 / 2,
        k210_hypothesis=count_k2_10(g) <= n ** 11 * p ** 18,
        x2=x2,
        pi_size=pi_size,
        holds=12 * pi_size >= x2,
    )
    if check.hypotheses_hold and not check.holds:
        raise FalsificationError('|Pi(S)| = %d is below X_2(S)/12 = %s' % (pi_size, x2 / 12),
                                 {'n': n, 'p': p, 'theta': theta, 'edges': [list(e) for e in g.edges]})
    return check


__all__ = [
    'Wedge', 'DensityReport', 'PeelResult', 'ThresholdEvaluation', 'PiBoundCheck', 'x2_count', 'pi_set',
    'xs_family', 'overlap_counts', 'janson_params', 'degree_bound', 'peel_bounded_degree',
    'completion_threshold', 'wedge_lower_bound_holds', 'pi_lower_bound_check',
]

"""The two-round and online triangle-avoidance games.

Round one colours ``G1`` with a :class:`StrategySpec`; round two colours the new edges of
``G2`` greedily: blue unless that closes a blue triangle, red otherwise. The game is lost
at the first red triangle.
"""
import enum
import json
import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from ramsey_lab.collages import maximal_collages
from ramsey_lab.colourings import (BLUE, RED, Colour, TwoColouring, find_triangle_free_colouring,
                                   monochromatic_triangles, obstruction_report)
from ramsey_lab.discharging import very_good_colouring
from ramsey_lab.exceptions import (FirstRoundFailure, InvalidGraph, PreconditionViolation, RamseyGraph,
                                   ReplayMismatch, SearchBudgetExhausted)
from ramsey_lab.graphs import (Graph, RngSpec, _as_generator, edge_key, graph_union, pair_count,
                               pairs_from_indices, random_edge_order, sample_gnm, sample_gnp)

logger = logging.getLogger(__name__)

# RngSpec purposes; each draw of a game has its own stream
PURPOSE_G1 = 1
PURPOSE_G2 = 2
PURPOSE_ARRIVAL = 3
PURPOSE_ROUND1 = 4
PURPOSE_ONLINE = 5


class Variant(enum.Enum):
    GOOD_COLOURING = 'good_colouring'
    NAIVE_TRIANGLE_FREE = 'naive_triangle_free'
    ALL_BLUE_GREEDY = 'all_blue_greedy'


@dataclass(frozen=True)
class StrategySpec:

    """How the first round is coloured.

    :param variant: A :class:`Variant` or its value.
    :param budget: Search budget for triangle-free colouring; ``SEARCH_BUDGET`` when ``None``.
    :param recolour_non_triangle_blue: For the naive variant, force edges in no triangle blue.
    :param density_mode: Density mode for the collage checks of the good-colouring variant.
    """

    variant: Variant = Variant.GOOD_COLOURING
    budget: Optional[int] = None
    recolour_non_triangle_blue: bool = True
    density_mode: str = 'auto'

    def __post_init__(self):
        object.__setattr__(self, 'variant', Variant(getattr(self.variant, 'value', self.variant)))
        if self.budget is not None and self.budget <= 0:
            raise ValueError('budget must be positive, got %r' % self.budget)
        if self.density_mode not in ('auto', 'exact', 'sufficient'):
            raise ValueError('unknown density mode %r' % self.density_mode)
        if self.variant is Variant.ALL_BLUE_GREEDY and self.budget is not None:
            raise ValueError('the greedy variant does not search, drop the budget')

    def to_dict(self):
        return {
            'variant': self.variant.value,
            'budget': self.budget,
            'recolour_non_triangle_blue': self.recolour_non_triangle_blue,
            'density_mode': self.density_mode,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


class _Greedy(object):

    """Coloured neighbourhoods for the greedy rule."""

    def __init__(self, n, colouring=None):
        self.blue = [set() for _ in range(n)]
        self.red = [set() for _ in range(n)]
        for (u, v), colour in (colouring.items() if colouring is not None else ()):
            self.add(u, v, colour)

    def add(self, u, v, colour):
        side = self.blue if colour is BLUE else self.red
        side[u].add(v)
        side[v].add(u)

    def play(self, u, v):
        """Colour ``uv`` by the greedy rule.

        :returns: ``(colour, blue apex, red apex)``; the red apex is set only when the
            edge closes a red triangle.
        """

        blue_common = self.blue[u] & self.blue[v]
        if not blue_common:
            self.add(u, v, BLUE)
            return BLUE, None, None
        self.add(u, v, RED)
        red_common = self.red[u] & self.red[v]
        return RED, min(blue_common), min(red_common) if red_common else None


class ExtensionResult(NamedTuple):

    """Outcome of :func:`greedy_extend`.

    ``decisions`` lists ``(u, v, colour)`` per processed edge. On failure ``colouring``
    covers ``G1`` and the processed prefix, the failing edge included.
    """

    colouring: TwoColouring
    decisions: list
    failure_edge: Optional[tuple] = None
    red_triangle: Optional[tuple] = None
    blue_witness: Optional[tuple] = None

    @property
    def success(self):
        return self.failure_edge is None


def greedy_extend(g1, phi1, g2, order=None):
    """Extend ``phi1`` to the new edges of ``g2`` with the greedy rule.

    :param order: A permutation of ``E(g2) - E(g1)``; ascending order when ``None``.
    :raises IncompleteColouring: When ``phi1`` misses an edge of ``g1``.
    :raises PreconditionViolation: When ``phi1`` already has a monochromatic triangle.
    """

    phi1.require_complete()
    if monochromatic_triangles(phi1):
        raise PreconditionViolation('first-round colouring has a monochromatic triangle')
    new_edges = g2.edge_set - g1.edge_set
    order = sorted(new_edges) if order is None else [edge_key(u, v) for u, v in order]
    if len(order) != len(new_edges) or set(order) != new_edges:
        raise InvalidGraph('order is not a permutation of the new edges')

    state = _Greedy(g1.n, phi1)
    colours = dict(phi1.items())
    decisions = []
    universe = graph_union(g1, g2)
    for u, v in order:
        colour, blue_apex, red_apex = state.play(u, v)
        colours[(u, v)] = colour
        decisions.append((u, v, colour))
        if red_apex is not None:
            partial = Graph(g1.n, colours.keys())
            return ExtensionResult(TwoColouring(partial, colours), decisions, (u, v),
                                   tuple(sorted((u, v, red_apex))), tuple(sorted((u, v, blue_apex))))
    return ExtensionResult(TwoColouring(universe, colours), decisions)


def _lift(c, phi):
    label = c.graph.original_label
    return dict((edge_key(label(u), label(v)), colour) for (u, v), colour in phi.items())


def _fallback_colouring(c, strategy):
    try:
        phi = find_triangle_free_colouring(c.graph, budget=strategy.budget)
    except SearchBudgetExhausted as exc:
        raise FirstRoundFailure('search budget exhausted on %r after %d nodes' % (c, exc.nodes))
    except RamseyGraph:
        raise FirstRoundFailure('%r has no triangle-free colouring' % c, proven=True)
    return _lift(c, phi)


def _good_colouring(g, strategy):
    colours = {}
    fallbacks = 0
    for c in maximal_collages(g):
        if not c.hyperedges:
            colours.update((edge, BLUE) for edge in c.edges)
            continue
        try:
            phi = very_good_colouring(c, strategy.density_mode)
            colours.update(phi.items())
        except PreconditionViolation as exc:
            fallbacks += 1
            logger.warning('%r falls back to triangle-free search: %s', c, exc)
            colours.update(_fallback_colouring(c, strategy))
    logger.debug('first round on %r: %d collages fell back', g, fallbacks)
    return TwoColouring(g, colours)


def _greedy_colouring(g, rng):
    state = _Greedy(g.n)
    colours = {}
    for u, v in random_edge_order(g.edges, rng):
        colour, _, red_apex = state.play(u, v)
        colours[(u, v)] = colour
        if red_apex is not None:
            raise FirstRoundFailure('greedy colouring closed the red triangle %r' % (tuple(sorted((u, v, red_apex))),))
    return TwoColouring(g, colours)


def first_round_colouring(g, strategy=None, rng=None):
    """Colour ``G1`` by ``strategy``.

    :param rng: :class:`RngSpec` or generator, used by the greedy variant only.
    :raises FirstRoundFailure: With ``proven=True`` when some collage has no triangle-free
        colouring, ``proven=False`` when the search gave up or the greedy rule failed.
    """

    strategy = strategy or StrategySpec()
    if strategy.variant is Variant.GOOD_COLOURING:
        return _good_colouring(g, strategy)
    if strategy.variant is Variant.NAIVE_TRIANGLE_FREE:
        try:
            return find_triangle_free_colouring(g, budget=strategy.budget,
                                                recolour_non_triangle_blue=strategy.recolour_non_triangle_blue,
                                                rng=None if rng is None else _as_generator(rng, PURPOSE_ROUND1))
        except SearchBudgetExhausted as exc:
            raise FirstRoundFailure('search budget exhausted after %d nodes' % exc.nodes)
        except RamseyGraph:
            raise FirstRoundFailure('%r has no triangle-free colouring' % g, proven=True)
    if rng is None:
        raise ValueError('the greedy variant needs an rng')
    return _greedy_colouring(g, _as_generator(rng, PURPOSE_ROUND1))


SUCCESS, FAILURE, FIRST_ROUND_FAILURE = 'success', 'failure', 'first_round_failure'


def _edges_json(edges):
    return [list(edge) for edge in edges]


def _decisions_json(decisions):
    return [[u, v, c.value] for u, v, c in decisions]


@dataclass
class GameTranscript:

    """Everything needed to replay one two-round game."""

    n: int
    model: str
    p: Optional[float]
    q: Optional[float]
    m1: Optional[int]
    m2: Optional[int]
    master_seed: int
    stream_id: int
    strategy: StrategySpec
    arrival: str
    g1_edges: list = field(default_factory=list)
    phi1: list = field(default_factory=list)
    order: list = field(default_factory=list)
    decisions: list = field(default_factory=list)
    outcome: str = SUCCESS
    failure_edge: Optional[tuple] = None
    red_triangle: Optional[tuple] = None
    blue_witness: Optional[tuple] = None
    first_round_proven: Optional[bool] = None
    report: Optional[dict] = None

    @property
    def success(self):
        return self.outcome == SUCCESS

    @property
    def rng(self):
        return RngSpec(self.master_seed, self.stream_id)

    def first_round(self):
        """``(G1, phi1)`` rebuilt from the recorded edges and colours."""

        g1 = Graph(self.n, self.g1_edges)
        return g1, TwoColouring(g1, dict(((u, v), c) for u, v, c in self.phi1))

    def to_dict(self):
        return {
            'n': self.n,
            'model': self.model,
            'p': self.p,
            'q': self.q,
            'm1': self.m1,
            'm2': self.m2,
            'master_seed': self.master_seed,
            'stream_id': self.stream_id,
            'strategy': self.strategy.to_dict(),
            'arrival': self.arrival,
            'g1_edges': _edges_json(self.g1_edges),
            'phi1': _decisions_json(self.phi1),
            'order': _edges_json(self.order),
            'decisions': _decisions_json(self.decisions),
            'outcome': self.outcome,
            'failure_edge': None if self.failure_edge is None else list(self.failure_edge),
            'red_triangle': None if self.red_triangle is None else list(self.red_triangle),
            'blue_witness': None if self.blue_witness is None else list(self.blue_witness),
            'first_round_proven': self.first_round_proven,
            'report': self.report,
        }

    @classmethod
    def from_dict(cls, data):
        def maybe_tuple(value):
            return None if value is None else tuple(value)

        return cls(
            n=data['n'], model=data['model'], p=data['p'], q=data['q'], m1=data['m1'], m2=data['m2'],
            master_seed=data['master_seed'], stream_id=data['stream_id'],
            strategy=StrategySpec.from_dict(data['strategy']), arrival=data['arrival'],
            g1_edges=[tuple(edge) for edge in data['g1_edges']],
            phi1=[(u, v, Colour.parse(c)) for u, v, c in data['phi1']],
            order=[tuple(edge) for edge in data['order']],
            decisions=[(u, v, Colour.parse(c)) for u, v, c in data['decisions']],
            outcome=data['outcome'],
            failure_edge=maybe_tuple(data.get('failure_edge')),
            red_triangle=maybe_tuple(data.get('red_triangle')),
            blue_witness=maybe_tuple(data.get('blue_witness')),
            first_round_proven=data.get('first_round_proven'),
            report=data.get('report'),
        )

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _sample_round(n, model, probability, count, rng, purpose):
    if model == 'binomial':
        return sample_gnp(n, probability, rng.generator(purpose))
    return sample_gnm(n, count, rng.generator(purpose))


def two_round_game(n, p=None, q=None, strategy=None, rng=None, arrival='random', model='binomial',
                   m1=None, m2=None, report=False):
    """Play one two-round game and return its transcript.

    ``G1`` and ``G2`` are drawn independently on their own streams of ``rng``; edges of
    ``G2`` already in ``G1`` keep their first-round colour.

    :param model: ``'binomial'`` samples ``G(n, p)`` and ``G(n, q)``; ``'uniform'`` samples
        exactly ``m1`` and ``m2`` edges.
    :param arrival: ``'random'`` or ``'lex'`` order for the new edges.
    :param report: Attach the obstruction report of the first-round colouring.
    """

    strategy = strategy or StrategySpec()
    rng = rng if isinstance(rng, RngSpec) else RngSpec(0 if rng is None else int(rng))
    if model not in ('binomial', 'uniform'):
        raise ValueError('unknown model %r' % model)
    if arrival not in ('random', 'lex'):
        raise ValueError('unknown arrival order %r' % arrival)
    if model == 'binomial':
        for name, value in (('p', p), ('q', q)):
            if value is None or not 0.0 <= value <= 1.0:
                raise ValueError('%s must lie in [0, 1], got %r' % (name, value))
    elif m1 is None or m2 is None:
        raise ValueError('the uniform model needs m1 and m2')

    transcript = GameTranscript(n=n, model=model, p=p, q=q, m1=m1, m2=m2, master_seed=rng.master_seed,
                                stream_id=rng.stream_id, strategy=strategy, arrival=arrival)
    g1 = _sample_round(n, model, p, m1, rng, PURPOSE_G1)
    g2 = _sample_round(n, model, q, m2, rng, PURPOSE_G2)
    transcript.g1_edges = list(g1.edges)
    try:
        phi1 = first_round_colouring(g1, strategy, rng)
    except FirstRoundFailure as exc:
        transcript.outcome = FIRST_ROUND_FAILURE
        transcript.first_round_proven = exc.proven
        return transcript
    transcript.phi1 = [(u, v, c) for (u, v), c in phi1.items()]
    if report:
        transcript.report = obstruction_report(phi1).to_dict()

    new_edges = sorted(g2.edge_set - g1.edge_set)
    if arrival == 'random':
        transcript.order = random_edge_order(new_edges, rng.generator(PURPOSE_ARRIVAL))
    else:
        transcript.order = new_edges
    result = greedy_extend(g1, phi1, g2, transcript.order)
    transcript.decisions = result.decisions
    if not result.success:
        transcript.outcome = FAILURE
        transcript.failure_edge = result.failure_edge
        transcript.red_triangle = result.red_triangle
        transcript.blue_witness = result.blue_witness
    return transcript


def replay_transcript(transcript):
    """Play the recorded game again from its seeds.

    :returns: The fresh transcript.
    :raises ReplayMismatch: When any recorded field differs.
    """

    fresh = two_round_game(transcript.n, transcript.p, transcript.q, transcript.strategy, transcript.rng,
                           arrival=transcript.arrival, model=transcript.model, m1=transcript.m1,
                           m2=transcript.m2, report=transcript.report is not None)
    recorded, replayed = transcript.to_dict(), fresh.to_dict()
    for key in sorted(recorded):
        if recorded[key] != replayed[key]:
            raise ReplayMismatch('transcript field %r differs on replay' % key)
    return fresh


class OnlineResult(NamedTuple):

    """Outcome of an online game; ``rounds`` is the 1-based index of the losing edge, or the
    number of edges played when nothing was lost."""

    rounds: int
    survived: bool
    failure_edge: Optional[tuple] = None
    red_triangle: Optional[tuple] = None


def online_game_order(n, order):
    """Play the greedy rule on an explicit edge order of ``K_n``."""

    state = _Greedy(n)
    seen = set()
    for index, (u, v) in enumerate(order, start=1):
        u, v = edge_key(u, v)
        if (u, v) in seen or v >= n:
            raise InvalidGraph('edge %r repeated or outside K_%d' % ((u, v), n))
        seen.add((u, v))
        _, _, red_apex = state.play(u, v)
        if red_apex is not None:
            return OnlineResult(index, False, (u, v), tuple(sorted((u, v, red_apex))))
    return OnlineResult(len(seen), True)


def online_game(n, edge_budget, rng):
    """Feed up to ``edge_budget`` uniformly random edges of ``K_n`` to the greedy rule."""

    if not 0 <= edge_budget <= pair_count(n):
        raise ValueError('edge budget %r outside [0, %d]' % (edge_budget, pair_count(n)))
    gen = _as_generator(rng, PURPOSE_ONLINE)
    indices = gen.choice(pair_count(n), size=edge_budget, replace=False)
    u, v = pairs_from_indices(np.asarray(indices, dtype=np.int64))
    return online_game_order(n, zip(u.tolist(), v.tolist()))


__all__ = [
    'Variant', 'StrategySpec', 'ExtensionResult', 'GameTranscript', 'OnlineResult',
    'first_round_colouring', 'greedy_extend', 'two_round_game', 'replay_transcript',
    'online_game', 'online_game_order', 'SUCCESS', 'FAILURE', 'FIRST_ROUND_FAILURE',
]

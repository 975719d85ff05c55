"""Collages: edge sets glued together by triangles and ``F0_minus``/``F1_minus`` copies.

The collage hypergraph of a host has the host edges as vertices and the edge images of
every ``K3``, ``F0_minus`` and ``F1_minus`` copy as hyperedges. Its connected components are
the maximal collages.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional

from networkx.utils import UnionFind

from ramsey_lab.census import (connected_vertex_sets, dense_pair_violations, densest_subgraph,
                               enumerate_copies, triangles)
from ramsey_lab.conf import settings
from ramsey_lab.exceptions import ExactScanRefused, HostTooLarge, PreconditionViolation, ReplayMismatch
from ramsey_lab.graphs import EdgeSubset, Graph, edge_key, log_n, subgraph_from_edges, to_host_edges

logger = logging.getLogger(__name__)

HYPEREDGE_PATTERNS = ('K3', 'F0_minus', 'F1_minus')

#: Density at which condition (ii) of well-behavedness fails.
CRITICAL_DENSITY = Fraction(5, 3)


class Hyperedge(NamedTuple):
    kind: str
    vertices: tuple
    edges: frozenset


def _hyperedges(g):
    found = []
    for kind in HYPEREDGE_PATTERNS:
        for copy in enumerate_copies(g, kind):
            found.append(Hyperedge(kind, copy.vertices, copy.edges))
    return found


@dataclass
class CollageHypergraph:

    """The collage hypergraph of ``graph``.

    ``components`` partitions the host edges, ordered by least edge; ``component_of`` maps
    each host edge to its index there.
    """

    graph: Graph
    hyperedges: list
    components: list
    component_of: dict = field(repr=False)


def build_collage_hypergraph(g):
    hyperedges = _hyperedges(g)
    groups = UnionFind(g.edges)
    for hyperedge in hyperedges:
        groups.union(*hyperedge.edges)
    components = sorted((frozenset(members) for members in groups.to_sets()), key=min)
    component_of = {}
    for index, members in enumerate(components):
        for edge in members:
            component_of[edge] = index
    logger.debug('collage hypergraph of %r: %d hyperedges, %d components',
                 g, len(hyperedges), len(components))
    return CollageHypergraph(g, hyperedges, components, component_of)


class Block(NamedTuple):

    """A ``K4_minus`` copy or a triangle in no ``K4_minus``, in compact collage labels.

    For a ``K4_minus`` the vertices are ``(y, z, x1, x2)`` with ``yz`` the shared edge.
    """

    kind: str
    vertices: tuple
    edges: frozenset


class Collage(object):

    """One connected edge set of a host on ``host_n`` vertices.

    Work happens on :attr:`graph`, the compact graph spanned by the edges, which keeps the
    host labels.

    :param host_n: Vertex count of the host.
    :param edges: Host edges of the collage.
    """

    def __init__(self, host_n, edges):
        self.host_n = host_n
        self.edges = EdgeSubset(host_n, edges)
        if not self.edges.pairs:
            raise PreconditionViolation('a collage needs at least one edge')
        self.graph = subgraph_from_edges(host_n, self.edges.pairs)

    @classmethod
    def from_graph(cls, g):
        """The whole edge set of ``g`` as one collage, whether connected or not."""

        return cls(g.n, g.edges)

    @property
    def v(self):
        return self.graph.n

    @property
    def e(self):
        return self.graph.m

    @property
    def density(self):
        return Fraction(self.e, self.v)

    def vertices(self):
        return tuple(self.graph.labels)

    def host_edges(self, edges):
        return sorted(to_host_edges(self.graph, edges))

    @cached_property
    def hyperedges(self):
        return _hyperedges(self.graph)

    @cached_property
    def blocks(self):
        """Blocks ordered triangles first, each kind by vertex tuple."""

        k4_minus = [Block('k4_minus', copy.vertices, copy.edges)
                    for copy in enumerate_copies(self.graph, 'K4_minus')]
        covered = [block.edges for block in k4_minus]
        lone = []
        for a, b, c in triangles(self.graph):
            sides = frozenset((edge_key(a, b), edge_key(a, c), edge_key(b, c)))
            if not any(sides <= edges for edges in covered):
                lone.append(Block('triangle', (a, b, c), sides))
        k4_minus.sort(key=lambda block: (tuple(sorted(block.vertices)), sorted(block.edges)))
        return lone + k4_minus

    def __eq__(self, other):
        return isinstance(other, Collage) and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return '<Collage v=%d e=%d>' % (self.v, self.e)


def maximal_collages(g):
    """The maximal collages of ``g``; they partition ``E(g)``."""

    hypergraph = build_collage_hypergraph(g)
    return [Collage(g.n, members) for members in hypergraph.components]


YES, NO, INDETERMINATE = 'yes', 'no', 'indeterminate'


@dataclass
class WellBehavedVerdict:

    """Outcome of a well-behavedness check.

    ``condition`` is ``'i'``, ``'ii'`` or ``'iii'`` for the condition that decided a ``no``
    or ``indeterminate`` answer; ``witness`` is a host edge list, a vertex tuple or a size.
    """

    status: str
    condition: Optional[str] = None
    witness: object = None
    density: Optional[Fraction] = None
    mode: Optional[str] = None

    def __bool__(self):
        return self.status == YES

    def to_dict(self):
        return {
            'status': self.status,
            'condition': self.condition,
            'witness': self.witness,
            'density': None if self.density is None else str(self.density),
            'mode': self.mode,
        }


def _exact_density_check(c):
    """Densest connected sub-collage, scanning every connected set of hyperedges."""

    hyperedges = c.hyperedges
    if len(hyperedges) > settings.EXACT_SUBCOLLAGE_MAX_HYPEREDGES:
        raise ExactScanRefused('exact sub-collage scan refused for %d hyperedges (limit %d)'
                               % (len(hyperedges), settings.EXACT_SUBCOLLAGE_MAX_HYPEREDGES))
    overlaps = [(i, j) for i in range(len(hyperedges)) for j in range(i + 1, len(hyperedges))
                if hyperedges[i].edges & hyperedges[j].edges]
    overlap_graph = Graph(len(hyperedges), overlaps)
    seen = set()
    best, best_edges = Fraction(0), frozenset()
    for members, _ in connected_vertex_sets(overlap_graph, len(hyperedges)):
        edges = frozenset().union(*(hyperedges[i].edges for i in members))
        if edges in seen:
            continue
        seen.add(edges)
        density = Fraction(len(edges), len(set(v for edge in edges for v in edge)))
        if density > best:
            best, best_edges = density, edges
    return best, best_edges


def _sufficient_density_check(c):
    density, vertices = densest_subgraph(c.graph)
    members = set(vertices)
    edges = frozenset(edge for edge in c.graph.edges if edge[0] in members and edge[1] in members)
    return density, edges


def sparse_verdict(c, density_mode='auto'):
    """Condition (ii): every sub-collage has density below ``5/3``.

    :param density_mode: ``'exact'`` scans sub-collages; ``'sufficient'`` only certifies
        via the densest subgraph and answers ``indeterminate`` when that reaches ``5/3``;
        ``'auto'`` tries the certificate first and falls back to the exact scan when the
        hyperedge count allows it.
    :raises ExactScanRefused: In ``'exact'`` mode above ``EXACT_SUBCOLLAGE_MAX_HYPEREDGES``.
    """

    if density_mode not in ('auto', 'exact', 'sufficient'):
        raise ValueError('unknown density mode %r' % density_mode)
    if density_mode in ('auto', 'sufficient'):
        density, edges = _sufficient_density_check(c)
        if density < CRITICAL_DENSITY:
            return WellBehavedVerdict(YES, density=density, mode='sufficient')
        if density_mode == 'sufficient' or len(c.hyperedges) > settings.EXACT_SUBCOLLAGE_MAX_HYPEREDGES:
            logger.warning('condition (ii) undecided for %r: densest subgraph has density %s',
                           c, density)
            return WellBehavedVerdict(INDETERMINATE, 'ii', c.host_edges(edges), density, 'sufficient')
    density, edges = _exact_density_check(c)
    if density < CRITICAL_DENSITY:
        return WellBehavedVerdict(YES, density=density, mode='exact')
    return WellBehavedVerdict(NO, 'ii', c.host_edges(edges), density, 'exact')


def is_well_behaved(c, n=None, density_mode='auto'):
    """Check ``v(C) <= log n`` and condition (ii).

    :param n: Host vertex count for the size condition; the collage's host by default.
    """

    n = c.host_n if n is None else n
    if c.v > log_n(n):
        return WellBehavedVerdict(NO, 'i', c.v, c.density)
    return sparse_verdict(c, density_mode)


def dense_verdict(c):
    """Condition (iii): no ``(4, 6)``, ``(5, 7)`` or ``(8, 12)`` subgraph."""

    try:
        violations = dense_pair_violations(c.graph)
    except HostTooLarge:
        return WellBehavedVerdict(INDETERMINATE, 'iii', c.v)
    if violations:
        first = violations[0]
        witness = tuple(c.graph.original_label(v) for v in first.vertices)
        return WellBehavedVerdict(NO, 'iii', {'vertices': list(witness), 'v': first.v, 'e': first.e})
    return WellBehavedVerdict(YES)


def is_very_well_behaved(c, n=None, density_mode='auto'):
    verdict = is_well_behaved(c, n, density_mode)
    if verdict.status == NO:
        return verdict
    dense = dense_verdict(c)
    if dense.status != YES:
        return dense
    return verdict


def discharging_verdict(c, density_mode='auto'):
    """Conditions (ii) and (iii) only, the hypotheses the discharging colourer needs."""

    dense = dense_verdict(c)
    if dense.status != YES:
        return dense
    return sparse_verdict(c, density_mode)


class CoreStep(NamedTuple):
    step: int
    kind: str
    e: int
    v: int
    d: int


@dataclass
class CoreExtractionLog:

    """Logs of one core extraction, in host labels.

    ``L_O`` holds 1-based positions in ``L_E``; ``L_D`` holds ``(step, new edges)``.
    """

    L_V: list = field(default_factory=list)
    L_E: list = field(default_factory=list)
    L_O: list = field(default_factory=list)
    L_D: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    halt: Optional[str] = None

    @property
    def l_o_nondecreasing(self):
        return all(a <= b for a, b in zip(self.L_O, self.L_O[1:]))

    def claim_violations(self):
        """Steps where ``d <= 3e - 5v + 7 <= 21 d`` fails."""

        return [step for step in self.steps
                if not step.d <= 3 * step.e - 5 * step.v + 7 <= 21 * step.d]

    def to_dict(self):
        return {
            'L_V': list(self.L_V),
            'L_E': [list(edge) for edge in self.L_E],
            'L_O': list(self.L_O),
            'L_D': [[i, [list(edge) for edge in edges]] for i, edges in self.L_D],
            'steps': [step._asdict() for step in self.steps],
            'halt': self.halt,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            L_V=list(data['L_V']),
            L_E=[tuple(edge) for edge in data['L_E']],
            L_O=list(data['L_O']),
            L_D=[(i, [tuple(edge) for edge in edges]) for i, edges in data['L_D']],
            steps=[CoreStep(**step) for step in data.get('steps', [])],
            halt=data.get('halt'),
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _default_order(edge):
    return edge


def _regular_triangles(hyperedge):
    u1, u2, u3, w1, w2, w3 = hyperedge.vertices
    return (
        (edge_key(u1, u2), frozenset((u1, u2, w3)),
         frozenset((edge_key(u1, u2), edge_key(u1, w3), edge_key(u2, w3))), (u3, w1, w2)),
        (edge_key(u1, u3), frozenset((u1, u3, w2)),
         frozenset((edge_key(u1, u3), edge_key(u1, w2), edge_key(u3, w2))), (u2, w1, w3)),
    )


class _Extraction(object):

    """Shared state of extraction and replay, in compact labels."""

    def __init__(self, c, edge_order):
        self.c = c
        order = edge_order or _default_order
        label = c.graph.original_label
        self.key = lambda edge: order(edge_key(label(edge[0]), label(edge[1])))
        self.hyperedges = c.hyperedges
        self.regular = [h for h in self.hyperedges if h.kind == 'F0_minus']
        self.edges = set()
        self.vertices = set()
        self.sequence = []
        self.position = {}

    def host_vertices(self, vertices):
        return sorted(self.c.graph.original_label(v) for v in vertices)

    def host_edge(self, edge):
        label = self.c.graph.original_label
        return edge_key(label(edge[0]), label(edge[1]))

    def add(self, edges):
        new_vertices = set(v for edge in edges for v in edge) - self.vertices
        ordered = sorted(edges, key=self.key)
        for edge in ordered:
            self.sequence.append(edge)
            self.position[edge] = len(self.sequence)
        self.edges.update(edges)
        self.vertices.update(new_vertices)
        return new_vertices, ordered

    def regular_candidates(self):
        """``(root position, new edges, new vertices)`` for every regular copy."""

        found = []
        for h in self.regular:
            inside = h.edges & self.edges
            touched = set(h.vertices) & self.vertices
            for root, tri_vertices, tri_edges, outer in _regular_triangles(h):
                if inside == tri_edges and touched == tri_vertices:
                    new = h.edges - tri_edges
                    found.append((self.position[root], sorted(new, key=self.key), frozenset(outer)))
        return found

    def degenerate_candidates(self):
        found = []
        for h in self.hyperedges:
            new = h.edges - self.edges
            if new and len(new) < len(h.edges):
                found.append(sorted(new, key=self.key))
        return found

    def sort_key(self, edges):
        return [self.key(edge) for edge in edges]


def extract_core(c, edge_order=None, n=None):
    """Grow a dense core ``C*`` inside ``c`` with replayable logs.

    Starting from the least edge under ``edge_order``, each step either adds a regular
    ``F0_minus`` copy (meeting the current graph exactly in one of its two triangles,
    rooted at the earliest logged edge) or, when there is none, a degenerate copy of
    ``K3``, ``F0_minus`` or ``F1_minus`` that meets it in an edge without lying inside it.
    Extraction halts after seven degenerate steps, once ``L_V`` outgrows ``log n``, or
    when the whole collage has been absorbed.

    :param edge_order: Sort key on host edges; lexicographic by default.
    :param n: Host vertex count for the size halt; the collage's host by default.
    :returns: ``(core, log)`` with ``core`` an :class:`EdgeSubset` of host edges.
    """

    n = c.host_n if n is None else n
    limit = log_n(n)
    state = _Extraction(c, edge_order)
    log = CoreExtractionLog()

    first = min(c.graph.edges, key=state.key)
    new_vertices, ordered = state.add([first])
    log.L_V.extend(state.host_vertices(new_vertices))
    log.L_E.extend(state.host_edge(edge) for edge in ordered)
    log.steps.append(CoreStep(1, 'seed', 1, 2, 0))

    step = 1
    while True:
        if len(log.L_D) == 7:
            log.halt = 'degenerate'
            break
        if len(log.L_V) > limit:
            log.halt = 'size'
            break
        if len(state.edges) == c.e:
            log.halt = 'exhausted'
            break
        step += 1
        regular = state.regular_candidates()
        if regular:
            root, new_edges, _ = min(regular, key=lambda candidate: (candidate[0], state.sort_key(candidate[1])))
            new_vertices, ordered = state.add(new_edges)
            log.L_O.append(root)
            kind = 'regular'
        else:
            degenerate = state.degenerate_candidates()
            if not degenerate:
                raise PreconditionViolation('%r is not connected through its hyperedges' % c)
            new_vertices, ordered = state.add(min(degenerate, key=state.sort_key))
            log.L_D.append((step, [state.host_edge(edge) for edge in ordered]))
            kind = 'degenerate'
        log.L_V.extend(state.host_vertices(new_vertices))
        log.L_E.extend(state.host_edge(edge) for edge in ordered)
        log.steps.append(CoreStep(step, kind, len(state.edges), len(state.vertices), len(log.L_D)))
        logger.debug('core step %d (%s): e=%d v=%d d=%d', step, kind,
                     len(state.edges), len(state.vertices), len(log.L_D))

    core = EdgeSubset(c.host_n, log.L_E)
    return core, log


def replay_core_log(c, log, edge_order=None):
    """Rebuild ``L_E`` from ``L_V``, ``L_O`` and ``L_D`` alone.

    :returns: The rebuilt edge sequence, in host labels.
    :raises ReplayMismatch: When a logged step cannot be reproduced inside ``c``.
    """

    state = _Extraction(c, edge_order)
    compact = dict((label, v) for v, label in enumerate(c.graph.labels))

    def compact_edge(edge):
        try:
            return edge_key(compact[edge[0]], compact[edge[1]])
        except KeyError:
            raise ReplayMismatch('edge %r is outside the collage' % (edge,))

    def take_vertices(cursor, count):
        chunk = log.L_V[cursor:cursor + count]
        if len(chunk) != count or chunk != sorted(chunk):
            raise ReplayMismatch('L_V is too short or out of order at %d' % cursor)
        return chunk

    if len(log.L_V) < 2:
        raise ReplayMismatch('L_V has no seed edge')
    first = compact_edge(tuple(take_vertices(0, 2)))
    if first not in c.graph.edge_set:
        raise ReplayMismatch('seed %r is not an edge of the collage' % (first,))
    state.add([first])
    cursor = 2
    degenerate = dict((i, [compact_edge(edge) for edge in edges]) for i, edges in log.L_D)
    roots = iter(log.L_O)
    total = 1 + len(log.L_O) + len(log.L_D)

    for step in range(2, total + 1):
        if step in degenerate:
            new_edges = degenerate[step]
            fresh = set(v for edge in new_edges for v in edge) - state.vertices
            if state.regular_candidates():
                raise ReplayMismatch('step %d is logged degenerate but a regular copy exists' % step)
            if set(new_edges) not in [set(new) for new in state.degenerate_candidates()]:
                raise ReplayMismatch('step %d adds edges that no hyperedge explains' % step)
            expected = take_vertices(cursor, len(fresh))
            if expected != state.host_vertices(fresh):
                raise ReplayMismatch('step %d adds vertices %r, L_V says %r'
                                     % (step, state.host_vertices(fresh), expected))
            cursor += len(fresh)
            state.add(new_edges)
            continue
        try:
            root = next(roots)
        except StopIteration:
            raise ReplayMismatch('L_O ran out at step %d' % step)
        fresh = set(compact[v] for v in take_vertices(cursor, 3) if v in compact)
        matches = [new for position, new, outer in state.regular_candidates()
                   if position == root and outer == fresh]
        if not matches:
            raise ReplayMismatch('no regular copy rooted at position %d adds %r'
                                 % (root, log.L_V[cursor:cursor + 3]))
        cursor += 3
        state.add(min(matches, key=state.sort_key))

    if cursor != len(log.L_V):
        raise ReplayMismatch('L_V has %d unused vertices' % (len(log.L_V) - cursor))
    rebuilt = [state.host_edge(edge) for edge in state.sequence]
    if log.L_E and rebuilt != [tuple(edge) for edge in log.L_E]:
        raise ReplayMismatch('rebuilt edge sequence differs from L_E')
    return rebuilt


__all__ = [
    'CollageHypergraph', 'Collage', 'Block', 'Hyperedge', 'WellBehavedVerdict', 'CoreExtractionLog',
    'CoreStep', 'build_collage_hypergraph', 'maximal_collages', 'is_well_behaved',
    'is_very_well_behaved', 'sparse_verdict', 'dense_verdict', 'discharging_verdict',
    'extract_core', 'replay_core_log', 'CRITICAL_DENSITY',
]

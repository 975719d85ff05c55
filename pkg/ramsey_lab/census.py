"""Census of fixed small patterns inside a host graph.

Copies are unlabeled: two embeddings with the same host edge image are one copy, so
:func:`count_copies` is the usual ``N_F(G)``. Triangles, wedges, 4- and 5-cycles and the
collage patterns ``F0_minus``, ``F1_minus`` and ``K4_minus`` have dedicated loops; every
other pattern goes through the VF2 matcher of networkx.
"""
import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ramsey_lab.conf import settings
from ramsey_lab.exceptions import HostTooLarge, InvalidGraph, PatternTooLarge
from ramsey_lab.graphs import Graph, edge_key, induced_subgraph, log_n

logger = logging.getLogger(__name__)


class Pattern(object):

    """A named small graph used as a census target.

    :param name: Identifier, unique inside :func:`pattern_library`.
    :param graph: The pattern itself.
    :param disconnected: Allow a disconnected pattern.
    :param closed_form: Counted by formula, which exempts it from the generic size limit.
    """

    def __init__(self, name, graph, disconnected=False, closed_form=False):
        if not closed_form and graph.n > settings.MAX_PATTERN_VERTICES:
            raise PatternTooLarge('pattern %s has %d vertices, the limit is %d'
                                  % (name, graph.n, settings.MAX_PATTERN_VERTICES))
        if not disconnected and graph.n and not nx.is_connected(graph.to_networkx()):
            raise InvalidGraph('pattern %s is disconnected' % name)
        self.name = name
        self.graph = graph
        self.disconnected = disconnected
        self.closed_form = closed_form

    @property
    def v(self):
        return self.graph.n

    @property
    def e(self):
        return self.graph.m

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.name == other.name and self.graph == other.graph

    def __hash__(self):
        return hash((self.name, self.graph))

    def __repr__(self):
        return '<Pattern %s v=%d e=%d>' % (self.name, self.v, self.e)


class Copy(NamedTuple):

    """One unlabeled copy: the host vertex of each pattern vertex and the host edge image."""

    vertices: tuple
    edges: frozenset

    def sorted_edges(self):
        return tuple(sorted(self.edges))


def _edges(spec):
    return [(int(a), int(b)) for a, b in spec.split()]


def _k2_10_edges(plus=False):
    edges = [(hub, leaf) for hub in (0, 1) for leaf in range(2, 12)]
    if plus:
        edges.append((0, 12))
    return edges


_LIBRARY_SPECS = {
    'K3': (3, _edges('01 02 12')),
    'K4': (4, _edges('01 02 03 12 13 23')),
    # y=0, z=1 joined, x1=2 and x2=3 adjacent to both
    'K4_minus': (4, _edges('01 02 12 03 13')),
    'C4': (4, _edges('01 12 23 30')),
    'C5': (5, _edges('01 12 23 34 40')),
    # centre 0
    'K12': (3, _edges('01 02')),
    # u1=0 u2=1 u3=2 w1=3 w2=4 w3=5
    'F0': (6, _edges('01 12 02 05 15 04 24 13 23')),
    'F0_minus': (6, _edges('01 02 05 15 04 24 13 23')),
    # u1=0 u2=1 u3=2 w1=3 w=4
    'F1': (5, _edges('01 12 02 04 13 14 23 24')),
    'F1_minus': (5, _edges('01 02 04 13 14 23 24')),
    'F2': (5, _edges('01 12 02 04 03 14 23')),
    'F3': (5, _edges('01 12 02 24 13 14 23')),
    'F4': (5, _edges('03 12 04 24 13 14 23')),
    'F5': (8, _edges('03 02 23 13 14 34 35 25 36 46 67 57')),
    'F5_prime': (8, _edges('03 02 23 13 14 34 35 25 36 46 67 27')),
    'F6': (8, _edges('01 02 23 13 14 34 35 25 36 46 67 57')),
    'F6_prime': (8, _edges('01 23 13 14 34 35 25 36 46 67 57 05')),
    # hubs 0 and 1
    'K2_10': (12, _k2_10_edges()),
    # the pendant edge hangs off hub 0
    'K2_10_plus': (13, _k2_10_edges(plus=True)),
}

_CLOSED_FORM = frozenset(['K2_10', 'K2_10_plus'])


@lru_cache(maxsize=None)
def _library():
    return {name: Pattern(name, Graph(n, edges), closed_form=name in _CLOSED_FORM)
            for name, (n, edges) in _LIBRARY_SPECS.items()}


def pattern_library():
    """Return the named patterns, keyed by name."""

    return dict(_library())


def get_pattern(name):
    try:
        return _library()[name]
    except KeyError:
        raise KeyError('unknown pattern %r, choose from %s' % (name, ', '.join(sorted(_LIBRARY_SPECS))))


def pattern_from_graph(name, graph, disconnected=False):
    """Wrap a user supplied graph as a pattern, enforcing the size limit."""

    return Pattern(name, graph, disconnected=disconnected)


# Dedicated enumerators. Each yields vertex tuples in the pattern's labelling.

def _triangle_maps(g):
    for a in g.vertices():
        for b in g.adjacency(a):
            if b <= a:
                continue
            for c in g.adjacency(b):
                if c > b and c in g.neighbours(a):
                    yield (a, b, c)


def _wedge_maps(g):
    for centre in g.vertices():
        for a, b in itertools.combinations(g.adjacency(centre), 2):
            yield (centre, a, b)


def _c4_maps(g):
    for a in g.vertices():
        for b, d in itertools.combinations(g.adjacency(a), 2):
            if b < a or d < a:
                continue
            for c in g.neighbours(b) & g.neighbours(d):
                if c > a:
                    yield (a, b, c, d)


def _c5_maps(g):
    for a in g.vertices():
        for b, e in itertools.combinations(g.adjacency(a), 2):
            if b < a or e < a:
                continue
            for c in g.adjacency(b):
                if c <= a or c == e:
                    continue
                for d in g.adjacency(c):
                    if d > a and d not in (b, e) and d in g.neighbours(e):
                        yield (a, b, c, d, e)


def _k4_minus_maps(g):
    for y, z in g.edges:
        for x1, x2 in itertools.combinations(sorted(g.neighbours(y) & g.neighbours(z)), 2):
            yield (y, z, x1, x2)


def _f0_minus_maps(g):
    for u1 in g.vertices():
        triangles = [(x, y) for x in g.adjacency(u1) for y in g.adjacency(u1)
                     if x != y and y in g.neighbours(x)]
        for u2, w3 in triangles:
            for u3, w2 in triangles:
                if len(set((u2, w3, u3, w2))) != 4:
                    continue
                for w1 in g.neighbours(u2) & g.neighbours(u3):
                    if w1 not in (u1, w2, w3):
                        yield (u1, u2, u3, w1, w2, w3)


def _f1_minus_maps(g):
    for u1, w in g.edges:
        common = sorted(g.neighbours(u1) & g.neighbours(w))
        for u2, u3 in itertools.combinations(common, 2):
            for w1 in g.neighbours(u2) & g.neighbours(u3):
                if w1 not in (u1, w):
                    yield (u1, u2, u3, w1, w)


_DEDICATED = {
    'K3': _triangle_maps,
    'K12': _wedge_maps,
    'C4': _c4_maps,
    'C5': _c5_maps,
    'K4_minus': _k4_minus_maps,
    'F0_minus': _f0_minus_maps,
    'F1_minus': _f1_minus_maps,
}


def _matcher_maps(g, f):
    pattern_graph = f.graph.to_networkx()
    matcher = GraphMatcher(g.to_networkx(), pattern_graph)
    for mapping in matcher.subgraph_monomorphisms_iter():
        inverse = {pv: hv for hv, pv in mapping.items()}
        yield tuple(inverse[pv] for pv in range(f.v))


def _k2_10_maps(g, plus=False):
    for a in g.vertices():
        for b in g.vertices():
            if a == b or (not plus and b < a):
                continue
            common = sorted(g.neighbours(a) & g.neighbours(b))
            for leaves in itertools.combinations(common, 10):
                if not plus:
                    yield (a, b) + leaves
                    continue
                for x in g.adjacency(a):
                    if x != b and x not in leaves:
                        yield (a, b) + leaves + (x,)


def _maps(g, f):
    library = _library()
    if f.name in library and library[f.name].graph == f.graph:
        if f.name in _DEDICATED:
            return _DEDICATED[f.name](g)
        if f.name == 'K2_10':
            return _k2_10_maps(g)
        if f.name == 'K2_10_plus':
            return _k2_10_maps(g, plus=True)
    if f.v > settings.MAX_PATTERN_VERTICES:
        raise PatternTooLarge('pattern %s has %d vertices, the limit is %d'
                              % (f.name, f.v, settings.MAX_PATTERN_VERTICES))
    return _matcher_maps(g, f)


def iter_copies(g, f):
    """Yield each copy of ``f`` in ``g`` once, in discovery order."""

    seen = set()
    for vertices in _maps(g, f):
        image = frozenset(edge_key(vertices[a], vertices[b]) for a, b in f.graph.edges)
        if image not in seen:
            seen.add(image)
            yield Copy(tuple(vertices), image)


def enumerate_copies(g, f):
    """All unlabeled copies of ``f`` as a (not necessarily induced) subgraph of ``g``.

    :param g: Host graph.
    :param f: A :class:`Pattern`, or the name of a library pattern.
    :returns: List of :class:`Copy` sorted by host edge image.
    :raises PatternTooLarge: For user patterns above ``MAX_PATTERN_VERTICES``.
    """

    if isinstance(f, str):
        f = get_pattern(f)
    return sorted(iter_copies(g, f), key=Copy.sorted_edges)


def count_k2_10(g):
    """Number of copies of ``K_{2,10}``: sum over pairs of ``C(codegree, 10)``."""

    total = 0
    for a in g.vertices():
        for b in range(a + 1, g.n):
            total += comb(len(g.neighbours(a) & g.neighbours(b)), 10)
    return total


def count_k2_10_plus(g):
    """Number of copies of ``K_{2,10}`` with a pendant edge at a hub."""

    total = 0
    for a in g.vertices():
        deg_a = len(g.adjacency(a))
        for b in g.vertices():
            if a == b:
                continue
            c = len(g.neighbours(a) & g.neighbours(b))
            outside = deg_a - (1 if b in g.neighbours(a) else 0) - c
            total += c * comb(max(c - 1, 0), 10) + outside * comb(c, 10)
    return total


def count_copies(g, f):
    """``N_F(g)``; closed-form patterns are counted without enumerating them."""

    if isinstance(f, str):
        f = get_pattern(f)
    if f.closed_form and f.name == 'K2_10':
        return count_k2_10(g)
    if f.closed_form and f.name == 'K2_10_plus':
        return count_k2_10_plus(g)
    return sum(1 for _ in iter_copies(g, f))


def census(g, names=None):
    """Map each pattern name to its copy count in ``g``."""

    names = sorted(_LIBRARY_SPECS) if names is None else names
    return dict((name, count_copies(g, name)) for name in names)


def _popcount(x):
    return bin(x).count('1')


def densest_vertex_subset(g):
    """Return ``(density, vertices)`` maximising ``e(g[U]) / |U|`` by a scan over all subsets.

    Edge counts are built up mask by mask: removing the highest set bit ``b`` from ``U``
    loses exactly the edges from ``b`` into the rest of ``U``.
    """

    if g.n == 0:
        return Fraction(0), ()
    adjacency_masks = [sum(1 << u for u in g.adjacency(v)) for v in g.vertices()]
    counts = [0] * (1 << g.n)
    best, best_mask = Fraction(0), 1
    for mask in range(1, 1 << g.n):
        top = mask.bit_length() - 1
        rest = mask ^ (1 << top)
        counts[mask] = counts[rest] + _popcount(adjacency_masks[top] & rest)
        density = Fraction(counts[mask], _popcount(mask))
        if density > best:
            best, best_mask = density, mask
    return best, tuple(v for v in g.vertices() if best_mask >> v & 1)


def max_subgraph_density(f):
    """``m(F)``: the exact maximum of ``e_J / v_J`` over subgraphs ``J`` with ``v_J >= 1``.

    For a fixed vertex set the induced subgraph is the densest, so a scan over vertex
    subsets suffices.
    """

    graph = f.graph if isinstance(f, Pattern) else get_pattern(f).graph
    return densest_vertex_subset(graph)[0]


def triangles(g, restrict=None):
    """All triangles of ``g`` (inside ``restrict`` if given) in lexicographic order."""

    if restrict is None:
        return list(_triangle_maps(g))
    sub = induced_subgraph(g, restrict)
    return sorted(tuple(sub.original_label(v) for v in tri) for tri in _triangle_maps(sub))


def greedy_edge_disjoint_triangles(g, restrict=None):
    """Maximal set of pairwise edge-disjoint triangles, taken greedily in lexicographic order."""

    used = set()
    packing = []
    for a, b, c in triangles(g, restrict):
        sides = (edge_key(a, b), edge_key(a, c), edge_key(b, c))
        if used.isdisjoint(sides):
            used.update(sides)
            packing.append((a, b, c))
    return packing


class DenseViolation(NamedTuple):
    vertices: tuple
    v: int
    e: int


#: (vertex count, edge threshold) pairs ruled out for very well-behaved collages.
DENSE_PAIRS = ((4, 6), (5, 7), (8, 12))


def connected_vertex_sets(g, max_size):
    """Yield ``(vertex tuple, edge count)`` for every connected induced subgraph.

    Each set is produced once, using the exclusive-neighbourhood expansion of ESU.
    """

    for root in g.vertices():
        extension = set(u for u in g.adjacency(root) if u > root)
        stack = [((root,), frozenset([root]), 0, extension)]
        while stack:
            members, member_set, edges, extension = stack.pop()
            yield members, edges
            if len(members) == max_size:
                continue
            extension = set(extension)
            while extension:
                w = extension.pop()
                closed = set(member_set)
                for x in member_set:
                    closed.update(g.adjacency(x))
                exclusive = set(u for u in g.adjacency(w) if u > root and u not in closed)
                gained = len(g.neighbours(w) & member_set)
                stack.append((members + (w,), member_set | {w}, edges + gained, extension | exclusive))


def dense_pair_violations(g):
    """Vertex sets with ``(|U|, e(g[U]))`` at least one of ``(4, 6)``, ``(5, 7)``, ``(8, 12)``.

    Only sets inducing a connected subgraph are listed. A disconnected set reaching one
    of these pairs without isolated vertices always contains a connected ``(4, 6)`` or
    ``(5, 7)`` set, so an empty result still certifies that none exist.

    :raises HostTooLarge: For hosts above ``DENSE_SCAN_MAX_VERTICES`` vertices.
    """

    if g.n > settings.DENSE_SCAN_MAX_VERTICES:
        raise HostTooLarge('dense pair scan refused for %d vertices (limit %d)'
                           % (g.n, settings.DENSE_SCAN_MAX_VERTICES))
    thresholds = dict(DENSE_PAIRS)
    violations = []
    for members, edges in connected_vertex_sets(g, max(thresholds)):
        size = len(members)
        if size in thresholds and edges >= thresholds[size]:
            violations.append(DenseViolation(tuple(sorted(members)), size, edges))
    violations.sort()
    return violations


def p2_copy_bound(g, f, p):
    """Typical-graph property for copy counts.

    ``N_F <= 2 n^v p^e`` when ``m(F) <= 3/2``, otherwise ``N_F <= n^v p^e log n``; patterns
    above 8 vertices are outside the property and always pass.
    """

    if isinstance(f, str):
        f = get_pattern(f)
    if f.v > 8:
        return True
    expected = g.n ** f.v * p ** f.e
    bound = 2 * expected if max_subgraph_density(f) <= Fraction(3, 2) else expected * log_n(g.n)
    return count_copies(g, f) <= bound


def p3_k210_bound(g, p):
    return count_k2_10(g) <= g.n ** 11 * p ** 18


def observed_packing_density(g, p, restrict=None):
    """Greedy packing size divided by ``|U|^3 p^3``, the observed stand-in for theta."""

    size = g.n if restrict is None else len(restrict)
    if size == 0 or p == 0:
        return 0.0
    return len(greedy_edge_disjoint_triangles(g, restrict)) / (size ** 3 * p ** 3)


def p4_triangle_packing(g, theta, p, restrict=None):
    size = g.n if restrict is None else len(restrict)
    return len(greedy_edge_disjoint_triangles(g, restrict)) >= theta * size ** 3 * p ** 3


def minus_copies_containing(g, edges):
    """Copies of ``F0_minus``, ``F1_minus`` or ``K4_minus`` whose edge image holds ``edges``."""

    edges = frozenset(edge_key(*e) for e in edges)
    found = []
    for name in ('F0_minus', 'F1_minus', 'K4_minus'):
        for copy in iter_copies(g, get_pattern(name)):
            if edges <= copy.edges:
                found.append((name, copy))
    return found


def _denser_than(g, numerator, denominator):
    """Vertices of a subgraph with density above ``numerator / denominator``, or ``[]``.

    Goldberg's network: the cut around ``{s} + U`` costs ``m b n + 2 a |U| - 2 b e(U)``
    for the density ``a / b``.
    """

    a, b, m = numerator, denominator, g.m
    network = nx.DiGraph()
    for v in g.vertices():
        network.add_edge('s', v, capacity=m * b)
        network.add_edge(v, 't', capacity=m * b + 2 * a - len(g.adjacency(v)) * b)
    for u, v in g.edges:
        network.add_edge(u, v, capacity=b)
        network.add_edge(v, u, capacity=b)
    cut, (source_side, _) = nx.minimum_cut(network, 's', 't')
    if cut < m * g.n * b:
        return sorted(v for v in source_side if v != 's')
    return []


def densest_subgraph_flow(g):
    """Exact densest subgraph by parametric minimum cuts.

    The optimum is one of the fractions ``e / k`` with ``k <= n``; a binary search over
    them finds the least one that no subgraph beats.
    """

    if g.m == 0:
        return Fraction(0), tuple(range(min(g.n, 1)))
    candidates = sorted(set(Fraction(e, k) for k in range(1, g.n + 1)
                            for e in range(0, min(g.m, k * (k - 1) // 2) + 1)))
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _denser_than(g, candidates[mid].numerator, candidates[mid].denominator):
            lo = mid + 1
        else:
            hi = mid
    best = candidates[lo]
    below = candidates[lo - 1]
    witness = _denser_than(g, below.numerator, below.denominator)
    return best, tuple(witness)


def densest_subgraph(g):
    """``(density, vertices)`` of the densest subgraph, by scan on small graphs."""

    if g.n <= settings.DENSEST_SCAN_MAX_VERTICES:
        return densest_vertex_subset(g)
    return densest_subgraph_flow(g)


def four_cycle_containment(g, x, y, w, z):
    """Locate the ``F0_minus``/``F1_minus``/``K4_minus`` copy around a 4-cycle.

    The cycle is ``y-x-w-z-y``, with adjacent edges ``xy`` and ``xw`` each lying in a
    triangle that avoids the other. Adding ``yw`` completes the copy to ``F0``, ``F1`` or
    ``K4``.

    :returns: ``(pattern name, edge image, completing edge)``, or ``None`` when the
        triangle hypothesis fails.
    """

    cycle = [edge_key(x, y), edge_key(x, w), edge_key(w, z), edge_key(z, y)]
    if not all(g.has_edge(*e) for e in cycle):
        raise InvalidGraph('%r is not a 4-cycle of the host' % ((y, x, w, z),))
    first = sorted(v for v in g.neighbours(x) & g.neighbours(y) if v != w)
    second = sorted(v for v in g.neighbours(x) & g.neighbours(w) if v != y)
    if not first or not second:
        return None
    completing = edge_key(y, w)
    if z in first or z in second:
        return 'K4_minus', frozenset(cycle + [edge_key(x, z)]), completing
    shared = sorted(set(first) & set(second))
    if shared:
        u = shared[0]
        extra = [edge_key(x, u), edge_key(y, u), edge_key(w, u)]
        return 'F1_minus', frozenset(cycle + extra), completing
    u1, u2 = first[0], second[0]
    extra = [edge_key(x, u1), edge_key(y, u1), edge_key(x, u2), edge_key(w, u2)]
    return 'F0_minus', frozenset(cycle + extra), completing

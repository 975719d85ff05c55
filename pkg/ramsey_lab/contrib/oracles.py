"""Exhaustive reference implementations of the counters.

They enumerate vertex tuples directly and share nothing with the fast code paths, so they
are only usable on small hosts (a dozen vertices or so).
"""
import itertools
from fractions import Fraction

import networkx as nx

from ramsey_lab.census import get_pattern
from ramsey_lab.colourings import BLUE, RED
from ramsey_lab.graphs import edge_key


def _cycle_images(g, length):
    """Edge sets of the ``length``-cycles of ``g``."""

    images = set()
    for subset in itertools.combinations(g.vertices(), length):
        first = subset[0]
        for rest in itertools.permutations(subset[1:]):
            walk = (first,) + rest
            pairs = [edge_key(walk[i], walk[(i + 1) % length]) for i in range(length)]
            if all(pair in g.edge_set for pair in pairs):
                images.add(frozenset(pairs))
    return images


def _edge_preserving_maps(g, pattern):
    """Injective vertex maps of ``pattern`` into ``g`` keeping every edge, built one vertex at a time."""

    earlier = [[a for a in range(i) if edge_key(a, i) in pattern.edge_set] for i in range(pattern.n)]
    image = []

    def extend():
        if len(image) == pattern.n:
            yield tuple(image)
            return
        wanted = earlier[len(image)]
        for x in g.vertices():
            if x not in image and all(edge_key(image[a], x) in g.edge_set for a in wanted):
                image.append(x)
                yield from extend()
                image.pop()

    return extend()


def copies(g, f):
    """Edge images of every copy of ``f`` in ``g``, found over all injective vertex maps."""

    if isinstance(f, str):
        f = get_pattern(f)
    pattern_edges = list(f.graph.edges)
    return set(frozenset(edge_key(image[a], image[b]) for a, b in pattern_edges)
               for image in _edge_preserving_maps(g, f.graph))


def triangles(g):
    return sorted(t for t in itertools.combinations(g.vertices(), 3)
                  if all(edge_key(a, b) in g.edge_set for a, b in itertools.combinations(t, 2)))


def monochromatic_triangles(phi):
    found = []
    for t in triangles(phi.universe):
        colours = set(phi.colour(a, b) for a, b in itertools.combinations(t, 2))
        if len(colours) == 1:
            found.append(t)
    return found


def crrbb_cycles(phi):
    """4-cycles coloured red, red, blue, blue going round."""

    found = set()
    for cycle in _cycle_images(phi.universe, 4):
        reds = [edge for edge in cycle if phi.colour(*edge) is RED]
        if len(reds) == 2 and set(reds[0]) & set(reds[1]):
            found.add(cycle)
    return found


def crbbbb_cycles(phi, red=RED):
    return set(cycle for cycle in _cycle_images(phi.universe, 5)
               if sum(1 for edge in cycle if phi.colour(*edge) is red) == 1)


def dangerous_pairs(phi):
    found = set()
    g = phi.universe
    for x, y in itertools.combinations(g.vertices(), 2):
        if (x, y) in g.edge_set:
            continue
        wedges = set()
        for apex in g.vertices():
            if apex in (x, y) or edge_key(apex, x) not in g.edge_set or edge_key(apex, y) not in g.edge_set:
                continue
            first, second = phi.colour(apex, x), phi.colour(apex, y)
            if first is second:
                wedges.add(first)
        if wedges == {RED, BLUE}:
            found.add((x, y))
    return found


def dangerous_k12(phi):
    """Triples ``(w, u1, u2)`` with ``u1 u2`` red and a blue path ``u1-w1-w-w2-u2`` of fresh vertices."""

    g = phi.universe

    def blue(a, b):
        return edge_key(a, b) in g.edge_set and phi.colour(a, b) is BLUE

    found = set()
    for u1, u2 in phi.edges_of(RED):
        for w in g.vertices():
            if w in (u1, u2) or edge_key(w, u1) in g.edge_set or edge_key(w, u2) in g.edge_set:
                continue
            others = [v for v in g.vertices() if v not in (w, u1, u2)]
            for w1, w2 in itertools.permutations(others, 2):
                if blue(u1, w1) and blue(w1, w) and blue(w, w2) and blue(w2, u2):
                    found.add((w, u1, u2))
                    break
    return found


def wedge_count(g):
    return sum(1 for centre in g.vertices()
               for a, b in itertools.combinations(g.vertices(), 2)
               if centre not in (a, b) and edge_key(centre, a) in g.edge_set and edge_key(centre, b) in g.edge_set)


def closing_pairs(g):
    """Pairs joined by a wedge of ``g``, edges of ``g`` included."""

    return set((a, b) for a, b in itertools.combinations(g.vertices(), 2)
               if any(edge_key(c, a) in g.edge_set and edge_key(c, b) in g.edge_set
                      for c in g.vertices() if c not in (a, b)))


def four_cycle_wedges(g):
    """Wedges ``(x, u1, u2)`` of ``K_n`` closing a 4-cycle with a wedge of ``g`` centred elsewhere."""

    found = set()
    for x in g.vertices():
        for u1, u2 in itertools.combinations(g.vertices(), 2):
            if x in (u1, u2):
                continue
            if any(edge_key(w, u1) in g.edge_set and edge_key(w, u2) in g.edge_set
                   for w in g.vertices() if w not in (x, u1, u2)):
                found.add((x, u1, u2))
    return found


def max_density(g):
    """``max e(H)/v(H)`` over all non-empty vertex subsets."""

    best = Fraction(0)
    for size in range(1, g.n + 1):
        for subset in itertools.combinations(g.vertices(), size):
            chosen = set(subset)
            inside = sum(1 for u, v in g.edges if u in chosen and v in chosen)
            best = max(best, Fraction(inside, size))
    return best


def dense_vertex_sets(g, pairs):
    """``(vertices, size, edges)`` for every vertex set of a listed size that induces a
    connected subgraph with at least the paired number of edges."""

    nx_graph = g.to_networkx()
    found = []
    for size, threshold in pairs:
        for subset in itertools.combinations(g.vertices(), size):
            induced = nx_graph.subgraph(subset)
            if induced.number_of_edges() >= threshold and nx.is_connected(induced):
                found.append((subset, size, induced.number_of_edges()))
    return sorted(found)

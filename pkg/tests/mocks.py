import itertools

from ramsey_lab.census import get_pattern
from ramsey_lab.collages import Collage, maximal_collages
from ramsey_lab.colourings import BLUE, RED, TwoColouring
from ramsey_lab.graphs import Graph, RngSpec, edge_key, sample_gnp
from ramsey_lab.testcases import BaseVerificationTestCase


class PatternGraphFactory(object):
    """Library patterns as plain host graphs, optionally shifted onto a larger vertex set."""

    @classmethod
    def create(cls, name='K3', n=None, offset=0):
        pattern = get_pattern(name).graph
        n = pattern.n + offset if n is None else n
        return Graph(n, [(u + offset, v + offset) for u, v in pattern.edges])


class DisjointGraphFactory(object):
    """Vertex-disjoint copies of library patterns, one after another."""

    @classmethod
    def create(cls, *names, **kwargs):
        edges = []
        offset = 0
        for name in names:
            pattern = get_pattern(name).graph
            edges.extend((u + offset, v + offset) for u, v in pattern.edges)
            offset += pattern.n
        return Graph(kwargs.get('n', offset), edges)


class RandomHostFactory(object):
    @classmethod
    def create(cls, seed=0, n=9, p=0.45):
        return sample_gnp(n, p, RngSpec(seed))


class SparseHostFactory(object):
    @classmethod
    def create(cls, seed=0, n=24, p=0.18):
        return sample_gnp(n, p, RngSpec(seed))


class SampledCollagesFactory(object):
    """The first ``count`` collages passing ``accept``, taken from G(n, p) hosts on successive seeds.

    ``n`` may be a sequence, cycled through seed by seed.
    """

    @classmethod
    def create(cls, count, n, p=None, accept=None, stream=0):
        sizes = n if isinstance(n, (list, tuple)) else [n]
        found = []
        for seed in itertools.count():
            size = sizes[seed % len(sizes)]
            host = sample_gnp(size, size ** -0.62 if p is None else p, RngSpec(seed, stream))
            for c in maximal_collages(host):
                if accept is None or accept(c):
                    found.append(c)
                    if len(found) == count:
                        return found


class CollageFactory(object):
    @classmethod
    def create(cls, name='K3', n=None):
        return Collage.from_graph(PatternGraphFactory.create(name, n=n))


class ColouringFactory(object):
    """Colours the listed ``red`` edges red and every other edge blue."""

    @classmethod
    def create(cls, graph, red=()):
        red = set(edge_key(u, v) for u, v in red)
        return TwoColouring(graph, dict((edge, RED if edge in red else BLUE) for edge in graph.edges))


def crrbb_picture():
    """The 4-cycle ``0-1-2-3`` with ``01``, ``12`` red and ``23``, ``30`` blue."""

    return ColouringFactory.create(Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), red=[(0, 1), (1, 2)])


def dangerous_pair_picture():
    """``x=0`` and ``y=1`` joined to ``v=2`` in red and to ``u=3`` in blue, ``xy`` absent."""

    return ColouringFactory.create(Graph(4, [(0, 2), (1, 2), (0, 3), (1, 3)]), red=[(0, 2), (1, 2)])


def dangerous_k12_picture():
    """Red ``u1 u2 = 0 1`` and the blue path ``0-2-4-3-1`` through ``w=4``, ``w u1`` and ``w u2`` absent."""

    graph = Graph(5, [(0, 1), (0, 2), (2, 4), (3, 4), (1, 3)])
    return ColouringFactory.create(graph, red=[(0, 1)])


class MockVerificationTestCase(BaseVerificationTestCase):
    host_factory = RandomHostFactory
    seeds = (1, 2)

    def dummy(self):
        pass

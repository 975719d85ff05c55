"""Vertex-labelled simple graphs, random graph sampling and elementary queries.

Vertices are the dense integers ``0..n-1``. Graphs are immutable once built, so they can
be shared freely between trial workers.
"""
import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np

from ramsey_lab.conf import settings
from ramsey_lab.exceptions import InvalidGraph

logger = logging.getLogger(__name__)

#: Above this many vertex pairs, ``sample_gnp`` skips geometrically instead of drawing a
#: uniform per pair.
DENSE_SAMPLING_PAIRS = 5 * 10 ** 6


def edge_key(u, v):
    """Return the canonical ``(min, max)`` form of the pair ``{u, v}``."""

    return (u, v) if u < v else (v, u)


def _check_vertex_count(n):
    if n < 0:
        raise InvalidGraph('vertex count must be non-negative, got %r' % n)
    if n > settings.MAX_VERTICES:
        raise InvalidGraph('vertex count %d above MAX_VERTICES=%d' % (n, settings.MAX_VERTICES))


def _canonical_edges(n, edges, strict=True):
    keys = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise InvalidGraph('loop at vertex %d' % u)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraph('edge %r out of range for n=%d' % ((u, v), n))
        key = edge_key(u, v)
        if strict and key in keys:
            raise InvalidGraph('duplicate edge %r' % (key,))
        keys.add(key)
    return keys


class Graph(object):

    """Undirected simple graph on the vertices ``0..n-1``.

    :param n: Vertex count.
    :param edges: Iterable of vertex pairs. Repeated pairs are merged unless ``strict`` is set.
    :param labels: Optional old-label vector, kept by :func:`induced_subgraph`.
    :param strict: Reject repeated pairs instead of merging them.
    """

    __slots__ = ('n', 'edges', 'edge_set', 'labels', '_adjacency', '_neighbours')

    def __init__(self, n, edges=(), labels=None, strict=False):
        _check_vertex_count(n)
        keys = _canonical_edges(n, edges, strict=strict)
        self.n = n
        self.edges = tuple(sorted(keys))
        self.edge_set = frozenset(keys)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise InvalidGraph('label vector has %d entries for n=%d' % (len(labels), n))
        self.labels = labels
        neighbours = [[] for _ in range(n)]
        for u, v in self.edges:
            neighbours[u].append(v)
            neighbours[v].append(u)
        self._adjacency = tuple(tuple(sorted(nbrs)) for nbrs in neighbours)
        self._neighbours = tuple(frozenset(nbrs) for nbrs in neighbours)

    @classmethod
    def complete(cls, n):
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def from_networkx(cls, nx_graph):
        """Build a graph from a networkx graph whose nodes are ``0..n-1``."""

        return cls(nx_graph.number_of_nodes(), nx_graph.edges())

    @property
    def m(self):
        return len(self.edges)

    def adjacency(self, v):
        """Sorted neighbour tuple of ``v``."""

        self._check(v)
        return self._adjacency[v]

    def neighbours(self, v):
        """Neighbour set of ``v``."""

        self._check(v)
        return self._neighbours[v]

    def has_edge(self, u, v):
        return edge_key(u, v) in self.edge_set

    def vertices(self):
        return range(self.n)

    def original_label(self, v):
        """Label of ``v`` in the graph this one was induced from."""

        return self.labels[v] if self.labels is not None else v

    def to_networkx(self):
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self.n))
        nx_graph.add_edges_from(self.edges)
        return nx_graph

    def with_edges(self, extra):
        """Return a new graph on the same vertices with ``extra`` edges added."""

        return Graph(self.n, self.edge_set | set(edge_key(u, v) for u, v in extra), labels=self.labels)

    def _check(self, v):
        if not 0 <= v < self.n:
            raise InvalidGraph('vertex %r out of range for n=%d' % (v, self.n))

    def __contains__(self, edge):
        return edge_key(*edge) in self.edge_set

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edge_set == other.edge_set

    def __hash__(self):
        return hash((self.n, self.edge_set))

    def __repr__(self):
        return '<Graph n=%d m=%d>' % (self.n, self.m)


class EdgeSubset(object):

    """A set of pairs of ``K_n``, used for edge sets that need not come from one host graph."""

    __slots__ = ('n', 'pairs')

    def __init__(self, n, pairs=()):
        _check_vertex_count(n)
        self.n = n
        self.pairs = frozenset(_canonical_edges(n, pairs, strict=False))

    @classmethod
    def of(cls, graph):
        return cls(graph.n, graph.edge_set)

    def to_graph(self):
        return Graph(self.n, self.pairs)

    def vertices(self):
        """Vertices touched by some pair."""

        return frozenset(v for pair in self.pairs for v in pair)

    def sorted(self):
        return sorted(self.pairs)

    def __contains__(self, pair):
        return edge_key(*pair) in self.pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __or__(self, other):
        return EdgeSubset(max(self.n, other.n), self.pairs | other.pairs)

    def __sub__(self, other):
        return EdgeSubset(self.n, self.pairs - other.pairs)

    def __eq__(self, other):
        return isinstance(other, EdgeSubset) and self.n == other.n and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.n, self.pairs))

    def __repr__(self):
        return '<EdgeSubset n=%d size=%d>' % (self.n, len(self.pairs))


@dataclass(frozen=True)
class RngSpec:

    """Names an independent, reproducible random stream.

    Streams are derived with :class:`numpy.random.SeedSequence` from
    ``[master_seed, stream_id, purpose]``, so every (trial, purpose) pair draws from its own
    generator no matter which worker runs it.
    """

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError('master_seed must be a 64-bit unsigned integer')
        if self.stream_id < 0:
            raise ValueError('stream_id must be non-negative')

    def generator(self, purpose=0):
        """Return a fresh generator for ``purpose`` on this stream."""

        seq = np.random.SeedSequence([self.master_seed, self.stream_id, purpose])
        return np.random.default_rng(seq)

    def spawn(self, stream_id):
        return RngSpec(self.master_seed, stream_id)


def _as_generator(rng, purpose=0):
    if isinstance(rng, RngSpec):
        return rng.generator(purpose)
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError('expected RngSpec or numpy Generator, got %r' % type(rng))


def pair_count(n):
    return n * (n - 1) // 2


def pairs_from_indices(indices):
    """Map pair indices ``k = v(v-1)/2 + u`` (``u < v``) back to ``(u, v)`` arrays."""

    k = np.asarray(indices, dtype=np.int64)
    v = np.floor((1 + np.sqrt(1 + 8 * k.astype(np.float64))) / 2).astype(np.int64)
    # float rounding can be off by one on either side
    v -= (v * (v - 1) // 2 > k)
    v += ((v + 1) * v // 2 <= k)
    u = k - v * (v - 1) // 2
    return u, v


def _edges_from_indices(indices):
    u, v = pairs_from_indices(indices)
    return zip(u.tolist(), v.tolist())


def sample_gnp(n, p, rng):
    """Sample the binomial random graph ``G(n, p)``.

    Every pair is present independently with probability ``p``. The draw depends only on
    ``rng`` (an :class:`RngSpec` or a numpy generator) and ``n``.

    :raises InvalidGraph: For ``n`` above ``MAX_VERTICES``.
    :raises ValueError: For ``p`` outside ``[0, 1]``.
    """

    if not 0.0 <= p <= 1.0:
        raise ValueError('p must lie in [0, 1], got %r' % p)
    _check_vertex_count(n)
    total = pair_count(n)
    if p == 0.0 or total == 0:
        return Graph(n)
    if p == 1.0:
        return Graph.complete(n)
    gen = _as_generator(rng)
    if total <= DENSE_SAMPLING_PAIRS:
        indices = np.flatnonzero(gen.random(total) < p)
    else:
        chunks = []
        position = -1
        batch = max(1024, int(total * p * 1.1))
        while position < total:
            steps = gen.geometric(p, size=batch)
            positions = position + np.cumsum(steps)
            chunks.append(positions[positions < total])
            position = int(positions[-1])
        indices = np.concatenate(chunks)
    return Graph(n, _edges_from_indices(indices))


def sample_gnm(n, m, rng):
    """Sample a uniform graph with exactly ``m`` edges on ``n`` vertices."""

    _check_vertex_count(n)
    total = pair_count(n)
    if not 0 <= m <= total:
        raise ValueError('edge count %r outside [0, %d]' % (m, total))
    gen = _as_generator(rng)
    indices = np.sort(gen.choice(total, size=m, replace=False))
    return Graph(n, _edges_from_indices(indices))


def random_edge_order(pairs, rng):
    """Return ``pairs`` sorted, then uniformly permuted by ``rng``."""

    ordered = sorted(pairs)
    if not ordered:
        return []
    gen = _as_generator(rng)
    perm = gen.permutation(len(ordered))
    return [ordered[i] for i in perm.tolist()]


def graph_union(g1, g2):
    if g1.n != g2.n:
        raise InvalidGraph('cannot unite graphs on %d and %d vertices' % (g1.n, g2.n))
    return Graph(g1.n, g1.edge_set | g2.edge_set)


def _check_vertex_set(g, vertices):
    vertices = frozenset(vertices)
    for v in vertices:
        g._check(v)
    return vertices


def edges_between(g, a, b):
    """Number of edges with one endpoint in ``a`` and the other in ``b``.

    Edges inside ``a & b`` are counted once.
    """

    a = _check_vertex_set(g, a)
    b = _check_vertex_set(g, b)
    counted = set()
    for u in a:
        for v in g.adjacency(u):
            if v in b:
                counted.add(edge_key(u, v))
    return len(counted)


def degree(g, v):
    return len(g.adjacency(v))


def max_degree(g):
    return max((degree(g, v) for v in g.vertices()), default=0)


def induced_subgraph(g, vertices):
    """Induced subgraph on ``vertices``, relabelled to ``0..k-1`` in ascending order.

    The returned graph keeps the original labels in :attr:`Graph.labels`.
    """

    old = sorted(_check_vertex_set(g, vertices))
    new = {v: i for i, v in enumerate(old)}
    edges = [(new[u], new[v]) for u, v in g.edges if u in new and v in new]
    labels = [g.original_label(v) for v in old]
    return Graph(len(old), edges, labels=labels)


def subgraph_from_edges(n, edges):
    """Compact graph spanned by ``edges`` of a host on ``n`` vertices.

    Vertices are the endpoints, relabelled in ascending order with the host labels kept.
    """

    edges = [edge_key(u, v) for u, v in edges]
    old = sorted(set(v for edge in edges for v in edge))
    new = {v: i for i, v in enumerate(old)}
    return Graph(len(old), ((new[u], new[v]) for u, v in edges), labels=old)


def to_host_edges(g, edges):
    """Translate ``edges`` of a compact graph back into host labels."""

    return [edge_key(g.original_label(u), g.original_label(v)) for u, v in edges]


def p1_max_degree(g, p):
    """Typical-graph property: maximum degree at most ``2np``."""

    return max_degree(g) <= 2 * g.n * p


def p5_edges_between(g, a, b, p, a_bound=None, b_bound=None):
    """Typical-graph property: ``e(A, B) <= |A||B|p + a b p / log^3 n``.

    ``a_bound`` and ``b_bound`` default to ``|A|`` and ``|B|``.
    """

    a_bound = len(a) if a_bound is None else a_bound
    b_bound = len(b) if b_bound is None else b_bound
    slack = a_bound * b_bound * p / settings.log(g.n) ** 3
    return edges_between(g, a, b) <= len(a) * len(b) * p + slack


def read_edge_list(path):
    """Read a graph stored as ``n m`` followed by ``m`` lines ``u v`` with ``u < v``.

    :raises InvalidGraph: On malformed headers, loops, duplicates or unordered pairs.
    """

    with open(path, encoding='utf-8') as f:
        return parse_edge_list(f.read())


def parse_edge_list(text):
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or len(lines[0]) != 2:
        raise InvalidGraph('missing "n m" header')
    n, m = int(lines[0][0]), int(lines[0][1])
    rows = lines[1:]
    if len(rows) != m:
        raise InvalidGraph('header announces %d edges, found %d' % (m, len(rows)))
    edges = []
    for row in rows:
        if len(row) != 2:
            raise InvalidGraph('malformed edge line %r' % ' '.join(row))
        u, v = int(row[0]), int(row[1])
        if not u < v:
            raise InvalidGraph('edge %d %d must satisfy u < v' % (u, v))
        edges.append((u, v))
    return Graph(n, edges, strict=True)


def format_edge_list(g):
    lines = ['%d %d' % (g.n, g.m)]
    lines.extend('%d %d' % edge for edge in g.edges)
    return '\n'.join(lines) + '\n'


def write_edge_list(g, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_edge_list(g))


def log_n(n):
    """``log n`` in the configured base, with ``log 1 = 0`` and ``log 0`` rejected."""

    if n < 1:
        raise ValueError('log n needs n >= 1')
    return settings.log(n) if n > 1 else 0.0


__all__ = [
    'Graph', 'EdgeSubset', 'RngSpec', 'edge_key', 'sample_gnp', 'sample_gnm', 'random_edge_order',
    'graph_union', 'edges_between', 'degree', 'max_degree', 'induced_subgraph', 'subgraph_from_edges',
    'to_host_edges', 'p1_max_degree', 'p5_edges_between', 'read_edge_list', 'parse_edge_list',
    'format_edge_list', 'write_edge_list', 'pair_count', 'pairs_from_indices', 'log_n',
]

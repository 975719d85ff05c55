"""Very good colourings of sparse collages by discharging.

Vertices start with weight 5 and edges with weight -3; six stages move all of it onto the
blocks of the collage. A block that ends up positive has edges that can be removed, the
rest coloured recursively and the removed edges coloured back without creating a
monochromatic triangle or a ``C_rrbb``.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from ramsey_lab.census import count_copies, enumerate_copies, triangles
from ramsey_lab.collages import Collage, YES, build_collage_hypergraph, discharging_verdict
from ramsey_lab.colourings import BLUE, RED, TwoColouring, is_t_good
from ramsey_lab.exceptions import FalsificationError, PreconditionViolation
from ramsey_lab.graphs import Graph, edge_key

logger = logging.getLogger(__name__)

VERTEX_WEIGHT = Fraction(5)
EDGE_WEIGHT = Fraction(-3)

#: Subgraphs whose presence breaks the block structure.
FORBIDDEN_PATTERNS = ('K4', 'F2', 'F3')


class StageAudit(NamedTuple):
    stage: int
    vertices: dict
    edges: dict
    blocks: list


@dataclass
class BlockWeights:

    """Weights of the blocks of one collage after the last stage.

    ``blocks`` and ``weights`` are aligned and ordered like :attr:`Collage.blocks`;
    ``audit`` holds a :class:`StageAudit` per stage.
    """

    collage: Collage
    blocks: list
    weights: list
    audit: list = field(default_factory=list, repr=False)

    @property
    def total(self):
        return sum(self.weights, Fraction(0))

    def weight_of(self, block):
        return self.weights[self.blocks.index(block)]


def _instance(c, **extra):
    data = {'host_n': c.host_n, 'edges': [list(edge) for edge in c.edges]}
    data.update(extra)
    return data


def check_block_structure(c):
    """Reject collages holding ``K4``, ``F2`` or ``F3``.

    :raises PreconditionViolation: Naming the first forbidden pattern found.
    :raises FalsificationError: If the blocks of a collage free of them overlap.
    """

    for name in FORBIDDEN_PATTERNS:
        if count_copies(c.graph, name):
            raise PreconditionViolation('collage contains %s' % name)
    seen = {}
    for index, block in enumerate(c.blocks):
        for edge in block.edges:
            if edge in seen:
                raise FalsificationError('blocks %d and %d share edge %r' % (seen[edge], index, edge),
                                         _instance(c, edge=list(c.graph.original_label(v) for v in edge)))
            seen[edge] = index


def assign_block_weights(c):
    """Discharge every vertex and edge weight of ``c`` onto its blocks.

    Stages: (1) 5 per vertex, -3 per edge; (2) a vertex in one block sends 5 there;
    (3) a vertex in several blocks sends ``5/2`` to each of its two earliest blocks;
    (4) a block edge sends its -3 to its block; (5) a blockless vertex splits 5 over its
    incident edges; (6) a blockless edge splits its weight over the blocks at its endpoints,
    half per endpoint when both lie in blocks.

    :raises PreconditionViolation: When ``c`` contains ``K4``, ``F2`` or ``F3``.
    :raises FalsificationError: When weight is not conserved.
    """

    check_block_structure(c)
    g = c.graph
    blocks = c.blocks
    vertex_blocks = [[] for _ in g.vertices()]
    edge_block = {}
    for index, block in enumerate(blocks):
        for v in set(v for edge in block.edges for v in edge):
            vertex_blocks[v].append(index)
        for edge in block.edges:
            edge_block[edge] = index

    vertex_w = dict((v, VERTEX_WEIGHT) for v in g.vertices())
    edge_w = dict((edge, EDGE_WEIGHT) for edge in g.edges)
    block_w = [Fraction(0)] * len(blocks)
    audit = []

    def snapshot(stage):
        audit.append(StageAudit(stage, dict(vertex_w), dict(edge_w), list(block_w)))

    def move_from_vertex(v, amount, targets):
        vertex_w[v] -= amount * len(targets)
        for index in targets:
            block_w[index] += amount

    snapshot(1)
    for v in g.vertices():
        if len(vertex_blocks[v]) == 1:
            move_from_vertex(v, vertex_w[v], vertex_blocks[v])
    snapshot(2)
    for v in g.vertices():
        if len(vertex_blocks[v]) >= 2:
            move_from_vertex(v, vertex_w[v] / 2, vertex_blocks[v][:2])
    snapshot(3)
    for edge, index in edge_block.items():
        block_w[index] += edge_w[edge]
        edge_w[edge] = Fraction(0)
    snapshot(4)
    for v in g.vertices():
        if not vertex_blocks[v]:
            incident = g.adjacency(v)
            share = vertex_w[v] / len(incident)
            for u in incident:
                edge_w[edge_key(u, v)] += share
            vertex_w[v] = Fraction(0)
    snapshot(5)
    for edge in g.edges:
        if edge in edge_block:
            continue
        ends = [v for v in edge if vertex_blocks[v]]
        if not ends:
            raise FalsificationError('edge %r has no endpoint in a block' % (edge,), _instance(c))
        portion = edge_w[edge] / len(ends)
        for v in ends:
            for index in vertex_blocks[v]:
                block_w[index] += portion / len(vertex_blocks[v])
        edge_w[edge] = Fraction(0)
    snapshot(6)

    expected = VERTEX_WEIGHT * g.n + EDGE_WEIGHT * g.m
    leftover = [v for v, w in vertex_w.items() if w] + [e for e, w in edge_w.items() if w]
    if sum(block_w, Fraction(0)) != expected or leftover:
        raise FalsificationError('weight not conserved: blocks hold %s, expected %s'
                                 % (sum(block_w, Fraction(0)), expected), _instance(c))
    return BlockWeights(c, list(blocks), block_w, audit)


def positive_block(weights):
    """The first block, in block order, with positive weight."""

    for block, weight in zip(weights.blocks, weights.weights):
        if weight > 0:
            return block
    return None


def f0_cycle_edges(c):
    """Edges on the 4-cycle ``u1-u2-w1-u3`` of some ``F0_minus`` copy in ``c``."""

    edges = set()
    for copy in enumerate_copies(c.graph, 'F0_minus'):
        u1, u2, u3, w1 = copy.vertices[:4]
        edges.update((edge_key(u1, u2), edge_key(u2, w1), edge_key(w1, u3), edge_key(u3, u1)))
    return edges


def k4_minus_pairs(block):
    """The two pairs ``{x y, x z}`` of a ``K4_minus`` block ``(y, z, x1, x2)``."""

    y, z, x1, x2 = block.vertices
    return ((edge_key(x1, y), edge_key(x1, z)), (edge_key(x2, y), edge_key(x2, z)))


def removable_edges(c, block):
    """Edges of ``block`` lying on no 4-cycle of an ``F0_minus`` copy in ``c``.

    A triangle yields its least such edge; a ``K4_minus`` yields the first pair
    ``(e, f)`` from :func:`k4_minus_pairs` with both edges off every such cycle.

    :raises FalsificationError: When no edge or pair qualifies.
    """

    cycle_edges = f0_cycle_edges(c)
    if block.kind == 'triangle':
        for edge in sorted(block.edges):
            if edge not in cycle_edges:
                return (edge,)
    else:
        for pair in k4_minus_pairs(block):
            if cycle_edges.isdisjoint(pair):
                return pair
    raise FalsificationError('no removable edge in %s block %r' % (block.kind, block.vertices),
                             _instance(c, block=list(c.graph.original_label(v) for v in block.vertices)))


def _extend(colours, block, removed):
    """Colour ``removed`` back in, given the colours of the rest of ``block``."""

    if block.kind == 'triangle':
        edge, = removed
        others = [colours[e] for e in block.edges if e != edge]
        colours[edge] = RED if all(c is BLUE for c in others) else BLUE
        return
    e_removed, f_removed = removed
    pairs = k4_minus_pairs(block)
    e_kept, f_kept = pairs[1] if tuple(removed) == pairs[0] else pairs[0]
    if colours[e_kept] is RED and colours[f_kept] is BLUE:
        colours[e_removed], colours[f_removed] = BLUE, RED
    else:
        colours[e_removed], colours[f_removed] = RED, BLUE


def very_good_colouring(c, density_mode='auto'):
    """A colouring of ``c`` with no monochromatic triangle, no ``C_rrbb`` and blue non-triangle edges.

    ``c`` must satisfy the sparseness and dense-pair conditions of well-behavedness; its
    size does not matter. Sub-collages are coloured from an explicit work list, in order of
    their least edge, and the removed edges are coloured back in reverse.

    :raises PreconditionViolation: When ``c`` fails those conditions.
    :raises FalsificationError: When a step that should always succeed does not.
    """

    verdict = discharging_verdict(c, density_mode)
    if verdict.status != YES:
        raise PreconditionViolation('collage fails condition (%s): %s' % (verdict.condition, verdict.status))

    top = c.graph
    colours = {}
    records = []
    work = list(reversed(build_collage_hypergraph(top).components))
    while work:
        edges = work.pop()
        sub = Collage(top.n, edges)
        if not triangles(sub.graph):
            for edge in edges:
                colours[edge] = BLUE
            continue
        weights = assign_block_weights(sub)
        block = positive_block(weights)
        if block is None:
            raise FalsificationError('no positive block in a collage of density %s' % sub.density,
                                     _instance(c, sub_edges=[list(top.original_label(v) for v in edge) for edge in sorted(edges)]))
        label = sub.graph.original_label
        removed = tuple(edge_key(label(u), label(v)) for u, v in removable_edges(sub, block))
        lifted = block._replace(vertices=tuple(label(v) for v in block.vertices),
                                edges=frozenset(edge_key(label(u), label(v)) for u, v in block.edges))
        records.append((lifted, removed))
        logger.debug('discharging %r: %s block %r, removing %r', sub, block.kind, lifted.vertices, removed)
        remainder = Graph(top.n, edges - set(removed))
        components = build_collage_hypergraph(remainder).components
        work.extend(reversed(components))

    for block, removed in reversed(records):
        _extend(colours, block, removed)

    universe = Graph(c.host_n, c.edges.pairs)
    phi = TwoColouring(universe, dict((edge_key(top.original_label(u), top.original_label(v)), colour)
                                      for (u, v), colour in colours.items()))
    check = is_t_good(phi, 1)
    if not check:
        raise FalsificationError('discharging colouring fails condition %s' % check.condition,
                                 _instance(c, colouring=[[u, v, col.value] for (u, v), col in phi.items()]))
    return phi


__all__ = [
    'BlockWeights', 'StageAudit', 'assign_block_weights', 'positive_block', 'removable_edges',
    'very_good_colouring', 'check_block_structure', 'f0_cycle_edges', 'k4_minus_pairs',
]

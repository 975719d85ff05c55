"""Red/blue edge colourings and every coloured obstruction the game cares about."""
import enum
import itertools
import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from networkx.utils import UnionFind

from ramsey_lab.census import enumerate_copies, triangles
from ramsey_lab.conf import settings
from ramsey_lab.exceptions import IncompleteColouring, InvalidGraph, RamseyGraph, SearchBudgetExhausted
from ramsey_lab.graphs import EdgeSubset, Graph, edge_key

logger = logging.getLogger(__name__)


class Colour(enum.Enum):
    RED = 'r'
    BLUE = 'b'

    @property
    def other(self):
        return Colour.BLUE if self is Colour.RED else Colour.RED

    @classmethod
    def parse(cls, value):
        if isinstance(value, Colour):
            return value
        return cls(str(value).strip().lower()[:1])


RED, BLUE = Colour.RED, Colour.BLUE


class TwoColouring(object):

    """A partial map from the edges of ``universe`` to :class:`Colour`.

    :param universe: The graph being coloured.
    :param colours: Mapping of edges to colours (``'r'``/``'b'`` strings are accepted).
    """

    def __init__(self, universe, colours=None):
        self.universe = universe
        self._colours = {}
        for (u, v), colour in (colours or {}).items():
            key = edge_key(u, v)
            if key not in universe.edge_set:
                raise InvalidGraph('coloured pair %r is not an edge of the universe' % (key,))
            self._colours[key] = Colour.parse(colour)
        self._by_colour = None

    @classmethod
    def monochromatic(cls, universe, colour=BLUE):
        return cls(universe, dict((edge, colour) for edge in universe.edges))

    @property
    def is_complete(self):
        return len(self._colours) == self.universe.m

    def require_complete(self):
        if not self.is_complete:
            raise IncompleteColouring('%d of %d edges coloured' % (len(self._colours), self.universe.m))
        return self

    def colour(self, u, v):
        """Colour of ``{u, v}``, or ``None`` when it is not coloured."""

        return self._colours.get(edge_key(u, v))

    def items(self):
        return sorted(self._colours.items())

    def edges_of(self, colour):
        return sorted(edge for edge, c in self._colours.items() if c is colour)

    def _neighbourhoods(self):
        if self._by_colour is None:
            by_colour = {RED: [set() for _ in range(self.universe.n)],
                         BLUE: [set() for _ in range(self.universe.n)]}
            for (u, v), colour in self._colours.items():
                by_colour[colour][u].add(v)
                by_colour[colour][v].add(u)
            self._by_colour = by_colour
        return self._by_colour

    def neighbours(self, v, colour):
        """Vertices joined to ``v`` by an edge of ``colour``."""

        return self._neighbourhoods()[colour][v]

    def subgraph(self, colour):
        return Graph(self.universe.n, self.edges_of(colour))

    def swapped(self):
        return TwoColouring(self.universe, dict((edge, c.other) for edge, c in self._colours.items()))

    def restricted(self, universe):
        """The colouring seen on the edges of a sub-universe."""

        return TwoColouring(universe, dict((edge, c) for edge, c in self._colours.items()
                                           if edge in universe.edge_set))

    def extended(self, universe, colours):
        """A colouring of a larger universe that keeps every existing colour."""

        merged = dict(self._colours)
        for edge, colour in colours.items():
            key = edge_key(*edge)
            if key in merged and merged[key] is not Colour.parse(colour):
                raise InvalidGraph('edge %r is already coloured %s' % (key, merged[key].value))
            merged[key] = colour
        return TwoColouring(universe, merged)

    def __len__(self):
        return len(self._colours)

    def __eq__(self, other):
        return (isinstance(other, TwoColouring) and self.universe == other.universe
                and self._colours == other._colours)

    def __repr__(self):
        return '<TwoColouring %d/%d edges, %d red>' % (
            len(self._colours), self.universe.m, len(self.edges_of(RED)))


class Crrbb(NamedTuple):

    """A 4-cycle ``x-red_apex-y-blue_apex`` with its red and blue wedges.

    ``{x, y}`` is the colour-splitting diagonal.
    """

    x: int
    y: int
    red_apex: int
    blue_apex: int


class Crbbbb(NamedTuple):

    """A 5-cycle ``u1-u2-w2-w-w1`` whose only red edge is ``u1u2``."""

    u1: int
    u2: int
    w2: int
    w: int
    w1: int


class K12Threat(NamedTuple):
    w: int
    u1: int
    u2: int


def monochromatic_triangles(phi):
    """Triangles of the universe whose three edges share a colour."""

    phi.require_complete()
    found = []
    for a, b, c in triangles(phi.universe):
        colour = phi.colour(a, b)
        if phi.colour(a, c) is colour and phi.colour(b, c) is colour:
            found.append((a, b, c))
    return found


def enumerate_crrbb(phi, red=RED):
    """Every 4-cycle with two adjacent ``red`` edges and two adjacent edges of the other colour.

    A coloured 4-cycle has at most one such split, so each cycle appears at most once.
    """

    phi.require_complete()
    found = []
    for copy in enumerate_copies(phi.universe, 'C4'):
        cycle = copy.vertices
        colours = [phi.colour(cycle[i], cycle[(i + 1) % 4]) for i in range(4)]
        for k in range(4):
            if (colours[k] is red and colours[(k + 1) % 4] is red
                    and colours[(k + 2) % 4] is red.other and colours[(k + 3) % 4] is red.other):
                x, y = sorted((cycle[k], cycle[(k + 2) % 4]))
                found.append(Crrbb(x, y, cycle[(k + 1) % 4], cycle[(k + 3) % 4]))
                break
    return sorted(found)


def count_crrbb(phi):
    return len(enumerate_crrbb(phi))


def enumerate_crbbbb(phi, red=RED):
    """Every 5-cycle with exactly one ``red`` edge; pass ``red=BLUE`` for ``C_brrrr``."""

    phi.require_complete()
    found = []
    for copy in enumerate_copies(phi.universe, 'C5'):
        cycle = copy.vertices
        reds = [i for i in range(5) if phi.colour(cycle[i], cycle[(i + 1) % 5]) is red]
        if len(reds) != 1:
            continue
        i = reds[0]
        a, b = cycle[i], cycle[(i + 1) % 5]
        if a < b:
            walk = [cycle[(i + k) % 5] for k in range(5)]
        else:
            walk = [cycle[(i + 1 - k) % 5] for k in range(5)]
        u1, u2, w2, w, w1 = walk
        found.append(Crbbbb(u1, u2, w2, w, w1))
    return sorted(found)


def count_crbbbb(phi):
    return len(enumerate_crbbbb(phi))


def triangle_edges(g):
    """Edges of ``g`` lying in at least one triangle."""

    edges = set()
    for a, b, c in triangles(g):
        edges.update((edge_key(a, b), edge_key(a, c), edge_key(b, c)))
    return edges


@dataclass
class GoodnessVerdict:

    """Outcome of :func:`is_t_good`; ``condition`` names the first violated condition."""

    good: bool
    condition: Optional[int] = None
    witness: object = None

    def __bool__(self):
        return self.good


def is_t_good(phi, t):
    """Check that ``phi`` is ``t``-good.

    The conditions, in order: (1) no monochromatic triangle, (2) every edge in no triangle
    is blue, (3) fewer than ``t`` copies of ``C_rrbb``.

    :returns: A :class:`GoodnessVerdict`, truthy when good, with the first failed condition
        and a witness otherwise.
    """

    phi.require_complete()
    mono = monochromatic_triangles(phi)
    if mono:
        return GoodnessVerdict(False, 1, mono[0])
    in_triangles = triangle_edges(phi.universe)
    for edge in phi.universe.edges:
        if edge not in in_triangles and phi.colour(*edge) is not BLUE:
            return GoodnessVerdict(False, 2, edge)
    cycles = enumerate_crrbb(phi)
    if len(cycles) >= t:
        return GoodnessVerdict(False, 3, cycles[0] if cycles else len(cycles))
    return GoodnessVerdict(True)


def is_very_good(phi):
    return is_t_good(phi, 1)


def _pairs_with_common_apex(phi, colour):
    pairs = set()
    for apex in phi.universe.vertices():
        for a, b in itertools.combinations(sorted(phi.neighbours(apex, colour)), 2):
            pairs.add((a, b))
    return pairs


def dangerous_pairs(phi, include_graph_edges=False):
    """Pairs ``{x, y}`` with a blue wedge and a red wedge joining them.

    Such a pair arriving later cannot be coloured without a monochromatic triangle. By
    default only non-edges of the coloured graph are reported.
    """

    phi.require_complete()
    both = _pairs_with_common_apex(phi, RED) & _pairs_with_common_apex(phi, BLUE)
    if not include_graph_edges:
        both -= phi.universe.edge_set
    return EdgeSubset(phi.universe.n, both)


def _blue_two_paths(phi, start):
    """Map each vertex ``w`` to the middles ``w1`` of blue paths ``start-w1-w``."""

    reach = {}
    for middle in phi.neighbours(start, BLUE):
        for end in phi.neighbours(middle, BLUE):
            if end != start:
                reach.setdefault(end, set()).add(middle)
    return reach


def dangerous_k12(phi, include_graph_edges=False):
    """Wedges ``{w u1, w u2}`` of non-edges blocked by a ``C_rbbbb``.

    ``u1 u2`` is red and there are distinct ``w1, w2`` outside ``{w, u1, u2}`` with
    ``u1 w1``, ``w1 w``, ``w w2`` and ``w2 u2`` all blue.
    """

    phi.require_complete()
    graph_edges = phi.universe.edge_set
    found = []
    for u1, u2 in phi.edges_of(RED):
        from_u1 = _blue_two_paths(phi, u1)
        from_u2 = _blue_two_paths(phi, u2)
        for w in sorted(set(from_u1) & set(from_u2)):
            if w in (u1, u2):
                continue
            if not include_graph_edges and (edge_key(w, u1) in graph_edges or edge_key(w, u2) in graph_edges):
                continue
            first = from_u1[w] - {u2}
            second = from_u2[w] - {u1}
            if first and second and len(first | second) >= 2:
                found.append(K12Threat(w, u1, u2))
    return sorted(found)


@dataclass
class ObstructionReport:
    mono_triangles: list
    crrbb_count: int
    crbbbb_count: int
    dangerous_pairs: EdgeSubset
    dangerous_k12: list = field(default_factory=list)

    def to_dict(self):
        return {
            'mono_triangles': [list(t) for t in self.mono_triangles],
            'crrbb_count': self.crrbb_count,
            'crbbbb_count': self.crbbbb_count,
            'dangerous_pairs': [list(p) for p in self.dangerous_pairs],
            'dangerous_pair_count': len(self.dangerous_pairs),
            'dangerous_k12': [list(k) for k in self.dangerous_k12],
            'dangerous_k12_count': len(self.dangerous_k12),
        }


def obstruction_report(phi):
    return ObstructionReport(
        mono_triangles=monochromatic_triangles(phi),
        crrbb_count=count_crrbb(phi),
        crbbbb_count=count_crbbbb(phi),
        dangerous_pairs=dangerous_pairs(phi),
        dangerous_k12=dangerous_k12(phi),
    )


class _TriangleSearch(object):

    """Backtracking over the colours of triangle edges with unit propagation.

    Two equal colours on a triangle force the third edge to the other colour.
    """

    def __init__(self, variables, partners, budget, rng=None):
        self.variables = variables
        self.partners = partners
        self.budget = budget
        self.rng = rng
        self.nodes = 0
        self.assignment = {}
        self.trail = []

    def _propagate(self, edge, colour):
        queue = [(edge, colour)]
        while queue:
            e, c = queue.pop()
            current = self.assignment.get(e)
            if current is not None:
                if current is not c:
                    return False
                continue
            self.assignment[e] = c
            self.trail.append(e)
            for f, h in self.partners[e]:
                cf, ch = self.assignment.get(f), self.assignment.get(h)
                if cf is c and ch is c:
                    return False
                if cf is c and ch is None:
                    queue.append((h, c.other))
                elif ch is c and cf is None:
                    queue.append((f, c.other))
        return True

    def _undo(self, mark):
        while len(self.trail) > mark:
            del self.assignment[self.trail.pop()]

    def _options(self, first):
        if first:
            # a global colour swap maps solutions to solutions
            return [RED]
        if self.rng is not None and self.rng.random() < 0.5:
            return [BLUE, RED]
        return [RED, BLUE]

    def run(self):
        frames = []
        index = 0
        while True:
            while index < len(self.variables) and self.variables[index] in self.assignment:
                index += 1
            if index == len(self.variables):
                return dict(self.assignment)
            frames.append([index, len(self.trail), self._options(not frames)])
            while True:
                if not frames:
                    raise RamseyGraph('every colouring has a monochromatic triangle', nodes=self.nodes)
                frame = frames[-1]
                self._undo(frame[1])
                if not frame[2]:
                    frames.pop()
                    continue
                colour = frame[2].pop(0)
                self.nodes += 1
                if self.nodes > self.budget:
                    raise SearchBudgetExhausted('search budget of %d nodes exhausted' % self.budget,
                                                nodes=self.nodes)
                if self._propagate(self.variables[frame[0]], colour):
                    index = frame[0] + 1
                    break


def find_triangle_free_colouring(g, budget=None, recolour_non_triangle_blue=True, rng=None):
    """Colour ``g`` without monochromatic triangles by exact backtracking search.

    Triangle edges are split into independent groups (edges linked through shared
    triangles) and each group is searched separately, most constrained edges first.

    :param budget: Decision-node budget over all groups; ``SEARCH_BUDGET`` by default.
    :param recolour_non_triangle_blue: Colour edges in no triangle blue; otherwise they get a
        random colour from ``rng`` (blue without one).
    :param rng: Optional numpy generator randomising value order.
    :raises SearchBudgetExhausted: When the answer is unknown.
    :raises RamseyGraph: When ``g`` provably has no such colouring.
    """

    budget = settings.SEARCH_BUDGET if budget is None else budget
    tris = triangles(g)
    partners = {}
    groups = UnionFind()
    for a, b, c in tris:
        sides = (edge_key(a, b), edge_key(a, c), edge_key(b, c))
        for i, edge in enumerate(sides):
            partners.setdefault(edge, []).append(tuple(s for j, s in enumerate(sides) if j != i))
        groups.union(*sides)

    colours = {}
    nodes = 0
    for group in sorted((sorted(members) for members in groups.to_sets()), key=lambda members: members[0]):
        variables = sorted(group, key=lambda e: (-len(partners[e]), e))
        search = _TriangleSearch(variables, partners, budget - nodes, rng=rng)
        try:
            colours.update(search.run())
        finally:
            nodes += search.nodes
    logger.debug('triangle-free search on %r: %d triangles, %d nodes', g, len(tris), nodes)

    for edge in g.edges:
        if edge not in colours:
            if recolour_non_triangle_blue or rng is None:
                colours[edge] = BLUE
            else:
                colours[edge] = RED if rng.random() < 0.5 else BLUE
    return TwoColouring(g, colours)


def parse_colouring(universe, text):
    """Read ``u v c`` lines (``c`` in ``r``/``b``) into a colouring of ``universe``."""

    colours = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InvalidGraph('malformed colouring line %r' % line)
        u, v = int(parts[0]), int(parts[1])
        key = edge_key(u, v)
        if key in colours:
            raise InvalidGraph('edge %r coloured twice' % (key,))
        colours[key] = Colour.parse(parts[2])
    return TwoColouring(universe, colours)


def read_colouring(universe, path):
    with open(path, encoding='utf-8') as f:
        return parse_colouring(universe, f.read())


def format_colouring(phi):
    return ''.join('%d %d %s\n' % (u, v, c.value) for (u, v), c in phi.items())


def write_colouring(phi, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_colouring(phi))

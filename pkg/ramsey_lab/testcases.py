import unittest

import numpy as np

from ramsey_lab.census import count_copies, enumerate_copies
from ramsey_lab.collages import YES, discharging_verdict, extract_core, maximal_collages, replay_core_log
from ramsey_lab.colourings import (BLUE, RED, TwoColouring, dangerous_k12, dangerous_pairs, enumerate_crbbbb,
                                   enumerate_crrbb, is_t_good, monochromatic_triangles)
from ramsey_lab.contrib import oracles
from ramsey_lab.discharging import VERTEX_WEIGHT, EDGE_WEIGHT, assign_block_weights, positive_block, very_good_colouring
from ramsey_lab.graphs import edge_key


class BaseVerificationTestCase(unittest.TestCase):

    """Base test case class for checking the library against a family of host graphs."""

    #: *required*: Factory whose ``create(seed=...)`` returns a host :class:`~ramsey_lab.graphs.Graph`.
    host_factory = None
    #: Seeds passed to the factory, one host each. Defaults to ``range(5)``.
    seeds = range(5)
    #: The hosts built by ``setUp()``.
    hosts = None

    def get_host_factory(self):
        """Return the factory class for generating the hosts of this test case.

        By default this gets the ``host_factory`` attribute of this class.
        """

        return getattr(self, 'host_factory')

    def get_seeds(self):
        return list(getattr(self, 'seeds'))

    def get_host(self, factory, seed):
        """Create and return one host.

        By default this calls the ``create()`` method of the factory class with ``seed``.

        :param factory: The factory class used for creating.
        :param seed: Seed for this host.
        :returns: A :class:`~ramsey_lab.graphs.Graph`.
        """

        return factory.create(seed=seed)

    def setUp(self):
        factory = self.get_host_factory()
        self.hosts = [self.get_host(factory, seed) for seed in self.get_seeds()]

    def get_collages(self):
        """Every maximal collage of every host, as ``(host index, collage)`` pairs."""

        return [(index, c) for index, host in enumerate(self.hosts) for c in maximal_collages(host)]


class CensusOracleTestCaseMixin(object):

    """Compares :func:`~ramsey_lab.census.enumerate_copies` with exhaustive enumeration."""

    #: Library patterns to check. Keep them small, the oracle tries every injective vertex map.
    census_patterns = ('K3', 'K12', 'C4', 'K4_minus', 'C5', 'F0_minus', 'F1_minus')

    def get_census_patterns(self):
        return getattr(self, 'census_patterns')

    def test_census_oracle(self):
        """Check copies and counts for every host and pattern.

        :returns: A list of ``{pattern: count}`` dictionaries, one per host.
        """

        counts = []
        for host in self.hosts:
            found = {}
            for name in self.get_census_patterns():
                fast = set(copy.edges for copy in enumerate_copies(host, name))
                self.assertEqual(fast, oracles.copies(host, name), name)
                self.assertEqual(count_copies(host, name), len(fast), name)
                found[name] = len(fast)
            counts.append(found)
        return counts


class ColouringOracleTestCaseMixin(object):

    """Compares the colouring counters with exhaustive ones on random complete colourings."""

    #: Random colourings drawn per host.
    colourings_per_host = 3

    def get_colouring(self, host, seed):
        """Return a uniformly random complete colouring of ``host``."""

        rng = np.random.default_rng(seed)
        return TwoColouring(host, dict((edge, RED if rng.random() < 0.5 else BLUE) for edge in host.edges))

    def test_colouring_oracle(self):
        """Check each counter against its oracle.

        :returns: The checked colourings.
        """

        checked = []
        for index, host in enumerate(self.hosts):
            for k in range(getattr(self, 'colourings_per_host')):
                phi = self.get_colouring(host, index * 1000 + k)
                self.assertEqual(monochromatic_triangles(phi), oracles.monochromatic_triangles(phi))
                self.assertEqual(
                    set(frozenset((edge_key(c.x, c.red_apex), edge_key(c.red_apex, c.y),
                                   edge_key(c.y, c.blue_apex), edge_key(c.blue_apex, c.x)))
                        for c in enumerate_crrbb(phi)),
                    oracles.crrbb_cycles(phi))
                self.assertEqual(
                    set(frozenset((edge_key(c.u1, c.u2), edge_key(c.u2, c.w2), edge_key(c.w2, c.w),
                                   edge_key(c.w, c.w1), edge_key(c.w1, c.u1)))
                        for c in enumerate_crbbbb(phi)),
                    oracles.crbbbb_cycles(phi))
                self.assertEqual(set(dangerous_pairs(phi)), oracles.dangerous_pairs(phi))
                self.assertEqual(set(tuple(k12) for k12 in dangerous_k12(phi)), oracles.dangerous_k12(phi))
                checked.append(phi)
        return checked


class DischargingTestCaseMixin(object):

    """Checks weight conservation of the discharging stages on eligible collages."""

    #: Density mode used to decide eligibility.
    density_mode = 'auto'

    def get_eligible_collages(self):
        mode = getattr(self, 'density_mode')
        return [c for _, c in self.get_collages() if discharging_verdict(c, mode).status == YES]

    def test_block_weights(self):
        """Blocks end up with ``5 v - 3 e`` in total and one of them is positive.

        :returns: The :class:`~ramsey_lab.discharging.BlockWeights` of each collage with blocks.
        """

        results = []
        for c in self.get_eligible_collages():
            if not c.blocks:
                continue
            weights = assign_block_weights(c)
            self.assertEqual(weights.total, VERTEX_WEIGHT * c.v + EDGE_WEIGHT * c.e)
            self.assertIsNotNone(positive_block(weights))
            results.append(weights)
        return results


class VeryGoodColouringTestCaseMixin(object):

    """Colours every eligible collage by discharging and checks the result is very good."""

    def test_very_good_colouring(self):
        """:returns: The colourings produced."""

        colourings = []
        mode = getattr(self, 'density_mode', 'auto')
        for _, c in self.get_collages():
            if discharging_verdict(c, mode).status != YES:
                continue
            phi = very_good_colouring(c, mode)
            self.assertTrue(phi.is_complete)
            self.assertTrue(is_t_good(phi, 1))
            colourings.append(phi)
        return colourings


class CoreExtractionTestCaseMixin(object):

    """Extracts the core of every collage and replays its log."""

    def test_core_extraction(self):
        """:returns: The extraction logs."""

        logs = []
        for _, c in self.get_collages():
            core, log = extract_core(c)
            self.assertTrue(set(core) <= set(c.edges))
            self.assertLessEqual(len(log.L_D), 7)
            self.assertEqual(log.claim_violations(), [])
            self.assertEqual(replay_core_log(c, log), log.L_E)
            logs.append(log)
        return logs


class FullVerificationTestCaseMixin(
    CensusOracleTestCaseMixin,
    ColouringOracleTestCaseMixin,
    DischargingTestCaseMixin,
    VeryGoodColouringTestCaseMixin,
    CoreExtractionTestCaseMixin,
):

    """Adds every verification test to the test case."""

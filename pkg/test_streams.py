#!/usr/bin/env python3
"""
Testy strumieni losowych i mapowania równoległego
"""

import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from streams import MASK64, chunk_bounds, ordered_map, rng_for, splitmix64, subseed


class TestStreams(unittest.TestCase):
    """Testy dla streams"""

    def test_splitmix_reference_value(self):
        # pierwsza wartość generatora SplitMix64 dla stanu 0
        self.assertEqual(splitmix64(0), 0xE220A8397B1DCDAF)

    def test_subseeds_distinct_and_in_range(self):
        seeds = {subseed(0, j) for j in range(1000)}
        self.assertEqual(len(seeds), 1000)
        self.assertTrue(all(0 <= s <= MASK64 for s in seeds))
        self.assertNotEqual(subseed(0, 0), subseed(1, 0))

    def test_rng_reproducible(self):
        np.testing.assert_array_equal(rng_for(5, 3).random(10), rng_for(5, 3).random(10))

    def test_ordered_map_keeps_order(self):
        items = list(range(50))
        self.assertEqual(ordered_map(lambda x: x * x, items, workers=8), [x * x for x in items])
        self.assertEqual(ordered_map(lambda x: x, [], workers=4), [])

    def test_chunk_bounds(self):
        chunks = chunk_bounds(10, 4)
        self.assertEqual([(c.start, c.stop) for c in chunks], [(0, 4), (4, 8), (8, 10)])
        self.assertEqual(chunk_bounds(0, 4), [])


if __name__ == '__main__':
    unittest.main(argv=[''], exit=False, verbosity=2)

#!/usr/bin/env python3
"""
Testy kwadratury produktów Riesza
"""

import math
import os
import sys
import tempfile
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import RIESZ_CONFIG
from errors import (
    CoefficientLengthMismatch, GridOverflow, InputSchemaError, InvalidArgument,
    NonpositiveEntry, NotIncreasing, RatioTooSmall,
)
from riesz import (
    RieszQuadrature, cross_model_check, load_sequence, riesz_l1, riesz_ratio_sweep, validate_lacunary,
)
from streams import rng_for

HERE = os.path.dirname(os.path.abspath(__file__))


class TestLacunarySequence(unittest.TestCase):
    """Walidacja ciągu częstotliwości"""

    def test_valid(self):
        seq = validate_lacunary([1, 4, 16, 64])
        self.assertEqual(seq.terms, (1, 4, 16, 64))
        self.assertEqual(seq.ratios, (4.0, 4.0, 4.0))
        self.assertEqual(seq.summability, 0.75)

    def test_ratio_exactly_three(self):
        self.assertEqual(validate_lacunary([1, 3, 9]).ratios, (3.0, 3.0))

    def test_errors(self):
        with self.assertRaises(RatioTooSmall):
            validate_lacunary([1, 2])
        with self.assertRaises(NotIncreasing):
            validate_lacunary([4, 1])
        with self.assertRaises(NonpositiveEntry):
            validate_lacunary([0, 3])
        with self.assertRaises(InvalidArgument):
            validate_lacunary([1.5, 6])
        with self.assertRaises(InvalidArgument):
            validate_lacunary([])

    def test_error_order(self):
        """Niedodatni wyraz zgłaszany przed brakiem monotoniczności"""
        with self.assertRaises(NonpositiveEntry):
            validate_lacunary([3, 2, -1])
        with self.assertRaises(NotIncreasing):
            validate_lacunary([1, 2, 2])

    def test_load(self):
        seq = load_sequence(os.path.join(HERE, "inputs", "lacunary.json"))
        self.assertEqual(seq.terms, (1, 4, 16, 64))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.json")
            with open(path, 'w', encoding='utf-8') as f:
                f.write('[1, "4"]')
            with self.assertRaises(InputSchemaError):
                load_sequence(path)


class TestQuadrature(unittest.TestCase):
    """Testy kwadratury trapezów z podwajaniem"""

    def setUp(self):
        self.seq = validate_lacunary([1, 4, 16, 64])

    def test_unit_vectors_give_one(self):
        for i in range(5):
            a = [0.0] * (i + 1)
            a[i] = 1.0
            result = riesz_l1(a, self.seq, 1e-8)
            self.assertAlmostEqual(result.value, 1.0, delta=1e-6)

    def test_alternating_pair(self):
        """(1/2pi) int |cos t| dt = 2/pi"""
        result = riesz_l1([1.0, -1.0], self.seq, 1e-8)
        self.assertAlmostEqual(result.value, 2 / math.pi, delta=1e-6)
        self.assertGreaterEqual(len(result.deltas), 1)
        self.assertEqual(result.refinement_delta, result.deltas[-1])

    def test_refinement_monotone_with_kinks_on_nodes(self):
        """|cos t| ma załamania w węzłach siatki: błąd O(h^2), kolejne zmiany maleją"""
        result = riesz_l1([1.0, -1.0], self.seq, 1e-11)
        self.assertGreaterEqual(len(result.deltas), 3)
        self.assertTrue(all(b < a for a, b in zip(result.deltas, result.deltas[1:])), result.deltas)
        self.assertAlmostEqual(result.value, 2 / math.pi, delta=1e-9)

    def test_trailing_zero_ratio(self):
        result = riesz_l1([1.0, -1.0, 0.0], self.seq, 1e-8)
        self.assertAlmostEqual(result.value / 2.0, 1 / math.pi, delta=1e-6)

    def test_constant(self):
        self.assertEqual(riesz_l1([1.0], self.seq, 1e-8).value, 1.0)

    def test_zero_mass(self):
        self.assertEqual(riesz_l1([0.0, 0.0], self.seq, 1e-8).value, 0.0)

    def test_grid_sizes_double(self):
        result = riesz_l1([1.0, -1.0], self.seq, 1e-6)
        self.assertEqual(result.grid_size % (64 * 2), 0)
        self.assertGreater(result.grid_size, 64 * 2)

    def test_independent_of_workers(self):
        quadrature = RieszQuadrature(workers=1, block_size=1000)
        parallel = RieszQuadrature(workers=4, block_size=1000)
        a = [0.3, -0.5, 0.2, 0.1]
        self.assertEqual(quadrature.integrate(a, self.seq, 1e-7), parallel.integrate(a, self.seq, 1e-7))

    def test_errors(self):
        with self.assertRaises(GridOverflow):
            riesz_l1([1.0, 1.0, 1.0], validate_lacunary([1, 3 * 10**7]), 1e-8)
        with self.assertRaises(CoefficientLengthMismatch):
            riesz_l1([1.0] * 6, self.seq, 1e-8)
        with self.assertRaises(InvalidArgument):
            riesz_l1([1.0, 1.0], self.seq, 0.0)


class TestSweep(unittest.TestCase):
    """Losowe stosunki i porównanie z modelem i.i.d."""

    def setUp(self):
        self.seq = validate_lacunary([1, 4, 16, 64])

    def test_ratios_at_most_one(self):
        report = riesz_ratio_sweep(self.seq, n=3, trials=10, seed=0, tol=1e-6)
        self.assertTrue(report.upper_bound_holds)
        self.assertLessEqual(report.max_ratio, 1.0 + 1e-6)
        self.assertGreater(report.min_ratio, 0.0)
        self.assertEqual(len(report.rows), 10)
        self.assertEqual(sum(report.histogram["counts"]), 10)
        self.assertAlmostEqual(sum(abs(x) for x in report.argmin), 1.0, places=12)
        self.assertEqual(set(report.rows[0]), {"trial", "ratio", "a_0", "a_1", "a_2", "a_3"})

    def test_deterministic(self):
        first = riesz_ratio_sweep(self.seq, n=2, trials=5, seed=11, tol=1e-6)
        second = riesz_ratio_sweep(self.seq, n=2, trials=5, seed=11, tol=1e-6)
        self.assertEqual(first.to_dict(), second.to_dict())

    def test_nonnegative_vectors_give_one(self):
        """a_i >= 0: całka każdego wyrazu to a_i, więc stosunek = 1"""
        for trial in range(20):
            a = np.abs(rng_for(13, trial).normal(size=5))
            result = riesz_l1(a, self.seq, 1e-8)
            self.assertAlmostEqual(result.value / math.fsum(a), 1.0, delta=1e-9)

    def test_histogram_bins_override(self):
        default = riesz_ratio_sweep(self.seq, n=2, trials=6, seed=1, tol=1e-6)
        coarse = riesz_ratio_sweep(self.seq, n=2, trials=6, seed=1, tol=1e-6, histogram_bins=5)
        self.assertEqual(len(default.histogram["counts"]), RIESZ_CONFIG["histogram_bins"])
        self.assertEqual(len(coarse.histogram["counts"]), 5)
        self.assertEqual(len(coarse.histogram["edges"]), 6)
        self.assertEqual(sum(coarse.histogram["counts"]), 6)
        self.assertEqual(coarse.min_ratio, default.min_ratio)

    def test_cross_model_widely_spaced_frequencies(self):
        """Przy n_{k+1}/n_k rzędu 1000 produkt Riesza jest bliski modelowi i.i.d."""
        report = cross_model_check(validate_lacunary([1, 1000, 1000000]), [1.0, -1.0], 1e-8, seed=3)
        self.assertAlmostEqual(report.quadrature_ratio, 1 / math.pi, delta=1e-6)
        self.assertLessEqual(report.gap, 5.0 * report.iid_std_error + 1e-6)
        self.assertTrue(report.within_threshold)

    def test_n_too_large(self):
        with self.assertRaises(CoefficientLengthMismatch):
            riesz_ratio_sweep(self.seq, n=5, trials=1, seed=0, tol=1e-6)

    def test_cross_model(self):
        report = cross_model_check(validate_lacunary([1, 4]), [1.0, -1.0], 1e-8, samples=10**4, seed=0)
        self.assertAlmostEqual(report.quadrature_ratio, 1 / math.pi, delta=1e-6)
        self.assertLess(report.gap, 0.01)
        self.assertTrue(report.within_threshold)


if __name__ == '__main__':
    unittest.main(argv=[''], exit=False, verbosity=2)

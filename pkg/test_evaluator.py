#!/usr/bin/env python3
"""
Testy ewaluatora: enumeracja dokładna, Monte Carlo, stosunek, przykład Rademachera
"""

import math
import os
import sys
import tempfile
import unittest
from unittest.mock import patch

import numpy as np
from hypothesis import given, settings, strategies as st

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import EVALUATOR_CONFIG, PARALLEL_CONFIG
from distributions import make_finite, make_one_plus_cosine, make_symmetric, random_finite
from errors import (
    EnumerationTooLarge, InputSchemaError, InvalidArgument, NotFiniteSupport, NTooLarge, ZeroCoefficients,
)
from evaluator import (
    CoefficientVector, Method, Norm, enumerate_paths, evaluate_ratio, exact_l1,
    load_coefficients, mc_l1, rademacher_exact, ratio,
)
from streams import rng_for

HERE = os.path.dirname(os.path.abspath(__file__))


def random_instance(seed: int, trial: int):
    """Losowy rozkład skończony i współczynniki: d <= 3, n <= 6, wszystkie normy."""
    rng = rng_for(seed, trial)
    dist = random_finite(rng, max_atoms=3)
    n = int(rng.integers(0, 7))
    d = int(rng.integers(1, 4))
    norm = list(Norm)[int(rng.integers(0, 3))]
    return dist, CoefficientVector(rng.normal(size=(n + 1, d)), norm)


class TestExactL1(unittest.TestCase):
    """Testy enumeracji dokładnej"""

    def setUp(self):
        self.two_point = make_finite([(0.0, 0.5), (2.0, 0.5)], name="two_point")

    def test_alternating_pair(self):
        """E|1 - X_1| = 1 dla {0,2}"""
        result = exact_l1(self.two_point, CoefficientVector.from_scalars([1.0, -1.0]))
        self.assertEqual(result.mean, 1.0)
        self.assertEqual(result.std_error, 0.0)
        self.assertEqual(result.ci99, (1.0, 1.0))
        self.assertEqual(result.method, Method.EXACT)
        self.assertIsNone(result.seed)

    def test_nonnegative_scalars_give_equality(self):
        result = exact_l1(self.two_point, CoefficientVector.from_scalars([1.0, 1.0, 1.0]))
        self.assertAlmostEqual(result.mean, 3.0, places=14)

    def test_vector_linf(self):
        """E max(1, X_1) = 1.5"""
        cv = CoefficientVector(np.array([[1.0, 0.0], [0.0, 1.0]]), Norm.LINF)
        self.assertAlmostEqual(exact_l1(self.two_point, cv).mean, 1.5, places=15)

    def test_zero_absorption_keeps_probability(self):
        weights, paths = enumerate_paths(self.two_point, 6)
        self.assertAlmostEqual(math.fsum(weights), 1.0, places=15)
        # 2^6 przypisań, ale ścieżki z zerem zwijają się do jednej gałęzi
        self.assertEqual(len(weights), 7)
        np.testing.assert_array_equal(paths[:, 0], np.ones(len(weights)))

    def test_enumeration_matches_path_matrix(self):
        dist = make_finite([(0.0, 0.2), (0.5, 0.4), (2.0, 0.4)])
        rng = rng_for(5, 0)
        cv = CoefficientVector(rng.normal(size=(5, 2)), Norm.L2)
        weights, paths = enumerate_paths(dist, 4)
        via_paths = math.fsum(weights * np.linalg.norm(paths @ cv.coeffs, axis=1))
        self.assertAlmostEqual(exact_l1(dist, cv).mean, via_paths, places=12)

    def test_symmetric_law_allowed(self):
        sym = make_symmetric([(-1.0, 0.5), (1.0, 0.5)])
        self.assertEqual(exact_l1(sym, CoefficientVector.from_scalars([1.0, 1.0])).mean, 1.0)

    def test_errors(self):
        with self.assertRaises(NotFiniteSupport):
            exact_l1(make_one_plus_cosine(), CoefficientVector.from_scalars([1.0, 1.0]))
        three = make_finite([(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)])
        with self.assertRaises(EnumerationTooLarge):
            exact_l1(three, CoefficientVector.from_scalars(np.ones(16)))

    def test_trivial_upper_bound(self):
        """E||sum v_i R_i|| <= sum ||v_i|| na 1000 losowych instancjach"""
        for trial in range(1000):
            dist, cv = random_instance(31, trial)
            mean = exact_l1(dist, cv).mean
            self.assertLessEqual(mean, cv.l1_mass() + 1e-12)
            if cv.d == 1:
                nonneg = CoefficientVector(np.abs(cv.coeffs), cv.norm)
                self.assertAlmostEqual(exact_l1(dist, nonneg).mean, nonneg.l1_mass(),
                                       delta=1e-12 * max(1.0, nonneg.l1_mass()))


class TestRatio(unittest.TestCase):
    """Testy stosunku L1 / l1"""

    def setUp(self):
        self.two_point = make_finite([(0.0, 0.5), (2.0, 0.5)], name="two_point")

    def test_alternating_ratio(self):
        self.assertEqual(ratio(self.two_point, CoefficientVector.from_scalars([1.0, -1.0])), 0.5)

    def test_single_coefficient(self):
        cv = CoefficientVector.from_scalars([3.0, 0.0, 0.0])
        self.assertAlmostEqual(ratio(self.two_point, cv), 1.0, places=15)
        self.assertEqual(ratio(make_one_plus_cosine(), cv, method="monte_carlo", samples=1000), 1.0)

    def test_zero_coefficients(self):
        with self.assertRaises(ZeroCoefficients):
            ratio(self.two_point, CoefficientVector.from_scalars([0.0, 0.0]))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10**6), st.floats(1e-3, 1e3))
    def test_positive_homogeneity(self, trial, t):
        dist, cv = random_instance(17, trial)
        if cv.l1_mass() == 0:
            return
        base = ratio(dist, cv)
        self.assertAlmostEqual(ratio(dist, cv.scaled(t)), base, delta=1e-12)

    def test_ratio_result_fields(self):
        result = evaluate_ratio(self.two_point, CoefficientVector.from_scalars([1.0, -1.0]))
        self.assertEqual(result.l1_mass, 2.0)
        self.assertEqual(result.estimate.mean, 1.0)
        self.assertEqual(set(result.to_dict()), {"ratio", "l1_mass", "estimate"})

    def test_default_sample_count_from_config(self):
        cv = CoefficientVector.from_scalars([1.0, -1.0])
        result = evaluate_ratio(make_one_plus_cosine(), cv, method="monte_carlo", seed=2)
        self.assertEqual(result.estimate.samples, EVALUATOR_CONFIG["default_samples"])
        with patch.dict(EVALUATOR_CONFIG, {"default_samples": 3000}):
            result = evaluate_ratio(make_one_plus_cosine(), cv, method="monte_carlo", seed=2)
        self.assertEqual(result.estimate.samples, 3000)
        self.assertEqual(evaluate_ratio(make_one_plus_cosine(), cv, method="monte_carlo",
                                        samples=500, seed=2).estimate.samples, 500)


class TestMonteCarlo(unittest.TestCase):
    """Testy estymatora Monte Carlo"""

    def setUp(self):
        self.two_point = make_finite([(0.0, 0.5), (2.0, 0.5)], name="two_point")
        self.cv = CoefficientVector.from_scalars([1.0, -1.0])

    def test_n_zero_is_exact(self):
        result = mc_l1(make_one_plus_cosine(), CoefficientVector.from_scalars([-2.5]), samples=100, seed=3)
        self.assertEqual(result.mean, 2.5)
        self.assertEqual(result.std_error, 0.0)

    def test_against_exact(self):
        result = mc_l1(self.two_point, self.cv, samples=10**5, seed=0)
        self.assertLessEqual(abs(result.mean - 1.0), 4 * result.std_error)
        lo, hi = result.ci99
        self.assertAlmostEqual(hi - lo, 2 * 2.576 * result.std_error, places=12)

    def test_deterministic(self):
        first = mc_l1(self.two_point, self.cv, samples=5000, seed=42)
        second = mc_l1(self.two_point, self.cv, samples=5000, seed=42)
        self.assertEqual(first, second)

    def test_independent_of_workers(self):
        dist, cv = random_instance(8, 3)
        with patch.dict(PARALLEL_CONFIG, {"chunk_size": 1000}):
            results = [mc_l1(dist, cv, samples=20000, seed=9, workers=w) for w in (1, 2, 8)]
        self.assertEqual(results[0], results[1])
        self.assertEqual(results[0], results[2])

    def test_minimum_samples(self):
        with self.assertRaises(InvalidArgument):
            mc_l1(self.two_point, self.cv, samples=99, seed=0)

    def test_oracle_agreement(self):
        """|mc - exact| <= 4 SE w co najmniej 99 ze 100 prób"""
        hits = 0
        for trial in range(100):
            rng = rng_for(77, trial)
            # ograniczony nośnik i n <= 4: skończona wariancja, CLT działa przy 10^5 próbkach
            dist = random_finite(rng, max_atoms=3)
            while dist.atoms[-1][0] > 3.0:
                dist = random_finite(rng, max_atoms=3)
            n = int(rng.integers(1, 5))
            norm = list(Norm)[int(rng.integers(0, 3))]
            cv = CoefficientVector(rng.normal(size=(n + 1, int(rng.integers(1, 4)))), norm)
            exact = exact_l1(dist, cv).mean
            estimate = mc_l1(dist, cv, samples=10**5, seed=trial)
            if abs(estimate.mean - exact) <= 4 * estimate.std_error + 1e-12:
                hits += 1
        self.assertGreaterEqual(hits, 99)


class TestRademacher(unittest.TestCase):
    """Przykład ze znakami +-1"""

    def test_small_values(self):
        self.assertEqual(tuple(rademacher_exact(1)), (1.0, 1.0))
        values = rademacher_exact(4)
        self.assertEqual(tuple(values), (1.5, 1.5))
        self.assertLessEqual(values.value_products, 2.0)

    def test_up_to_sixteen(self):
        for n in range(1, 17):
            products, plain = rademacher_exact(n)
            self.assertEqual(products, plain)
            self.assertLessEqual(products, math.sqrt(n))

    def test_nine(self):
        products, plain = rademacher_exact(9)
        self.assertEqual(products, plain)
        self.assertLessEqual(products, 3.0)

    def test_limits(self):
        with self.assertRaises(NTooLarge):
            rademacher_exact(21)
        with self.assertRaises(InvalidArgument):
            rademacher_exact(0)


class TestCoefficientLoading(unittest.TestCase):
    """Wczytywanie współczynników z JSON"""

    def test_vector_file(self):
        cv = load_coefficients(os.path.join(HERE, "inputs", "unit_vectors.json"))
        self.assertEqual(cv.norm, Norm.LINF)
        self.assertEqual((cv.n, cv.d), (1, 2))

    def test_scalar_file_with_norm_override(self):
        cv = load_coefficients(os.path.join(HERE, "inputs", "alternating.json"), norm="l2")
        self.assertEqual(cv.norm, Norm.L2)
        self.assertEqual(cv.scalars(), [1.0, -1.0])

    def test_ragged_rows(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "ragged.json")
            with open(path, 'w', encoding='utf-8') as f:
                f.write('[[1, 0], [1]]')
            with self.assertRaises(InvalidArgument):
                load_coefficients(path)

    def test_bad_norm(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.json")
            with open(path, 'w', encoding='utf-8') as f:
                f.write('{"norm": "l3", "coeffs": [1, 2]}')
            with self.assertRaises(InputSchemaError):
                load_coefficients(path)

    def test_nonfinite_rejected(self):
        with self.assertRaises(InvalidArgument):
            CoefficientVector(np.array([1.0, np.inf]))


if __name__ == '__main__':
    unittest.main(argv=[''], exit=False, verbosity=2)

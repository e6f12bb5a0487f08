#!/usr/bin/env python3
"""
EWALUATOR E||sum v_i R_i||

1. exact_l1   - pełna enumeracja przypisań czynników (nośnik skończony)
2. mc_l1      - Monte Carlo z 99% przedziałem ufności, powtarzalne co do bitu
3. ratio      - stosunek L1 / l1 = E||sum v_i R_i|| / sum ||v_i||
4. rademacher_exact - przykład ze znakami +-1: E|sum prod eps_k| = E|sum eps_i| <= sqrt(n)

Gdy iloczyn częściowy trafi na atom 0, wszystkie dalsze R_i są zerami -
poddrzewo zwija się do jednej gałęzi.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import EVALUATOR_CONFIG
from distributions import Distribution
from errors import (
    EnumerationTooLarge, InvalidArgument, InvariantViolation, NotFiniteSupport,
    NTooLarge, ZeroCoefficients,
)
from report_writer import read_json_input
from streams import chunk_bounds, ordered_map, rng_for

logger = logging.getLogger(__name__)

COEFFICIENTS_SCHEMA = {
    "oneOf": [
        {"type": "array", "minItems": 1, "items": {"type": "number"}},
        {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": {"type": "number"}}},
        {
            "type": "object",
            "required": ["coeffs"],
            "additionalProperties": False,
            "properties": {
                "norm": {"enum": ["l1", "l2", "linf"]},
                "coeffs": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "oneOf": [
                            {"type": "number"},
                            {"type": "array", "minItems": 1, "items": {"type": "number"}},
                        ]
                    },
                },
            },
        },
    ]
}


class Norm(Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"


_NORM_ORD = {Norm.L1: 1, Norm.L2: 2, Norm.LINF: np.inf}


class Method(Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


def vector_norms(points: np.ndarray, norm: Norm) -> np.ndarray:
    """Normy wierszy (ostatnia oś) w R^d."""
    return np.linalg.norm(points, ord=_NORM_ORD[norm], axis=-1)


@dataclass
class CoefficientVector:
    """v_0..v_n w R^d z zadeklarowaną normą; skalary to d = 1."""
    coeffs: np.ndarray
    norm: Norm = Norm.L1

    def __post_init__(self):
        self.norm = Norm(self.norm)
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidArgument(f"Współczynniki muszą mieć kształt (n+1, d), otrzymano {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgument("Współczynniki muszą być skończone")
        self.coeffs = arr

    @classmethod
    def from_scalars(cls, values: Sequence[float]) -> "CoefficientVector":
        return cls(np.asarray(values, dtype=float)[:, None], Norm.L1)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def d(self) -> int:
        return self.coeffs.shape[1]

    def norms(self) -> np.ndarray:
        return vector_norms(self.coeffs, self.norm)

    def l1_mass(self) -> float:
        return math.fsum(self.norms())

    def scalars(self) -> List[float]:
        """Współczynniki skalarne a_i (tylko d = 1)."""
        if self.d != 1:
            raise InvalidArgument(f"Oczekiwano współczynników skalarnych, d = {self.d}")
        return [float(x) for x in self.coeffs[:, 0]]

    def scaled(self, t: float) -> "CoefficientVector":
        return CoefficientVector(self.coeffs * t, self.norm)

    def to_dict(self) -> Dict[str, Any]:
        return {"norm": self.norm.value, "coeffs": self.coeffs.tolist()}


@dataclass
class EstimateResult:
    mean: float
    std_error: float
    ci99: Tuple[float, float]
    samples: int
    seed: Optional[int]
    method: Method

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "ci99": list(self.ci99),
            "samples": self.samples,
            "seed": self.seed,
            "method": self.method.value,
        }


@dataclass
class RatioResult:
    ratio: float
    l1_mass: float
    estimate: EstimateResult

    def to_dict(self) -> Dict[str, Any]:
        return {"ratio": self.ratio, "l1_mass": self.l1_mass, "estimate": self.estimate.to_dict()}


@dataclass
class RademacherValues:
    n: int
    value_products: float
    value_plain: float
    sqrt_n: float
    bound_holds: bool

    def __iter__(self):
        yield self.value_products
        yield self.value_plain

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "value_products": self.value_products,
            "value_plain": self.value_plain,
            "sqrt_n": self.sqrt_n,
            "bound_holds": self.bound_holds,
        }


def coefficients_from_obj(obj: Any, norm: Optional[str] = None) -> CoefficientVector:
    declared = "l1"
    if isinstance(obj, dict):
        declared = obj.get("norm", declared)
        obj = obj["coeffs"]
    rows = [[float(x)] if not isinstance(x, list) else [float(y) for y in x] for x in obj]
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidArgument(f"Wszystkie współczynniki muszą mieć ten sam wymiar, otrzymano {sorted(widths)}")
    return CoefficientVector(np.array(rows, dtype=float), Norm(norm or declared))


def load_coefficients(path: str, norm: Optional[str] = None) -> CoefficientVector:
    """Wczytuje współczynniki z JSON; `norm` nadpisuje normę z pliku."""
    cv = coefficients_from_obj(read_json_input(path, COEFFICIENTS_SCHEMA, "coefficients"), norm)
    logger.info(f"Wczytano współczynniki: n={cv.n}, d={cv.d}, norma={cv.norm.value}")
    return cv


# ---------------------------------------------------------------------------
# Enumeracja dokładna
# ---------------------------------------------------------------------------

def _require_finite(dist: Distribution):
    if not dist.is_finite:
        raise NotFiniteSupport(f"Rozkład '{dist.name}' ({dist.kind.value}) nie ma skończonego nośnika")


def _check_budget(dist: Distribution, n: int, budget: Optional[int]):
    budget = budget or EVALUATOR_CONFIG["enumeration_budget"]
    states = len(dist.atoms) ** n
    if states > budget:
        raise EnumerationTooLarge(f"s^n = {len(dist.atoms)}^{n} = {states} > {budget}")


def enumerate_paths(dist: Distribution, n: int, budget: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Dokładne prawo łączne (R_0..R_n): prawdopodobieństwa (L,) i macierz ścieżek (L, n+1).
    Ścieżki, które osiągnęły 0, nie są dalej rozgałęziane.
    """
    _require_finite(dist)
    _check_budget(dist, n, budget)
    values, probs = dist.values, dist.probabilities
    s = len(values)

    paths = np.ones((1, 1))
    weights = np.ones(1)
    for _ in range(n):
        last = paths[:, -1]
        alive = last != 0.0
        grown_paths = np.repeat(paths[alive], s, axis=0)
        grown_last = (last[alive][:, None] * values[None, :]).ravel()
        grown_weights = (weights[alive][:, None] * probs[None, :]).ravel()
        dead_paths = paths[~alive]
        paths = np.vstack([
            np.column_stack([grown_paths, grown_last]),
            np.column_stack([dead_paths, np.zeros(len(dead_paths))]),
        ])
        weights = np.concatenate([grown_weights, weights[~alive]])
    return weights, paths


class ExactEnumerator:
    """Enumeracja poziom po poziomie; stany martwe (R = 0) są od razu sumowane."""

    def __init__(self, budget: Optional[int] = None):
        self.logger = logging.getLogger(__name__)
        self.budget = budget or EVALUATOR_CONFIG["enumeration_budget"]

    def expectation(self, dist: Distribution, cv: CoefficientVector) -> EstimateResult:
        _require_finite(dist)
        _check_budget(dist, cv.n, self.budget)
        values, probs = dist.values, dist.probabilities
        s = len(values)

        sums = cv.coeffs[:1].copy()           # (L, d)
        products = np.ones(1)                  # (L,)
        weights = np.ones(1)                   # (L,)
        finished: List[float] = []
        leaves = 0

        for i in range(1, cv.n + 1):
            products = (products[:, None] * values[None, :]).ravel()
            weights = (weights[:, None] * probs[None, :]).ravel()
            sums = np.repeat(sums, s, axis=0) + products[:, None] * cv.coeffs[i][None, :]

            dead = products == 0.0
            if np.any(dead):
                finished.append(float(np.dot(weights[dead], vector_norms(sums[dead], cv.norm))))
                leaves += int(np.count_nonzero(dead))
                products, weights, sums = products[~dead], weights[~dead], sums[~dead]

        finished.append(float(np.dot(weights, vector_norms(sums, cv.norm))))
        leaves += len(weights)
        mean = math.fsum(finished)
        self.logger.debug(f"exact_l1: {leaves} liści, E = {mean!r}")
        return EstimateResult(mean=mean, std_error=0.0, ci99=(mean, mean), samples=leaves,
                              seed=None, method=Method.EXACT)


def exact_l1(dist: Distribution, cv: CoefficientVector, budget: Optional[int] = None) -> EstimateResult:
    return ExactEnumerator(budget).expectation(dist, cv)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

class MonteCarloEstimator:
    """Estymator średniej z próby; kawałki ścieżek mają własne podziarna."""

    def __init__(self, workers: Optional[int] = None, chunk_size: Optional[int] = None):
        self.logger = logging.getLogger(__name__)
        self.config = EVALUATOR_CONFIG.copy()
        self.workers = workers
        self.chunk_size = chunk_size

    def path_norms(self, dist: Distribution, cv: CoefficientVector, samples: int, seed: int) -> np.ndarray:
        """||sum v_i R_i|| dla `samples` niezależnych ścieżek, w stałej kolejności."""
        chunks = chunk_bounds(samples, self.chunk_size)

        def _chunk(indexed):
            index, bounds = indexed
            factors = dist.draw(rng_for(seed, index), (len(bounds), cv.n))
            products = np.cumprod(factors, axis=1)
            sums = cv.coeffs[0][None, :] + products @ cv.coeffs[1:]
            return vector_norms(sums, cv.norm)

        return np.concatenate(ordered_map(_chunk, list(enumerate(chunks)), self.workers))

    def estimate(self, dist: Distribution, cv: CoefficientVector, samples: int, seed: int) -> EstimateResult:
        if samples < self.config["min_samples"]:
            raise InvalidArgument(f"samples = {samples} < {self.config['min_samples']}")

        if cv.n == 0 or not np.any(cv.coeffs[1:]):
            # R_0 = 1: wartość deterministyczna
            mean = float(vector_norms(cv.coeffs[:1], cv.norm)[0])
            return EstimateResult(mean=mean, std_error=0.0, ci99=(mean, mean), samples=samples,
                                  seed=seed, method=Method.MONTE_CARLO)

        norms = self.path_norms(dist, cv, samples, seed)
        mean = float(np.mean(norms))
        std_error = float(np.std(norms, ddof=1) / math.sqrt(samples))
        half = self.config["ci_z"] * std_error
        self.logger.info(f"mc_l1: {samples} ścieżek, E = {mean:.6g} +- {std_error:.2g} (seed={seed})")
        return EstimateResult(mean=mean, std_error=std_error, ci99=(mean - half, mean + half),
                              samples=samples, seed=seed, method=Method.MONTE_CARLO)


def mc_l1(dist: Distribution, cv: CoefficientVector, samples: int, seed: int,
          workers: Optional[int] = None) -> EstimateResult:
    return MonteCarloEstimator(workers).estimate(dist, cv, samples, seed)


def evaluate_ratio(dist: Distribution, cv: CoefficientVector, method="exact",
                   samples: Optional[int] = None, seed: int = 0,
                   workers: Optional[int] = None) -> RatioResult:
    """E||sum v_i R_i|| / sum ||v_i|| wraz z estymatą, z której pochodzi."""
    mass = cv.l1_mass()
    if mass <= 0.0:
        raise ZeroCoefficients("sum ||v_i|| = 0")
    method = Method(method)
    if method == Method.EXACT:
        estimate = exact_l1(dist, cv)
    else:
        estimate = mc_l1(dist, cv, samples or EVALUATOR_CONFIG["default_samples"], seed, workers)
    return RatioResult(ratio=estimate.mean / mass, l1_mass=mass, estimate=estimate)


def ratio(dist: Distribution, cv: CoefficientVector, method="exact",
          samples: Optional[int] = None, seed: int = 0) -> float:
    return evaluate_ratio(dist, cv, method, samples, seed).ratio


# ---------------------------------------------------------------------------
# Przykład Rademachera
# ---------------------------------------------------------------------------

def rademacher_exact(n: int) -> RademacherValues:
    """
    E|sum_{i<=n} prod_{k<=i} eps_k| przez enumerację 2^n znaków
    oraz E|sum eps_i| ze wzoru dwumianowego; obie wartości są równe i <= sqrt(n).
    """
    if n < 1:
        raise InvalidArgument(f"n = {n} < 1")
    if n > EVALUATOR_CONFIG["rademacher_max_n"]:
        raise NTooLarge(f"n = {n} > {EVALUATOR_CONFIG['rademacher_max_n']}")

    bits = (np.arange(2 ** n, dtype=np.int64)[:, None] >> np.arange(n, dtype=np.int64)) & 1
    signs = 1 - 2 * bits
    total_products = int(np.abs(np.cumprod(signs, axis=1).sum(axis=1)).sum())
    total_plain = sum(math.comb(n, j) * abs(2 * j - n) for j in range(n + 1))

    if total_products != total_plain:
        raise InvariantViolation(f"n={n}: enumeracja {total_products} != wzór {total_plain}")
    # (total / 2^n)^2 <= n  <=>  total^2 <= n 4^n
    bound_holds = total_products ** 2 <= n * 4 ** n
    if not bound_holds:
        raise InvariantViolation(f"n={n}: E|sum eps_i| > sqrt(n)")

    value = total_products / 2 ** n
    return RademacherValues(n=n, value_products=value, value_plain=total_plain / 2 ** n,
                            sqrt_n=math.sqrt(n), bound_holds=bound_holds)

#!/usr/bin/env python3
"""
PRODUKTY RIESZA
R_i(t) = prod_{j<=i} (1 + cos(n_j t)) dla ciągu lakunarnego n_{k+1}/n_k >= 3.

(1/2pi) int_0^{2pi} |sum a_i R_i(t)| dt liczone metodą trapezów na siatce
jednostajnej, podwajanej aż do zbieżności; nowe punkty to tylko środki
przedziałów poprzedniej siatki.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import RIESZ_CONFIG
from distributions import make_one_plus_cosine
from errors import (
    CoefficientLengthMismatch, GridOverflow, InvalidArgument, NonpositiveEntry,
    NotIncreasing, RatioTooSmall,
)
from evaluator import CoefficientVector, Method, evaluate_ratio
from report_writer import read_json_input
from streams import ordered_map, rng_for

logger = logging.getLogger(__name__)

SEQUENCE_SCHEMA = {"type": "array", "minItems": 1, "items": {"type": "integer"}}


@dataclass(frozen=True)
class LacunarySequence:
    terms: Tuple[int, ...]
    ratios: Tuple[float, ...]
    summability: float

    def to_dict(self) -> Dict[str, Any]:
        return {"terms": list(self.terms), "ratios": list(self.ratios), "summability": self.summability}


@dataclass
class QuadratureResult:
    value: float
    grid_size: int
    refinement_delta: float
    deltas: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "grid_size": self.grid_size,
            "refinement_delta": self.refinement_delta,
            "deltas": list(self.deltas),
        }


@dataclass
class SweepReport:
    sequence: LacunarySequence
    n: int
    trials: int
    seed: int
    tol: float
    min_ratio: float
    argmin: List[float]
    max_ratio: float
    upper_bound_holds: bool
    histogram: Dict[str, List[float]]
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sequence": self.sequence.to_dict(),
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "tol": self.tol,
            "min_ratio": self.min_ratio,
            "argmin": list(self.argmin),
            "max_ratio": self.max_ratio,
            "upper_bound_holds": self.upper_bound_holds,
            "histogram": self.histogram,
        }


@dataclass
class CrossModelReport:
    quadrature_ratio: float
    iid_ratio: float
    iid_std_error: float
    gap: float
    within_threshold: bool
    threshold: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quadrature_ratio": self.quadrature_ratio,
            "iid_ratio": self.iid_ratio,
            "iid_std_error": self.iid_std_error,
            "gap": self.gap,
            "within_threshold": self.within_threshold,
            "threshold": self.threshold,
        }


def validate_lacunary(seq: Sequence[int]) -> LacunarySequence:
    """Sprawdza dodatniość, monotoniczność i n_{k+1} >= 3 n_k (w liczbach całkowitych)."""
    terms = list(seq)
    if not terms:
        raise InvalidArgument("Ciąg częstotliwości nie może być pusty")
    for x in terms:
        if isinstance(x, bool) or int(x) != x:
            raise InvalidArgument(f"Częstotliwość {x!r} nie jest liczbą całkowitą")
    terms = [int(x) for x in terms]

    for x in terms:
        if x <= 0:
            raise NonpositiveEntry(f"Niedodatni wyraz ciągu: {x}")
    for prev, nxt in zip(terms, terms[1:]):
        if nxt <= prev:
            raise NotIncreasing(f"Ciąg nie jest rosnący: {prev} -> {nxt}")
    for prev, nxt in zip(terms, terms[1:]):
        if nxt < 3 * prev:
            raise RatioTooSmall(f"{nxt}/{prev} < 3")

    ratios = tuple(nxt / prev for prev, nxt in zip(terms, terms[1:]))
    summability = math.fsum(prev / nxt for prev, nxt in zip(terms, terms[1:]))
    return LacunarySequence(terms=tuple(terms), ratios=ratios, summability=summability)


def load_sequence(path: str) -> LacunarySequence:
    return validate_lacunary(read_json_input(path, SEQUENCE_SCHEMA, "sequence"))


class RieszQuadrature:
    """Kwadratura trapezów z podwajaniem siatki; sumy w blokach o stałej kolejności."""

    def __init__(self, workers: Optional[int] = None, **overrides):
        self.logger = logging.getLogger(__name__)
        self.config = RIESZ_CONFIG.copy()
        self.config.update(overrides)
        self.workers = workers

    def _block_sum(self, a: np.ndarray, freqs: np.ndarray, t: np.ndarray) -> float:
        product = np.ones_like(t)
        total = np.full_like(t, a[0])
        for coefficient, frequency in zip(a[1:], freqs):
            product *= 1.0 + np.cos(frequency * t)
            total += coefficient * product
        return float(np.sum(np.abs(total)))

    def _points_sum(self, a: np.ndarray, freqs: np.ndarray, grid: int, offset: float, count: int) -> float:
        """Suma |f| w punktach 2pi (j + offset)/grid, j = 0..count-1."""
        block = self.config["block_size"]
        starts = list(range(0, count, block))

        def _one(start: int) -> float:
            j = np.arange(start, min(start + block, count), dtype=float)
            return self._block_sum(a, freqs, 2.0 * math.pi * (j + offset) / grid)

        return math.fsum(ordered_map(_one, starts, self.workers))

    def integrate(self, a: Sequence[float], seq: LacunarySequence, tol: float) -> QuadratureResult:
        a = np.asarray(a, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise InvalidArgument("Współczynniki a muszą być niepustym wektorem skalarów")
        if a.size > len(seq.terms) + 1:
            raise CoefficientLengthMismatch(f"len(a) = {a.size} > len(seq) + 1 = {len(seq.terms) + 1}")
        if tol <= 0:
            raise InvalidArgument(f"tol = {tol} <= 0")

        freqs = np.asarray(seq.terms[:a.size - 1], dtype=float)
        grid = self.config["points_per_harmonic"] * (1 + int(sum(seq.terms[:a.size - 1])))
        if grid > self.config["max_grid"]:
            raise GridOverflow(f"N = {grid} > {self.config['max_grid']}")

        mass = math.fsum(np.abs(a))
        if mass == 0.0:
            return QuadratureResult(value=0.0, grid_size=grid, refinement_delta=0.0)
        floor = self.config["denominator_floor"] * mass

        total = self._points_sum(a, freqs, grid, 0.0, grid)
        value = total / grid
        deltas: List[float] = []
        while True:
            if 2 * grid > self.config["max_grid"]:
                raise GridOverflow(f"Podwojenie siatki przekroczyłoby {self.config['max_grid']} punktów "
                                   f"(ostatnia zmiana {deltas[-1] if deltas else float('nan'):.3g})")
            # środki przedziałów starej siatki
            total += self._points_sum(a, freqs, grid, 0.5, grid)
            grid *= 2
            refined = total / grid
            delta = abs(refined - value)
            deltas.append(delta)
            value = refined
            self.logger.debug(f"Riesz: N={grid}, wartość={value!r}, zmiana={delta:.3g}")
            if delta / max(value, floor) < tol:
                break

        return QuadratureResult(value=value, grid_size=grid, refinement_delta=delta, deltas=deltas)


def riesz_l1(a: Sequence[float], seq: LacunarySequence, tol: float,
             workers: Optional[int] = None) -> QuadratureResult:
    return RieszQuadrature(workers).integrate(a, seq, tol)


def _unit_l1(rng: np.random.Generator, size: int) -> np.ndarray:
    a = rng.normal(size=size)
    while not np.any(a):
        a = rng.normal(size=size)
    return a / math.fsum(np.abs(a))


def riesz_ratio_sweep(seq: LacunarySequence, n: int, trials: int, seed: int, tol: float,
                      workers: Optional[int] = None, **overrides) -> SweepReport:
    """
    Losowe wektory a o jednostkowej masie l1 (podstrumień na próbę),
    stosunek kwadratura / sum |a_i|, minimum i histogram.
    """
    if n < 0 or n > len(seq.terms):
        raise CoefficientLengthMismatch(f"n + 1 = {n + 1} > len(seq) + 1 = {len(seq.terms) + 1}")
    if trials < 1:
        raise InvalidArgument(f"trials = {trials} < 1")

    quadrature = RieszQuadrature(workers, **overrides)
    ratios: List[float] = []
    rows: List[Dict[str, Any]] = []
    vectors: List[np.ndarray] = []

    for trial in range(trials):
        a = _unit_l1(rng_for(seed, trial), n + 1)
        result = quadrature.integrate(a, seq, tol)
        ratio = result.value / math.fsum(np.abs(a))
        ratios.append(ratio)
        vectors.append(a)
        row = {"trial": trial, "ratio": ratio}
        row.update({f"a_{i}": float(x) for i, x in enumerate(a)})
        rows.append(row)

    ratios_arr = np.array(ratios)
    best = int(np.argmin(ratios_arr))
    upper = max(1.0, float(ratios_arr.max()))
    counts, edges = np.histogram(ratios_arr, bins=quadrature.config["histogram_bins"], range=(0.0, upper))
    upper_bound_holds = bool(np.all(ratios_arr <= 1.0 + tol))
    if not upper_bound_holds:
        logger.warning(f"Sweep: stosunek {ratios_arr.max():.9g} > 1 + tol")

    logger.info(f"Sweep Riesza: {trials} prób, min stosunek = {ratios_arr[best]:.6g}")
    return SweepReport(
        sequence=seq, n=n, trials=trials, seed=seed, tol=tol,
        min_ratio=float(ratios_arr[best]), argmin=[float(x) for x in vectors[best]],
        max_ratio=float(ratios_arr.max()), upper_bound_holds=upper_bound_holds,
        histogram={"edges": edges.tolist(), "counts": counts.tolist()},
        rows=rows,
    )


def cross_model_check(seq: LacunarySequence, a: Sequence[float], tol: float,
                      samples: Optional[int] = None, seed: int = 0) -> CrossModelReport:
    """
    Porównanie stosunku kwadratury z modelem i.i.d. X = 1 + cos(U) (Monte Carlo).
    Wynik tylko raportowany.
    """
    samples = samples or RIESZ_CONFIG["cross_model_samples"]
    threshold = RIESZ_CONFIG["cross_model_gap"]
    mass = math.fsum(abs(x) for x in a)
    if mass == 0.0:
        raise InvalidArgument("sum |a_i| = 0")

    quadrature_ratio = riesz_l1(a, seq, tol).value / mass
    iid = evaluate_ratio(make_one_plus_cosine(), CoefficientVector.from_scalars(a),
                         Method.MONTE_CARLO, samples=samples, seed=seed)
    gap = abs(quadrature_ratio - iid.ratio)
    logger.info(f"Porównanie modeli: kwadratura={quadrature_ratio:.6g}, i.i.d.={iid.ratio:.6g}, różnica={gap:.3g}")
    return CrossModelReport(
        quadrature_ratio=quadrature_ratio, iid_ratio=iid.ratio,
        iid_std_error=iid.estimate.std_error / mass, gap=gap,
        within_threshold=gap <= threshold, threshold=threshold,
    )

#!/usr/bin/env python3
"""
WYSZUKIWANIE ADWERSARIALNE
Spadek po współrzędnych bez pochodnych, z wieloma restartami:

1. minimize_ratio - minimalizuje E||sum v_i R_i|| / sum ||v_i|| na sferze l1
2. mw_probe       - maksymalizuje E|sum a_i R_i| / (n+1) przy |a_i| <= 1 i |sum_{i<=k} a_i| <= C

Wyrocznia Monte Carlo używa jednego ustalonego zbioru ścieżek na restart,
więc funkcja celu w obrębie restartu jest deterministyczna.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from config import EVALUATOR_CONFIG, SEARCH_CONFIG
from distributions import Distribution
from errors import (
    EnumerationTooLarge, InfeasibleConstraints, InvalidArgument, InvariantViolation,
    NotFiniteSupport, OracleUnavailable,
)
from evaluator import (
    CoefficientVector, Method, Norm, enumerate_paths, exact_l1, mc_l1, vector_norms,
)
from streams import ordered_map, rng_for, subseed

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]
Projection = Callable[[np.ndarray], Optional[np.ndarray]]


@dataclass
class SearchConfig:
    n: int
    d: int = 1
    norm: Norm = Norm.L1
    budget: int = 10**4
    restarts: int = 1
    seed: int = 0
    oracle: Method = Method.EXACT
    samples: int = SEARCH_CONFIG["mc_samples"]
    initial_step: float = SEARCH_CONFIG["initial_step"]
    step_floor: float = SEARCH_CONFIG["step_floor"]

    def __post_init__(self):
        self.norm = Norm(self.norm)
        self.oracle = Method(self.oracle)
        if self.n < 0:
            raise InvalidArgument(f"n = {self.n} < 0")
        if self.d < 1:
            raise InvalidArgument(f"d = {self.d} < 1")
        if not (self.budget >= self.restarts >= 1):
            raise InvalidArgument(f"Wymagane budget >= restarts >= 1 (budget={self.budget}, restarts={self.restarts})")
        if self.oracle == Method.MONTE_CARLO and self.samples < EVALUATOR_CONFIG["min_samples"]:
            raise InvalidArgument(f"samples = {self.samples} < {EVALUATOR_CONFIG['min_samples']}")
        if not (0 < self.step_floor <= self.initial_step):
            raise InvalidArgument("Wymagane 0 < step_floor <= initial_step")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n, "d": self.d, "norm": self.norm.value, "budget": self.budget,
            "restarts": self.restarts, "seed": self.seed, "oracle": self.oracle.value,
            "samples": self.samples if self.oracle == Method.MONTE_CARLO else None,
            "initial_step": self.initial_step, "step_floor": self.step_floor,
        }


@dataclass
class RestartOutcome:
    index: int
    start: str
    best_value: float
    best_point: np.ndarray
    evaluations: int
    trace: List[float]
    exhausted: bool


@dataclass
class SearchResult:
    best_ratio: float
    best_coeffs: CoefficientVector
    evaluations_used: int
    trace: List[List[float]]
    restart_best: List[float]
    restart_starts: List[str]
    budget_exhausted: bool
    verification: Dict[str, Any] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "best_ratio": self.best_ratio,
            "best_coeffs": self.best_coeffs.to_dict(),
            "evaluations_used": self.evaluations_used,
            "trace": [list(t) for t in self.trace],
            "restart_best": list(self.restart_best),
            "restart_starts": list(self.restart_starts),
            "budget_exhausted": self.budget_exhausted,
            "verification": dict(self.verification),
            "config": dict(self.config),
        }

    def trace_rows(self) -> List[Dict[str, Any]]:
        """Wiersze CSV: restart, krok, najlepsza wartość."""
        return [
            {"restart": r, "step": i, "value": value}
            for r, values in enumerate(self.trace)
            for i, value in enumerate(values)
        ]


def split_budget(budget: int, restarts: int) -> List[int]:
    """budget // restarts na restart, reszta dla pierwszych restartów."""
    base, extra = divmod(budget, restarts)
    return [base + (1 if r < extra else 0) for r in range(restarts)]


def coordinate_descent(start: np.ndarray, objective: Objective, project: Projection, budget: int,
                       initial_step: float, step_floor: float) -> Tuple[np.ndarray, float, int, List[float], bool]:
    """
    Minimalizuje objective: cyklicznie +-step na każdej współrzędnej, akceptacja tylko
    przy ścisłej poprawie, połowienie kroku po cyklu bez poprawy, stop poniżej step_floor.
    Zwraca (punkt, wartość, liczba ewaluacji, ślad, czy wyczerpano budżet).
    """
    x = project(start)
    if x is None:
        raise InvalidArgument("Punkt startowy poza zbiorem dopuszczalnym")
    value = objective(x)
    evaluations = 1
    trace = [value]
    step = initial_step

    # kursor idzie dalej po akceptacji; krok maleje po x.size kolejnych współrzędnych bez poprawy
    coord = 0
    since_improvement = 0
    while step >= step_floor:
        improved = False
        for sign in (1.0, -1.0):
            if evaluations >= budget:
                return x, value, evaluations, trace, True
            candidate = x.copy()
            candidate.flat[coord] += sign * step
            candidate = project(candidate)
            if candidate is None:
                continue
            candidate_value = objective(candidate)
            evaluations += 1
            # remis: zostaje dotychczasowy punkt
            if candidate_value < value:
                x, value = candidate, candidate_value
                trace.append(value)
                improved = True
                break
        since_improvement = 0 if improved else since_improvement + 1
        if since_improvement >= x.size:
            step /= 2.0
            since_improvement = 0
        coord = (coord + 1) % x.size
    return x, value, evaluations, trace, False


class AdversarialSearch:
    """Wspólny silnik restartów dla minimize_ratio i mw_probe."""

    def __init__(self, dist: Distribution, config: SearchConfig, workers: Optional[int] = None):
        self.logger = logging.getLogger(__name__)
        self.dist = dist
        self.config = config
        self.workers = workers
        self._exact_law: Optional[Tuple[np.ndarray, np.ndarray]] = None
        if config.oracle == Method.EXACT:
            try:
                self._exact_law = enumerate_paths(dist, config.n)
            except (NotFiniteSupport, EnumerationTooLarge) as e:
                raise OracleUnavailable(f"Wyrocznia dokładna niedostępna: {e.message}") from e

    def _paths_for(self, restart: int) -> Tuple[np.ndarray, np.ndarray]:
        """Prawo ścieżek dla restartu: dokładne albo ustalona próbka (wspólne liczby losowe)."""
        if self._exact_law is not None:
            return self._exact_law
        rng = rng_for(subseed(self.config.seed, restart), 0)
        factors = self.dist.draw(rng, (self.config.samples, self.config.n))
        paths = np.column_stack([np.ones(self.config.samples), np.cumprod(factors, axis=1)])
        return np.full(self.config.samples, 1.0 / self.config.samples), paths

    def expectation(self, weights: np.ndarray, paths: np.ndarray, point: np.ndarray) -> float:
        return float(np.dot(weights, vector_norms(paths @ point, self.config.norm)))

    def run(self, starts: List[Tuple[str, np.ndarray]], make_objective, project: Projection) -> List[RestartOutcome]:
        budgets = split_budget(self.config.budget, len(starts))

        def _restart(indexed) -> RestartOutcome:
            index, (label, start) = indexed
            objective = make_objective(*self._paths_for(index))
            point, value, evaluations, trace, exhausted = coordinate_descent(
                start, objective, project, budgets[index], self.config.initial_step, self.config.step_floor)
            self.logger.info(f"Restart {index} ({label}): najlepsza wartość {value:.6g} po {evaluations} ewaluacjach")
            if exhausted:
                self.logger.warning(f"Restart {index}: wyczerpany budżet {budgets[index]} ewaluacji")
            return RestartOutcome(index=index, start=label, best_value=value, best_point=point,
                                  evaluations=evaluations, trace=trace, exhausted=exhausted)

        return ordered_map(_restart, list(enumerate(starts)), self.workers)


def _best_outcome(outcomes: List[RestartOutcome]) -> RestartOutcome:
    best = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.best_value < best.best_value:
            best = outcome
    return best


def _verify(dist: Distribution, cv: CoefficientVector, config: SearchConfig, scale: float) -> Dict[str, Any]:
    """Ponowne przeliczenie ewaluatorem: dokładnie albo świeżą próbką MC."""
    if config.oracle == Method.EXACT:
        estimate = exact_l1(dist, cv)
    else:
        estimate = mc_l1(dist, cv, config.samples, subseed(config.seed, config.restarts))
    return {
        "method": estimate.method.value,
        "value": estimate.mean / scale,
        "std_error": estimate.std_error / scale,
        "seed": estimate.seed,
    }


def _within_noise(fresh: float, found: float, std_error: float) -> bool:
    """|świeża próbka - wynik CRN| <= 3 SE; przy SE = 0 tylko zaokrąglenia średniej z próby."""
    return abs(fresh - found) <= 3.0 * std_error + 1e-12 * max(1.0, abs(found))


def minimize_ratio(dist: Distribution, config: SearchConfig, workers: Optional[int] = None) -> SearchResult:
    """Najmniejszy znaleziony stosunek L1 / l1; wynik przeliczony ponownie ewaluatorem."""
    search = AdversarialSearch(dist, config, workers)
    shape = (config.n + 1, config.d)

    def project(point: np.ndarray) -> Optional[np.ndarray]:
        mass = math.fsum(vector_norms(point, config.norm))
        if mass <= 0.0 or not math.isfinite(mass):
            return None
        return point / mass

    def make_objective(weights, paths):
        def objective(point):
            return search.expectation(weights, paths, point) / math.fsum(vector_norms(point, config.norm))
        return objective

    # restart 0: znaki naprzemienne, pozostałe losowe
    alternating = ((-1.0) ** np.arange(config.n + 1))[:, None] * np.ones(shape)
    starts = [("alternating", alternating)]
    for r in range(1, config.restarts):
        starts.append(("random", rng_for(config.seed, r).normal(size=shape)))

    outcomes = search.run(starts, make_objective, project)
    best = _best_outcome(outcomes)
    cv = CoefficientVector(best.best_point, config.norm)
    verification = _verify(dist, cv, config, cv.l1_mass())

    best_ratio = best.best_value
    if config.oracle == Method.EXACT:
        if abs(verification["value"] - best_ratio) > 1e-12 * max(1.0, best_ratio):
            raise InvariantViolation(f"Stosunek z wyszukiwania {best_ratio!r} != ewaluator {verification['value']!r}")
        best_ratio = verification["value"]
        verification["agrees"] = True
    else:
        verification["agrees"] = _within_noise(verification["value"], best_ratio, verification["std_error"])

    return _result(best_ratio, cv, outcomes, verification, config, sense=1.0)


def _partial_sum_projection(C: float) -> Projection:
    def project(point: np.ndarray) -> np.ndarray:
        a = np.clip(point.ravel(), -1.0, 1.0)
        partial = 0.0
        for i in range(a.size):
            if partial + a[i] > C:
                a[i] = C - partial
            elif partial + a[i] < -C:
                a[i] = -C - partial
            partial += a[i]
        return a.reshape(point.shape)
    return project


def mw_probe(dist: Distribution, n: int, C: float, budget: int, seed: int = 0,
             restarts: Optional[int] = None, oracle: Optional[str] = None,
             samples: Optional[int] = None, workers: Optional[int] = None) -> SearchResult:
    """
    Maksymalizuje E|sum a_i R_i| / (n+1) przy |a_i| <= 1 i ograniczonych sumach częściowych.
    Ten sam silnik co minimize_ratio, z odwróconym znakiem celu.
    """
    if C <= 0:
        raise InfeasibleConstraints(f"C = {C} <= 0")
    if C < 1:
        raise InvalidArgument(f"C = {C} < 1")
    if n < 1:
        raise InvalidArgument(f"n = {n} < 1")

    if oracle is None:
        exact_ok = dist.is_finite and len(dist.atoms) ** n <= EVALUATOR_CONFIG["enumeration_budget"]
        oracle = Method.EXACT if exact_ok else Method.MONTE_CARLO
    restarts = restarts or SEARCH_CONFIG["probe_restarts"]
    config = SearchConfig(n=n, d=1, norm=Norm.L1, budget=budget, restarts=min(restarts, budget), seed=seed,
                          oracle=oracle, samples=samples or SEARCH_CONFIG["mc_samples"])
    search = AdversarialSearch(dist, config, workers)
    project = _partial_sum_projection(C)
    scale = float(n + 1)

    def make_objective(weights, paths):
        def objective(point):
            return -search.expectation(weights, paths, point) / scale
        return objective

    shape = (n + 1, 1)
    starts = [("constant", np.ones(shape)), ("alternating", ((-1.0) ** np.arange(n + 1))[:, None])]
    for r in range(2, config.restarts):
        starts.append(("random", rng_for(seed, r).uniform(-1.0, 1.0, size=shape)))
    starts = starts[:config.restarts]

    outcomes = search.run(starts, make_objective, project)
    best = _best_outcome(outcomes)
    cv = CoefficientVector(best.best_point, Norm.L1)
    verification = _verify(dist, cv, config, scale)

    value = -best.best_value
    if config.oracle == Method.EXACT:
        if abs(verification["value"] - value) > 1e-12 * max(1.0, value):
            raise InvariantViolation(f"Wartość z wyszukiwania {value!r} != ewaluator {verification['value']!r}")
        value = verification["value"]
        verification["agrees"] = True
    else:
        verification["agrees"] = _within_noise(verification["value"], value, verification["std_error"])
    verification["C"] = C

    return _result(value, cv, outcomes, verification, config, sense=-1.0)


def _result(value: float, cv: CoefficientVector, outcomes: List[RestartOutcome],
            verification: Dict[str, Any], config: SearchConfig, sense: float) -> SearchResult:
    exhausted = any(o.exhausted for o in outcomes)
    if exhausted:
        logger.warning("Budżet ewaluacji wyczerpany - zwracam najlepszy dotychczasowy wynik")
    return SearchResult(
        best_ratio=value,
        best_coeffs=cv,
        evaluations_used=sum(o.evaluations for o in outcomes),
        trace=[[sense * v for v in o.trace] for o in outcomes],
        restart_best=[sense * o.best_value for o in outcomes],
        restart_starts=[o.start for o in outcomes],
        budget_exhausted=exhausted,
        verification=verification,
        config=config.to_dict(),
    )

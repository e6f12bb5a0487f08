#!/usr/bin/env python3
"""
ROZKŁADY CZYNNIKÓW
Nieujemne zmienne losowe o średniej 1, ścieżki iloczynów R_0..R_n
i funkcjonały momentów (lambda, mu, p(eps), tail(A)) zasilające certyfikaty.

Obsługiwane rodzaje:
1. finite           - tablica atomów (wartość, prawdopodobieństwo)
2. one_plus_cosine  - 1 + cos(U), U ~ jednostajny na [0, 2pi)
3. sampler          - dowolny generator z ziarnem + opcjonalne momenty analityczne
4. symmetric        - skończony rozkład symetryczny, E|X| = 1 (przez prawo |X|)
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import DISTRIBUTION_CONFIG, PARALLEL_CONFIG
from errors import (
    DegenerateDistribution, InvalidArgument, MeanNotOne, NegativeValue,
    NoFiniteTruncation, NotSymmetric, ProbabilitySumMismatch,
)
from report_writer import read_json_input, parse_json_input
from streams import chunk_bounds, ordered_map, rng_for, subseed

logger = logging.getLogger(__name__)

Draw = Callable[[np.random.Generator, Tuple[int, ...]], np.ndarray]

ONE_PLUS_COSINE_LAMBDA = 2.0 * math.sqrt(2.0) / math.pi
ONE_PLUS_COSINE_MU = 2.0 / math.pi

DISTRIBUTION_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["finite", "one_plus_cosine", "symmetric"]},
        "name": {"type": "string"},
        "atoms": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {"type": "number"},
            },
        },
    },
    "allOf": [
        {
            "if": {"properties": {"kind": {"enum": ["finite", "symmetric"]}}},
            "then": {"required": ["atoms"]},
        }
    ],
}


class DistributionKind(Enum):
    FINITE = "finite"
    ONE_PLUS_COSINE = "one_plus_cosine"
    SAMPLER = "sampler"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True, eq=False)
class Distribution:
    """Prawo jednego czynnika X (czynniki są i.i.d. w obrębie przebiegu)."""
    kind: DistributionKind
    name: str
    atoms: Tuple[Tuple[float, float], ...] = ()
    sampler: Optional[Draw] = None
    moments: Dict[str, Any] = field(default_factory=dict)
    degenerate: bool = False

    @property
    def is_finite(self) -> bool:
        return self.kind in (DistributionKind.FINITE, DistributionKind.SYMMETRIC)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.atoms], dtype=float)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.atoms], dtype=float)

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        """Losuje tablicę czynników o kształcie `size`."""
        if self.is_finite:
            return rng.choice(self.values, size=size, p=self.probabilities)
        if self.kind == DistributionKind.ONE_PLUS_COSINE:
            return 1.0 + np.cos(rng.uniform(0.0, 2.0 * math.pi, size=size))
        return np.asarray(self.sampler(rng, size), dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        data = {"kind": self.kind.value, "name": self.name, "degenerate": self.degenerate}
        if self.is_finite:
            data["atoms"] = [[v, p] for v, p in self.atoms]
        return data


@dataclass
class MomentProfile:
    """lambda = E sqrt(X), mu = E|X-1|, p(eps) = P(X <= eps), tail(A) = E|X-1| 1{X >= A}."""
    lam: float
    mu: float
    p_eps: float
    tail_A: float
    eps: float
    A: float
    provenance: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lam,
            "mu": self.mu,
            "p_eps": self.p_eps,
            "tail_A": self.tail_A,
            "eps": self.eps,
            "A": self.A,
            "provenance": dict(self.provenance),
        }


@dataclass(frozen=True)
class ProductPath:
    values: Tuple[float, ...]
    seed: int
    n: int


@dataclass
class ValidationCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    kind: str
    checks: List[ValidationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> ValidationCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


# ---------------------------------------------------------------------------
# Konstruktory
# ---------------------------------------------------------------------------

def _merge_atoms(atoms: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """Scala atomy o równych wartościach, sortuje rosnąco."""
    merged: Dict[float, List[float]] = {}
    for value, prob in atoms:
        merged.setdefault(float(value), []).append(float(prob))
    return [(v, math.fsum(ps)) for v, ps in sorted(merged.items())]


def _check_probabilities(atoms: Sequence[Tuple[float, float]]):
    tol = DISTRIBUTION_CONFIG["prob_sum_tol"]
    for value, prob in atoms:
        if not (math.isfinite(value) and math.isfinite(prob)):
            raise InvalidArgument(f"Atom ({value}, {prob}) nie jest skończony")
        if prob <= 0.0 or prob > 1.0:
            raise ProbabilitySumMismatch(f"Prawdopodobieństwo atomu {value} poza (0, 1]: {prob}")
    total = math.fsum(p for _, p in atoms)
    if abs(total - 1.0) > tol:
        raise ProbabilitySumMismatch(f"Suma prawdopodobieństw = {total!r}, oczekiwano 1 (tol {tol})")


def make_finite(atoms: Sequence[Tuple[float, float]], name: str = "finite") -> Distribution:
    """Waliduje i buduje rozkład skończony; ustawia flagę degeneracji dla P(X=1)=1."""
    if not atoms:
        raise InvalidArgument("Rozkład skończony wymaga co najmniej jednego atomu")
    for value, _ in atoms:
        if value < 0:
            raise NegativeValue(f"Ujemna wartość atomu: {value}")
    _check_probabilities(atoms)

    merged = _merge_atoms(atoms)
    mean = math.fsum(v * p for v, p in merged)
    if abs(mean - 1.0) > DISTRIBUTION_CONFIG["mean_tol"]:
        raise MeanNotOne(f"Średnia ważona = {mean!r}, oczekiwano 1")

    mass_at_one = math.fsum(p for v, p in merged if v == 1.0)
    degenerate = mass_at_one >= 1.0 - DISTRIBUTION_CONFIG["prob_sum_tol"]
    if degenerate:
        logger.warning(f"Rozkład '{name}' jest zdegenerowany: P(X=1)=1")

    return Distribution(kind=DistributionKind.FINITE, name=name, atoms=tuple(merged), degenerate=degenerate)


def make_one_plus_cosine() -> Distribution:
    """X = 1 + cos(U); lambda = 2 sqrt(2)/pi, mu = 2/pi."""
    return Distribution(
        kind=DistributionKind.ONE_PLUS_COSINE,
        name="one_plus_cosine",
        moments={"lambda": ONE_PLUS_COSINE_LAMBDA, "mu": ONE_PLUS_COSINE_MU},
    )


def make_sampler(draw: Draw, moments: Optional[Dict[str, Any]] = None, name: str = "sampler") -> Distribution:
    """
    Rozkład zadany generatorem draw(rng, size).
    `moments` może zawierać 'lambda', 'mu' (liczby) oraz 'p_eps', 'tail' (funkcje).
    """
    if not callable(draw):
        raise InvalidArgument("Sampler musi być wywoływalny: draw(rng, size)")
    return Distribution(kind=DistributionKind.SAMPLER, name=name, sampler=draw, moments=dict(moments or {}))


def make_symmetric(atoms: Sequence[Tuple[float, float]], name: str = "symmetric") -> Distribution:
    """Rozkład symetryczny: P(X=x) = P(X=-x), E|X| = 1."""
    if not atoms:
        raise InvalidArgument("Rozkład symetryczny wymaga co najmniej jednego atomu")
    _check_probabilities(atoms)
    merged = _merge_atoms(atoms)
    masses = dict(merged)
    tol = DISTRIBUTION_CONFIG["prob_sum_tol"]
    for value, prob in merged:
        if value != 0.0 and abs(masses.get(-value, 0.0) - prob) > tol:
            raise NotSymmetric(f"P(X={value}) = {prob} != P(X={-value}) = {masses.get(-value, 0.0)}")

    abs_mean = math.fsum(abs(v) * p for v, p in merged)
    if abs(abs_mean - 1.0) > DISTRIBUTION_CONFIG["mean_tol"]:
        raise MeanNotOne(f"E|X| = {abs_mean!r}, oczekiwano 1")

    mass_at_one = math.fsum(p for v, p in merged if abs(v) == 1.0)
    return Distribution(
        kind=DistributionKind.SYMMETRIC, name=name, atoms=tuple(merged),
        degenerate=mass_at_one >= 1.0 - tol,
    )


def abs_law(dist: Distribution) -> Distribution:
    """Prawo |X| dla rozkładu symetrycznego; pozostałe rodzaje bez zmian."""
    if dist.kind != DistributionKind.SYMMETRIC:
        return dist
    merged = _merge_atoms([(abs(v), p) for v, p in dist.atoms])
    return Distribution(
        kind=DistributionKind.FINITE, name=f"|{dist.name}|", atoms=tuple(merged),
        degenerate=dist.degenerate,
    )


def distribution_from_dict(data: Dict[str, Any]) -> Distribution:
    kind = data["kind"]
    name = data.get("name", kind)
    if kind == "one_plus_cosine":
        return make_one_plus_cosine()
    atoms = [(float(v), float(p)) for v, p in data["atoms"]]
    if kind == "symmetric":
        return make_symmetric(atoms, name=name)
    return make_finite(atoms, name=name)


def load_distribution(path: str) -> Distribution:
    """Wczytuje specyfikację rozkładu z pliku JSON."""
    data = read_json_input(path, DISTRIBUTION_SCHEMA, "distribution")
    dist = distribution_from_dict(data)
    logger.info(f"Wczytano rozkład '{dist.name}' ({dist.kind.value}) z {path}")
    return dist


def parse_distribution(text: str) -> Distribution:
    return distribution_from_dict(parse_json_input(text, DISTRIBUTION_SCHEMA, "distribution"))


# ---------------------------------------------------------------------------
# Próbkowanie
# ---------------------------------------------------------------------------

def sample_factors(dist: Distribution, count: int, seed: int,
                   chunk_size: Optional[int] = None, workers: Optional[int] = None) -> np.ndarray:
    """count niezależnych próbek X; kawałek c używa podstrumienia (seed, c)."""
    chunks = chunk_bounds(count, chunk_size or PARALLEL_CONFIG["chunk_size"])

    def _draw_chunk(indexed):
        index, bounds = indexed
        return dist.draw(rng_for(seed, index), (len(bounds),))

    parts = ordered_map(_draw_chunk, list(enumerate(chunks)), workers)
    return np.concatenate(parts) if parts else np.empty(0)


def sample_products(dist: Distribution, n: int, seed: int, count: int,
                    workers: Optional[int] = None) -> List[ProductPath]:
    """count ścieżek (R_0..R_n); ścieżka j używa podziarna wyprowadzonego z (seed, j)."""
    if n < 0:
        raise InvalidArgument(f"n musi być >= 0, podano {n}")
    if count < 1:
        raise InvalidArgument(f"count musi być >= 1, podano {count}")

    def _one_path(j: int) -> ProductPath:
        path_seed = subseed(seed, j)
        factors = dist.draw(np.random.default_rng(path_seed), (n,))
        values = np.concatenate(([1.0], np.cumprod(factors)))
        return ProductPath(values=tuple(float(v) for v in values), seed=path_seed, n=n)

    return ordered_map(_one_path, range(count), workers)


# ---------------------------------------------------------------------------
# Funkcjonały momentów
# ---------------------------------------------------------------------------

def _one_plus_cosine_p_eps(eps: float) -> float:
    if eps <= 0:
        return 0.0
    if eps >= 2:
        return 1.0
    return math.acos(1.0 - eps) / math.pi


def _one_plus_cosine_tail(A: float) -> float:
    # theta = arccos(A-1): zbiór {1 + cos u >= A} to |u| <= theta
    if A <= 0:
        return ONE_PLUS_COSINE_MU
    if A >= 2:
        return 0.0
    theta = math.acos(A - 1.0)
    if A <= 1:
        return (2.0 - math.sin(theta)) / math.pi
    return math.sin(theta) / math.pi


def _finite_p_eps(dist: Distribution, eps: float) -> float:
    return math.fsum(p for v, p in dist.atoms if v <= eps)


def _finite_tail(dist: Distribution, A: float) -> float:
    return math.fsum(p * abs(v - 1.0) for v, p in dist.atoms if v >= A)


def p_eps(dist: Distribution, eps: float, sample: Optional[np.ndarray] = None) -> float:
    """P(X <= eps): wzór zamknięty / masa atomów / empirycznie."""
    dist = abs_law(dist)
    if dist.is_finite:
        return _finite_p_eps(dist, eps)
    if dist.kind == DistributionKind.ONE_PLUS_COSINE and sample is None:
        return _one_plus_cosine_p_eps(eps)
    if "p_eps" in dist.moments and sample is None:
        return float(dist.moments["p_eps"](eps))
    if sample is None:
        sample = MomentCalculator().monte_carlo_sample(dist)
    return float(np.mean(sample <= eps))


def tail(dist: Distribution, A: float, sample: Optional[np.ndarray] = None) -> float:
    """E|X-1| 1{X >= A}."""
    dist = abs_law(dist)
    if dist.is_finite:
        return _finite_tail(dist, A)
    if dist.kind == DistributionKind.ONE_PLUS_COSINE and sample is None:
        return _one_plus_cosine_tail(A)
    if "tail" in dist.moments and sample is None:
        return float(dist.moments["tail"](A))
    if sample is None:
        sample = MomentCalculator().monte_carlo_sample(dist)
    return float(np.mean(np.abs(sample - 1.0) * (sample >= A)))


class MomentCalculator:
    """
    Liczy profile momentów: analitycznie, dokładnie (sumy ważone) lub Monte Carlo.
    """

    def __init__(self, samples: Optional[int] = None, seed: Optional[int] = None):
        self.logger = logging.getLogger(__name__)
        self.config = DISTRIBUTION_CONFIG.copy()
        self.samples = int(samples or self.config["mc_moment_samples"])
        self.seed = self.config["mc_moment_seed"] if seed is None else int(seed)
        # Distribution ma eq=False, więc klucz to tożsamość obiektu
        self._samples_cache: Dict[Distribution, np.ndarray] = {}

    def monte_carlo_sample(self, dist: Distribution) -> np.ndarray:
        """Jedna próbka na rozkład, współdzielona przez wszystkie funkcjonały."""
        if dist not in self._samples_cache:
            self.logger.debug(f"Monte Carlo: {self.samples} próbek z '{dist.name}', seed={self.seed}")
            self._samples_cache[dist] = sample_factors(dist, self.samples, self.seed)
        return self._samples_cache[dist]

    def _mc_label(self) -> str:
        return f"monte-carlo(n={self.samples}, seed={self.seed})"

    def profile(self, dist: Distribution, eps: float, A: float,
                force_monte_carlo: bool = False) -> MomentProfile:
        if eps <= 0 or A <= 0:
            raise InvalidArgument(f"Wymagane eps > 0 i A > 0 (eps={eps}, A={A})")
        dist = abs_law(dist)
        if dist.degenerate:
            raise DegenerateDistribution(f"Rozkład '{dist.name}' jest zdegenerowany (P(X=1)=1, mu=0)")

        if dist.is_finite and not force_monte_carlo:
            profile = MomentProfile(
                lam=math.fsum(p * math.sqrt(v) for v, p in dist.atoms),
                mu=math.fsum(p * abs(v - 1.0) for v, p in dist.atoms),
                p_eps=_finite_p_eps(dist, eps),
                tail_A=_finite_tail(dist, A),
                eps=eps, A=A,
                provenance={key: "exact-finite" for key in ("lambda", "mu", "p_eps", "tail_A")},
            )
        else:
            profile = self._mixed_profile(dist, eps, A, force_monte_carlo)

        if profile.mu <= self.config["degenerate_mu_tol"]:
            raise DegenerateDistribution(f"mu = {profile.mu} - rozkład zdegenerowany")

        self.logger.info(
            f"Profil '{dist.name}': lambda={profile.lam:.9g}, mu={profile.mu:.9g}, "
            f"p(eps={eps:.4g})={profile.p_eps:.6g}, tail(A={A:.4g})={profile.tail_A:.6g}"
        )
        return profile

    def _mixed_profile(self, dist: Distribution, eps: float, A: float, force_monte_carlo: bool) -> MomentProfile:
        """Analityczne tam, gdzie znane; reszta z jednej próbki Monte Carlo."""
        analytic: Dict[str, float] = {}
        if not force_monte_carlo:
            if "lambda" in dist.moments:
                analytic["lambda"] = float(dist.moments["lambda"])
            if "mu" in dist.moments:
                analytic["mu"] = float(dist.moments["mu"])
            if dist.kind == DistributionKind.ONE_PLUS_COSINE:
                analytic["p_eps"] = _one_plus_cosine_p_eps(eps)
                analytic["tail_A"] = _one_plus_cosine_tail(A)
            else:
                if "p_eps" in dist.moments:
                    analytic["p_eps"] = float(dist.moments["p_eps"](eps))
                if "tail" in dist.moments:
                    analytic["tail_A"] = float(dist.moments["tail"](A))

        sample = None
        if len(analytic) < 4:
            sample = self.monte_carlo_sample(dist)

        def _value(key: str, estimate: Callable[[np.ndarray], float]):
            if key in analytic:
                return analytic[key], "analytic"
            return float(estimate(sample)), self._mc_label()

        lam, lam_src = _value("lambda", lambda s: np.mean(np.sqrt(s)))
        mu, mu_src = _value("mu", lambda s: np.mean(np.abs(s - 1.0)))
        pe, pe_src = _value("p_eps", lambda s: np.mean(s <= eps))
        ta, ta_src = _value("tail_A", lambda s: np.mean(np.abs(s - 1.0) * (s >= A)))
        return MomentProfile(
            lam=lam, mu=mu, p_eps=pe, tail_A=ta, eps=eps, A=A,
            provenance={"lambda": lam_src, "mu": mu_src, "p_eps": pe_src, "tail_A": ta_src},
        )

    def validate(self, dist: Distribution) -> ValidationReport:
        report = ValidationReport(kind=dist.kind.value)
        tol = self.config["mean_tol"]

        if dist.kind == DistributionKind.SYMMETRIC:
            masses = dict(dist.atoms)
            symmetric = all(abs(masses.get(-v, 0.0) - p) <= self.config["prob_sum_tol"] for v, p in dist.atoms)
            abs_mean = math.fsum(abs(v) * p for v, p in dist.atoms)
            report.checks.append(ValidationCheck("symmetry", symmetric))
            report.checks.append(ValidationCheck("mean_one", abs(abs_mean - 1.0) <= tol, f"E|X| = {abs_mean!r}"))
            report.checks.append(ValidationCheck("nondegeneracy", not dist.degenerate, "P(|X|=1) < 1"))
        elif dist.kind == DistributionKind.FINITE:
            mean = math.fsum(v * p for v, p in dist.atoms)
            mass_at_one = math.fsum(p for v, p in dist.atoms if v == 1.0)
            report.checks.append(ValidationCheck("nonnegativity", all(v >= 0 for v, _ in dist.atoms)))
            report.checks.append(ValidationCheck("mean_one", abs(mean - 1.0) <= tol, f"EX = {mean!r}"))
            report.checks.append(ValidationCheck("nondegeneracy", not dist.degenerate, f"P(X=1) = {mass_at_one!r}"))
        elif dist.kind == DistributionKind.ONE_PLUS_COSINE:
            report.checks.append(ValidationCheck("nonnegativity", True, "support [0, 2]"))
            report.checks.append(ValidationCheck("mean_one", True, "analytic: E cos(U) = 0"))
            report.checks.append(ValidationCheck("nondegeneracy", True, "continuous law"))
        else:
            sample = self.monte_carlo_sample(dist)
            mean = float(np.mean(sample))
            se = float(np.std(sample, ddof=1) / math.sqrt(len(sample)))
            threshold = self.config["mean_z_threshold"]
            z = abs(mean - 1.0) / se if se > 0 else (0.0 if abs(mean - 1.0) <= tol else math.inf)
            report.checks.append(ValidationCheck("nonnegativity", bool(np.min(sample) >= 0.0),
                                                 f"min = {float(np.min(sample))!r}"))
            report.checks.append(ValidationCheck("mean_one", z <= threshold,
                                                 f"mean = {mean:.6g}, z = {z:.3g} (threshold {threshold}), "
                                                 f"{self._mc_label()}"))
            report.checks.append(ValidationCheck("nondegeneracy", bool(np.any(sample != 1.0)),
                                                 "empirical P(X=1) < 1"))

        if not report.passed:
            failed = [c.name for c in report.checks if not c.passed]
            self.logger.warning(f"Walidacja '{dist.name}' nieudana: {failed}")
        return report

    def choose_truncation(self, dist: Distribution, mu: float) -> float:
        """Najmniejsze A ze zbioru kandydatów, dla którego tail(A) <= mu/4."""
        if mu <= 0:
            raise InvalidArgument(f"mu musi być > 0, podano {mu}")
        dist = abs_law(dist)
        bound = mu / 4.0

        if dist.is_finite:
            support = [v for v, _ in dist.atoms if v > 0]
            candidates = support + [dist.atoms[-1][0] + 1.0]
            for A in candidates:
                if _finite_tail(dist, A) <= bound:
                    return float(A)
            raise NoFiniteTruncation("Brak kandydata A - niemożliwe dla nośnika skończonego")

        if dist.kind == DistributionKind.ONE_PLUS_COSINE:
            # Nośnik ograniczony przez 2, tail(2) = 0
            return 2.0

        sample = self.monte_carlo_sample(dist)
        levels = [1.0 - 2.0 ** (-j) for j in range(1, self.config["quantile_levels"] + 1)]
        candidates = sorted(set(float(q) for q in np.quantile(sample, levels)))
        for A in candidates:
            if A <= 0:
                continue
            value = tail(dist, A, sample=sample) if "tail" not in dist.moments else float(dist.moments["tail"](A))
            if value <= bound:
                return A
        raise NoFiniteTruncation(
            f"Empiryczny ogon nie spada do mu/4 = {bound:.4g} na siatce {len(candidates)} kwantyli"
        )


def validate(dist: Distribution, samples: Optional[int] = None, seed: Optional[int] = None) -> ValidationReport:
    return MomentCalculator(samples, seed).validate(dist)


def moment_profile(dist: Distribution, eps: float, A: float, force_monte_carlo: bool = False,
                   samples: Optional[int] = None, seed: Optional[int] = None) -> MomentProfile:
    return MomentCalculator(samples, seed).profile(dist, eps, A, force_monte_carlo)


def choose_truncation(dist: Distribution, mu: float, samples: Optional[int] = None,
                      seed: Optional[int] = None) -> float:
    return MomentCalculator(samples, seed).choose_truncation(dist, mu)


def random_finite(rng: np.random.Generator, max_atoms: int = 4, spread: float = 4.0,
                  name: str = "random_finite") -> Distribution:
    """
    Losowy niezdegenerowany rozkład skończony o średniej 1:
    wartości z [0, spread), wagi z rozkładu Dirichleta, potem skalowanie przez średnią.
    """
    if max_atoms < 2:
        raise InvalidArgument(f"max_atoms musi być >= 2, podano {max_atoms}")
    s = int(rng.integers(2, max_atoms + 1))
    while True:
        values = rng.uniform(0.0, spread, size=s)
        if rng.random() < 0.5:
            values[0] = 0.0
        probs = rng.dirichlet(np.ones(s))
        mean = float(np.dot(values, probs))
        if mean > 0 and len(set(values.tolist())) == s:
            break
    atoms = [(float(v / mean), float(p)) for v, p in zip(values, probs)]
    # Korekta ostatniej wagi, żeby suma była równa 1 co do zaokrąglenia
    head = math.fsum(p for _, p in atoms[:-1])
    atoms[-1] = (atoms[-1][0], 1.0 - head)
    return make_finite(atoms, name=name)

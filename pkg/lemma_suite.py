#!/usr/bin/env python3
"""
ZESTAW SPRAWDZEŃ NIERÓWNOŚCI POMOCNICZYCH
Dla rozkładu skończonego losuje instancje (u, v, v_0..v_n, n, norma) z ziarna
i dokładnie (enumeracją) sprawdza każdą nierówność, której założenie jest spełnione:

1. single_factor       E||uX+v|| >= 1/2 E|X-1| max{||u||, ||v||}
2. small_perturbation  P(||Y|| > ||v||/4) <= 1/4  =>  E||Y+v|| >= E||Y|| + ||v||/8
3. sqrt_moment         E||sum v_k R_k||^(1/2) <= sum lambda^k ||v_k||^(1/2)
4. sqrt_tail           P(||sum v_k R_k|| >= t/(1-lambda) sum lambda^k ||v_k||) <= t^(-1/2), t >= 1
5. truncated_factor    E|X-1| 1{X>A} <= mu/4  =>  E||uX+v|| 1{X<=A} >= mu ||v||/8
6. split_sum           E||Z|| 1{||Y|| > E||Z||/8} <= E||Z||/8  =>  E||Y+Z|| >= E||Y|| + E||Z||/2
7. max_coefficient     E||sum v_i R_i|| >= 1/4 mu^2 max ||v_i||
8. average_coefficient E||sum_{i<=k} v_i R_i|| >= mu^2/(4k) sum_{i=1}^k ||v_i||

Y i Z to fragmenty tej samej sumy sum v_i R_i (głowa i ogon).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import SUITE_CONFIG
from distributions import Distribution, abs_law
from errors import InvalidArgument, NotFiniteSupport
from evaluator import Norm, enumerate_paths, vector_norms
from streams import ordered_map, rng_for

logger = logging.getLogger(__name__)

LEMMAS = (
    "single_factor",
    "small_perturbation",
    "sqrt_moment",
    "sqrt_tail",
    "truncated_factor",
    "split_sum",
    "max_coefficient",
    "average_coefficient",
)


@dataclass
class LemmaOutcome:
    lemma: str
    hypothesis_met: bool
    lhs: float = 0.0
    rhs: float = 0.0
    # w sensie "lhs >= rhs"; dla nierówności "<=" strony są zamienione przy budowie
    detail: str = ""


@dataclass
class LemmaTally:
    name: str
    checked: int = 0
    hypothesis_met: int = 0
    violations: int = 0
    min_margin: Optional[float] = None
    examples: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "hypothesis_met": self.hypothesis_met,
            "violations": self.violations,
            "min_margin": self.min_margin,
            "examples": list(self.examples),
        }


@dataclass
class SuiteReport:
    distribution: str
    trials: int
    seed: int
    lemmas: Dict[str, LemmaTally] = field(default_factory=dict)

    @property
    def total_violations(self) -> int:
        return sum(t.violations for t in self.lemmas.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "distribution": self.distribution,
            "trials": self.trials,
            "seed": self.seed,
            "total_violations": self.total_violations,
            "lemmas": {name: tally.to_dict() for name, tally in self.lemmas.items()},
        }


@dataclass
class _Instance:
    """Jedna losowa instancja: n, d, norma, współczynniki i skale."""
    n: int
    norm: Norm
    coeffs: np.ndarray
    u: np.ndarray
    v: np.ndarray
    head_scale: float
    split: int
    truncation: float
    t: float


class LemmaSuiteRunner:
    """Sprawdza nierówności pomocnicze na dokładnym prawie ścieżek."""

    def __init__(self, dist: Distribution, seed: int = 0, workers: Optional[int] = None, **overrides):
        self.logger = logging.getLogger(__name__)
        self.config = SUITE_CONFIG.copy()
        self.config.update(overrides)
        if not dist.is_finite:
            raise NotFiniteSupport(f"Zestaw wymaga nośnika skończonego, otrzymano '{dist.kind.value}'")

        self.name = dist.name
        self.dist = abs_law(dist)
        self.seed = int(seed)
        self.workers = workers
        self.values = self.dist.values
        self.probs = self.dist.probabilities
        self.mu = math.fsum(p * abs(x - 1.0) for x, p in self.dist.atoms)
        self.lam = math.fsum(p * math.sqrt(x) for x, p in self.dist.atoms)

        s = len(self.values)
        by_states = int(math.floor(math.log(self.config["max_states"]) / math.log(s))) if s > 1 else self.config["max_n"]
        self.max_n = max(1, min(self.config["max_n"], by_states))

    # -- losowanie instancji ----------------------------------------------------

    def _instance(self, trial: int) -> _Instance:
        rng = rng_for(self.seed, trial)
        n = int(rng.integers(0, self.max_n + 1))
        d = int(rng.integers(1, 4))
        norm = list(Norm)[int(rng.integers(0, 3))]
        coeffs = rng.normal(size=(n + 1, d))
        coeffs[rng.random(n + 1) < 0.2] = 0.0
        u = rng.normal(size=d)
        v = rng.normal(size=d)
        support = self.values[self.values > 0]
        truncation = float(rng.choice(support)) if rng.random() < 0.7 else float(rng.uniform(0.0, 1.5 * support[-1]))
        return _Instance(
            n=n, norm=norm, coeffs=coeffs, u=u, v=v,
            head_scale=float(10.0 ** rng.uniform(-3.0, 0.0)),
            split=int(rng.integers(1, n + 1)) if n >= 1 else 0,
            truncation=max(truncation, 1e-12),
            # pierwsza próba zawsze na brzegu t = 1
            t=1.0 if trial == 0 else float(1.0 + rng.exponential(3.0)),
        )

    # -- pojedyncze nierówności -------------------------------------------------

    def _norm(self, x: np.ndarray, norm: Norm) -> np.ndarray:
        return vector_norms(np.atleast_2d(x), norm)

    def _single_factor(self, inst: _Instance) -> LemmaOutcome:
        points = inst.u[None, :] * self.values[:, None] + inst.v[None, :]
        lhs = float(np.dot(self.probs, self._norm(points, inst.norm)))
        rhs = 0.5 * self.mu * max(self._norm(inst.u, inst.norm)[0], self._norm(inst.v, inst.norm)[0])
        return LemmaOutcome("single_factor", True, lhs, rhs)

    def _small_perturbation(self, inst: _Instance, weights, paths) -> LemmaOutcome:
        v = inst.coeffs[0]
        y = inst.head_scale * (paths[:, 1:] @ inst.coeffs[1:])
        y_norms = vector_norms(y, inst.norm)
        v_norm = float(self._norm(v, inst.norm)[0])
        met = math.fsum(weights[y_norms > v_norm / 4.0]) <= 0.25
        if not met:
            return LemmaOutcome("small_perturbation", False)
        lhs = float(np.dot(weights, vector_norms(y + v[None, :], inst.norm)))
        rhs = float(np.dot(weights, y_norms)) + v_norm / 8.0
        return LemmaOutcome("small_perturbation", True, lhs, rhs)

    def _sqrt_bound(self, inst: _Instance) -> Tuple[np.ndarray, float]:
        norms = vector_norms(inst.coeffs, inst.norm)
        powers = self.lam ** np.arange(inst.n + 1)
        return norms, float(np.dot(powers, norms))

    def _sqrt_moment(self, inst: _Instance, weights, sums) -> LemmaOutcome:
        norms = vector_norms(inst.coeffs, inst.norm)
        powers = self.lam ** np.arange(inst.n + 1)
        # nierówność "<=": lhs to prawa strona
        lhs = float(np.dot(powers, np.sqrt(norms)))
        rhs = float(np.dot(weights, np.sqrt(vector_norms(sums, inst.norm))))
        return LemmaOutcome("sqrt_moment", True, lhs, rhs)

    def _sqrt_tail(self, inst: _Instance, weights, sums) -> LemmaOutcome:
        if self.lam >= 1.0:
            return LemmaOutcome("sqrt_tail", False, detail="lambda = 1")
        _, weighted = self._sqrt_bound(inst)
        if weighted <= 0.0:
            return LemmaOutcome("sqrt_tail", False, detail="v = 0")
        threshold = inst.t / (1.0 - self.lam) * weighted
        probability = math.fsum(weights[vector_norms(sums, inst.norm) >= threshold])
        return LemmaOutcome("sqrt_tail", True, 1.0 / math.sqrt(inst.t), probability, detail=f"t = {inst.t:.4g}")

    def _truncated_factor(self, inst: _Instance) -> LemmaOutcome:
        A = inst.truncation
        kept = self.values <= A
        tail_strict = math.fsum(p * abs(x - 1.0) for x, p in self.dist.atoms if x > A)
        if tail_strict > self.mu / 4.0:
            return LemmaOutcome("truncated_factor", False, detail=f"A = {A:.4g}")
        points = inst.u[None, :] * self.values[kept][:, None] + inst.v[None, :]
        lhs = float(np.dot(self.probs[kept], self._norm(points, inst.norm)))
        rhs = self.mu * float(self._norm(inst.v, inst.norm)[0]) / 8.0
        return LemmaOutcome("truncated_factor", True, lhs, rhs, detail=f"A = {A:.4g}")

    def _split_sum(self, inst: _Instance, weights, paths) -> LemmaOutcome:
        if inst.n < 1:
            return LemmaOutcome("split_sum", False, detail="n = 0")
        j = inst.split
        y = inst.head_scale * (paths[:, :j] @ inst.coeffs[:j])
        z = paths[:, j:] @ inst.coeffs[j:]
        y_norms = vector_norms(y, inst.norm)
        z_norms = vector_norms(z, inst.norm)
        ez = float(np.dot(weights, z_norms))
        met = float(np.dot(weights[y_norms > ez / 8.0], z_norms[y_norms > ez / 8.0])) <= ez / 8.0
        if not met:
            return LemmaOutcome("split_sum", False)
        lhs = float(np.dot(weights, vector_norms(y + z, inst.norm)))
        rhs = float(np.dot(weights, y_norms)) + 0.5 * ez
        return LemmaOutcome("split_sum", True, lhs, rhs, detail=f"j = {j}")

    def _max_coefficient(self, inst: _Instance, weights, sums) -> Tuple[LemmaOutcome, LemmaOutcome]:
        expectation = float(np.dot(weights, vector_norms(sums, inst.norm)))
        norms = vector_norms(inst.coeffs, inst.norm)
        max_bound = LemmaOutcome("max_coefficient", True, expectation, 0.25 * self.mu ** 2 * float(np.max(norms)))
        if inst.n < 1:
            return max_bound, LemmaOutcome("average_coefficient", False, detail="n = 0")
        avg = self.mu ** 2 / (4.0 * inst.n) * math.fsum(norms[1:])
        return max_bound, LemmaOutcome("average_coefficient", True, expectation, avg, detail=f"k = {inst.n}")

    # -- przebieg ---------------------------------------------------------------

    def check_trial(self, trial: int) -> List[LemmaOutcome]:
        inst = self._instance(trial)
        weights, paths = enumerate_paths(self.dist, inst.n)
        sums = paths @ inst.coeffs
        return [
            self._single_factor(inst),
            self._small_perturbation(inst, weights, paths),
            self._sqrt_moment(inst, weights, sums),
            self._sqrt_tail(inst, weights, sums),
            self._truncated_factor(inst),
            self._split_sum(inst, weights, paths),
            *self._max_coefficient(inst, weights, sums),
        ]

    def _is_violation(self, outcome: LemmaOutcome) -> bool:
        scale = max(1.0, abs(outcome.lhs), abs(outcome.rhs))
        return outcome.lhs < outcome.rhs - self.config["tol"] * scale

    def run(self, trials: int) -> SuiteReport:
        if trials < 1:
            raise InvalidArgument(f"trials = {trials} < 1")

        report = SuiteReport(distribution=self.name, trials=trials, seed=self.seed,
                             lemmas={name: LemmaTally(name) for name in LEMMAS})
        outcomes = ordered_map(self.check_trial, range(trials), self.workers)

        for trial, trial_outcomes in enumerate(outcomes):
            for outcome in trial_outcomes:
                tally = report.lemmas[outcome.lemma]
                tally.checked += 1
                if not outcome.hypothesis_met:
                    continue
                tally.hypothesis_met += 1
                margin = outcome.lhs - outcome.rhs
                tally.min_margin = margin if tally.min_margin is None else min(tally.min_margin, margin)
                if self._is_violation(outcome):
                    tally.violations += 1
                    if len(tally.examples) < self.config["report_violations"]:
                        tally.examples.append({"trial": trial, "lhs": outcome.lhs, "rhs": outcome.rhs,
                                               "detail": outcome.detail})

        if report.total_violations:
            self.logger.warning(f"Zestaw '{self.name}': {report.total_violations} naruszeń!")
        else:
            self.logger.info(f"Zestaw '{self.name}': {trials} prób, brak naruszeń")
        return report


def lemma_suite(dist: Distribution, trials: int, seed: int = 0, workers: Optional[int] = None) -> SuiteReport:
    return LemmaSuiteRunner(dist, seed, workers).run(trials)

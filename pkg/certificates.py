#!/usr/bin/env python3
"""
CERTYFIKATY STAŁYCH DOLNYCH
Stała c w E||sum v_i R_i|| >= c sum ||v_i|| wraz z księgą (alpha, beta, c_i):

- thm1: c = min{mu,1} p(eps) / 64, eps = (1-lambda)^2 min{mu,1} / 256
- thm3: c = mu^3 / (512 k), k - najmniejsza liczba spełniająca
        2^17 k lambda^(2k-2) A <= mu^3 (1-lambda)^2

Wszystkie sumy geometryczne liczone w postaci zamkniętej (1 - lambda^k)/(1 - lambda).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import mpmath
import numpy as np

from config import CERTIFICATE_CONFIG
from distributions import Distribution, MomentCalculator, MomentProfile, abs_law
from errors import (
    EpsTooLarge, InvalidArgument, InvalidK, KOverflow, LambdaOutOfRange,
    NonpositiveMu, ProfileEpsMismatch, TruncationInvalid,
)

logger = logging.getLogger(__name__)

THM1 = "thm1"
THM3 = "thm3"


@dataclass
class Ledger:
    alpha: float
    beta: float
    c: List[float] = field(default_factory=list)
    c_sup: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {"alpha": self.alpha, "beta": self.beta, "c_head": list(self.c), "c_sup": self.c_sup}


@dataclass
class Certificate:
    theorem: str
    inputs: Dict[str, float]
    ledger: Ledger
    c: float
    applicable: bool
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "c": self.c,
            "inputs": dict(self.inputs),
            "ledger": self.ledger.to_dict(),
            "applicable": self.applicable,
            "reason": self.reason,
        }


def _check_lambda(lam: float, allow_zero: bool = True):
    if not (0.0 <= lam < 1.0) or (lam == 0.0 and not allow_zero):
        raise LambdaOutOfRange(f"lambda = {lam} poza zakresem")


def geometric_sums(lam: float, ks: np.ndarray) -> np.ndarray:
    """sum_{i=0}^{k-1} lambda^i = (1 - lambda^k)/(1 - lambda) dla tablicy k."""
    ks = np.asarray(ks, dtype=float)
    if lam == 0.0:
        return (ks >= 1).astype(float)
    return -np.expm1(ks * math.log(lam)) / (1.0 - lam)


def epsilon_default(lam: float, mu: float) -> float:
    """eps = (1-lambda)^2 min{mu,1} / 256; zawsze < 1/8."""
    _check_lambda(lam)
    if mu <= 0:
        raise NonpositiveMu(f"mu = {mu} <= 0")
    return (1.0 - lam) ** 2 * min(mu, 1.0) / 256.0


def ledger_indest(p: float, mu: float, lam: float, eps: float, n: int) -> Ledger:
    """
    alpha = p/16, beta = min{alpha/2, mu p/32},
    c_k = 4 p eps/(1-lambda) sum_{i<k} lambda^i, k = 1..n.
    """
    if eps >= 0.125:
        raise EpsTooLarge(f"eps = {eps} >= 1/8")
    if eps <= 0:
        raise InvalidArgument(f"eps = {eps} <= 0")
    if not (0.0 < p <= 1.0):
        raise InvalidArgument(f"p = {p} poza (0, 1]")
    _check_lambda(lam)
    if n < 0:
        raise InvalidArgument(f"n = {n} < 0")

    alpha = p / 16.0
    beta = min(alpha / 2.0, mu * p / 32.0)
    scale = 4.0 * p * eps / (1.0 - lam)
    c = scale * geometric_sums(lam, np.arange(1, n + 1))
    return Ledger(alpha=alpha, beta=beta, c=[float(x) for x in c], c_sup=scale / (1.0 - lam))


def ledger_indest2(mu: float, lam: float, A: float, k: int, n: int) -> Ledger:
    """
    alpha = mu/64, beta = mu^2 alpha/(4k), c_i = 0 dla i < k,
    c_i = 2^8 A/(1-lambda) sum_{j=k}^{i} lambda^(j+k-2) dla i >= k.
    """
    if k < 1:
        raise InvalidK(f"k = {k} < 1")
    _check_lambda(lam)
    if n < 0:
        raise InvalidArgument(f"n = {n} < 0")

    alpha = mu / 64.0
    beta = mu ** 2 * alpha / (4.0 * k)
    lead = 2.0 ** 8 * A / (1.0 - lam) * (lam ** (2 * k - 2) if lam > 0 else float(k == 1))
    i = np.arange(1, n + 1)
    c = np.where(i >= k, lead * geometric_sums(lam, np.maximum(i - k + 1, 0)), 0.0)
    return Ledger(alpha=alpha, beta=beta, c=[float(x) for x in c], c_sup=lead / (1.0 - lam))


def k_condition(lam: float, mu: float, A: float, k: int, dps: Optional[int] = None) -> bool:
    """Warunek 2^17/(1-lambda)^2 k lambda^(2k-2) A <= mu^3 w arytmetyce mpmath."""
    with mpmath.workdps(dps or CERTIFICATE_CONFIG["mp_dps"]):
        lam_mp = mpmath.mpf(lam)
        lhs = mpmath.mpf(2) ** 17 / (1 - lam_mp) ** 2 * k * lam_mp ** (2 * k - 2) * mpmath.mpf(A)
        return bool(lhs <= mpmath.mpf(mu) ** 3)


def find_k(lam: float, mu: float, A: float) -> int:
    """
    Najmniejsze k >= 1 spełniające warunek na k.
    Skan w skali logarytmicznej, potem korekta kandydata w mpmath.
    """
    if not (0.0 < lam < 1.0):
        raise LambdaOutOfRange(f"lambda = {lam} poza (0, 1)")
    if mu <= 0:
        raise NonpositiveMu(f"mu = {mu} <= 0")
    if A <= 0:
        raise InvalidArgument(f"A = {A} <= 0")

    k_max = CERTIFICATE_CONFIG["k_max"]
    target = 3.0 * math.log(mu) + 2.0 * math.log1p(-lam) - 17.0 * math.log(2.0) - math.log(A)
    ks = np.arange(1, k_max + 1, dtype=float)
    g = np.log(ks) + (2.0 * ks - 2.0) * math.log(lam)
    hits = np.flatnonzero(g <= target)
    if hits.size == 0:
        raise KOverflow(f"k przekroczyłoby {k_max} (lambda={lam}, mu={mu}, A={A})")

    k = int(hits[0]) + 1
    # Korekta na granicy zaokrągleń
    while not k_condition(lam, mu, A, k):
        k += 1
        if k > k_max:
            raise KOverflow(f"k przekroczyłoby {k_max}")
    while k > 1 and k_condition(lam, mu, A, k - 1):
        k -= 1

    logger.debug(f"find_k(lambda={lam}, mu={mu}, A={A}) = {k}")
    return k


def _not_applicable(theorem: str, inputs: Dict[str, float], reason: str) -> Certificate:
    logger.warning(f"Certyfikat {theorem} nie ma zastosowania: {reason}")
    return Certificate(theorem=theorem, inputs=inputs, ledger=Ledger(alpha=0.0, beta=0.0),
                       c=0.0, applicable=False, reason=reason)


def certify_thm1(profile: MomentProfile, eps_override: bool = False) -> Certificate:
    """
    c = min{mu,1} p(eps)/64 przy eps domyślnym.
    Z eps_override dowolne 0 < eps < 1/8 i c = beta - 4 p eps/(1-lambda)^2.
    """
    lam, mu, p, eps = profile.lam, profile.mu, profile.p_eps, profile.eps
    default = epsilon_default(lam, mu)
    if not eps_override and not math.isclose(eps, default, rel_tol=CERTIFICATE_CONFIG["eps_match_rtol"]):
        raise ProfileEpsMismatch(f"profile.eps = {eps!r}, domyślne eps = {default!r}")

    inputs = {"lambda": lam, "mu": mu, "p": p, "eps": eps}
    if p <= 0.0:
        return _not_applicable(THM1, inputs, "p(eps)=0")

    ledger = ledger_indest(p, mu, lam, eps, CERTIFICATE_CONFIG["ledger_head"])
    if eps_override:
        c = ledger.beta - ledger.c_sup
        if c <= 0.0:
            return _not_applicable(THM1, inputs, f"beta - sup c_k = {c:.3g} <= 0 for eps={eps:.4g}")
    else:
        c = min(mu, 1.0) * p / 64.0

    logger.info(f"Certyfikat thm1: c = {c:.6g} (p(eps)={p:.6g}, eps={eps:.6g})")
    return Certificate(theorem=THM1, inputs=inputs, ledger=ledger, c=c, applicable=True)


def certify_noniid2(profile: MomentProfile) -> Certificate:
    """c = mu^3/(512 k) z minimalnym k."""
    lam, mu, A = profile.lam, profile.mu, profile.A
    if mu <= 0:
        raise NonpositiveMu(f"mu = {mu} <= 0")
    if profile.tail_A > mu / 4.0 * (1.0 + 1e-12):
        raise TruncationInvalid(f"tail(A={A}) = {profile.tail_A:.6g} > mu/4 = {mu / 4.0:.6g}")

    k = find_k(lam, mu, A)
    c = mu ** 3 / (512.0 * k)
    ledger = ledger_indest2(mu, lam, A, k, k - 1 + CERTIFICATE_CONFIG["ledger_head"])
    logger.info(f"Certyfikat thm3: k = {k}, c = {c:.6g} (A={A:.4g})")
    return Certificate(theorem=THM3, inputs={"lambda": lam, "mu": mu, "A": A, "k": k},
                       ledger=ledger, c=c, applicable=True)


def small_n_bound(mu: float, k: int, norms: Sequence[float]) -> float:
    """Dla n <= k: (mu/4)||v_0|| + mu^2/(8k) sum_{i>=1} ||v_i||."""
    if k < 1:
        raise InvalidK(f"k = {k} < 1")
    if len(norms) - 1 > k:
        raise InvalidArgument(f"n = {len(norms) - 1} > k = {k}")
    return mu / 4.0 * norms[0] + mu ** 2 / (8.0 * k) * math.fsum(norms[1:])


def one_plus_cosine_closed_form() -> float:
    """Jawne oszacowanie dla 1 + cos(U): pi^(-5/2) (1 - 2 sqrt(2)/pi) / 256."""
    return math.pi ** -2.5 * (1.0 - 2.0 * math.sqrt(2.0) / math.pi) / 256.0


def certify_distribution(dist: Distribution, eps: Optional[float] = None,
                         samples: Optional[int] = None, seed: Optional[int] = None) -> List[Certificate]:
    """
    Pełna ścieżka: profil -> eps -> A -> oba certyfikaty.
    Rozkład symetryczny certyfikowany przez prawo |X|.
    """
    base = abs_law(dist)
    calculator = MomentCalculator(samples, seed)

    # Najpierw lambda i mu (eps, A dowolne dodatnie)
    first = calculator.profile(base, eps=1.0, A=1.0)
    eps_used = epsilon_default(first.lam, first.mu) if eps is None else float(eps)
    A = calculator.choose_truncation(base, first.mu)
    profile = calculator.profile(base, eps=eps_used, A=A)

    certificates = [certify_thm1(profile, eps_override=eps is not None)]
    try:
        certificates.append(certify_noniid2(profile))
    except (KOverflow, LambdaOutOfRange) as e:
        certificates.append(_not_applicable(THM3, {"lambda": profile.lam, "mu": profile.mu, "A": A}, str(e)))
    return certificates


def best_certificate(certificates: Sequence[Certificate]) -> Optional[Certificate]:
    """Największe c spośród stosowalnych; przy remisie pierwszy."""
    best = None
    for cert in certificates:
        if cert.applicable and (best is None or cert.c > best.c):
            best = cert
    return best

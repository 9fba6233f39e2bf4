"""Maximum-likelihood frequency, Bayes confidence, and their moments.

Along one chain, a pattern with frequency ``p`` survives each fresh draw with
probability ``p``, so its survival depth ``k`` is geometric and censored at
the chain's realized length. With ``chi = 1{k < length}`` the likelihood over
``M`` chains is ``p**K * (1 - p)**I`` (``K = sum k``, ``I = sum chi``),
maximized at ``K / (K + I)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .chain import ChainSet
from .dataset import ClassPrior
from .pattern import Pattern


class UndefinedConfidence(ValueError):
    """Pattern has zero estimated frequency in every class."""


@dataclass(frozen=True)
class SurvivalStats:
    K_total: int
    I_total: int
    M: int

    @property
    def mean_k(self) -> float:
        return self.K_total / self.M

    @property
    def mean_chi(self) -> float:
        return self.I_total / self.M


def survival_stats(cs: ChainSet, s: Pattern) -> SurvivalStats:
    k = cs.survival_depths(s)
    return SurvivalStats(int(k.sum()), int(np.count_nonzero(k < cs.lengths)), len(cs))


def frequency(cs: ChainSet, s: Pattern) -> float:
    """MLE of the within-class frequency of ``s``: ``K / (K + I)``."""
    st = survival_stats(cs, s)
    if st.K_total == 0:
        if st.I_total == 0:
            raise ValueError("no chain carries information (K = I = 0)")
        return 0.0
    return st.K_total / (st.K_total + st.I_total)


def confidence(freqs: Mapping[str, float], priors: ClassPrior, target: str) -> float:
    """Posterior of ``target`` given the pattern, by Bayes' theorem."""
    missing = set(freqs) - set(priors.priors)
    if missing:
        raise KeyError(f"no prior for classes {sorted(missing)}")
    denom = sum(f * priors[c] for c, f in freqs.items())
    if denom <= 0:
        raise UndefinedConfidence("confidence undefined: pattern unobserved in every class")
    return freqs[target] * priors[target] / denom


def _check_p(p: float) -> None:
    if not 0 <= p < 1:
        raise ValueError(f"closed forms need 0 <= p < 1, got {p}")


def expected_k(p: float, D: int) -> float:
    _check_p(p)
    return p * (1 - p**D) / (1 - p)


def variance_k(p: float, D: int) -> float:
    _check_p(p)
    num = p - (2 * D + 1) * p ** (D + 1) + (2 * D + 1) * p ** (D + 2) - p ** (2 * D + 2)
    return num / (1 - p) ** 2


def mean_chi(p: float, D: int) -> float:
    _check_p(p)
    return 1 - p**D


def variance_chi(p: float, D: int) -> float:
    _check_p(p)
    return p**D * (1 - p**D)


def cov_k_chi(p: float, D: int) -> float:
    _check_p(p)
    return (-D * p**D + (D + 1) * p ** (D + 1) - p ** (2 * D + 1)) / (1 - p)


def asymptotic_var_freq(p: float, D: int) -> float:
    """Limit variance of ``sqrt(M) * (p_hat - p)``: ``p (1-p)^2 / (1 - p^D)``."""
    if not 0 < p < 1:
        raise ValueError(f"need 0 < p < 1, got {p}")
    return p * (1 - p) ** 2 / (1 - p**D)


def asymptotic_var_conf(
    freqs: Mapping[str, float], priors: ClassPrior, target: str, D: int
) -> float:
    """Limit variance of ``sqrt(M) * (q_hat - q)`` for the target class.

    Assumes independent chain sets of equal size ``M`` and length ``D`` per
    class; ``freqs`` are the true within-class frequencies.
    """
    for c, f in freqs.items():
        if not 0 < f < 1:
            raise ValueError(f"frequency for class {c!r} must lie in (0, 1), got {f}")
    marginal = sum(f * priors[c] for c, f in freqs.items())
    if marginal <= 0:
        raise ValueError("marginal frequency must be positive")
    pt, pri_t = freqs[target], priors[target]

    def v(f: float) -> float:
        return (1 - f) ** 2 * f / (1 - f**D)

    first = (pt * pri_t / marginal**2) ** 2 * sum(v(f) * priors[c] ** 2 for c, f in freqs.items())
    second = (pri_t / marginal**2) ** 2 * v(pt) * marginal * (marginal - 2 * pt * pri_t)
    return first + second

"""End-to-end mining drivers and the chain-count/length planner."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

import numpy as np

from .chain import ChainSet, generate_chains
from .dataset import EncodedDataset, from_records
from .estimator import UndefinedConfidence, confidence
from .pattern import Pattern
from .pqueue import BoundedMaxQueue
from .subset_select import FrequencyCache, top_frequent_closure

log = logging.getLogger(__name__)

NAIVE_MAX_TAIL = 20


@dataclass(frozen=True)
class MinerConfig:
    M: int = 1000
    D_max: int = 100_000
    K_stop: int = 4
    d_freq: int = 400
    d_conf: int = 10
    xi: float = 0.5
    mode: Literal["naive", "queue"] = "queue"
    master_seed: int = 0
    threads: int = 1
    # order in which frequent patterns are offered to the confidence queue
    scan_order: Literal["priority", "discovery"] = "priority"

    def __post_init__(self):
        if self.scan_order not in ("priority", "discovery"):
            raise ValueError(f"unknown scan_order {self.scan_order!r}")
        if self.M < 1 or self.D_max < 1:
            raise ValueError("M and D_max must be >= 1")
        if self.K_stop < 0:
            raise ValueError("K_stop must be >= 0")
        if self.mode == "queue":
            if self.d_freq < 1 or self.d_conf < 0:
                raise ValueError("queue mode needs d_freq >= 1 and d_conf >= 0")
        elif self.mode == "naive":
            if not 0 <= self.xi <= 1:
                raise ValueError("xi must lie in [0, 1]")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class ScoredRule:
    pattern: Pattern
    target_class: str
    freq_per_class: dict[str, float]
    confidence: float
    support_estimate: float

    @property
    def key(self) -> tuple[str, Pattern]:
        return self.target_class, self.pattern


@dataclass
class MiningResult:
    rules: dict[str, list[ScoredRule]]
    chainsets: dict[str, ChainSet] = field(repr=False)
    evaluations: dict[str, int] = field(default_factory=dict)


def _chainsets(ds: EncodedDataset, cfg: MinerConfig) -> dict[str, ChainSet]:
    def gen(c):
        return generate_chains(ds, c, cfg.M, cfg.D_max, cfg.K_stop, cfg.master_seed)

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as ex:
            return dict(zip(ds.classes, ex.map(gen, ds.classes)))
    return {c: gen(c) for c in ds.classes}


def _score(s, target, caches, priors) -> ScoredRule | None:
    freqs = {c: cache(s) for c, cache in caches.items()}
    try:
        q = confidence(freqs, priors, target)
    except UndefinedConfidence:
        log.warning("skipping %s: confidence undefined", s)
        return None
    support = sum(f * priors[c] for c, f in freqs.items())
    return ScoredRule(s, target, freqs, q, support)


def mine_naive(ds: EncodedDataset, cfg: MinerConfig) -> MiningResult:
    """Threshold miner: every subset of every tail, kept if confidence >= xi."""
    chainsets = _chainsets(ds, cfg)
    candidates: dict[str, dict[Pattern, None]] = {}
    for c, cs in chainsets.items():
        seen: dict[Pattern, None] = {}
        for t in cs.tails():
            if len(t) > NAIVE_MAX_TAIL:
                raise ValueError(
                    f"tail of order {len(t)} in class {c!r} exceeds {NAIVE_MAX_TAIL}; "
                    "enumerating its subsets is infeasible, use queue mode"
                )
            for k in range(1, len(t) + 1):
                for sub in combinations(t, k):
                    seen.setdefault(Pattern._trusted(sub))
        candidates[c] = seen

    priors = ds.priors()
    caches = {c: FrequencyCache(cs) for c, cs in chainsets.items()}
    rules = {}
    for c in ds.classes:
        kept = []
        for s in candidates[c]:
            r = _score(s, c, caches, priors)
            if r is not None and r.confidence >= cfg.xi:
                kept.append(r)
        kept.sort(key=lambda r: -r.confidence)
        rules[c] = kept
    return MiningResult(rules, chainsets, {c: f.evaluations for c, f in caches.items()})


def mine_queue(ds: EncodedDataset, cfg: MinerConfig) -> MiningResult:
    """Priority-queue miner: top ``d_freq`` frequent, then top ``d_conf`` confident.

    Frequent patterns are offered to the confidence queue from most to least
    frequent by default, so among equally confident rules the more frequent
    ones are kept. ``scan_order="discovery"`` offers them in the order they
    first entered the frequent queue instead.
    """
    chainsets = _chainsets(ds, cfg)
    caches = {c: FrequencyCache(cs) for c, cs in chainsets.items()}

    def closure(c):
        return top_frequent_closure(chainsets[c].tails(), caches[c], cfg.d_freq)

    # closures share nothing across classes, but the caches are not thread-safe
    frequent = {c: closure(c) for c in ds.classes}

    priors = ds.priors()
    rules = {}
    for c in ds.classes:
        L = BoundedMaxQueue(cfg.d_conf)
        scored = {}
        pool = frequent[c].by_insertion() if cfg.scan_order == "discovery" else frequent[c]
        for s, _ in pool:
            r = _score(s, c, caches, priors)
            if r is None:
                continue
            scored[s] = r
            L.insert(s, r.confidence)
        rules[c] = [scored[s] for s, _ in L]
    return MiningResult(rules, chainsets, {c: f.evaluations for c, f in caches.items()})


def mine(ds: EncodedDataset, cfg: MinerConfig) -> MiningResult:
    return mine_queue(ds, cfg) if cfg.mode == "queue" else mine_naive(ds, cfg)


@dataclass(frozen=True)
class PlannerInputs:
    p1: float
    p2: float
    eta1: float
    eta2: float

    def __post_init__(self):
        for name in ("p1", "p2", "eta1", "eta2"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.p2 >= self.p1:
            raise ValueError(f"need p2 < p1, got p1={self.p1}, p2={self.p2}")

    @property
    def a(self) -> float:
        return math.log(1 / self.eta1)

    @property
    def b(self) -> float:
        return math.log(1 / (1 - self.eta2))


def plan_parameters(inputs: PlannerInputs) -> tuple[int, int]:
    """Chain length ``D*`` and count ``M*`` sufficient for the recovery guarantee.

    ``D*`` is at least 1 even when both bounds are non-positive.
    """
    a, b = inputs.a, inputs.b
    lp1, lp2 = math.log(1 / inputs.p1), math.log(1 / inputs.p2)
    d2 = (math.log(2) + math.log(a) - math.log(b)) / (lp2 - lp1)
    if a >= max(b + 1, b / 2):
        bound = d2
    else:
        d1 = (math.log(b + 1) - math.log(a)) / lp1
        bound = max(d1, d2)
    D = max(1, math.ceil(bound))
    hit = inputs.p1**D
    if hit == 0.0:
        raise OverflowError(f"p1**D underflows at D={D}; the frequency gap is too narrow")
    # log1p keeps precision when p1**D is tiny
    M = max(1, math.ceil(a / -math.log1p(-hit)))
    return D, M


def planted_dataset(freqs: list[float], n_rows: int = 10_000) -> EncodedDataset:
    """Single-class dataset where feature ``j`` equals ``"1"`` in ``freqs[j]`` of rows."""
    records = []
    cut = [round(f * n_rows) for f in freqs]
    for i in range(n_rows):
        records.append(["1" if i < c else "0" for c in cut])
    return from_records(records, ["c"] * n_rows, [f"x{j}" for j in range(len(freqs))])


def guarantee_simulation(
    p1: float, p2: float, eta1: float, eta2: float, trials: int, seed: int = 0,
    planted: tuple[float, float] | None = None,
) -> tuple[float, float]:
    """Fraction of trials in which each planted item reaches some tail node.

    Runs chain generation at the planned ``(M*, D*)`` on a two-feature dataset
    whose ``"1"`` items have frequencies ``p1`` and ``p2``, or the frequencies
    in ``planted`` when given (the plan still comes from ``p1``, ``p2``).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    D, M = plan_parameters(PlannerInputs(p1, p2, eta1, eta2))
    freqs = list(planted) if planted is not None else [p1, p2]
    if not all(0 <= f <= 1 for f in freqs):
        raise ValueError("planted frequencies must lie in [0, 1]")
    ds = planted_dataset(freqs)
    ones = [ds.code_of(j, "1") if "1" in ds.category_names[j].values() else -1 for j in range(2)]
    # all trials in one batch: trial t owns chains [t*M, (t+1)*M)
    cs = generate_chains(ds, "c", M * trials, D, 0, seed)
    in_tail = (cs.counts == cs.lengths[:, None]) & (cs.heads == np.array(ones))
    hit = in_tail.reshape(trials, M, 2).any(axis=1)
    return float(hit[:, 0].mean()), float(hit[:, 1].mean())

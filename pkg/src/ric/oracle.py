"""Exact full-scan references used to validate the chain estimators.

Everything here touches every row and is guarded to desk-scale inputs; it
exists to check the sampling machinery, not to replace it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .dataset import EncodedDataset
from .estimator import UndefinedConfidence
from .pattern import Pattern

MAX_ROWS = 100_000
MAX_FEATURES = 30
MAX_BRUTE_ORDER = 20


@dataclass(frozen=True)
class ExactStats:
    support_count: int
    per_class_count: dict[str, int]


def contains_mask(ds: EncodedDataset, s: Pattern) -> np.ndarray:
    mask = np.ones(ds.n_rows, dtype=bool)
    for j, v in s:
        mask &= ds.rows[:, j] == v
    return mask


def exact_stats(ds: EncodedDataset, s: Pattern) -> ExactStats:
    mask = contains_mask(ds, s)
    per = {c: int(mask[idx].sum()) for c, idx in ds.class_index.items()}
    return ExactStats(int(mask.sum()), per)


def exact_frequency(ds: EncodedDataset, s: Pattern, cls: str) -> float:
    idx = ds.class_index[cls]
    return float(contains_mask(ds, s)[idx].mean())


def exact_confidence(ds: EncodedDataset, s: Pattern, cls: str) -> float:
    st = exact_stats(ds, s)
    if cls not in st.per_class_count:
        raise KeyError(cls)
    if st.support_count == 0:
        raise UndefinedConfidence("confidence undefined: pattern has zero support")
    return st.per_class_count[cls] / st.support_count


def brute_force_topk_subsets(
    freq: Callable[[Pattern], float], s: Pattern, k: int
) -> list[tuple[Pattern, float]]:
    """Top ``k`` nonempty subsets of ``s`` by ``freq``.

    Subsets are enumerated by order, then lexicographically, and that
    enumeration position breaks ties (earlier wins), mirroring the queue's
    earliest-enqueued rule.
    """
    if len(s) > MAX_BRUTE_ORDER:
        raise ValueError(f"|s| = {len(s)} exceeds brute-force limit {MAX_BRUTE_ORDER}")
    subsets = [Pattern._trusted(c) for r in range(1, len(s) + 1) for c in combinations(s, r)]
    scored = [(sub, freq(sub)) for sub in subsets]
    ranked = sorted(enumerate(scored), key=lambda t: (-t[1][1], t[0]))
    return [sp for _, sp in ranked[:k]]


def is_topk_up_to_ties(
    got: Iterable[Pattern], freq: Callable[[Pattern], float], s: Pattern, k: int
) -> bool:
    """Whether ``got`` is a top-``k`` subset selection of ``s`` for some tie order.

    Every subset strictly more frequent than the ``k``-th best must be in
    ``got``, and the rest of ``got`` must tie with the ``k``-th best.
    """
    got = set(got)
    if k <= 0:
        return not got
    subsets = [Pattern._trusted(c) for r in range(1, len(s) + 1) for c in combinations(s, r)]
    if len(got) != min(k, len(subsets)):
        return False
    if k >= len(subsets):
        return got == set(subsets)
    values = {x: freq(x) for x in subsets}
    cut = sorted(values.values(), reverse=True)[k - 1]
    above = {x for x, v in values.items() if v > cut}
    tied = {x for x, v in values.items() if v == cut}
    return above <= got <= above | tied


def exact_miner(
    ds: EncodedDataset, min_support: float, max_order: int
) -> list[tuple[Pattern, ExactStats]]:
    """All patterns with support count >= ``min_support`` up to ``max_order``.

    Level-wise candidate generation with anti-monotone pruning.
    """
    if ds.n_rows > MAX_ROWS or ds.n_features > MAX_FEATURES:
        raise ValueError(
            f"exact miner limited to {MAX_ROWS} rows and {MAX_FEATURES} features"
        )
    masks: dict[Pattern, np.ndarray] = {}
    level: list[Pattern] = []
    for j in range(ds.n_features):
        for v in range(ds.cardinalities[j]):
            m = ds.rows[:, j] == v
            if m.sum() >= min_support:
                p = Pattern._trusted(((j, v),))
                masks[p] = m
                level.append(p)
    out = list(level)
    order = 1
    while level and order < max_order:
        frequent = set(level)
        nxt = []
        for i, a in enumerate(level):
            for b in level[i + 1:]:
                if a[:-1] != b[:-1] or a[-1][0] >= b[-1][0]:
                    continue
                cand = Pattern._trusted(a + (b[-1],))
                if any(Pattern._trusted(cand[:r] + cand[r + 1:]) not in frequent
                       for r in range(len(cand))):
                    continue
                m = masks[a] & masks[b]
                if m.sum() >= min_support:
                    masks[cand] = m
                    nxt.append(cand)
        nxt.sort()
        out.extend(nxt)
        level = nxt
        order += 1
    result = []
    for p in out:
        m = masks[p]
        per = {c: int(m[idx].sum()) for c, idx in ds.class_index.items()}
        result.append((p, ExactStats(int(m.sum()), per)))
    return result


def jaccard(a: Iterable, b: Iterable) -> float:
    """``|A & B| / |A | B|``; two empty sets count as identical."""
    a, b = set(a), set(b)
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def rmse(est: Sequence[float], exact: Sequence[float]) -> float | None:
    if len(est) == 0:
        return None
    d = np.asarray(est, dtype=float) - np.asarray(exact, dtype=float)
    return float(math.sqrt(np.mean(d * d)))


def pearson(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Pearson correlation; None for fewer than 3 points or a constant vector."""
    if len(x) < 3:
        return None
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    return float(np.corrcoef(x, y)[0, 1])


def evaluate(rules, ds: EncodedDataset, reference=None) -> dict:
    """Compare estimated rule statistics with exact scans.

    ``rules`` is a sequence of :class:`~ric.miner.ScoredRule`. When
    ``reference`` rules are given, the report also carries the Jaccard index
    between the two rule sets keyed on ``(class, pattern)``.
    """
    rows = []
    for r in rules:
        ef = exact_frequency(ds, r.pattern, r.target_class)
        try:
            ec = exact_confidence(ds, r.pattern, r.target_class)
        except UndefinedConfidence:
            ec = None
        rows.append({
            "class": r.target_class,
            "pattern": r.pattern,
            "est_freq": r.freq_per_class[r.target_class],
            "exact_freq": ef,
            "est_conf": r.confidence,
            "exact_conf": ec,
        })
    conf_pairs = [(t["est_conf"], t["exact_conf"]) for t in rows if t["exact_conf"] is not None]
    report = {
        "rules": rows,
        "rmse_freq": rmse([t["est_freq"] for t in rows], [t["exact_freq"] for t in rows]),
        "rmse_conf": rmse([e for e, _ in conf_pairs], [x for _, x in conf_pairs]),
        "pearson_freq": pearson([t["est_freq"] for t in rows], [t["exact_freq"] for t in rows]),
        "pearson_conf": pearson([e for e, _ in conf_pairs], [x for _, x in conf_pairs]),
    }
    if reference is not None:
        report["jaccard"] =jaccard({r.key for r in rules}, {r.key for r in reference})
    return report

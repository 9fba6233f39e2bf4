"""Level-wise selection of the most frequent subsets of an itemset.

``insert_freq_subsets`` keeps a bounded queue of the most frequent patterns
while folding in the power set of a new itemset ``s`` without enumerating it:
each ``k``-subset is built as a singleton ``a`` joined with a ``(k-1)``-subset
ranked below ``a``, and working copies of the queue shrink as they are
scanned so that infrequent candidates are squeezed out early.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable

from .chain import ChainSet
from .estimator import frequency
from .pattern import Pattern
from .pqueue import BoundedMaxQueue


class FrequencyCache:
    """Memoized frequency function that counts every evaluation request.

    ``evaluations`` counts calls, cache hits included, which is the quantity
    bounded by the subset-selection cost analysis.
    """

    def __init__(self, source: ChainSet | Callable[[Pattern], float]):
        if isinstance(source, ChainSet):
            self.chains = source
            self._fn = lambda s: frequency(source, s)
        else:
            self.chains = None
            self._fn = source
        self._memo: dict[Pattern, float] = {}
        self.evaluations = 0

    def __call__(self, s: Pattern) -> float:
        self.evaluations += 1
        f = self._memo.get(s)
        if f is None:
            f = self._memo[s] = self._fn(s)
        return f


def _best(q: BoundedMaxQueue, pending: set) -> Pattern:
    return max(pending, key=q.rank_key)


def insert_freq_subsets(
    queue: BoundedMaxQueue, s: Pattern, freq: Callable[[Pattern], float]
) -> BoundedMaxQueue:
    """Fold the frequent subsets of ``s`` into ``queue`` (mutated and returned).

    Candidates are restricted to subsets of ``s``: a singleton ``a`` and a
    ``(k-1)``-itemset ``b`` are joined only when both come from ``s``, are
    still in ``queue``, and constrain disjoint features.

    Runs of extractions that cannot reach a candidate are collapsed with
    ``pop_above`` and scans stop once no candidate remains; neither changes
    ``queue`` or the sequence of frequency evaluations.
    """
    items = [Pattern._trusted((x,)) for x in s]
    for x in items:
        queue.insert(x, freq(x))

    for k in range(2, len(s) + 1):
        A = queue.copy()
        pend_a = {x for x in items if x in A}
        while len(A) > 1 and pend_a:
            a = _best(A, pend_a)
            A.pop_above(a)
            if len(A) <= 1:
                break
            A.extract_max()
            A.shrink()
            pend_a.discard(a)
            if a not in queue:
                continue
            item_a = a[0]
            B = A.copy()
            pend_b = _candidates_b(B, s, item_a, k - 1)
            while pend_b:
                b = _best(B, pend_b)
                B.pop_above(b)
                B.extract_max()
                B.shrink()
                pend_b.discard(b)
                if b not in queue:
                    continue
                u = Pattern._trusted(sorted(b + (item_a,)))
                f = freq(u)
                queue.insert(u, f)
                for q, pend in ((A, pend_a), (B, pend_b)):
                    dropped = q.insert(u, f)
                    if dropped is not None:
                        pend.discard(dropped)
    return queue


def _candidates_b(B: BoundedMaxQueue, s: Pattern, item_a, order: int) -> set:
    """``order``-subsets of ``s`` avoiding ``item_a``'s feature that sit in ``B``."""
    fa = item_a[0]
    rest = [x for x in s if x[0] != fa]
    n_combos = _n_choose(len(rest), order)
    if n_combos <= len(B):
        return {c for c in (Pattern._trusted(t) for t in combinations(rest, order)) if c in B}
    allowed = set(rest)
    return {b for b, _ in B if len(b) == order and all(x in allowed for x in b)}


def _n_choose(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    from math import comb
    return comb(n, k)


def top_frequent_closure(
    tails: Iterable[Pattern], freq: Callable[[Pattern], float], d_freq: int
) -> BoundedMaxQueue:
    """Accumulate the most frequent subset-closure patterns over all tails."""
    q = BoundedMaxQueue(d_freq)
    for s in tails:
        if s:
            insert_freq_subsets(q, s, freq)
    return q


def insert_freq_subsets_literal(
    queue: BoundedMaxQueue, s: Pattern, freq: Callable[[Pattern], float]
) -> BoundedMaxQueue:
    """Unoptimized line-by-line reference of :func:`insert_freq_subsets`."""
    s_items = set(s)
    for x in s:
        px = Pattern._trusted((x,))
        queue.insert(px, freq(px))
    for k in range(2, len(s) + 1):
        A = queue.copy()
        while len(A) > 1:
            a, _ = A.extract_max()
            A.shrink()
            if len(a) == 1 and a in queue and a[0] in s_items:
                B = A.copy()
                while len(B) > 0:
                    b, _ = B.extract_max()
                    B.shrink()
                    if (len(b) == k - 1 and b in queue
                            and all(x in s_items for x in b)
                            and all(x[0] != a[0][0] for x in b)):
                        u = Pattern._trusted(sorted(a + b))
                        f = freq(u)
                        queue.insert(u, f)
                        A.insert(u, f)
                        B.insert(u, f)
    return queue

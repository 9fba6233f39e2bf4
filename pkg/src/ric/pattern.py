"""Itemsets over label-encoded categorical features.

A pattern is a conjunction ``C_j = v`` of feature/code conditions, stored as
a tuple of ``(feature, code)`` pairs sorted by feature index. Equal patterns
are equal tuples, so patterns hash by value and can key dicts directly.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

Item = tuple[int, int]


class Pattern(tuple):
    """Canonical, immutable itemset.

    >>> Pattern([(3, 2), (1, 0)])
    Pattern(f1=0,f3=2)
    """

    __slots__ = ()

    def __new__(cls, items: Iterable[Item] = ()) -> Pattern:
        pairs = sorted((int(f), int(v)) for f, v in items)
        for (f0, _), (f1, _) in zip(pairs, pairs[1:]):
            if f0 == f1:
                raise ValueError(f"pattern repeats feature {f0}")
        return tuple.__new__(cls, pairs)

    @classmethod
    def _trusted(cls, pairs: Iterable[Item]) -> Pattern:
        # caller guarantees sorted, feature-unique int pairs
        return tuple.__new__(cls, pairs)

    @classmethod
    def from_row(cls, row: Sequence[int], features: Iterable[int] | None = None) -> Pattern:
        """Pattern matching ``row`` on ``features`` (all features by default)."""
        idx = range(len(row)) if features is None else sorted(features)
        return cls._trusted((int(j), int(row[j])) for j in idx)

    @property
    def order(self) -> int:
        return len(self)

    @property
    def features(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self)

    def matches(self, row: Sequence[int]) -> bool:
        """True iff every item of the pattern holds in ``row``."""
        return all(row[f] == v for f, v in self)

    def __repr__(self) -> str:
        return f"Pattern({format_pattern(self)})"


EMPTY = Pattern()


def is_subset(a: Pattern, b: Pattern) -> bool:
    """True iff every item of ``a`` occurs in ``b``."""
    if len(a) > len(b):
        return False
    i = 0
    n = len(b)
    for item in a:
        while i < n and b[i][0] < item[0]:
            i += 1
        if i == n or b[i] != item:
            return False
        i += 1
    return True


def intersect(a: Pattern, b: Pattern) -> Pattern:
    """Items present in both patterns with identical codes."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        fa, fb = a[i][0], b[j][0]
        if fa == fb:
            if a[i][1] == b[j][1]:
                out.append(a[i])
            i += 1
            j += 1
        elif fa < fb:
            i += 1
        else:
            j += 1
    return Pattern._trusted(out)


def features_disjoint(a: Pattern, b: Pattern) -> bool:
    fa = {f for f, _ in a}
    return not any(f in fa for f, _ in b)


def union_disjoint(a: Pattern, b: Pattern) -> Pattern:
    """Merge two patterns that constrain disjoint feature sets."""
    if not features_disjoint(a, b):
        raise ValueError(f"patterns overlap on features: {format_pattern(a)} / {format_pattern(b)}")
    return Pattern._trusted(sorted(a + b))


def format_pattern(
    p: Pattern,
    category_names: Sequence[Mapping[int, str]] | None = None,
) -> str:
    """Textual form ``f<idx>=<value>`` joined by commas."""
    if category_names is None:
        return ",".join(f"f{f}={v}" for f, v in p)
    return ",".join(f"f{f}={category_names[f][v]}" for f, v in p)


def parse_pattern(
    text: str,
    category_names: Sequence[Mapping[int, str]] | None = None,
) -> Pattern:
    """Inverse of :func:`format_pattern`."""
    text = text.strip()
    if not text:
        return EMPTY
    items = []
    for token in text.split(","):
        name, sep, value = token.partition("=")
        if not sep or not name.startswith("f") or not name[1:].isdigit():
            raise ValueError(f"malformed pattern item {token!r}")
        f = int(name[1:])
        if category_names is None:
            items.append((f, int(value)))
        else:
            lookup = {v: k for k, v in category_names[f].items()}
            if value not in lookup:
                raise ValueError(f"unknown category {value!r} for feature {f}")
            items.append((f, lookup[value]))
    return Pattern(items)


def pattern_to_json(p: Pattern, feature_names=None, category_names=None) -> list[dict]:
    out = []
    for f, v in p:
        out.append({
            "feature": feature_names[f] if feature_names is not None else f,
            "value": category_names[f][v] if category_names is not None else v,
        })
    return out


def pattern_from_json(items: list[dict], feature_names=None, category_names=None) -> Pattern:
    pairs = []
    for obj in items:
        f = obj["feature"]
        if feature_names is not None:
            try:
                f = list(feature_names).index(f)
            except ValueError:
                raise ValueError(f"unknown feature {f!r}") from None
        v = obj["value"]
        if category_names is not None:
            lookup = {name: code for code, name in category_names[f].items()}
            if v not in lookup:
                raise ValueError(f"unknown category {v!r} for feature {feature_names[f] if feature_names else f}")
            v = lookup[v]
        pairs.append((f, v))
    return Pattern(pairs)

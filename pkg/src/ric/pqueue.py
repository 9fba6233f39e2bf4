"""Capacity-bounded max-priority queue with earliest-enqueued tie preference."""

from __future__ import annotations

from bisect import bisect_left, insort
from typing import Hashable, Iterator


class BoundedMaxQueue:
    """Max-priority queue holding at most ``capacity`` distinct elements.

    Priority is ``key`` descending, then insertion sequence ascending, so of
    two equal keys the one enqueued first is served first and evicted last.
    Inserting into a full queue evicts the lowest-priority entry (possibly the
    newcomer). Re-inserting a present element raises its key if the new key
    is higher and otherwise does nothing; its sequence number is kept.
    """

    __slots__ = ("_cap", "_order", "_entries", "_next_seq")

    def __init__(self, capacity: int):
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        self._cap = capacity
        # ascending priority: (key, -seq, element); max is the last entry
        self._order: list[tuple] = []
        self._entries: dict[Hashable, tuple[float, int]] = {}
        self._next_seq = 0

    @property
    def capacity(self) -> int:
        return self._cap

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, x: Hashable) -> bool:
        return x in self._entries

    contains = __contains__

    def __iter__(self) -> Iterator[tuple[Hashable, float]]:
        """``(element, key)`` pairs from highest to lowest priority."""
        for key, _, x in reversed(self._order):
            yield x, key

    def by_insertion(self) -> list[tuple[Hashable, float]]:
        """``(element, key)`` pairs ordered by first insertion."""
        return [(x, k) for x, (k, _) in sorted(self._entries.items(), key=lambda e: e[1][1])]

    def key(self, x: Hashable) -> float:
        return self._entries[x][0]

    def insert(self, x: Hashable, key: float) -> Hashable | None:
        """Insert ``x``; returns whichever element got dropped, if any."""
        if self._cap == 0:
            return x
        old = self._entries.get(x)
        if old is not None:
            old_key, seq = old
            if key > old_key:
                del self._order[bisect_left(self._order, (old_key, -seq))]
                insort(self._order, (key, -seq, x))
                self._entries[x] = (key, seq)
            return None
        seq = self._next_seq
        self._next_seq += 1
        item = (key, -seq, x)
        if len(self._order) >= self._cap:
            if item < self._order[0]:
                return x
            dropped = self._order.pop(0)[2]
            del self._entries[dropped]
        else:
            dropped = None
        insort(self._order, item)
        self._entries[x] = (key, seq)
        return dropped

    def extract_max(self) -> tuple[Hashable, float]:
        if not self._order:
            raise IndexError("extract_max from empty queue")
        key, _, x = self._order.pop()
        del self._entries[x]
        return x, key

    def peek(self) -> tuple[Hashable, float]:
        if not self._order:
            raise IndexError("peek at empty queue")
        key, _, x = self._order[-1]
        return x, key

    def shrink(self) -> Hashable | None:
        """Decrease capacity by one, evicting the minimum if now over capacity."""
        if self._cap == 0:
            return None
        self._cap -= 1
        if len(self._order) > self._cap:
            x = self._order.pop(0)[2]
            del self._entries[x]
            return x
        return None

    def pop_above(self, x: Hashable) -> int:
        """Extract-and-shrink every entry ranked strictly above ``x``.

        Equivalent to repeating ``extract_max(); shrink()`` until ``x`` is on
        top; returns how many entries were removed.
        """
        key, seq = self._entries[x]
        i = bisect_left(self._order, (key, -seq)) + 1
        removed = self._order[i:]
        del self._order[i:]
        for _, _, y in removed:
            del self._entries[y]
        self._cap -= len(removed)
        return len(removed)

    def rank_key(self, x: Hashable) -> tuple[float, int]:
        """Sortable priority of a present element (larger is served first)."""
        key, seq = self._entries[x]
        return key, -seq

    def copy(self) -> BoundedMaxQueue:
        q = BoundedMaxQueue.__new__(BoundedMaxQueue)
        q._cap = self._cap
        q._order = list(self._order)
        q._entries = dict(self._entries)
        q._next_seq = self._next_seq
        return q

    def drain(self) -> list[tuple[Hashable, float]]:
        """Extract every element in priority order."""
        out = list(self)
        self._order.clear()
        self._entries.clear()
        return out

    def __repr__(self) -> str:
        return f"BoundedMaxQueue(capacity={self._cap}, size={len(self)})"

from __future__ import annotations

import random

import pytest

from ric.pqueue import BoundedMaxQueue


class ListModel:
    """Brute-force reference: an unsorted list rescanned on every operation."""

    def __init__(self, capacity):
        self.cap = capacity
        self.items = []  # [x, key, seq]
        self.seq = 0

    @staticmethod
    def _prio(e):
        return (e[1], -e[2])

    def insert(self, x, key):
        if self.cap == 0:
            return x
        for e in self.items:
            if e[0] == x:
                if key > e[1]:
                    e[1] = key
                return None
        self.items.append([x, key, self.seq])
        self.seq += 1
        if len(self.items) > self.cap:
            worst = min(self.items, key=self._prio)
            self.items.remove(worst)
            return worst[0]
        return None

    def extract_max(self):
        best = max(self.items, key=self._prio)
        self.items.remove(best)
        return best[0], best[1]

    def shrink(self):
        if self.cap == 0:
            return None
        self.cap -= 1
        if len(self.items) > self.cap:
            worst = min(self.items, key=self._prio)
            self.items.remove(worst)
            return worst[0]
        return None

    def ordered(self):
        return [(e[0], e[1]) for e in sorted(self.items, key=self._prio, reverse=True)]


def run_sequence(rng, n_ops):
    cap = rng.randint(0, 8)
    q, m = BoundedMaxQueue(cap), ListModel(cap)
    for _ in range(n_ops):
        op = rng.random()
        if op < 0.6:
            x, key = rng.randrange(12), rng.choice([0.0, 0.25, 0.5, 0.75, 1.0])
            assert q.insert(x, key) == m.insert(x, key)
        elif op < 0.75:
            if m.items:
                assert q.extract_max() == m.extract_max()
            else:
                with pytest.raises(IndexError):
                    q.extract_max()
        elif op < 0.85:
            assert q.shrink() == m.shrink()
        elif op < 0.95:
            x = rng.randrange(12)
            assert (x in q) == any(e[0] == x for e in m.items)
        else:
            c = q.copy()
            assert list(c) == list(q)
            if len(c):
                c.extract_max()
            assert list(q) == m.ordered()
        assert list(q) == m.ordered()
        assert len(q) == len(m.items) <= q.capacity == m.cap


def test_matches_reference_model_on_random_sequences():
    rng = random.Random(12345)
    for _ in range(1000):
        run_sequence(rng, rng.randint(1, 200))


def test_capacity_two_evicts_lowest():
    q = BoundedMaxQueue(2)
    assert q.insert("a", 0.5) is None
    assert q.insert("b", 0.7) is None
    assert q.insert("c", 0.6) == "a"
    assert set(x for x, _ in q) == {"b", "c"}


def test_equal_keys_prefer_earlier():
    q = BoundedMaxQueue(1)
    q.insert("a", 0.5)
    assert q.insert("b", 0.5) == "b"
    assert list(q) == [("a", 0.5)]


def test_capacity_zero_rejects_everything():
    q = BoundedMaxQueue(0)
    assert q.insert("a", 1.0) == "a"
    assert len(q) == 0
    assert q.shrink() is None


def test_extract_order():
    q = BoundedMaxQueue(5)
    q.insert("a", 0.5)
    q.insert("b", 0.7)
    assert q.extract_max() == ("b", 0.7)
    q = BoundedMaxQueue(5)
    q.insert("a", 0.5)
    q.insert("b", 0.5)
    assert q.extract_max()[0] == "a"
    q = BoundedMaxQueue(10)
    for i, k in enumerate([0.3, 0.9, 0.1, 0.9, 0.5]):
        q.insert(i, k)
    keys = [q.extract_max()[1] for _ in range(5)]
    assert keys == sorted(keys, reverse=True)
    with pytest.raises(IndexError):
        q.extract_max()


def test_duplicate_insert_keeps_max_key_and_original_seq():
    q = BoundedMaxQueue(5)
    q.insert("a", 0.5)
    q.insert("b", 0.9)
    q.insert("a", 0.2)
    assert q.key("a") == 0.5
    q.insert("a", 0.9)
    assert q.key("a") == 0.9
    # a kept its first seq, so it now beats b on the tie
    assert q.extract_max()[0] == "a"


def test_copy_is_independent():
    q = BoundedMaxQueue(3)
    for x, k in (("a", 1), ("b", 2)):
        q.insert(x, k)
    c = q.copy()
    assert list(c) == list(q)
    c.extract_max()
    c.insert("z", 9)
    c.shrink()
    assert list(q) == [("b", 2), ("a", 1)]
    assert q.capacity == 3
    assert len(BoundedMaxQueue(4).copy()) == 0


def test_contains_and_shrink():
    q = BoundedMaxQueue(2)
    q.insert("a", 1)
    q.insert("b", 2)
    q.insert("c", 3)
    assert "a" not in q and q.contains("b")
    assert q.shrink() == "b"
    assert len(q) == 1 and q.capacity == 1
    q = BoundedMaxQueue(5)
    q.insert("a", 1)
    assert q.shrink() is None and len(q) == 1


def test_pop_above_equals_repeated_extract_and_shrink():
    rng = random.Random(3)
    for _ in range(300):
        q = BoundedMaxQueue(rng.randint(1, 15))
        for i in range(rng.randint(1, 25)):
            q.insert(i, rng.choice([0, 1, 2, 3]))
        target = rng.choice([x for x, _ in q])
        ref = q.copy()
        while ref.peek()[0] != target:
            ref.extract_max()
            ref.shrink()
        n = q.pop_above(target)
        assert list(q) == list(ref) and q.capacity == ref.capacity
        assert n >= 0


def test_by_insertion_lists_first_insertion_order():
    q = BoundedMaxQueue(4)
    for x, k in (("a", 1), ("b", 3), ("c", 2), ("a", 5)):
        q.insert(x, k)
    assert [x for x, _ in q.by_insertion()] == ["a", "b", "c"]
    assert q.by_insertion()[0] == ("a", 5)


def test_negative_capacity_rejected():
    with pytest.raises(ValueError):
        BoundedMaxQueue(-1)

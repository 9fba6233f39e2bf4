"""Intersection chains in the compact head/counts representation.

A chain is stored as two length-``p`` vectors: ``head`` (the first sampled
row) and ``counts`` (how many consecutive nodes each head item survived),
plus its realized length. Item ``(j, head[j])`` belongs to node ``d`` iff
``counts[j] >= d``, so every node of the chain is recoverable from these.

Row draws come from a counter-based generator: the row drawn by chain ``m``
at step ``d`` is a stateless hash of ``(master_seed, class, m, d)``. Chains
can therefore be generated in any order, in batches, or in parallel, and
always come out identical.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .dataset import EncodedDataset
from .pattern import EMPTY, Pattern

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_STEP = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 arithmetic wraps
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def class_base_key(master_seed: int, cls: str) -> int:
    tag = zlib.crc32(cls.encode("utf-8"))
    seed = np.array([master_seed & _MASK64], dtype=np.uint64)
    return int(_mix64(_mix64(seed) ^ _mix64(np.array([tag], dtype=np.uint64)))[0])


def chain_keys(master_seed: int, cls: str, m: np.ndarray | int) -> np.ndarray:
    """Per-chain seed keys for chain indices ``m``."""
    base = np.uint64(class_base_key(master_seed, cls))
    idx = np.atleast_1d(np.asarray(m, dtype=np.uint64))
    return _mix64(base + (idx + np.uint64(1)) * _GAMMA)


def draw_rows(keys: np.ndarray, step: int, n: int) -> np.ndarray:
    """Uniform indices in ``[0, n)`` for each key at draw number ``step``."""
    offset = np.uint64(((step + 1) * int(_STEP)) & _MASK64)
    u = _mix64(keys + offset)
    r = ((u >> np.uint64(11)).astype(np.float64) * 2.0**-53 * n).astype(np.int64)
    return np.minimum(r, n - 1)


@dataclass(frozen=True, eq=False)
class Chain:
    head: np.ndarray
    counts: np.ndarray
    realized_length: int

    def node(self, d: int) -> Pattern:
        """Itemset of node ``d`` (1-based)."""
        return Pattern._trusted(
            (j, int(self.head[j])) for j in np.flatnonzero(self.counts >= d)
        )

    @property
    def tail(self) -> Pattern:
        return self.node(self.realized_length)

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.realized_length == other.realized_length
                and np.array_equal(self.head, other.head)
                and np.array_equal(self.counts, other.counts))


def survival_depth(ch: Chain, s: Pattern) -> int:
    """Largest node index whose itemset contains ``s`` (0 if not in the head)."""
    if not s:
        return ch.realized_length
    return min(int(ch.counts[j]) if ch.head[j] == v else 0 for j, v in s)


@dataclass(frozen=True, eq=False)
class ChainSet:
    """``M`` chains for one class, stored column-wise."""

    heads: np.ndarray      # (M, p) int32
    counts: np.ndarray     # (M, p) int32
    lengths: np.ndarray    # (M,) int64
    cls: str
    D_max: int
    K_stop: int

    def __len__(self) -> int:
        return self.heads.shape[0]

    def __getitem__(self, m: int) -> Chain:
        return Chain(self.heads[m], self.counts[m], int(self.lengths[m]))

    def __iter__(self) -> Iterator[Chain]:
        for m in range(len(self)):
            yield self[m]

    @property
    def M(self) -> int:
        return len(self)

    def slice(self, start: int, stop: int) -> ChainSet:
        return ChainSet(self.heads[start:stop], self.counts[start:stop],
                        self.lengths[start:stop], self.cls, self.D_max, self.K_stop)

    def survival_depths(self, s: Pattern) -> np.ndarray:
        """Vector of survival depths of ``s`` over all chains."""
        if not s:
            return self.lengths.copy()
        depth = None
        for j, v in s:
            dj = np.where(self.heads[:, j] == v, self.counts[:, j], 0)
            depth = dj if depth is None else np.minimum(depth, dj)
        return depth

    def tails(self) -> list[Pattern]:
        """Tail-node itemsets in chain index order."""
        alive = self.counts == self.lengths[:, None]
        out = []
        for m in range(len(self)):
            js = np.flatnonzero(alive[m])
            out.append(Pattern._trusted((int(j), int(self.heads[m, j])) for j in js)
                       if js.size else EMPTY)
        return out

    def equals(self, other: ChainSet) -> bool:
        return (self.cls == other.cls and self.D_max == other.D_max
                and self.K_stop == other.K_stop
                and np.array_equal(self.heads, other.heads)
                and np.array_equal(self.counts, other.counts)
                and np.array_equal(self.lengths, other.lengths))


def _grow(X: np.ndarray, keys: np.ndarray, D_max: int, K_stop: int):
    n, p = X.shape
    M = keys.shape[0]
    heads = X[draw_rows(keys, 0, n)]
    counts = np.ones((M, p), dtype=np.int32)
    lengths = np.ones(M, dtype=np.int64)
    if D_max <= 1 or p <= K_stop:
        return heads, counts, lengths
    active = np.arange(M)
    d = 1
    while active.size:
        rows = X[draw_rows(keys[active], d, n)]
        c = counts[active]
        hit = (c == d) & (rows == heads[active])
        c += hit
        counts[active] = c
        d += 1
        lengths[active] = d
        keep = hit.sum(axis=1) > K_stop
        if d >= D_max:
            break
        active = active[keep]
    return heads, counts, lengths


def generate_chain(
    ds: EncodedDataset, cls: str, D_max: int, K_stop: int, key: int
) -> Chain:
    """Grow one chain from per-chain seed ``key``.

    Growth stops once the chain has ``D_max`` nodes or its tail holds at
    most ``K_stop`` items.
    """
    if D_max < 1:
        raise ValueError("D_max must be >= 1")
    X = ds.class_rows(cls)
    if len(X) == 0:
        raise ValueError(f"class {cls!r} has no rows")
    h, c, L = _grow(X, np.array([key], dtype=np.uint64), D_max, K_stop)
    return Chain(h[0], c[0], int(L[0]))


def generate_chains(
    ds: EncodedDataset, cls: str, M: int, D_max: int, K_stop: int, master_seed: int
) -> ChainSet:
    """``M`` independent chains for class ``cls``.

    Chain ``m`` equals ``generate_chain(..., chain_keys(master_seed, cls, m))``.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if D_max < 1:
        raise ValueError("D_max must be >= 1")
    X = ds.class_rows(cls)
    keys = chain_keys(master_seed, cls, np.arange(M))
    h, c, L = _grow(X, keys, D_max, K_stop)
    return ChainSet(h, c, L, cls, D_max, K_stop)


def chain_from_rows(rows: Sequence[Sequence[int]], D_max: int | None = None,
                    K_stop: int = -1) -> Chain:
    """Build a chain from an explicit sequence of sampled rows.

    Consumes rows until the stop rule fires (or the rows run out when
    ``D_max`` is None) using the O(p) count update.
    """
    rows = [np.asarray(r) for r in rows]
    if not rows:
        raise ValueError("need at least one row")
    head = rows[0].astype(np.int32)
    counts = np.ones(head.size, dtype=np.int32)
    limit = len(rows) if D_max is None else D_max
    length = 1
    tail = head.size
    while length < limit and tail > K_stop:
        if length >= len(rows):
            raise ValueError("ran out of rows before the chain stopped")
        hit = (counts == length) & (rows[length] == head)
        counts += hit
        length += 1
        tail = int(hit.sum())
    return Chain(head, counts, length)


def sampled_rows(ds: EncodedDataset, cls: str, key: int, n_steps: int) -> np.ndarray:
    """Class-local row indices that the chain with ``key`` would draw."""
    n = len(ds.class_index[cls])
    k = np.array([key], dtype=np.uint64)
    return np.array([int(draw_rows(k, d, n)[0]) for d in range(n_steps)])


_MAGIC = b"RICC"
_VERSION = 1


def dump_chainset(cs: ChainSet, path: str | Path) -> None:
    """Binary cache: header then per-chain head, counts, length (little-endian)."""
    name = cs.cls.encode("utf-8")
    M, p = cs.heads.shape
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", _VERSION))
        fh.write(struct.pack("<I", len(name)))
        fh.write(name)
        fh.write(struct.pack("<QQqI", M, cs.D_max, cs.K_stop, p))
        rec = np.empty((M, 2 * p + 1), dtype="<i8")
        rec[:, :p] = cs.heads
        rec[:, p:2 * p] = cs.counts
        rec[:, -1] = cs.lengths
        fh.write(rec.tobytes())


def load_chainset(path: str | Path) -> ChainSet:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise ValueError("not a chain dump")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != _VERSION:
        raise ValueError(f"unsupported chain dump version {version}")
    (nlen,) = struct.unpack_from("<I", data, 8)
    off = 12
    cls = data[off:off + nlen].decode("utf-8")
    off += nlen
    M, D_max, K_stop, p = struct.unpack_from("<QQqI", data, off)
    off += struct.calcsize("<QQqI")
    rec = np.frombuffer(data, dtype="<i8", offset=off).reshape(M, 2 * p + 1)
    return ChainSet(rec[:, :p].astype(np.int32), rec[:, p:2 * p].astype(np.int32),
                    rec[:, -1].astype(np.int64), cls, int(D_max), int(K_stop))

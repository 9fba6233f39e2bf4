"""Bundled and synthetic datasets."""

from __future__ import annotations

import csv
from importlib import resources
from pathlib import Path

import numpy as np

from .dataset import EncodedDataset, from_records, ingest_csv

# rows a..c top to bottom, columns 1..3 left to right
TTT_CELLS = ("a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3")
TTT_LINES = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6))
TTT_LABEL = "class"


def _winner(board) -> str | None:
    for i, j, k in TTT_LINES:
        if board[i] != "b" and board[i] == board[j] == board[k]:
            return board[i]
    return None


def enumerate_tictactoe() -> list[tuple[tuple[str, ...], str]]:
    """Every distinct final board of a game where ``x`` moves first.

    A board is final once a player completes a line or no blank remains;
    ``positive`` marks a win for ``x``. Boards are listed in order of first
    discovery by a depth-first walk trying cells in reading order.
    """
    found: dict[tuple[str, ...], str] = {}
    board = ["b"] * 9

    def walk(turn: str) -> None:
        w = _winner(board)
        if w is not None or "b" not in board:
            found.setdefault(tuple(board), "positive" if w == "x" else "negative")
            return
        for i in range(9):
            if board[i] == "b":
                board[i] = turn
                walk("o" if turn == "x" else "x")
                board[i] = "b"

    walk("x")
    return list(found.items())


def tictactoe_csv_path() -> Path:
    return Path(str(resources.files("ric") / "data" / "tic-tac-toe.csv"))


def write_tictactoe_csv(path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*TTT_CELLS, TTT_LABEL])
        for board, label in enumerate_tictactoe():
            w.writerow([*board, label])


def load_tictactoe() -> EncodedDataset:
    return ingest_csv(tictactoe_csv_path(), TTT_LABEL)


def winning_line_patterns(ds: EncodedDataset, player: str):
    """The eight three-in-a-row patterns for ``player`` as encoded patterns."""
    from .pattern import Pattern

    return [Pattern((j, ds.code_of(j, player)) for j in line) for line in TTT_LINES]


def synthetic_rules_dataset(n_rows: int = 10_000, n_features: int = 8, cardinality: int = 4,
                            seed: int = 0) -> EncodedDataset:
    """Two-class categorical data with planted class-dependent interactions.

    Features are uniform noise except that class ``pos`` rows carry
    ``f0=0, f1=0, f2=0`` with probability 0.4 and ``f3=1, f4=1`` with
    probability 0.3, while ``neg`` rows carry ``f5=2, f6=2`` with probability
    0.5. About 40% of rows are ``pos``.
    """
    rng = np.random.default_rng(seed)
    X = rng.integers(cardinality, size=(n_rows, n_features))
    pos = rng.random(n_rows) < 0.4
    r1 = pos & (rng.random(n_rows) < 0.4)
    X[r1, 0:3] = 0
    r2 = pos & (rng.random(n_rows) < 0.3)
    X[r2, 3:5] = 1
    r3 = ~pos & (rng.random(n_rows) < 0.5)
    X[r3, 5:7] = 2
    labels = np.where(pos, "pos", "neg")
    records = [[f"v{v}" for v in row] for row in X]
    return from_records(records, labels.tolist(), [f"f{j}" for j in range(n_features)])

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from ric.dataset import (
    DatasetError,
    bin_numeric,
    from_records,
    ingest_csv,
    load_encoded,
    sample_row,
    save_encoded,
)
from ric.datasets import load_tictactoe


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_first_appearance_codes(tmp_path):
    ds = ingest_csv(write(tmp_path, "color,y\nred,a\ngreen,b\nred,a\n"), "y")
    assert ds.rows[:, 0].tolist() == [0, 1, 0]
    assert ds.cardinalities == (2,)
    assert ds.category_names[0] == {0: "red", 1: "green"}
    assert ds.feature_names == ("color",)


def test_uncommon_categories_merge_into_others(tmp_path):
    ds = ingest_csv(write(tmp_path, "color,y\nred,a\ngreen,b\nred,a\n"), "y", uncommon_threshold=2)
    assert ds.rows[:, 0].tolist() == [0, 1, 0]
    assert ds.category_names[0] == {0: "red", 1: "others"}


def test_others_code_follows_retained_categories():
    recs = [["z"], ["a"], ["a"], ["q"], ["b"], ["b"]]
    ds = from_records(recs, ["c"] * 6, uncommon_threshold=2)
    assert ds.category_names[0] == {0: "a", 1: "b", 2: "others"}
    assert ds.rows[:, 0].tolist() == [2, 0, 0, 2, 1, 1]


def test_missing_values_are_their_own_category(tmp_path):
    ds = ingest_csv(write(tmp_path, "f,y\n,a\nx,a\n,b\n"), "y")
    assert ds.category_names[0] == {0: "", 1: "x"}


@pytest.mark.parametrize("text,needle", [
    ("", "empty"),
    ("a,y\n", "no data rows"),
    ("a,b\n1,2\n", "'y'"),
    ("a,y\n1,2\n3\n", "row 3"),
])
def test_ingest_errors_are_descriptive(tmp_path, text, needle):
    with pytest.raises(DatasetError, match=needle):
        ingest_csv(write(tmp_path, text), "y")


def test_invariants_on_tictactoe():
    ds = load_tictactoe()
    assert ds.n_rows == 958 and ds.n_features == 9
    assert ds.cardinalities == (3,) * 9
    assert sorted(ds.classes) == ["negative", "positive"]
    allidx = np.sort(np.concatenate(list(ds.class_index.values())))
    assert allidx.tolist() == list(range(958))
    for j in range(9):
        assert ds.rows[:, j].max() < ds.cardinalities[j]
    pri = ds.priors()
    assert math.isclose(sum(pri.priors.values()), 1.0, abs_tol=1e-12)
    for c, idx in ds.class_index.items():
        assert pri[c] == len(idx) / ds.n_rows


def test_rows_are_read_only():
    ds = load_tictactoe()
    with pytest.raises(ValueError):
        ds.rows[0, 0] = 1


def test_bin_numeric_examples():
    codes, k = bin_numeric([1, 2, 3, 4], 2)
    assert codes.tolist() == [0, 0, 1, 1] and k == 2
    codes, k = bin_numeric([5, 5, 5], 2)
    assert codes.tolist() == [0, 0, 0] and k == 1


def test_bin_numeric_quartiles_hold_two_values_each():
    vals = [3, 1, 4, 1, 5, 9, 2, 6]
    codes, k = bin_numeric(vals, 4)
    assert k == 4
    assert np.bincount(codes).tolist() == [2, 2, 2, 2]
    # bins are ordered: every value in bin b is below every value in bin b+1
    for b in range(3):
        lo = max(v for v, c in zip(vals, codes) if c == b)
        hi = min(v for v, c in zip(vals, codes) if c == b + 1)
        assert lo < hi


def test_bin_numeric_keeps_ties_together():
    vals = [1, 1, 1, 1, 2, 3]
    codes, _ = bin_numeric(vals, 3)
    assert len(set(codes[:4].tolist())) == 1


def test_bin_numeric_rejects_bad_input():
    with pytest.raises(ValueError):
        bin_numeric([1, 2], 1)
    with pytest.raises(ValueError):
        bin_numeric([], 2)


def test_ingest_with_binning(tmp_path):
    text = "age,y\n" + "".join(f"{v},a\n" for v in [3, 1, 4, 1, 5, 9, 2, 6])
    ds = ingest_csv(write(tmp_path, text), "y", bin_numeric_cols={"age": 4})
    assert ds.cardinalities == (4,)
    assert set(ds.category_names[0].values()) == {"[1,1]", "[2,3]", "[4,5]", "[6,9]"}
    with pytest.raises(DatasetError, match="not numeric"):
        ingest_csv(write(tmp_path, "age,y\nold,a\n", "e.csv"), "y", bin_numeric_cols={"age": 2})


def test_sample_row_single_row_class():
    ds = from_records([["a"], ["b"], ["b"]], ["x", "y", "y"])
    rng = np.random.default_rng(0)
    assert {sample_row(ds, "x", rng) for _ in range(20)} == {0}


def test_sample_row_uniform_goodness_of_fit():
    ds = from_records([["a"], ["b"], ["c"]], ["x", "y", "y"])
    rng = np.random.default_rng(1)
    draws = np.array([sample_row(ds, "y", rng) for _ in range(100_000)])
    counts = np.array([(draws == 1).sum(), (draws == 2).sum()])
    assert np.all(np.abs(counts / 1e5 - 0.5) < 0.01)
    assert stats.chisquare(counts).pvalue > 0.001


def test_sample_row_replay_and_unknown_class():
    ds = load_tictactoe()
    a = [sample_row(ds, "positive", np.random.default_rng(7)) for _ in range(1)]
    r1, r2 = np.random.default_rng(7), np.random.default_rng(7)
    assert [sample_row(ds, "positive", r1) for _ in range(50)] == [sample_row(ds, "positive", r2) for _ in range(50)]
    assert a[0] in set(ds.class_index["positive"].tolist())
    with pytest.raises(KeyError):
        sample_row(ds, "draw", np.random.default_rng(0))


def test_encoded_round_trip(tmp_path):
    ds = from_records([["a", "x"], ["b", "x"], ["a", "y"]], ["p", "q", "p"], ["u", "v"])
    save_encoded(ds, tmp_path / "enc.json")
    back = load_encoded(tmp_path / "enc.json")
    assert np.array_equal(back.rows, ds.rows)
    assert back.labels == ds.labels
    assert back.category_names == ds.category_names
    assert back.feature_names == ds.feature_names
    assert back.cardinalities == ds.cardinalities
    for c in ds.classes:
        assert np.array_equal(back.class_index[c], ds.class_index[c])

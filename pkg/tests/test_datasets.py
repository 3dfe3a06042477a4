import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from triplecheck.datasets import (
    DatasetRecord,
    Malformed,
    UnknownFormat,
    label_balance,
    load_dataset,
    sample_subset,
)
from triplecheck.types import Triple


def write_tsv(tmp_path, name, lines):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def make_records(labels, name="ds"):
    return [
        DatasetRecord(
            triple=Triple(f"s{i}", (f"r{i}",), f"o{i}", gold_label=bool(lab)),
            dataset_name=name,
            record_id=f"{name}:{i + 1}",
        )
        for i, lab in enumerate(labels)
    ]


class TestLoadTsv:
    def test_positive_and_negative_rows(self, tmp_path):
        path = write_tsv(
            tmp_path,
            "fb.tsv",
            [
                "alabama_crimson_tide\tteamplayssport\tamerican football\t1",
                "anaheim_ducks\tteamplaysport\tfootball\t0",
            ],
        )
        records = load_dataset(path, "tsv")
        assert len(records) == 2
        assert records[0].triple.gold_label is True
        assert records[0].triple.subject == "alabama_crimson_tide"
        assert records[0].triple.object == "american football"
        assert records[1].triple.gold_label is False
        assert records[0].dataset_name == "fb"
        assert records[0].record_id == "fb:1"
        assert records[1].record_id == "fb:2"

    def test_wrong_arity(self, tmp_path):
        path = write_tsv(tmp_path, "x.tsv", ["a\tb\tc"])
        with pytest.raises(Malformed) as err:
            load_dataset(path, "tsv")
        assert err.value.line_no == 1
        assert "4 fields" in err.value.why

    def test_bad_label(self, tmp_path):
        path = write_tsv(tmp_path, "x.tsv", ["a\tb\tc\tmaybe"])
        with pytest.raises(Malformed):
            load_dataset(path, "tsv")

    def test_blank_field(self, tmp_path):
        path = write_tsv(tmp_path, "x.tsv", ["\tb\tc\t1"])
        with pytest.raises(Malformed):
            load_dataset(path, "tsv")

    def test_blank_lines_skipped_but_line_numbers_kept(self, tmp_path):
        path = write_tsv(tmp_path, "x.tsv", ["a\tb\tc\t1", "", "d\te\tf\t0"])
        records = load_dataset(path, "tsv")
        assert [r.record_id for r in records] == ["x:1", "x:3"]

    def test_unknown_format(self, tmp_path):
        path = write_tsv(tmp_path, "x.tsv", ["a\tb\tc\t1"])
        with pytest.raises(UnknownFormat):
            load_dataset(path, "csv")


class TestLoadJsonl:
    def test_wire_names_with_label(self, tmp_path):
        lines = [
            json.dumps(
                {
                    "predicted_subject_name": "douglas_adams",
                    "predicted_relation": ["profession", "occupation"],
                    "predicted_object_name": "writer",
                    "label": 1,
                }
            ),
            json.dumps(
                {
                    "predicted_subject_name": "hertz",
                    "predicted_relation": "occupation",
                    "predicted_object_name": "theologian",
                    "label": False,
                }
            ),
        ]
        path = write_tsv(tmp_path, "wd.jsonl", lines)
        records = load_dataset(path, "jsonl")
        assert records[0].triple.relations == ("profession", "occupation")
        assert records[0].triple.gold_label is True
        assert records[1].triple.relations == ("occupation",)
        assert records[1].triple.gold_label is False

    def test_missing_key(self, tmp_path):
        path = write_tsv(tmp_path, "wd.jsonl", [json.dumps({"predicted_subject_name": "x"})])
        with pytest.raises(Malformed):
            load_dataset(path, "jsonl")

    def test_invalid_json(self, tmp_path):
        path = write_tsv(tmp_path, "wd.jsonl", ["{not json"])
        with pytest.raises(Malformed):
            load_dataset(path, "jsonl")


class TestSampleSubset:
    def test_saturation_returns_all_in_order(self):
        records = make_records([1] * 100)
        assert sample_subset(records, 150, seed=1) == records

    def test_deterministic(self):
        records = make_records([1, 0] * 50)
        assert sample_subset(records, 10, seed=7) == sample_subset(records, 10, seed=7)

    def test_golden_selection(self):
        # frozen from one recorded run of the seeded generator
        records = make_records([1] * 10)
        subset = sample_subset(records, 3, seed=7)
        assert [r.record_id for r in subset] == ["ds:4", "ds:6", "ds:9"]

    def test_preserves_original_order(self):
        records = make_records([1, 0] * 20)
        subset = sample_subset(records, 11, seed=3)
        positions = [records.index(r) for r in subset]
        assert positions == sorted(positions)
        assert len(set(positions)) == len(positions)

    def test_n_must_be_positive(self):
        with pytest.raises(ValueError):
            sample_subset(make_records([1]), 0, seed=1)

    @given(st.integers(0, 2**16), st.integers(1, 40), st.integers(1, 60))
    def test_subsequence_property(self, seed, n, total):
        records = make_records([i % 2 for i in range(total)])
        subset = sample_subset(records, n, seed=seed)
        assert len(subset) == min(n, total)
        it = iter(records)
        assert all(r in it for r in subset)  # order-preserving subsequence

    def test_balanced_mode_targets_even_split(self):
        records = make_records([1] * 30 + [0] * 30)
        subset = sample_subset(records, 10, seed=5, balanced=True)
        positives, negatives = label_balance(subset)
        assert (positives, negatives) == (5, 5)

    def test_balanced_mode_tops_up_short_side(self):
        records = make_records([1] * 3 + [0] * 30)
        subset = sample_subset(records, 10, seed=5, balanced=True)
        positives, negatives = label_balance(subset)
        assert positives == 3 and negatives == 7


def test_label_balance_counts():
    records = make_records([1, 1, 0])
    assert label_balance(records) == (2, 1)


def test_dataset_record_requires_gold_label():
    with pytest.raises(ValueError):
        DatasetRecord(
            triple=Triple("s", ("r",), "o"),
            dataset_name="d",
            record_id="d:1",
        )

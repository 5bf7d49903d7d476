import json

import numpy as np
import pytest
from pydantic import ValidationError

from geoscale.core.exceptions import InputError
from geoscale.models.fractal import KochSpec
from geoscale.models.series import ValueSeries
from geoscale.services.fractal_measure import koch_recursive_segments
from geoscale.services.scaling_stats import (
    head_tail_breaks,
    ht_index,
    is_scaling,
    partition_json,
    rank_size_table,
    zipf_series,
)


def first_head_by_brute_force(values):
    mean = sum(values) / len(values)
    return sum(1 for v in values if v > mean)


def test_koch_segments_give_four_levels():
    series = koch_recursive_segments(KochSpec(iterations=3))
    assert len(series) == 85
    partition = head_tail_breaks(series)
    assert partition.head_sizes == [21, 5, 1]
    assert partition.ht_index == 4


def test_zipf_first_head_matches_brute_force():
    series = zipf_series(1000)
    partition = head_tail_breaks(series)
    assert partition.levels[0].head_count == first_head_by_brute_force(series.values) == 133


def test_zipf_hierarchy():
    partition = head_tail_breaks(zipf_series(1000))
    assert partition.head_sizes == [133, 24, 6, 2]
    # {1, 1/2}: half the values sit above the mean, over the 40% limit
    assert partition.levels[-1].accepted is False
    assert partition.levels[-1].head_count == 1
    assert partition.ht_index == 5


def test_constant_series_has_one_level():
    partition = head_tail_breaks(ValueSeries(values=[3.0] * 10))
    assert partition.ht_index == 1
    assert partition.levels[0].head_count == 0
    assert set(partition.class_assignment.values()) == {0}


def test_single_value():
    partition = head_tail_breaks(ValueSeries(values=[42.0]))
    assert partition.ht_index == 1
    assert partition.levels == []


def test_evenly_split_series_stops_on_head_limit():
    partition = head_tail_breaks(ValueSeries(values=[1.0, 2.0, 3.0, 4.0]))
    assert partition.ht_index == 1
    assert partition.levels[0].head_fraction == 0.5


def test_head_limit_is_configurable():
    values = ValueSeries(values=[1.0, 2.0, 3.0, 4.0])
    assert ht_index(values, head_limit=0.5) == 3


def test_class_assignment_marks_innermost_head():
    series = koch_recursive_segments(KochSpec(iterations=3))
    partition = head_tail_breaks(series)
    assert partition.class_assignment[0] == 3  # the initiator
    counts = np.bincount(list(partition.class_assignment.values()))
    assert counts.tolist() == [64, 16, 4, 1]


@pytest.mark.parametrize("factor", [0.001, 7, 1e6])
def test_invariant_under_scaling(factor):
    series = zipf_series(1000)
    base = head_tail_breaks(series)
    scaled = head_tail_breaks(series.scaled(factor))
    assert scaled.class_assignment == base.class_assignment
    assert scaled.ht_index == base.ht_index


def test_levels_respect_limit():
    partition = head_tail_breaks(zipf_series(500), head_limit=0.3)
    assert all(level.head_fraction <= 0.3 for level in partition.accepted_levels)


def test_bad_head_limit():
    with pytest.raises(InputError):
        head_tail_breaks(zipf_series(10), head_limit=1.0)


def test_series_rejects_zero():
    with pytest.raises(ValidationError):
        ValueSeries(values=[1.0, 0.0])


def test_is_scaling():
    assert is_scaling(zipf_series(1000))
    assert not is_scaling(ValueSeries(values=[1.0, 1.0, 2.0]))


def test_zipf_needs_positive_length():
    with pytest.raises(InputError):
        zipf_series(0)


def test_rank_size_table_sorts_descending():
    rows = rank_size_table(ValueSeries(values=[2.0, 9.0, 4.0]))
    assert [(r.rank, r.value) for r in rows] == [(1, 9.0), (2, 4.0), (3, 2.0)]


def test_partition_json():
    doc = json.loads(partition_json(head_tail_breaks(zipf_series(10))))
    assert doc["ht_index"] == len([lv for lv in doc["levels"] if lv["accepted"]]) + 1
    assert len(doc["class_assignment"]) == 10

"""Counting, enumeration, and the leak census."""

import os
from itertools import islice

import pytest

from nos.census import (
    EnumerationGuardError,
    count_all_subgroups,
    enumerate_subgroups,
    gaussian_binomial,
    leak_census,
    oracle_census,
)
from nos.flipcore import is_subgroup
from nos.leak import Direction, leak_summary


def test_gaussian_binomial_small_values():
    assert gaussian_binomial(2, 1) == 3
    assert gaussian_binomial(4, 2) == 35
    assert gaussian_binomial(5, 0) == 1
    assert gaussian_binomial(5, 5) == 1
    assert gaussian_binomial(9, 4) == 3309747
    with pytest.raises(ValueError):
        gaussian_binomial(3, 4)


def test_gaussian_binomial_symmetry():
    for n in range(1, 10):
        for p in range(n + 1):
            assert gaussian_binomial(n, p) == gaussian_binomial(n, n - p)


def test_count_all_subgroups():
    assert count_all_subgroups(1) == 2
    assert count_all_subgroups(2) == 5
    assert count_all_subgroups(9) == 8283458


def test_enumerate_matches_count():
    for n in range(1, 7):
        for p in range(n + 1):
            assert sum(1 for _ in enumerate_subgroups(n, p)) == gaussian_binomial(n, p)


def test_enumerate_yields_valid_distinct_subgroups():
    seen = set()
    for s in enumerate_subgroups(5, 2):
        assert s.n == 5 and s.rank == 2
        assert is_subgroup(list(s.elements))
        key = tuple(s.element_masks())
        assert key not in seen
        seen.add(key)


def test_enumeration_guard():
    with pytest.raises(EnumerationGuardError):
        list(islice(enumerate_subgroups(13, 2), 1))
    with pytest.raises(EnumerationGuardError):
        leak_census(13)


def test_leak_census_n4_rank2_has_6_distributions():
    report = leak_census(4, rank=2)
    assert report.subgroup_counts[2] == 35
    assert report.distinct_counts[2] == 6


def test_leak_census_n2_overall():
    report = leak_census(2)
    assert report.total_subgroups == 5
    assert report.subgroup_counts == {0: 1, 1: 3, 2: 1}
    # scaled distributions: {2}, {2,0} (x2 subgroups), {2,-2}, {2,0,0,-2}
    assert report.distinct_counts == {0: 1, 1: 2, 2: 1}


def test_leak_census_representatives_reproduce_distributions():
    report = leak_census(4, rank=2)
    for rep in report.representatives:
        if rep["rank"] == 0:
            continue
        from nos.flipcore import subgroup_from_basis_masks

        s = subgroup_from_basis_masks(4, rep["basis_masks"])
        summ = leak_summary(s)
        assert sorted(summ.scaled_distribution, reverse=True) == rep["scaled_distribution"]


def test_leak_census_counts_match_brute_force_on_general_direction():
    iota = Direction.from_vector([3.0, 2.0, 1.0, 1.0, 1.0], normalize=True)
    report = leak_census(5, iota=iota, rank=2)
    keys = set()
    for s in enumerate_subgroups(5, 2):
        summ = leak_summary(s, iota)
        keys.add(tuple(round(v, 10) for v in sorted(summ.scaled_distribution)))
    assert report.distinct_counts[2] == len(keys)


def test_leak_census_parallel_matches_serial():
    serial = leak_census(6, with_representatives=False)
    os.environ["NOS_THREADS"] = "4"
    try:
        parallel = leak_census(6, with_representatives=False)
    finally:
        del os.environ["NOS_THREADS"]
    assert serial.subgroup_counts == parallel.subgroup_counts
    assert serial.distinct_counts == parallel.distinct_counts


def test_oracle_census():
    assert oracle_census(3) == [1]
    assert oracle_census(4) == [1, 2, 4]
    assert oracle_census(6) == [1, 2]
    assert oracle_census(8) == [1, 2, 4, 8]


def test_census_report_serialization():
    report = leak_census(3)
    d = report.to_dict()
    assert d["total_subgroups"] == count_all_subgroups(3)
    assert d["total_distinct"] == report.total_distinct
    assert set(d["subgroup_counts"]) == {"0", "1", "2", "3"}

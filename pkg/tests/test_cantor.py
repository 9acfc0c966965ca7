"""Tests for level enumeration, counting, sampling and window witnesses."""

import pytest

from dirilab.src.engine.cantor import (
    count_level,
    enumerate_level,
    is_in_Dn,
    iter_level,
    make_schedule,
    sample_point,
    window_witnesses,
)
from dirilab.src.engine.cf_core import CFWord
from dirilab.src.engine.errors import CombinatorialExplosionError, InvalidParameterError
from dirilab.src.engine.geometry import pairwise_disjoint


class TestCounting:
    def test_level_sizes(self, small_schedule):
        assert [count_level(small_schedule, n) for n in range(1, 6)] == [2, 4, 4, 15, 30]

    def test_budget_cuts_the_count(self, small_schedule):
        assert count_level(small_schedule, 5, budget=20) is None
        assert count_level(small_schedule, 5, budget=30) == 30

    def test_count_matches_the_stream(self, audit_schedule):
        for n in range(1, 6):
            assert count_level(audit_schedule, n) == sum(1 for _ in iter_level(audit_schedule, n))


class TestEnumeration:
    def test_full_level(self, small_schedule):
        level = enumerate_level(small_schedule, 4, budget=1000, exhaustive=True)
        assert level.count == 15
        assert level.complete
        assert all(is_in_Dn(entry.word, small_schedule) for entry in level.entries)

    def test_spatial_order_and_disjointness(self, audit_schedule):
        for n in range(1, 6):
            intervals = enumerate_level(audit_schedule, n, budget=10_000).intervals
            assert [i.left for i in intervals] == sorted(i.left for i in intervals)
            assert pairwise_disjoint(intervals) == []

    def test_nested_in_the_parent_level(self, audit_schedule):
        parents = {
            entry.word.quotients: entry.interval
            for entry in enumerate_level(audit_schedule, 4, budget=10_000).entries
        }
        for entry in enumerate_level(audit_schedule, 5, budget=10_000).entries:
            assert parents[entry.word.quotients[:-1]].contains_interval(entry.interval)

    def test_budget_truncates(self, small_schedule):
        level = enumerate_level(small_schedule, 4, budget=10)
        assert len(level.entries) == 10
        assert level.count is None
        assert not level.complete

    def test_exhaustive_over_budget_raises(self, small_schedule):
        with pytest.raises(CombinatorialExplosionError):
            enumerate_level(small_schedule, 4, budget=10, exhaustive=True)

    def test_level_must_be_positive(self, small_schedule):
        with pytest.raises(InvalidParameterError):
            enumerate_level(small_schedule, 0, budget=10)

    def test_case_tags(self, small_schedule):
        tags = {entry.case_tag for entry in enumerate_level(small_schedule, 3, budget=100).entries}
        assert tags == {"III"}


class TestSampling:
    def test_deterministic_per_seed(self, audit_schedule):
        assert sample_point(audit_schedule, 10, seed=7) == sample_point(audit_schedule, 10, seed=7)

    def test_samples_are_admissible(self, audit_schedule):
        for seed in range(200):
            word = sample_point(audit_schedule, 10, seed=seed)
            assert word.n == 10
            assert audit_schedule.contains(word)

    def test_window_witnesses(self, audit_schedule):
        for seed in range(200):
            witnesses = window_witnesses(sample_point(audit_schedule, 10, seed), audit_schedule)
            assert [w.index for w in witnesses] == [4, 10]
            assert all(w.g_witness and w.k_avoidance for w in witnesses)
            assert all(w.forced_quotient == 4 for w in witnesses)

    def test_fractional_tau(self):
        schedule = make_schedule(3, 2, [1, 2], tau="1/2")
        word = sample_point(schedule, 10, seed=3)
        assert all(w.g_witness and w.k_avoidance for w in window_witnesses(word, schedule))

    def test_witnesses_only_for_reached_windows(self, audit_schedule):
        assert window_witnesses(CFWord((1, 1, 4, 3)), audit_schedule)[0].k == 1
        assert len(window_witnesses(CFWord((1, 1, 4, 3)), audit_schedule)) == 1

import itertools
import math

import numpy as np
import pytest

from movekin.model import TimeWindow
from movekin.relatedness import (
    Provenance,
    Trend,
    canonical_pair,
    detect_stable_episodes,
    ig_summary,
    pairwise_relatedness,
    pairwise_series,
    proximity,
    relatedness_matrix,
    travel_metrics,
    trend_sign,
    windowed_mean,
)

from conftest import make_dataset, random_small_dataset


def brute_force_mean(dataset, i, j, window):
    """Oracle: scalar loop over per-slot relatedness samples."""
    values = []
    for t in window.slots():
        sample = pairwise_relatedness(dataset, i, j, t)
        if sample.value is not None:
            values.append(sample.value)
    coverage = len(values) / window.length
    mean = sum(values) / len(values) if values else None
    return mean, coverage


def diagonal_point(d):
    """A point at distance d from the origin along the 3-4-5 diagonal."""
    return (0.6 * d, 0.8 * d)


class TestProximity:
    def test_same_point_is_zero(self):
        ds = make_dataset({"a": [(5.0, 5.0)], "b": [(5.0, 5.0)]})
        assert proximity(ds, "a", "b", 0) == 0.0

    def test_three_four_five(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(3000.0, 4000.0)]})
        assert proximity(ds, "a", "b", 0) == 5000.0

    def test_unpositioned_side_is_none(self):
        ds = make_dataset({"a": [(0.0, 0.0), (0.0, 0.0)],
                           "b": [None, (1.0, 0.0)]})
        assert proximity(ds, "a", "b", 0) is None

    def test_self_pair_rejected(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(1.0, 0.0)]})
        with pytest.raises(ValueError):
            proximity(ds, "a", "a", 0)

    def test_unknown_animal_rejected(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(1.0, 0.0)]})
        with pytest.raises(KeyError):
            proximity(ds, "a", "ghost", 0)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(11)
        ds = random_small_dataset(rng, n_animals=4, n_slots=12)
        for t in range(12):
            for a, b, c in itertools.permutations(ds.animal_ids[:3], 3):
                dab = proximity(ds, a, b, t)
                dbc = proximity(ds, b, c, t)
                dac = proximity(ds, a, c, t)
                if None not in (dab, dbc, dac):
                    assert dac <= dab + dbc + 1e-9


class TestPairwiseRelatedness:
    def test_collocation_scores_m(self, corner_dataset):
        assert pairwise_relatedness(corner_dataset, "anchor-a", "anchor-b", 0).value == 0.0
        ds = make_dataset({
            "a": [(0.0, 0.0)], "b": [(0.0, 0.0)], "corner": [(30000.0, 40000.0)]})
        sample = pairwise_relatedness(ds, "a", "b", 0)
        assert sample.value == ds.M == 50000.0

    def test_m_minus_d(self):
        ds = make_dataset({
            "a": [(0.0, 0.0)], "b": [(3000.0, 4000.0)], "corner": [(30000.0, 40000.0)]})
        sample = pairwise_relatedness(ds, "a", "b", 0)
        assert sample.value == pytest.approx(50000.0 - 5000.0, rel=1e-12)

    def test_symmetry_on_random_data(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            ds = random_small_dataset(rng)
            for t in range(ds.grid.slot_count):
                for i, j in itertools.combinations(ds.animal_ids, 2):
                    assert (pairwise_relatedness(ds, i, j, t).value
                            == pairwise_relatedness(ds, j, i, t).value)

    def test_provenance_labels(self):
        ds = make_dataset({
            "a": [(0.0, 0.0), (2.0, 0.0), (4.0, 0.0)],
            "b": [(0.0, 1.0), None, (4.0, 1.0)],
        })
        assert pairwise_relatedness(ds, "a", "b", 0).provenance == Provenance.BOTH_MEASURED
        assert pairwise_relatedness(ds, "a", "b", 1).provenance == Provenance.SOME_INTERPOLATED
        ds2 = make_dataset({"a": [(0.0, 0.0), (1.0, 0.0)], "b": [(0.0, 1.0), None]})
        assert pairwise_relatedness(ds2, "a", "b", 1).provenance == Provenance.UNDEFINED
        assert pairwise_relatedness(ds2, "a", "b", 1).value is None


class TestPairwiseSeries:
    def test_single_slot_window_matches_scalar(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(300.0, 400.0)]})
        series = pairwise_series(ds, "a", "b", TimeWindow(0, 0))
        assert len(series.samples) == 1
        scalar = pairwise_relatedness(ds, "a", "b", 0)
        assert series.samples[0] == scalar

    def test_disjoint_lifespans_all_undefined(self):
        ds = make_dataset({
            "a": [(0.0, 0.0), (1.0, 0.0), None, None],
            "b": [None, None, (2.0, 0.0), (3.0, 0.0)],
        })
        series = pairwise_series(ds, "a", "b", TimeWindow(0, 3))
        assert all(s.provenance == Provenance.UNDEFINED for s in series.samples)

    def test_stationary_pair_constant(self):
        ds = make_dataset({"a": [(0.0, 0.0)] * 5, "b": [(3000.0, 4000.0)] * 5,
                           "corner": [(30000.0, 40000.0)] * 5})
        series = pairwise_series(ds, "a", "b", TimeWindow(0, 4))
        assert all(s.value == pytest.approx(45000.0) for s in series.samples)

    def test_pair_canonicalized(self):
        ds = make_dataset({"b": [(0.0, 0.0)], "a": [(1.0, 0.0)]})
        assert pairwise_series(ds, "b", "a", TimeWindow(0, 0)).pair == ("a", "b")
        assert canonical_pair("b", "a") == ("a", "b")


class TestWindowedMean:
    def test_two_four_undefined_six(self):
        # distances chosen so relatedness samples are exactly [2, 4, None, 6]
        ds = make_dataset({
            "a": [(0.0, 0.0)] * 4,
            "b": [diagonal_point(49998.0), diagonal_point(49996.0), None,
                  diagonal_point(49994.0)],
            "c1": [(0.0, 0.0)] * 4,
            "c2": [(30000.0, 40000.0)] * 4,
        })
        # interior gap of b gets interpolated; rebuild with the gap at the end
        assert ds.M == 50000.0
        result = windowed_mean(ds, "a", "b", TimeWindow(0, 3))
        assert result.coverage == 1.0  # gap interpolated, all defined

        ds_raw = make_dataset({
            "a": [(0.0, 0.0)] * 4,
            "b": [diagonal_point(49998.0), diagonal_point(49996.0), None,
                  diagonal_point(49994.0)],
            "c1": [(0.0, 0.0)] * 4,
            "c2": [(30000.0, 40000.0)] * 4,
        }, fill=False)
        result = windowed_mean(ds_raw, "a", "b", TimeWindow(0, 3))
        assert result.mean == pytest.approx(4.0, abs=1e-9)
        assert result.coverage == 0.75

    def test_constant_series(self):
        ds = make_dataset({"a": [(0.0, 0.0)] * 3, "b": [(0.0, 100.0)] * 3})
        result = windowed_mean(ds, "a", "b", TimeWindow(0, 2))
        assert result.mean == pytest.approx(ds.M - 100.0)
        assert result.coverage == 1.0

    def test_no_overlap(self):
        ds = make_dataset({
            "a": [(0.0, 0.0), None, None],
            "b": [None, None, (1.0, 0.0)],
        })
        result = windowed_mean(ds, "a", "b", TimeWindow(0, 2))
        assert result.mean is None and result.coverage == 0.0

    def test_equals_brute_force_on_random_datasets(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            ds = random_small_dataset(rng)
            window = TimeWindow(0, ds.grid.slot_count - 1)
            for i, j in itertools.combinations(ds.animal_ids, 2):
                fast = windowed_mean(ds, i, j, window)
                mean, coverage = brute_force_mean(ds, i, j, window)
                assert fast.coverage == coverage
                if mean is None:
                    assert fast.mean is None
                else:
                    assert fast.mean == pytest.approx(mean, rel=1e-9)


class TestMatrix:
    def test_two_animals_one_pair(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(1.0, 0.0)]})
        matrix = relatedness_matrix(ds, TimeWindow(0, 0))
        assert len(matrix.entries) == 1

    def test_pair_count_n_choose_2(self):
        rng = np.random.default_rng(17)
        ds = random_small_dataset(rng, n_animals=25, n_slots=4)
        matrix = relatedness_matrix(ds, TimeWindow(0, 3))
        assert len(matrix.entries) == 300

    def test_symmetric_lookup(self):
        rng = np.random.default_rng(19)
        ds = random_small_dataset(rng, n_animals=4)
        matrix = relatedness_matrix(ds, TimeWindow(0, 9))
        for i, j in itertools.combinations(ds.animal_ids, 2):
            assert matrix.entry(i, j) is matrix.entry(j, i)

    def test_intensity_normalized(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(0.0, 0.0)],
                           "c": [(30000.0, 40000.0)]})
        matrix = relatedness_matrix(ds, TimeWindow(0, 0))
        assert matrix.intensity("a", "b") == pytest.approx(1.0)
        assert 0.0 <= matrix.intensity("a", "c") <= 1.0

    def test_animal_filter(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(1.0, 0.0)], "c": [(2.0, 0.0)]})
        matrix = relatedness_matrix(ds, TimeWindow(0, 0), animals=["a", "c"])
        assert list(matrix.entries) == [("a", "c")]

    def test_single_animal_rejected(self):
        ds = make_dataset({"a": [(0.0, 0.0)], "b": [(1.0, 0.0)]})
        with pytest.raises(ValueError):
            relatedness_matrix(ds, TimeWindow(0, 0), animals=["a"])


def linear_approach_dataset():
    """Neighbor walks straight toward a stationary focal over 10 slots."""
    payload = {
        "focal": [(0.0, 0.0)] * 10,
        "walker": [diagonal_point(10000.0 - 900.0 * k) for k in range(10)],
        "c1": [(0.0, 0.0)] * 10,
        "c2": [(30000.0, 40000.0)] * 10,
    }
    return make_dataset(payload)


class TestIGSummary:
    def test_stationary_neighbor_degenerate_bounds(self):
        ds = make_dataset({"focal": [(0.0, 0.0)] * 4, "n": [(100.0, 0.0)] * 4})
        summary = ig_summary(ds, "focal", 3, 4)
        entry = summary.neighbors[0]
        assert entry.r_min == entry.r_now == entry.r_max

    def test_linear_approach_bounds(self):
        ds = linear_approach_dataset()
        # brute-force oracle over the defined window samples
        values = [pairwise_relatedness(ds, "focal", "walker", t).value for t in range(10)]
        summary = ig_summary(ds, "focal", 9, 10)
        entry = next(n for n in summary.neighbors if n.animal == "walker")
        assert entry.r_max == pytest.approx(max(values), rel=1e-12)
        assert entry.r_min == pytest.approx(min(values), rel=1e-12)
        assert entry.r_now == pytest.approx(values[-1], rel=1e-12)
        assert entry.r_now == entry.r_max  # approach ends at peak relatedness

    def test_no_defined_neighbors(self):
        ds = make_dataset({
            "focal": [(0.0, 0.0), None, None],
            "other": [None, None, (1.0, 0.0)],
        })
        summary = ig_summary(ds, "focal", 2, 3)
        assert summary.neighbors == ()

    def test_window_clamped_at_grid_start(self):
        ds = make_dataset({"focal": [(0.0, 0.0)] * 3, "n": [(1.0, 0.0)] * 3})
        summary = ig_summary(ds, "focal", 1, 100)
        assert summary.window == TimeWindow(0, 1)

    def test_order_matches_reversed_distance(self):
        rng = np.random.default_rng(23)
        ds = random_small_dataset(rng, n_animals=6, n_slots=8)
        focal = ds.animal_ids[0]
        summary = ig_summary(ds, focal, 7, 3)
        present = [n for n in summary.neighbors if n.r_now is not None]
        by_r = sorted(present, key=lambda n: n.r_now)
        by_d = sorted(present, key=lambda n: proximity(ds, focal, n.animal, 7),
                      reverse=True)
        assert [n.animal for n in by_r] == [n.animal for n in by_d]


class TestTrendSign:
    def test_linear_approach_reads_approaching(self):
        ds = linear_approach_dataset()
        summary = ig_summary(ds, "focal", 9, 10)
        entry = next(n for n in summary.neighbors if n.animal == "walker")
        assert trend_sign(entry) == Trend.APPROACHING

    def test_linear_recede_reads_receding(self):
        payload = {
            "focal": [(0.0, 0.0)] * 10,
            "walker": [diagonal_point(1000.0 + 900.0 * k) for k in range(10)],
            "c1": [(0.0, 0.0)] * 10,
            "c2": [(30000.0, 40000.0)] * 10,
        }
        ds = make_dataset(payload)
        summary = ig_summary(ds, "focal", 9, 10)
        entry = next(n for n in summary.neighbors if n.animal == "walker")
        assert trend_sign(entry) == Trend.RECEDING

    def test_degenerate_tie_is_mixed(self):
        ds = make_dataset({"focal": [(0.0, 0.0)] * 3, "n": [(5.0, 0.0)] * 3})
        entry = ig_summary(ds, "focal", 2, 3).neighbors[0]
        assert trend_sign(entry) == Trend.MIXED

    def test_missing_r_now_rejected(self):
        ds = make_dataset({
            "focal": [(0.0, 0.0)] * 3,
            "n": [(5.0, 0.0), (5.0, 0.0), None],
        }, fill=False)
        entry = ig_summary(ds, "focal", 2, 3).neighbors[0]
        assert entry.r_now is None
        with pytest.raises(ValueError):
            trend_sign(entry)


class TestEpisodes:
    def build(self, distances, extra=None):
        payload = {
            "a": [(0.0, 0.0)] * len(distances),
            "b": [diagonal_point(d) if d is not None else None for d in distances],
            "c1": [(0.0, 0.0)] * len(distances),
            "c2": [(30000.0, 40000.0)] * len(distances),
        }
        if extra:
            payload.update(extra)
        return make_dataset(payload, fill=False)

    def test_constant_maximum_relatedness(self):
        ds = self.build([0.0] * 100)
        episodes = detect_stable_episodes(ds, "a", "b", ds.M - 1.0, min_len=12)
        assert len(episodes) == 1
        assert (episodes[0].start_slot, episodes[0].end_slot) == (0, 99)
        assert episodes[0].mean_relatedness == pytest.approx(ds.M)

    def test_alternating_with_no_dip_tolerance(self):
        distances = [0.0 if k % 2 == 0 else 30000.0 for k in range(30)]
        ds = self.build(distances)
        episodes = detect_stable_episodes(ds, "a", "b", ds.M - 1000.0,
                                          min_len=2, max_dip=0)
        assert episodes == []

    def test_dip_within_tolerance_bridged(self):
        distances = [0.0] * 10 + [30000.0] * 3 + [0.0] * 10
        ds = self.build(distances)
        episodes = detect_stable_episodes(ds, "a", "b", ds.M - 1000.0,
                                          min_len=5, max_dip=3)
        assert len(episodes) == 1
        assert (episodes[0].start_slot, episodes[0].end_slot) == (0, 22)

    def test_dip_beyond_tolerance_splits(self):
        distances = [0.0] * 10 + [30000.0] * 4 + [0.0] * 10
        ds = self.build(distances)
        episodes = detect_stable_episodes(ds, "a", "b", ds.M - 1000.0,
                                          min_len=5, max_dip=3)
        assert [(e.start_slot, e.end_slot) for e in episodes] == [(0, 9), (14, 23)]

    def test_short_runs_discarded(self):
        distances = [30000.0] * 10 + [0.0] * 4 + [30000.0] * 10
        ds = self.build(distances)
        episodes = detect_stable_episodes(ds, "a", "b", ds.M - 1000.0,
                                          min_len=5, max_dip=0)
        assert episodes == []

    def test_episodes_start_and_end_above_threshold(self):
        rng = np.random.default_rng(29)
        distances = [float(rng.uniform(0, 40000)) for _ in range(200)]
        ds = self.build(distances)
        threshold = ds.M - 15000.0
        episodes = detect_stable_episodes(ds, "a", "b", threshold,
                                          min_len=3, max_dip=2)
        for ep in episodes:
            start_v = pairwise_relatedness(ds, "a", "b", ep.start_slot).value
            end_v = pairwise_relatedness(ds, "a", "b", ep.end_slot).value
            assert start_v >= threshold and end_v >= threshold
            # soundness: every max_dip+1 consecutive slots contain a good sample
            values = [pairwise_relatedness(ds, "a", "b", t).value
                      for t in range(ep.start_slot, ep.end_slot + 1)]
            for w in range(len(values) - 2):
                chunk = values[w:w + 3]
                assert any(v is not None and v >= threshold for v in chunk)

    def test_invalid_threshold(self):
        ds = self.build([0.0] * 5)
        with pytest.raises(ValueError):
            detect_stable_episodes(ds, "a", "b", -1.0, min_len=1)
        with pytest.raises(ValueError):
            detect_stable_episodes(ds, "a", "b", ds.M + 1.0, min_len=1)


class TestTravelMetrics:
    def test_stationary(self):
        ds = make_dataset({"a": [(5.0, 5.0)] * 6})
        m = travel_metrics(ds, "a", TimeWindow(0, 5))
        assert m.path_length == 0.0 and m.displacement == 0.0

    def test_straight_walk(self):
        ds = make_dataset({"a": [(float(100 * k), 0.0) for k in range(6)]})
        m = travel_metrics(ds, "a", TimeWindow(0, 5))
        assert m.path_length == pytest.approx(500.0)
        assert m.displacement == pytest.approx(500.0)

    def test_square_loop(self):
        square = [(0.0, 0.0), (100.0, 0.0), (100.0, 100.0), (0.0, 100.0), (0.0, 0.0)]
        ds = make_dataset({"a": square})
        m = travel_metrics(ds, "a", TimeWindow(0, 4))
        assert m.path_length == pytest.approx(400.0)
        assert m.displacement == 0.0

    def test_unavailable_boundary_not_bridged(self):
        ds = make_dataset({
            "a": [(0.0, 0.0), (100.0, 0.0), None, None, (400.0, 0.0), (500.0, 0.0)],
            "b": [(0.0, 0.0)] * 6,
        }, fill=False)
        m = travel_metrics(ds, "a", TimeWindow(0, 5))
        assert m.path_length == pytest.approx(200.0)  # 0-1 and 4-5 segments only
        assert m.displacement == pytest.approx(500.0)

    def test_no_positioned_slots_raises(self):
        ds = make_dataset({
            "a": [(0.0, 0.0), None, None, None],
            "b": [(0.0, 0.0)] * 4,
        }, fill=False)
        with pytest.raises(ValueError):
            travel_metrics(ds, "a", TimeWindow(1, 3))


class TestBounds:
    def test_all_defined_values_in_range(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            ds = random_small_dataset(rng)
            window = TimeWindow(0, ds.grid.slot_count - 1)
            for i, j in itertools.combinations(ds.animal_ids, 2):
                for s in pairwise_series(ds, i, j, window).samples:
                    if s.value is not None:
                        assert 0.0 <= s.value <= ds.M
                wm = windowed_mean(ds, i, j, window)
                if wm.mean is not None:
                    assert 0.0 <= wm.mean <= ds.M

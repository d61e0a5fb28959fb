from datetime import timedelta

import pytest
from hypothesis import given, strategies as st

from movekin.model import (
    GridSpec,
    PlanarPoint,
    Species,
    SlotState,
    MEASURED,
    INTERPOLATED,
    UNAVAILABLE,
    TimeWindow,
    season_of,
    slot_of,
    time_of,
    utc,
)

GRID = GridSpec(epoch=utc(2011, 1, 1), step=timedelta(hours=2), slot_count=1000)


class TestSlotOf:
    def test_epoch_is_slot_zero(self):
        assert slot_of(utc(2011, 1, 1), GRID) == 0

    def test_one_step_is_slot_one(self):
        assert slot_of(utc(2011, 1, 1, 2), GRID) == 1

    def test_jitter_beyond_quarter_step_is_rejected(self):
        # 65 min is 55 min from slot 1: outside the 30 min tolerance
        assert slot_of(utc(2011, 1, 1, 1, 5), GRID) is None

    def test_jitter_within_tolerance_snaps(self):
        assert slot_of(utc(2011, 1, 1, 2, 29), GRID) == 1
        assert slot_of(utc(2011, 1, 1, 2, 30), GRID) == 1  # boundary inclusive
        assert slot_of(utc(2011, 1, 1, 2, 31), GRID) is None

    def test_before_epoch_is_rejected(self):
        assert slot_of(utc(2010, 12, 31, 23), GRID) is None

    def test_past_grid_end_is_rejected(self):
        assert slot_of(utc(2011, 1, 1) + 1000 * GRID.step, GRID) is None

    @given(st.integers(min_value=0, max_value=999))
    def test_round_trip_identity_on_grid_times(self, k):
        assert slot_of(time_of(k, GRID), GRID) == k


class TestTimeOf:
    def test_slot_zero_is_epoch(self):
        assert time_of(0, GRID) == GRID.epoch

    def test_twelve_slots_is_one_day(self):
        assert time_of(12, GRID) == utc(2011, 1, 2)

    def test_out_of_range_raises(self):
        with pytest.raises(IndexError):
            time_of(1000, GRID)
        with pytest.raises(IndexError):
            time_of(-1, GRID)


class TestSeasons:
    @pytest.mark.parametrize("when,season", [
        (utc(2011, 1, 15), "summer"),
        (utc(2011, 2, 28), "summer"),
        (utc(2011, 3, 1), "autumn"),
        (utc(2011, 7, 1), "winter"),
        (utc(2011, 9, 15), "spring"),
        (utc(2011, 12, 1), "summer"),
    ])
    def test_southern_hemisphere_calendar(self, when, season):
        assert season_of(when) == season


class TestTypes:
    def test_species_name_required(self):
        with pytest.raises(ValueError):
            Species("", None)

    def test_planar_distance(self):
        assert PlanarPoint(0, 0).distance_to(PlanarPoint(3, 4)) == 5.0

    def test_slot_state_invariants(self):
        with pytest.raises(ValueError):
            SlotState(MEASURED, None, 0)
        with pytest.raises(ValueError):
            SlotState(MEASURED, PlanarPoint(0, 0), 1)
        with pytest.raises(ValueError):
            SlotState(INTERPOLATED, PlanarPoint(0, 0), 0)
        with pytest.raises(ValueError):
            SlotState(UNAVAILABLE, PlanarPoint(0, 0), 0)
        SlotState(UNAVAILABLE, None, 0)

    def test_window_validation(self):
        with pytest.raises(ValueError):
            TimeWindow(5, 4)
        with pytest.raises(ValueError):
            TimeWindow(-1, 4)
        assert TimeWindow(2, 5).length == 4

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            GridSpec(epoch=utc(2011, 1, 1), step=timedelta(0), slot_count=10)
        with pytest.raises(ValueError):
            GridSpec(epoch=utc(2011, 1, 1), step=timedelta(hours=2), slot_count=0)

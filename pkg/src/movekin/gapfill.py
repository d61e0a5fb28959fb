"""Gap interpolation and the per-slot uncertainty degree.

Interior runs of missing slots are filled linearly between their measured
flanks so downstream proximity series stay defined, but every filled slot
carries an integer uncertainty degree: the slot distance to the nearest
measured flank. Measured slots are degree 0 by definition, so the first
slot inside any gap is degree 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import INTERPOLATED, MEASURED, UNAVAILABLE, Dataset, TrackSeries


@dataclass(frozen=True)
class GapRecord:
    """One interpolated run and the measured slots that bound it."""

    animal: str
    start_slot: int
    end_slot: int

    @property
    def left_flank(self) -> int:
        return self.start_slot - 1

    @property
    def right_flank(self) -> int:
        return self.end_slot + 1

    @property
    def length(self) -> int:
        return self.end_slot - self.start_slot + 1


def interpolate_gaps(track: TrackSeries) -> tuple[TrackSeries, list[GapRecord]]:
    """Fill every interior Unavailable run by linear interpolation.

    Slots before first_valid / after last_valid stay Unavailable: lifespan
    edges are never bridged. Positions are interpolated by slot index, so
    collinear motion is reconstructed exactly.
    """
    x = track.x.copy()
    y = track.y.copy()
    state = track.state.copy()
    uncertainty = track.uncertainty.copy()

    gaps: list[GapRecord] = []
    fv, lv = track.first_valid, track.last_valid
    interior = np.flatnonzero(state[fv:lv + 1] == UNAVAILABLE) + fv
    if interior.size:
        run_breaks = np.flatnonzero(np.diff(interior) > 1)
        starts = np.concatenate(([0], run_breaks + 1))
        ends = np.concatenate((run_breaks, [interior.size - 1]))
        for s, e in zip(starts, ends):
            a, b = int(interior[s]), int(interior[e])
            left, right = a - 1, b + 1
            span = right - left
            t = np.arange(a, b + 1)
            frac = (t - left) / span
            x[a:b + 1] = x[left] + frac * (x[right] - x[left])
            y[a:b + 1] = y[left] + frac * (y[right] - y[left])
            state[a:b + 1] = INTERPOLATED
            uncertainty[a:b + 1] = np.minimum(t - left, right - t)
            gaps.append(GapRecord(track.animal, a, b))

    filled = TrackSeries(
        animal=track.animal,
        species=track.species,
        x=x,
        y=y,
        state=state,
        uncertainty=uncertainty,
        first_valid=fv,
        last_valid=lv,
    )
    return filled, gaps


def uncertainty_degree(gap: GapRecord, i: int) -> int:
    """Degree for one slot inside a gap: distance to the nearest flank."""
    if i < gap.start_slot or i > gap.end_slot:
        raise IndexError(f"slot {i} outside gap [{gap.start_slot}, {gap.end_slot}]")
    return min(i - gap.left_flank, gap.right_flank - i)


@dataclass(frozen=True)
class AvailabilityCell:
    state: int
    max_uncertainty: int


@dataclass(frozen=True)
class AvailabilityRow:
    animal: str
    cells: tuple[AvailabilityCell, ...]


def availability_heatmap(dataset: Dataset, buckets: int) -> list[AvailabilityRow]:
    """Bucketed per-animal availability for the uncertainty strip.

    Each cell aggregates the worst state among its slots (Unavailable >
    Interpolated > Measured, which the state codes already order) plus the
    maximum uncertainty degree. Bucket count is capped at slot_count so no
    cell is ever empty.
    """
    if buckets < 1:
        raise ValueError("buckets must be >= 1")
    n = dataset.grid.slot_count
    b = min(buckets, n)
    bounds = [(k * n) // b for k in range(b + 1)]
    rows = []
    for animal in dataset.animal_ids:
        track = dataset.tracks[animal]
        cells = []
        for k in range(b):
            lo, hi = bounds[k], bounds[k + 1]
            cells.append(AvailabilityCell(
                state=int(track.state[lo:hi].max()),
                max_uncertainty=int(track.uncertainty[lo:hi].max()),
            ))
        rows.append(AvailabilityRow(animal=animal, cells=tuple(cells)))
    return rows


def spatial_uncertainty_radius(u: int, base_radius: float, growth: float, cap: float) -> float:
    """Display radius for an entity at uncertainty degree u: linear growth, capped."""
    if u < 0:
        raise ValueError("uncertainty degree must be >= 0")
    if base_radius < 0 or growth < 0 or cap < 0:
        raise ValueError("radius parameters must be >= 0")
    return min(base_radius + growth * u, cap)

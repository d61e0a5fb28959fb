"""Shared helpers: hand-built datasets with exact geometry."""

from __future__ import annotations

from datetime import timedelta

import numpy as np
import pytest

from movekin.gapfill import interpolate_gaps
from movekin.ingest import compute_arena
from movekin.model import (
    MEASURED,
    UNAVAILABLE,
    Dataset,
    GridSpec,
    Role,
    Species,
    TrackSeries,
    utc,
)

LION = Species("lion", Role.PREDATOR)
ZEBRA = Species("zebra", Role.HERBIVORE)
WILDEBEEST = Species("wildebeest", Role.HERBIVORE)


def make_track(animal: str, positions, species: Species = ZEBRA,
               slot_count: int | None = None) -> TrackSeries:
    """Raw track from a list of (x, y) or None; None slots are Unavailable."""
    n = slot_count if slot_count is not None else len(positions)
    x = np.full(n, np.nan)
    y = np.full(n, np.nan)
    state = np.full(n, UNAVAILABLE, dtype=np.int8)
    for t, p in enumerate(positions):
        if p is not None:
            x[t], y[t] = p
            state[t] = MEASURED
    measured = np.flatnonzero(state == MEASURED)
    if measured.size == 0:
        raise ValueError(f"track {animal} has no measured slots")
    return TrackSeries(
        animal=animal, species=species, x=x, y=y, state=state,
        uncertainty=np.zeros(n, dtype=np.int32),
        first_valid=int(measured[0]), last_valid=int(measured[-1]),
    )


def make_dataset(positions_by_animal: dict[str, list], fill: bool = True,
                 species: dict[str, Species] | None = None,
                 step_hours: float = 2.0) -> Dataset:
    """Dataset from per-animal position lists; interior gaps interpolated by default."""
    slot_count = max(len(v) for v in positions_by_animal.values())
    species = species or {}
    tracks = {}
    for animal, positions in positions_by_animal.items():
        sp = species.get(animal, ZEBRA)
        track = make_track(animal, positions, species=sp, slot_count=slot_count)
        if fill:
            track, _ = interpolate_gaps(track)
        tracks[animal] = track
    grid = GridSpec(epoch=utc(2011, 1, 1), step=timedelta(hours=step_hours),
                    slot_count=slot_count)
    arena = compute_arena(tracks)
    registry = {t.species.name: t.species for t in tracks.values()}
    return Dataset(grid=grid, arena=arena, tracks=tracks, species_registry=registry)


@pytest.fixture
def corner_dataset():
    """Arena pinned to (0,0)-(30000,40000), so M is exactly 50 000 m."""
    anchors = {
        "anchor-a": [(0.0, 0.0)] * 6,
        "anchor-b": [(30000.0, 40000.0)] * 6,
    }
    return make_dataset(anchors)


def random_small_dataset(rng: np.random.Generator, n_animals: int = 3,
                         n_slots: int = 10) -> Dataset:
    """Random positions in a fixed box with random missing slots; gap-filled."""
    positions = {}
    for k in range(n_animals):
        track = []
        for _ in range(n_slots):
            if rng.random() < 0.25:
                track.append(None)
            else:
                track.append((float(rng.uniform(0, 20000)), float(rng.uniform(0, 10000))))
        if all(p is None for p in track):
            track[0] = (0.0, 0.0)
        positions[f"animal-{k}"] = track
    return make_dataset(positions)

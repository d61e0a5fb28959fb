"""Self-contained JSON dataset archives.

One document holds the grid, the arena, the species registry, and every
track's slot states with uncertainty degrees. Sizes at study scale
(25 animals x ~10^4 slots) stay in the single-digit megabytes, so a
human-inspectable format wins over a binary one.
"""

from __future__ import annotations

import json
import math
from datetime import timedelta

import numpy as np

from .model import (
    INTERPOLATED,
    MEASURED,
    UNAVAILABLE,
    ArenaBounds,
    Dataset,
    GridSpec,
    Role,
    Species,
    TrackSeries,
    iso_utc,
    parse_utc,
)

FORMAT_NAME = "movekin-dataset"
FORMAT_VERSION = 1

_STATE_CHARS = {MEASURED: "M", INTERPOLATED: "I", UNAVAILABLE: "U"}
_CHAR_STATES = {c: s for s, c in _STATE_CHARS.items()}


class ArchiveError(Exception):
    pass


def _floor_mm(v: float) -> float:
    return math.floor(v * 1000.0) / 1000.0


def _ceil_mm(v: float) -> float:
    return math.ceil(v * 1000.0) / 1000.0


def save_dataset(dataset: Dataset, path: str) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "grid": {
            "epoch": iso_utc(dataset.grid.epoch),
            "step_seconds": int(dataset.grid.step.total_seconds()),
            "slot_count": dataset.grid.slot_count,
        },
        # Outward mm rounding keeps the rounded positions inside the bounds.
        "arena": {
            "min_x": _floor_mm(dataset.arena.min_x),
            "min_y": _floor_mm(dataset.arena.min_y),
            "max_x": _ceil_mm(dataset.arena.max_x),
            "max_y": _ceil_mm(dataset.arena.max_y),
        },
        "origin": list(dataset.origin) if dataset.origin else None,
        "species": {name: sp.role.value for name, sp in dataset.species_registry.items()},
        "tracks": [],
    }
    for animal in dataset.animal_ids:
        track = dataset.tracks[animal]
        states = "".join(_STATE_CHARS[int(s)] for s in track.state)
        x = [None if np.isnan(v) else round(float(v), 3) for v in track.x]
        y = [None if np.isnan(v) else round(float(v), 3) for v in track.y]
        doc["tracks"].append({
            "animal": animal,
            "species": track.species.name,
            "first_valid": track.first_valid,
            "last_valid": track.last_valid,
            "states": states,
            "x": x,
            "y": y,
            "u": [int(v) for v in track.uncertainty],
        })
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ":"))


def load_dataset(path: str) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != FORMAT_NAME:
        raise ArchiveError(f"not a {FORMAT_NAME} archive: {path}")
    if doc.get("version") != FORMAT_VERSION:
        raise ArchiveError(f"unsupported archive version {doc.get('version')}")

    grid = GridSpec(
        epoch=parse_utc(doc["grid"]["epoch"]),
        step=timedelta(seconds=doc["grid"]["step_seconds"]),
        slot_count=doc["grid"]["slot_count"],
    )
    arena = ArenaBounds(
        min_x=doc["arena"]["min_x"], min_y=doc["arena"]["min_y"],
        max_x=doc["arena"]["max_x"], max_y=doc["arena"]["max_y"],
    )
    registry = {name: Species(name, Role(role)) for name, role in doc["species"].items()}
    tracks: dict[str, TrackSeries] = {}
    for entry in doc["tracks"]:
        name = entry["species"]
        species = registry.setdefault(name, Species(name, Role.OTHER))
        state = np.array([_CHAR_STATES[c] for c in entry["states"]], dtype=np.int8)
        tracks[entry["animal"]] = TrackSeries(
            animal=entry["animal"],
            species=species,
            x=np.array(entry["x"], dtype=float),
            y=np.array(entry["y"], dtype=float),
            state=state,
            uncertainty=np.array(entry["u"], dtype=np.int32),
            first_valid=entry["first_valid"],
            last_valid=entry["last_valid"],
        )
    origin = tuple(doc["origin"]) if doc.get("origin") else None
    return Dataset(grid=grid, arena=arena, tracks=tracks,
                   species_registry=registry, origin=origin)


def apply_roles(dataset: Dataset, roles: dict[str, Role]) -> Dataset:
    """Override species roles on a loaded dataset (serve-time config)."""
    for name, role in roles.items():
        if name in dataset.species_registry:
            dataset.species_registry[name] = Species(name, role)
    for track in dataset.tracks.values():
        override = dataset.species_registry.get(track.species.name)
        if override is not None:
            track.species = override
    return dataset

"""Core domain model: animals, the global time grid, and slot arithmetic.

Every other module works against the types defined here. A dataset is
immutable once built; all analytical operations are pure reads over it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import NamedTuple

import numpy as np

# Slot state codes as stored in the per-track arrays.
MEASURED = 0
INTERPOLATED = 1
UNAVAILABLE = 2

STATE_NAMES = {MEASURED: "measured", INTERPOLATED: "interpolated", UNAVAILABLE: "unavailable"}
STATE_CODES = {v: k for k, v in STATE_NAMES.items()}


class Role(str, Enum):
    PREDATOR = "predator"
    HERBIVORE = "herbivore"
    OTHER = "other"


DEFAULT_ROLES = {
    "lion": Role.PREDATOR,
    "wildebeest": Role.HERBIVORE,
    "zebra": Role.HERBIVORE,
}


@dataclass(frozen=True)
class Species:
    name: str
    role: Role

    def __post_init__(self):
        if not self.name:
            raise ValueError("species name must be non-empty")


class PlanarPoint(NamedTuple):
    """Local planar position, meters east/north of the projection origin.

    Coordinates are finite by construction: they only ever derive from
    validated fixes or the synthetic walk. NamedTuple keeps construction
    cheap on the 10^5-fix ingest path.
    """

    x: float
    y: float

    def distance_to(self, other: "PlanarPoint") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Fix:
    """One raw GPS observation."""

    animal: str
    time: datetime
    lat: float
    lon: float

    def __post_init__(self):
        if not self.animal:
            raise ValueError("animal id must be non-empty")
        if not (-90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude out of range: {self.lat}")
        if not (-180.0 <= self.lon <= 180.0):
            raise ValueError(f"longitude out of range: {self.lon}")
        if self.time.tzinfo is None:
            raise ValueError("fix time must be timezone-aware UTC")


@dataclass(frozen=True)
class GridSpec:
    """The global regular timeline shared by all animals."""

    epoch: datetime
    step: timedelta = timedelta(hours=2)
    slot_count: int = 1

    def __post_init__(self):
        if self.step <= timedelta(0):
            raise ValueError("grid step must be positive")
        if self.slot_count < 1:
            raise ValueError("slot_count must be >= 1")
        if self.epoch.tzinfo is None:
            raise ValueError("grid epoch must be timezone-aware UTC")


def slot_of(time: datetime, grid: GridSpec) -> int | None:
    """Snap a timestamp to its grid slot, or None when it falls outside.

    A fix is accepted when it lies within step/4 of the nominal slot time;
    larger jitter is treated as a recording error and the caller drops the
    fix. Total function: never raises for in-domain datetimes.
    """
    offset = (time - grid.epoch) / grid.step
    index = round(offset)
    if index < 0 or index >= grid.slot_count:
        return None
    jitter = abs(time - (grid.epoch + index * grid.step))
    if jitter > grid.step / 4:
        return None
    return index


def time_of(slot: int, grid: GridSpec) -> datetime:
    """Nominal UTC timestamp of a slot; inverse of slot_of on grid times."""
    if slot < 0 or slot >= grid.slot_count:
        raise IndexError(f"slot {slot} outside [0, {grid.slot_count})")
    return grid.epoch + slot * grid.step


def season_of(time: datetime) -> str:
    """Southern-hemisphere meteorological season of a timestamp."""
    month = time.month
    if month in (12, 1, 2):
        return "summer"
    if month in (3, 4, 5):
        return "autumn"
    if month in (6, 7, 8):
        return "winter"
    return "spring"


@dataclass(frozen=True)
class SlotState:
    """Resolved state of one animal at one slot."""

    tag: int
    position: PlanarPoint | None
    uncertainty: int

    def __post_init__(self):
        if self.tag == MEASURED and (self.position is None or self.uncertainty != 0):
            raise ValueError("measured slots carry a position and uncertainty 0")
        if self.tag == INTERPOLATED and (self.position is None or self.uncertainty < 1):
            raise ValueError("interpolated slots carry a position and uncertainty >= 1")
        if self.tag == UNAVAILABLE and self.position is not None:
            raise ValueError("unavailable slots carry no position")


@dataclass
class TrackSeries:
    """One animal's positions regularized onto the global grid.

    Positions are stored as parallel numpy arrays (NaN where no position
    exists) so that pairwise distance queries stay vectorizable at the
    full 30-month scale.
    """

    animal: str
    species: Species
    x: np.ndarray
    y: np.ndarray
    state: np.ndarray
    uncertainty: np.ndarray
    first_valid: int
    last_valid: int

    def __post_init__(self):
        n = len(self.state)
        if not (len(self.x) == len(self.y) == len(self.uncertainty) == n):
            raise ValueError("track arrays must share one length")
        if self.first_valid > self.last_valid:
            raise ValueError("first_valid must not exceed last_valid")

    @property
    def slot_count(self) -> int:
        return len(self.state)

    def slot(self, t: int) -> SlotState:
        tag = int(self.state[t])
        if tag == UNAVAILABLE:
            return SlotState(tag, None, 0)
        return SlotState(tag, PlanarPoint(float(self.x[t]), float(self.y[t])), int(self.uncertainty[t]))

    def positioned(self, t: int) -> bool:
        return self.state[t] != UNAVAILABLE


@dataclass(frozen=True)
class ArenaBounds:
    """Axis-aligned bounding box of all measured positions.

    M is the box diagonal: the maximum distance two in-arena animals can
    be apart, and the offset that turns distance into relatedness.
    """

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if self.max_x < self.min_x or self.max_y < self.min_y:
            raise ValueError("degenerate arena bounds")

    @property
    def M(self) -> float:
        return math.hypot(self.max_x - self.min_x, self.max_y - self.min_y)

    def contains(self, p: PlanarPoint, tol: float = 1e-9) -> bool:
        return (self.min_x - tol <= p.x <= self.max_x + tol
                and self.min_y - tol <= p.y <= self.max_y + tol)


@dataclass(frozen=True)
class TimeWindow:
    """Inclusive slot range [start_slot, end_slot]."""

    start_slot: int
    end_slot: int

    def __post_init__(self):
        if self.start_slot < 0 or self.end_slot < self.start_slot:
            raise ValueError(f"invalid window [{self.start_slot}, {self.end_slot}]")

    @property
    def length(self) -> int:
        return self.end_slot - self.start_slot + 1

    def slots(self) -> range:
        return range(self.start_slot, self.end_slot + 1)

    def clamped(self, slot_count: int) -> "TimeWindow":
        return TimeWindow(max(0, self.start_slot), min(slot_count - 1, self.end_slot))


@dataclass
class Dataset:
    """All tracks on one grid plus the arena that defines M.

    Immutable after construction; concurrent readers are safe.
    """

    grid: GridSpec
    arena: ArenaBounds
    tracks: dict[str, TrackSeries]
    species_registry: dict[str, Species] = field(default_factory=dict)
    origin: tuple[float, float] | None = None

    def __post_init__(self):
        for track in self.tracks.values():
            if track.slot_count != self.grid.slot_count:
                raise ValueError(f"track {track.animal} length {track.slot_count} != grid {self.grid.slot_count}")
        self._ids = sorted(self.tracks)
        self._index = {a: k for k, a in enumerate(self._ids)}
        if self.tracks:
            self._X = np.vstack([self.tracks[a].x for a in self._ids])
            self._Y = np.vstack([self.tracks[a].y for a in self._ids])
            self._STATE = np.vstack([self.tracks[a].state for a in self._ids])
        else:
            self._X = self._Y = np.empty((0, self.grid.slot_count))
            self._STATE = np.full((0, self.grid.slot_count), UNAVAILABLE, dtype=np.int8)

    @property
    def animal_ids(self) -> list[str]:
        return list(self._ids)

    @property
    def M(self) -> float:
        return self.arena.M

    def track(self, animal: str) -> TrackSeries:
        try:
            return self.tracks[animal]
        except KeyError:
            raise KeyError(f"unknown animal: {animal!r}") from None

    def row(self, animal: str) -> int:
        if animal not in self._index:
            raise KeyError(f"unknown animal: {animal!r}")
        return self._index[animal]

    def xy(self, animal: str) -> tuple[np.ndarray, np.ndarray]:
        k = self.row(animal)
        return self._X[k], self._Y[k]

    def check_window(self, window: TimeWindow) -> TimeWindow:
        if window.end_slot >= self.grid.slot_count:
            raise ValueError(f"window end {window.end_slot} outside grid of {self.grid.slot_count} slots")
        return window


def utc(year: int, month: int, day: int, hour: int = 0, minute: int = 0, second: int = 0) -> datetime:
    """Shorthand for a UTC datetime."""
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)


def parse_utc(text: str) -> datetime:
    """Parse an ISO-8601 UTC timestamp ('2011-02-28T00:00:00Z')."""
    t = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if t.tzinfo is None:
        return t.replace(tzinfo=timezone.utc)
    if t.tzinfo is timezone.utc:
        return t
    return t.astimezone(timezone.utc)


def iso_utc(t: datetime) -> str:
    return t.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

"""Pairwise and individual-to-group relatedness over the global grid.

Relatedness at a slot is the arena diagonal minus the pair's Euclidean
distance, so collocated animals score M and opposite corners score 0.
Windowed aggregates average over *defined* samples only and report the
defined fraction as coverage, which keeps ragged lifespans from biasing
means toward zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import MEASURED, UNAVAILABLE, Dataset, TimeWindow


class Provenance(str, Enum):
    BOTH_MEASURED = "both-measured"
    SOME_INTERPOLATED = "some-interpolated"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class RelatednessSample:
    slot: int
    value: float | None
    provenance: Provenance


@dataclass
class RelatednessSeries:
    pair: tuple[str, str]
    window: TimeWindow
    samples: list[RelatednessSample]

    def values(self) -> np.ndarray:
        """Sample values as an array with NaN where undefined."""
        return np.array([s.value if s.value is not None else np.nan for s in self.samples])


@dataclass(frozen=True)
class WindowedRelatedness:
    pair: tuple[str, str]
    window: TimeWindow
    mean: float | None
    coverage: float


@dataclass(frozen=True)
class NeighborSummary:
    animal: str
    r_now: float | None
    r_min: float
    r_max: float
    coverage: float


@dataclass(frozen=True)
class IGSummary:
    focal: str
    time: int
    window: TimeWindow
    neighbors: tuple[NeighborSummary, ...]


@dataclass(frozen=True)
class PairEpisode:
    pair: tuple[str, str]
    start_slot: int
    end_slot: int
    mean_relatedness: float

    @property
    def length(self) -> int:
        return self.end_slot - self.start_slot + 1


class Trend(str, Enum):
    APPROACHING = "approaching"
    RECEDING = "receding"
    MIXED = "mixed"


def canonical_pair(i: str, j: str) -> tuple[str, str]:
    return (i, j) if i <= j else (j, i)


def _check_pair(dataset: Dataset, i: str, j: str) -> None:
    if i == j:
        raise ValueError(f"self pair: {i!r}")
    dataset.track(i)
    dataset.track(j)


def _pair_distance(dataset: Dataset, i: str, j: str, window: TimeWindow) -> np.ndarray:
    """Per-slot distances over a window; NaN wherever either side is unpositioned."""
    lo, hi = window.start_slot, window.end_slot + 1
    xi, yi = dataset.xy(i)
    xj, yj = dataset.xy(j)
    return np.hypot(xi[lo:hi] - xj[lo:hi], yi[lo:hi] - yj[lo:hi])


def _relatedness_values(dataset: Dataset, i: str, j: str, window: TimeWindow) -> np.ndarray:
    # Clamp guards float lerp overshoot at arena corners; geometrically P is in [0, M].
    return np.clip(dataset.M - _pair_distance(dataset, i, j, window), 0.0, dataset.M)


def proximity(dataset: Dataset, i: str, j: str, t: int) -> float | None:
    """Euclidean distance between two animals at a slot; None if either is unpositioned."""
    _check_pair(dataset, i, j)
    if t < 0 or t >= dataset.grid.slot_count:
        raise IndexError(f"slot {t} outside grid")
    a, b = dataset.track(i), dataset.track(j)
    if not (a.positioned(t) and b.positioned(t)):
        return None
    return math.hypot(float(a.x[t]) - float(b.x[t]), float(a.y[t]) - float(b.y[t]))


def pairwise_relatedness(dataset: Dataset, i: str, j: str, t: int) -> RelatednessSample:
    """Relatedness sample P = M - d at one slot, with provenance of the inputs."""
    d = proximity(dataset, i, j, t)
    if d is None:
        return RelatednessSample(slot=t, value=None, provenance=Provenance.UNDEFINED)
    a, b = dataset.track(i), dataset.track(j)
    both_measured = a.state[t] == MEASURED and b.state[t] == MEASURED
    prov = Provenance.BOTH_MEASURED if both_measured else Provenance.SOME_INTERPOLATED
    value = min(max(dataset.M - d, 0.0), dataset.M)
    return RelatednessSample(slot=t, value=value, provenance=prov)


def pairwise_series(dataset: Dataset, i: str, j: str, window: TimeWindow) -> RelatednessSeries:
    """One relatedness sample per slot of the window, in slot order."""
    _check_pair(dataset, i, j)
    dataset.check_window(window)
    lo, hi = window.start_slot, window.end_slot + 1
    values = _relatedness_values(dataset, i, j, window)
    sa = dataset.track(i).state[lo:hi]
    sb = dataset.track(j).state[lo:hi]
    defined = (sa != UNAVAILABLE) & (sb != UNAVAILABLE)
    both_measured = (sa == MEASURED) & (sb == MEASURED)
    samples = []
    for k, slot in enumerate(range(lo, hi)):
        if not defined[k]:
            samples.append(RelatednessSample(slot, None, Provenance.UNDEFINED))
        elif both_measured[k]:
            samples.append(RelatednessSample(slot, float(values[k]), Provenance.BOTH_MEASURED))
        else:
            samples.append(RelatednessSample(slot, float(values[k]), Provenance.SOME_INTERPOLATED))
    return RelatednessSeries(pair=canonical_pair(i, j), window=window, samples=samples)


def windowed_mean(dataset: Dataset, i: str, j: str, window: TimeWindow) -> WindowedRelatedness:
    """Mean relatedness over the window's defined samples, plus coverage."""
    _check_pair(dataset, i, j)
    dataset.check_window(window)
    values = _relatedness_values(dataset, i, j, window)
    defined = ~np.isnan(values)
    count = int(defined.sum())
    coverage = count / window.length
    mean = float(values[defined].mean()) if count else None
    return WindowedRelatedness(pair=canonical_pair(i, j), window=window, mean=mean, coverage=coverage)


@dataclass
class RelatednessMatrix:
    window: TimeWindow
    animals: list[str]
    entries: dict[tuple[str, str], WindowedRelatedness]
    max_relatedness: float

    def entry(self, i: str, j: str) -> WindowedRelatedness:
        return self.entries[canonical_pair(i, j)]

    def intensity(self, i: str, j: str) -> float:
        """Normalized ribbon intensity in [0, 1]: mean / M, 0 when undefined."""
        mean = self.entry(i, j).mean
        if mean is None or self.max_relatedness == 0:
            return 0.0
        return mean / self.max_relatedness


def relatedness_matrix(
    dataset: Dataset, window: TimeWindow, animals: list[str] | None = None
) -> RelatednessMatrix:
    """Windowed means for every unordered pair of the (filtered) animal set."""
    ids = sorted(animals) if animals is not None else dataset.animal_ids
    for a in ids:
        dataset.track(a)
    if len(ids) < 2:
        raise ValueError("relatedness matrix needs at least 2 animals")
    dataset.check_window(window)
    entries: dict[tuple[str, str], WindowedRelatedness] = {}
    for n, i in enumerate(ids):
        for j in ids[n + 1:]:
            entries[(i, j)] = windowed_mean(dataset, i, j, window)
    return RelatednessMatrix(window=window, animals=ids, entries=entries,
                             max_relatedness=dataset.M)


def ig_summary(dataset: Dataset, focal: str, t: int, duration_slots: int) -> IGSummary:
    """Relatedness of every neighbor to the focal animal over a trailing window.

    Neighbors with no defined sample in the window are omitted; r_now may be
    absent when the pair is undefined exactly at t.
    """
    dataset.track(focal)
    if t < 0 or t >= dataset.grid.slot_count:
        raise IndexError(f"slot {t} outside grid")
    if duration_slots < 1:
        raise ValueError("duration_slots must be >= 1")
    window = TimeWindow(max(0, t - duration_slots + 1), t)
    neighbors = []
    for other in dataset.animal_ids:
        if other == focal:
            continue
        values = _relatedness_values(dataset, focal, other, window)
        defined = ~np.isnan(values)
        count = int(defined.sum())
        if count == 0:
            continue
        now = values[-1]
        neighbors.append(NeighborSummary(
            animal=other,
            r_now=float(now) if not np.isnan(now) else None,
            r_min=float(values[defined].min()),
            r_max=float(values[defined].max()),
            coverage=count / window.length,
        ))
    return IGSummary(focal=focal, time=t, window=window, neighbors=tuple(neighbors))


def trend_sign(entry: NeighborSummary) -> Trend:
    """Dominant error-bar side: longer inner bar means the pair got closer."""
    if entry.r_now is None:
        raise ValueError(f"trend undefined: {entry.animal} has no r_now")
    inner = entry.r_now - entry.r_min
    outer = entry.r_max - entry.r_now
    if inner > outer:
        return Trend.APPROACHING
    if inner < outer:
        return Trend.RECEDING
    return Trend.MIXED


def detect_stable_episodes(
    dataset: Dataset,
    i: str,
    j: str,
    threshold: float,
    min_len: int,
    max_dip: int = 0,
) -> list[PairEpisode]:
    """Maximal runs of above-threshold relatedness, tolerant of short dips.

    A run extends across interior stretches of sub-threshold or undefined
    samples no longer than max_dip slots; it always starts and ends on an
    above-threshold sample. Runs shorter than min_len are discarded.
    """
    _check_pair(dataset, i, j)
    if not (0.0 <= threshold <= dataset.M):
        raise ValueError(f"threshold {threshold} outside [0, {dataset.M}]")
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    if max_dip < 0:
        raise ValueError("max_dip must be >= 0")
    window = TimeWindow(0, dataset.grid.slot_count - 1)
    values = _relatedness_values(dataset, i, j, window)
    good = np.flatnonzero(~np.isnan(values) & (values >= threshold))
    episodes: list[PairEpisode] = []
    if good.size == 0:
        return episodes
    run_start = int(good[0])
    prev = int(good[0])
    for g in good[1:]:
        g = int(g)
        if g - prev - 1 > max_dip:
            _close_episode(episodes, canonical_pair(i, j), run_start, prev, values, min_len)
            run_start = g
        prev = g
    _close_episode(episodes, canonical_pair(i, j), run_start, prev, values, min_len)
    return episodes


def _close_episode(episodes, pair, start, end, values, min_len):
    if end - start + 1 < min_len:
        return
    segment = values[start:end + 1]
    episodes.append(PairEpisode(
        pair=pair,
        start_slot=start,
        end_slot=end,
        mean_relatedness=float(np.nanmean(segment)),
    ))


@dataclass(frozen=True)
class TravelMetrics:
    animal: str
    window: TimeWindow
    path_length: float
    displacement: float


def travel_metrics(dataset: Dataset, animal: str, window: TimeWindow) -> TravelMetrics:
    """Path length and net displacement over the window's positioned slots.

    Path length sums distances between *adjacent* positioned slots only;
    unpositioned stretches are skipped, never bridged.
    """
    dataset.check_window(window)
    track = dataset.track(animal)
    lo, hi = window.start_slot, window.end_slot + 1
    x = track.x[lo:hi]
    y = track.y[lo:hi]
    positioned = np.flatnonzero(~np.isnan(x))
    if positioned.size == 0:
        raise ValueError(f"{animal}: no positioned slots in window")
    steps = np.hypot(np.diff(x), np.diff(y))  # NaN where a side is unpositioned
    path = float(np.nansum(steps)) if steps.size else 0.0
    first, last = positioned[0], positioned[-1]
    displacement = float(math.hypot(x[last] - x[first], y[last] - y[first]))
    return TravelMetrics(animal=animal, window=window, path_length=path, displacement=displacement)

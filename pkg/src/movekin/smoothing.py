"""Parametric trace-line smoothing: five curve families, one alpha knob.

All modes share a single smoothness parameter alpha in [0, 1] (0 = no
smoothing, 1 = smoothest) and identical per-segment sampling so outputs
are directly comparable and deterministic:

  catmull-rom    interpolating; alpha is the parameterization exponent
                 (0.5 centripetal, 1 chordal)
  cardinal       interpolating; tension = 1 - alpha, so alpha 0 is the
                 bare polyline
  natural-cubic  C2 interpolating spline blended toward the polyline by
                 alpha
  cubic-basis    clamped uniform B-spline (approximating) blended from
                 the polyline (alpha 0) to the full spline (alpha 1)
  bundle         straightening blend from the B-spline (alpha 0) to the
                 single origin-to-destination chord (alpha 1)

Unpositioned slots split a window into separate runs; no curve is ever
drawn across a lifespan edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.interpolate import BSpline, CubicSpline

from .model import UNAVAILABLE, Dataset, TimeWindow


class CurveMode(str, Enum):
    CUBIC_BASIS = "cubic-basis"
    NATURAL_CUBIC = "natural-cubic"
    BUNDLE = "bundle"
    CARDINAL = "cardinal"
    CATMULL_ROM = "catmull-rom"
    NONE = "none"


INTERPOLATING_MODES = {CurveMode.CATMULL_ROM, CurveMode.CARDINAL, CurveMode.NATURAL_CUBIC}


@dataclass(frozen=True)
class SmoothingConfig:
    mode: CurveMode = CurveMode.NONE
    alpha: float = 0.5
    samples_per_segment: int = 8

    def __post_init__(self):
        # Out-of-range alpha is clamped, never fatal.
        object.__setattr__(self, "alpha", min(1.0, max(0.0, float(self.alpha))))
        if self.samples_per_segment < 1:
            raise ValueError("samples_per_segment must be >= 1")


def _sample_params(n: int, spp: int) -> np.ndarray:
    """Global parameter values 0 .. n-1, spp samples per segment, ends once."""
    return np.arange((n - 1) * spp + 1) / spp


def _polyline_at(pts: np.ndarray, u: np.ndarray) -> np.ndarray:
    seg = np.clip(np.floor(u).astype(int), 0, len(pts) - 2)
    frac = (u - seg)[:, None]
    return pts[seg] + frac * (pts[seg + 1] - pts[seg])


def _hermite(pts: np.ndarray, tangents: np.ndarray, u: np.ndarray) -> np.ndarray:
    seg = np.clip(np.floor(u).astype(int), 0, len(pts) - 2)
    s = (u - seg)[:, None]
    s2, s3 = s * s, s * s * s
    h00 = 2 * s3 - 3 * s2 + 1
    h10 = s3 - 2 * s2 + s
    h01 = -2 * s3 + 3 * s2
    h11 = s3 - s2
    return h00 * pts[seg] + h10 * tangents[seg] + h01 * pts[seg + 1] + h11 * tangents[seg + 1]


def _catmull_rom(pts: np.ndarray, exponent: float, u: np.ndarray) -> np.ndarray:
    n = len(pts)
    seg_len = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    dt = seg_len ** exponent if exponent > 0 else np.ones(n - 1)

    velocity = np.zeros_like(pts)
    for k in range(1, n - 1):
        d0, d1, d01 = dt[k - 1], dt[k], dt[k - 1] + dt[k]
        t0 = (pts[k] - pts[k - 1]) / d0 if d0 > 0 else 0.0
        t1 = (pts[k + 1] - pts[k]) / d1 if d1 > 0 else 0.0
        t01 = (pts[k + 1] - pts[k - 1]) / d01 if d01 > 0 else 0.0
        velocity[k] = t0 - t01 + t1
    # End velocities from duplicated endpoints (uniform limit: (p1 - p0) / 2).
    if dt[0] > 0:
        velocity[0] = 0.5 * (pts[1] - pts[0]) / dt[0]
    if dt[-1] > 0:
        velocity[-1] = 0.5 * (pts[-1] - pts[-2]) / dt[-1]

    # Hermite per segment on normalized s, so tangents scale by the knot span.
    seg = np.clip(np.floor(u).astype(int), 0, n - 2)
    span = dt[seg][:, None]
    s = (u - seg)[:, None]
    s2, s3 = s * s, s * s * s
    h00 = 2 * s3 - 3 * s2 + 1
    h10 = s3 - 2 * s2 + s
    h01 = -2 * s3 + 3 * s2
    h11 = s3 - s2
    return (h00 * pts[seg] + h10 * span * velocity[seg]
            + h01 * pts[seg + 1] + h11 * span * velocity[seg + 1])


def _cardinal(pts: np.ndarray, tension: float, u: np.ndarray) -> np.ndarray:
    scale = (1.0 - tension) / 2.0
    tangents = np.zeros_like(pts)
    tangents[1:-1] = scale * (pts[2:] - pts[:-2])
    tangents[0] = scale * (pts[1] - pts[0])
    tangents[-1] = scale * (pts[-1] - pts[-2])
    return _hermite(pts, tangents, u)


def _clamped_bspline(pts: np.ndarray) -> BSpline:
    n = len(pts)
    k = min(3, n - 1)
    interior = np.linspace(0.0, 1.0, n - k + 1)[1:-1]
    knots = np.concatenate((np.zeros(k + 1), interior, np.ones(k + 1)))
    return BSpline(knots, pts, k)


def evaluate_curve(points, config: SmoothingConfig) -> np.ndarray:
    """Evaluate one run of control points as a sampled polyline.

    Returns an (m, 2) array. First and last output vertices equal the first
    and last input points for every mode and alpha.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        return pts.copy()
    if n == 1:
        return pts.copy()
    alpha = config.alpha
    if config.mode == CurveMode.BUNDLE and alpha >= 1.0:
        return np.vstack((pts[0], pts[-1]))
    if n == 2 or config.mode == CurveMode.NONE:
        return pts.copy()
    if alpha == 0.0 and config.mode in INTERPOLATING_MODES:
        return pts.copy()

    u = _sample_params(n, config.samples_per_segment)
    if config.mode == CurveMode.CATMULL_ROM:
        out = _catmull_rom(pts, alpha, u)
    elif config.mode == CurveMode.CARDINAL:
        out = _cardinal(pts, 1.0 - alpha, u)
    elif config.mode == CurveMode.NATURAL_CUBIC:
        spline = CubicSpline(np.arange(n), pts, axis=0, bc_type="natural")
        out = alpha * spline(u) + (1.0 - alpha) * _polyline_at(pts, u)
    elif config.mode == CurveMode.CUBIC_BASIS:
        basis = _clamped_bspline(pts)
        out = alpha * basis(u / (n - 1)) + (1.0 - alpha) * _polyline_at(pts, u)
    elif config.mode == CurveMode.BUNDLE:
        basis = _clamped_bspline(pts)
        s = (u / (n - 1))[:, None]
        chord = pts[0] + s * (pts[-1] - pts[0])
        out = (1.0 - alpha) * basis(u / (n - 1)) + alpha * chord
    else:
        raise ValueError(f"unknown curve mode: {config.mode}")

    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


@dataclass(frozen=True)
class ControlRun:
    """Positioned control points of one unbroken stretch of a window."""

    start_slot: int
    points: np.ndarray
    flags: np.ndarray  # slot state per point (measured / interpolated)


@dataclass
class TraceLine:
    animal: str
    window: TimeWindow
    runs: list[np.ndarray] = field(default_factory=list)
    sources: list[ControlRun] = field(default_factory=list)

    @property
    def vertices(self) -> np.ndarray:
        if not self.runs:
            return np.empty((0, 2))
        return np.vstack(self.runs)


def control_points(dataset: Dataset, animal: str, window: TimeWindow) -> list[ControlRun]:
    """Positioned slot positions in slot order, split at unpositioned slots."""
    dataset.check_window(window)
    track = dataset.track(animal)
    lo, hi = window.start_slot, window.end_slot + 1
    state = track.state[lo:hi]
    positioned = np.flatnonzero(state != UNAVAILABLE)
    runs: list[ControlRun] = []
    if positioned.size == 0:
        return runs
    breaks = np.flatnonzero(np.diff(positioned) > 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [positioned.size - 1]))
    for s, e in zip(starts, ends):
        idx = positioned[s:e + 1] + lo
        runs.append(ControlRun(
            start_slot=int(idx[0]),
            points=np.column_stack((track.x[idx], track.y[idx])),
            flags=track.state[idx].copy(),
        ))
    return runs


def trace_line(dataset: Dataset, animal: str, window: TimeWindow,
               config: SmoothingConfig) -> TraceLine:
    """Smoothed trace of one animal over a window, one polyline per run."""
    sources = control_points(dataset, animal, window)
    line = TraceLine(animal=animal, window=window, sources=sources)
    for run in sources:
        line.runs.append(evaluate_curve(run.points, config))
    return line

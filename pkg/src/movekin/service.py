"""HTTP JSON API over one immutable dataset.

Responses are rendered through a fixed-order, fixed-precision serializer
(floats always at 6 decimals) so identical queries produce byte-identical
bodies; golden-file clients can diff responses directly. Errors are 4xx
with a machine-readable {"code", "message"} body. The dataset is loaded
once at startup; only the view store accepts writes, serialized through
a single lock.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading

import numpy as np
from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware

from . import gapfill, relatedness, smoothing
from .model import Dataset, TimeWindow, iso_utc, season_of, time_of
from .relatedness import Trend, trend_sign

# Display constants for the spatial uncertainty encoding (meters).
RADIUS_BASE = 60.0
RADIUS_GROWTH = 40.0
RADIUS_CAP = 400.0

STATE_LABELS = {0: "measured", 1: "interpolated", 2: "unavailable"}

VIEW_FIELDS = (
    "name", "current_slot", "duration_slots", "curve_mode", "alpha",
    "species_filter", "selected_pair", "focal_animal",
)


def dump_json(payload) -> bytes:
    """Deterministic JSON: insertion-ordered keys, floats at 6 decimals."""
    parts: list[str] = []
    _write_json(payload, parts)
    return "".join(parts).encode("utf-8")


def _write_json(value, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif isinstance(value, bool):
        parts.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        parts.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        parts.append(f"{float(value):.6f}")
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif isinstance(value, dict):
        parts.append("{")
        for k, v in value.items():
            if parts[-1] != "{":
                parts.append(",")
            parts.append(json.dumps(str(k)))
            parts.append(":")
            _write_json(v, parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for v in value:
            if parts[-1] != "[":
                parts.append(",")
            _write_json(v, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(value)!r}")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _json_response(payload, status: int = 200) -> Response:
    return Response(content=dump_json(payload), status_code=status,
                    media_type="application/json")


class ViewStore:
    """Named view configs in one JSON document; last write wins."""

    def __init__(self, path: str | None):
        self.path = path
        self._lock = threading.Lock()
        self._views: dict[str, dict] = {}
        if path and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                self._views = json.load(fh).get("views", {})
        elif path:
            # Fail at startup, not on first PUT, if the store is unwritable.
            self._persist()

    def list(self) -> dict[str, dict]:
        with self._lock:
            return dict(self._views)

    def get(self, name: str) -> dict | None:
        with self._lock:
            return self._views.get(name)

    def put(self, name: str, config: dict) -> None:
        with self._lock:
            self._views[name] = config
            self._persist()

    def _persist(self) -> None:
        if not self.path:
            return
        directory = os.path.dirname(os.path.abspath(self.path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"views": self._views}, fh, indent=1, sort_keys=True)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _window_params(dataset: Dataset, from_slot: int | None, to_slot: int | None) -> TimeWindow:
    n = dataset.grid.slot_count
    lo = 0 if from_slot is None else from_slot
    hi = n - 1 if to_slot is None else to_slot
    if lo < 0 or hi >= n or lo > hi:
        raise ApiError(400, "window_out_of_range", f"window [{lo}, {hi}] outside grid of {n} slots")
    return TimeWindow(lo, hi)


def _check_slot(dataset: Dataset, t: int) -> None:
    if t < 0 or t >= dataset.grid.slot_count:
        raise ApiError(400, "time_out_of_range",
                       f"slot {t} outside grid of {dataset.grid.slot_count} slots")


def _check_animal(dataset: Dataset, animal: str) -> None:
    if animal not in dataset.tracks:
        raise ApiError(404, "unknown_animal", f"unknown animal: {animal}")


def _check_duration(dur: int) -> None:
    if dur < 1:
        raise ApiError(400, "bad_duration", "dur must be >= 1 slot")


def _window_payload(dataset: Dataset, window: TimeWindow) -> dict:
    return {
        "start_slot": window.start_slot,
        "end_slot": window.end_slot,
        "start_time": iso_utc(time_of(window.start_slot, dataset.grid)),
        "end_time": iso_utc(time_of(window.end_slot, dataset.grid)),
    }


def validate_view(dataset: Dataset, name: str, config: dict) -> dict:
    if not isinstance(config, dict):
        raise ApiError(400, "bad_view", "view config must be a JSON object")
    missing = [f for f in VIEW_FIELDS if f not in config]
    if missing:
        raise ApiError(400, "bad_view", f"missing fields: {', '.join(missing)}")
    if config["name"] != name:
        raise ApiError(400, "bad_view", "name field must match the URL name")
    n = dataset.grid.slot_count
    if not isinstance(config["current_slot"], int) or not (0 <= config["current_slot"] < n):
        raise ApiError(400, "bad_view", "current_slot outside grid")
    if not isinstance(config["duration_slots"], int) or config["duration_slots"] < 1:
        raise ApiError(400, "bad_view", "duration_slots must be >= 1")
    try:
        smoothing.CurveMode(config["curve_mode"])
    except ValueError:
        raise ApiError(400, "bad_view", f"unknown curve_mode: {config['curve_mode']}")
    alpha = config["alpha"]
    if not isinstance(alpha, (int, float)) or not (0.0 <= float(alpha) <= 1.0):
        raise ApiError(400, "bad_view", "alpha must be in [0, 1]")
    species = config["species_filter"]
    if not isinstance(species, list) or any(s not in dataset.species_registry for s in species):
        raise ApiError(400, "bad_view", "species_filter must list known species")
    pair = config["selected_pair"]
    if pair is not None:
        if (not isinstance(pair, list) or len(pair) != 2
                or any(a not in dataset.tracks for a in pair) or pair[0] == pair[1]):
            raise ApiError(400, "bad_view", "selected_pair must name two distinct animals")
    focal = config["focal_animal"]
    if focal is not None and focal not in dataset.tracks:
        raise ApiError(400, "bad_view", f"unknown focal animal: {focal}")
    return {f: config[f] for f in VIEW_FIELDS}


def create_app(dataset: Dataset, views_path: str | None = None) -> FastAPI:
    app = FastAPI(title="movekin", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "PUT", "OPTIONS"],
        allow_headers=["*"],
    )
    views = ViewStore(views_path)
    app.state.dataset = dataset
    app.state.views = views

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return _json_response({"code": exc.code, "message": exc.message}, exc.status)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return _json_response({"code": "bad_request", "message": str(exc.errors()[:1])}, 400)

    @app.get("/api/meta")
    def meta():
        census: dict[str, int] = {}
        for a in dataset.animal_ids:
            name = dataset.tracks[a].species.name
            census[name] = census.get(name, 0) + 1
        return _json_response({
            "grid": {
                "epoch": iso_utc(dataset.grid.epoch),
                "step_seconds": int(dataset.grid.step.total_seconds()),
                "slot_count": dataset.grid.slot_count,
            },
            "arena": {
                "min_x": dataset.arena.min_x,
                "min_y": dataset.arena.min_y,
                "max_x": dataset.arena.max_x,
                "max_y": dataset.arena.max_y,
                "m": dataset.M,
            },
            "census": {
                "total": len(dataset.tracks),
                "by_species": dict(sorted(census.items())),
            },
            "origin": list(dataset.origin) if dataset.origin else None,
        })

    @app.get("/api/animals")
    def animals():
        payload = []
        for a in dataset.animal_ids:
            track = dataset.tracks[a]
            payload.append({
                "id": a,
                "species": track.species.name,
                "role": track.species.role.value,
                "first_valid": track.first_valid,
                "last_valid": track.last_valid,
                "first_time": iso_utc(time_of(track.first_valid, dataset.grid)),
                "last_time": iso_utc(time_of(track.last_valid, dataset.grid)),
            })
        return _json_response({"animals": payload})

    @app.get("/api/snapshot")
    def snapshot(t: int, dur: int = 1):
        _check_slot(dataset, t)
        _check_duration(dur)
        when = time_of(t, dataset.grid)
        entities = []
        for a in dataset.animal_ids:
            track = dataset.tracks[a]
            slot = track.slot(t)
            entity = {
                "animal": a,
                "species": track.species.name,
                "role": track.species.role.value,
                "state": STATE_LABELS[slot.tag],
                "x": slot.position.x if slot.position else None,
                "y": slot.position.y if slot.position else None,
                "uncertainty": slot.uncertainty,
                "radius": (gapfill.spatial_uncertainty_radius(
                    slot.uncertainty, RADIUS_BASE, RADIUS_GROWTH, RADIUS_CAP)
                    if slot.position else None),
            }
            entities.append(entity)
        return _json_response({
            "slot": t,
            "time": iso_utc(when),
            "season": season_of(when),
            "duration_slots": dur,
            "entities": entities,
        })

    @app.get("/api/trace")
    def trace(animal: str, t: int, dur: int, mode: str = "none", alpha: float = 0.5,
              samples_per_segment: int = 8):
        _check_animal(dataset, animal)
        _check_slot(dataset, t)
        _check_duration(dur)
        try:
            curve_mode = smoothing.CurveMode(mode)
        except ValueError:
            raise ApiError(400, "bad_mode", f"unknown curve mode: {mode}")
        config = smoothing.SmoothingConfig(mode=curve_mode, alpha=alpha,
                                           samples_per_segment=samples_per_segment)
        window = TimeWindow(max(0, t - dur + 1), t)
        line = smoothing.trace_line(dataset, animal, window, config)
        return _json_response({
            "animal": animal,
            "window": _window_payload(dataset, window),
            "mode": curve_mode.value,
            "alpha": config.alpha,
            "runs": [
                {
                    "start_slot": src.start_slot,
                    "vertices": [[float(p[0]), float(p[1])] for p in run],
                }
                for src, run in zip(line.sources, line.runs)
            ],
            "source": [
                {
                    "slot": src.start_slot + k,
                    "x": float(src.points[k, 0]),
                    "y": float(src.points[k, 1]),
                    "state": STATE_LABELS[int(src.flags[k])],
                }
                for src in line.sources
                for k in range(len(src.points))
            ],
        })

    @app.get("/api/relatedness/pair")
    def relatedness_pair(i: str, j: str,
                         from_slot: int | None = Query(None, alias="from"),
                         to_slot: int | None = Query(None, alias="to")):
        if i == j:
            raise ApiError(400, "self_pair", "i and j must differ")
        _check_animal(dataset, i)
        _check_animal(dataset, j)
        window = _window_params(dataset, from_slot, to_slot)
        series = relatedness.pairwise_series(dataset, i, j, window)
        return _json_response({
            "pair": list(series.pair),
            "window": _window_payload(dataset, window),
            "m": dataset.M,
            "samples": [
                {"slot": s.slot, "value": s.value, "provenance": s.provenance.value}
                for s in series.samples
            ],
        })

    @app.get("/api/relatedness/matrix")
    def relatedness_matrix_endpoint(from_slot: int | None = Query(None, alias="from"),
                                    to_slot: int | None = Query(None, alias="to"),
                                    species: str | None = None):
        window = _window_params(dataset, from_slot, to_slot)
        subset = None
        if species:
            wanted = {s.strip() for s in species.split(",") if s.strip()}
            unknown = wanted - set(dataset.species_registry)
            if unknown:
                raise ApiError(400, "unknown_species", f"unknown species: {', '.join(sorted(unknown))}")
            subset = [a for a in dataset.animal_ids
                      if dataset.tracks[a].species.name in wanted]
        try:
            matrix = relatedness.relatedness_matrix(dataset, window, subset)
        except ValueError as exc:
            raise ApiError(400, "too_few_animals", str(exc))
        pairs = []
        for (a, b), entry in matrix.entries.items():
            pairs.append({
                "i": a,
                "j": b,
                "mean": entry.mean,
                "coverage": entry.coverage,
                "intensity": matrix.intensity(a, b),
            })
        return _json_response({
            "window": _window_payload(dataset, window),
            "m": dataset.M,
            "animals": matrix.animals,
            "pairs": pairs,
        })

    @app.get("/api/relatedness/ig")
    def relatedness_ig(focal: str, t: int, dur: int):
        _check_animal(dataset, focal)
        _check_slot(dataset, t)
        _check_duration(dur)
        summary = relatedness.ig_summary(dataset, focal, t, dur)
        neighbors = []
        for entry in summary.neighbors:
            trend = trend_sign(entry).value if entry.r_now is not None else None
            neighbors.append({
                "animal": entry.animal,
                "species": dataset.tracks[entry.animal].species.name,
                "r_now": entry.r_now,
                "r_min": entry.r_min,
                "r_max": entry.r_max,
                "coverage": entry.coverage,
                "trend": trend,
            })
        return _json_response({
            "focal": focal,
            "slot": summary.time,
            "window": _window_payload(dataset, summary.window),
            "m": dataset.M,
            "neighbors": neighbors,
        })

    @app.get("/api/uncertainty")
    def uncertainty(buckets: int = 200):
        if buckets < 1:
            raise ApiError(400, "bad_buckets", "buckets must be >= 1")
        rows = gapfill.availability_heatmap(dataset, buckets)
        return _json_response({
            "slot_count": dataset.grid.slot_count,
            "buckets": len(rows[0].cells) if rows else 0,
            "rows": [
                {
                    "animal": row.animal,
                    "first_valid": dataset.tracks[row.animal].first_valid,
                    "last_valid": dataset.tracks[row.animal].last_valid,
                    "cells": [
                        {"state": STATE_LABELS[c.state], "max_uncertainty": c.max_uncertainty}
                        for c in row.cells
                    ],
                }
                for row in rows
            ],
        })

    @app.get("/api/episodes")
    def episodes(i: str, j: str, threshold: float, min_len: int = 12, max_dip: int = 0):
        if i == j:
            raise ApiError(400, "self_pair", "i and j must differ")
        _check_animal(dataset, i)
        _check_animal(dataset, j)
        try:
            found = relatedness.detect_stable_episodes(dataset, i, j, threshold,
                                                       min_len, max_dip)
        except ValueError as exc:
            raise ApiError(400, "bad_threshold", str(exc))
        return _json_response({
            "pair": sorted([i, j]),
            "threshold": threshold,
            "episodes": [
                {
                    "start_slot": ep.start_slot,
                    "end_slot": ep.end_slot,
                    "length": ep.length,
                    "mean_relatedness": ep.mean_relatedness,
                }
                for ep in found
            ],
        })

    @app.get("/api/travel")
    def travel(animal: str, from_slot: int | None = Query(None, alias="from"),
               to_slot: int | None = Query(None, alias="to")):
        _check_animal(dataset, animal)
        window = _window_params(dataset, from_slot, to_slot)
        try:
            metrics = relatedness.travel_metrics(dataset, animal, window)
        except ValueError:
            raise ApiError(400, "no_positioned_slots",
                           f"{animal} has no positioned slots in the window")
        return _json_response({
            "animal": animal,
            "window": _window_payload(dataset, window),
            "path_length": metrics.path_length,
            "displacement": metrics.displacement,
        })

    @app.get("/api/views")
    def list_views():
        stored = views.list()
        return _json_response({"views": {name: stored[name] for name in sorted(stored)}})

    @app.get("/api/views/{name}")
    def get_view(name: str):
        config = views.get(name)
        if config is None:
            raise ApiError(404, "unknown_view", f"no view named {name!r}")
        return _json_response(config)

    @app.put("/api/views/{name}")
    async def put_view(name: str, request: Request):
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError:
            raise ApiError(400, "bad_view", "body must be JSON")
        config = validate_view(dataset, name, body)
        views.put(name, config)
        return _json_response(config)

    return app


def serve(dataset: Dataset, bind: str = "127.0.0.1:8000",
          views_path: str | None = None) -> None:
    """Run the API until interrupted."""
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(dataset, views_path)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")

"""Deterministic synthetic collar data with planted, recoverable signals.

The movement model is a correlated random walk with reflective arena
walls; it is test scaffolding, not an ecological model. On top of the
walk the generator plants three kinds of ground truth that the analysis
side must recover:

  * pairings: two animals tethered by a spring for a slot window, then
    actively separating for a few slots so the episode boundary is sharp
  * an encounter: a predator closing on a cohesive prey group, holding a
    ring distance, then leaving, so the pairwise series shows a clean
    increase / stable / decrease signature
  * gaps: interior runs of deleted fixes with recorded boundaries

Identical config (including seed) produces byte-identical CSV output.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

from .ingest import EARTH_RADIUS_M
from .model import DEFAULT_ROLES, Role, Species, iso_utc, parse_utc, utc

# Reference point the planar walk is exported around (southern-hemisphere
# reserve latitude; sets the season calendar downstream).
EXPORT_ORIGIN = (-24.0, 31.0)

MEAN_STEP_M = {"lion": 800.0, "wildebeest": 350.0, "zebra": 400.0}
DEFAULT_STEP_M = 400.0
HEADING_PERSISTENCE = 0.8
TURN_SIGMA = math.sqrt(-2.0 * math.log(HEADING_PERSISTENCE))
STEP_SHAPE = 4.0  # gamma shape for step lengths; scale = mean / shape

TETHER_CLOSURE = 0.95     # fraction of excess distance closed per slot
DISSOLVE_SLOTS = 4        # separation slots after a pairing window
DISSOLVE_FACTOR = 1.5     # separation step, in units of species mean step
ENCOUNTER_HOLD_DIST = 300.0
ENCOUNTER_LEAVE_SPEED = 1500.0
PREY_COHESION_DIST = 150.0
PREY_COHESION_CLOSURE = 0.8
NIGHT_START_HOUR = 21
NIGHT_END_HOUR = 6


class SynthConfigError(ValueError):
    """Raised for contradictory generator configuration."""


@dataclass(frozen=True)
class PlantedPairing:
    a: str
    b: str
    start_slot: int
    end_slot: int
    tether: float = 200.0


@dataclass(frozen=True)
class PlantedEncounter:
    predator: str
    prey: tuple[str, ...]
    start_slot: int
    approach_slots: int = 24
    hold_slots: int = 24
    leave_slots: int = 24

    @property
    def hold_start(self) -> int:
        return self.start_slot + self.approach_slots

    @property
    def leave_start(self) -> int:
        return self.hold_start + self.hold_slots

    @property
    def end_slot(self) -> int:
        return self.leave_start + self.leave_slots - 1


@dataclass
class SynthConfig:
    seed: int = 0
    animals: list[tuple[Species, int]] = field(default_factory=list)
    months: int = 30
    step: timedelta = timedelta(hours=2)
    arena_km: tuple[float, float] = (30.0, 40.0)
    start: datetime = field(default_factory=lambda: utc(2011, 1, 1))
    planted_pairings: list[PlantedPairing] = field(default_factory=list)
    planted_encounter: PlantedEncounter | None = None
    gap_rate: float = 0.0
    mean_gap_len: float = 3.0
    nocturnal_boost: float = 1.0
    lifespan_stagger: int = 0

    @property
    def slot_count(self) -> int:
        slots_per_day = int(round(timedelta(days=1) / self.step))
        return self.months * 30 * slots_per_day

    def animal_ids(self) -> list[str]:
        ids = []
        for species, count in self.animals:
            ids.extend(f"{species.name}-{k + 1}" for k in range(count))
        return ids


@dataclass
class GroundTruth:
    pairings: list[dict] = field(default_factory=list)
    encounter: dict | None = None
    injected_gaps: list[dict] = field(default_factory=list)
    lifespans: dict[str, tuple[int, int]] = field(default_factory=dict)
    slot_count: int = 0
    start: str = ""
    step_seconds: int = 0

    def to_json(self) -> str:
        payload = {
            "pairings": self.pairings,
            "encounter": self.encounter,
            "injected_gaps": self.injected_gaps,
            "lifespans": {a: list(v) for a, v in self.lifespans.items()},
            "slot_count": self.slot_count,
            "start": self.start,
            "step_seconds": self.step_seconds,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GroundTruth":
        raw = json.loads(text)
        return cls(
            pairings=raw["pairings"],
            encounter=raw["encounter"],
            injected_gaps=raw["injected_gaps"],
            lifespans={a: (v[0], v[1]) for a, v in raw["lifespans"].items()},
            slot_count=raw["slot_count"],
            start=raw["start"],
            step_seconds=raw["step_seconds"],
        )


def default_paper_shape(seed: int = 0) -> SynthConfig:
    """The study's census and cadence: 25 collars, 30 months, 2 h fixes."""
    return SynthConfig(
        seed=seed,
        animals=[
            (Species("lion", Role.PREDATOR), 5),
            (Species("wildebeest", Role.HERBIVORE), 10),
            (Species("zebra", Role.HERBIVORE), 10),
        ],
        months=30,
        step=timedelta(hours=2),
        arena_km=(30.0, 40.0),
        gap_rate=0.02,
        mean_gap_len=3.0,
        lifespan_stagger=36,
    )


def _validate(config: SynthConfig) -> None:
    if not config.animals:
        raise SynthConfigError("no animals configured")
    if any(count <= 0 for _, count in config.animals):
        raise SynthConfigError("species counts must be positive")
    if config.months <= 0:
        raise SynthConfigError("months must be positive")
    if not (0.0 <= config.gap_rate <= 1.0):
        raise SynthConfigError("gap_rate must be in [0, 1]")
    if config.mean_gap_len < 1.0:
        raise SynthConfigError("mean_gap_len must be >= 1")
    if config.lifespan_stagger < 0:
        raise SynthConfigError("lifespan_stagger must be >= 0")
    ids = set(config.animal_ids())
    n = config.slot_count
    for p in config.planted_pairings:
        if p.a == p.b:
            raise SynthConfigError(f"pairing of {p.a} with itself")
        if p.a not in ids or p.b not in ids:
            raise SynthConfigError(f"pairing references unknown animal: {p.a}, {p.b}")
        if not (0 <= p.start_slot <= p.end_slot < n):
            raise SynthConfigError(f"pairing window [{p.start_slot}, {p.end_slot}] outside grid")
        if p.tether <= 0:
            raise SynthConfigError("tether must be positive")
    enc = config.planted_encounter
    if enc is not None:
        if enc.predator in enc.prey:
            raise SynthConfigError("encounter predator cannot be its own prey")
        if enc.predator not in ids or any(a not in ids for a in enc.prey):
            raise SynthConfigError("encounter references unknown animal")
        if not enc.prey:
            raise SynthConfigError("encounter needs at least one prey animal")
        if min(enc.approach_slots, enc.hold_slots, enc.leave_slots) < 1:
            raise SynthConfigError("encounter phases must each span >= 1 slot")
        if not (0 <= enc.start_slot and enc.end_slot < n):
            raise SynthConfigError("encounter window outside grid")


def _is_night_hour(hour: int) -> bool:
    return hour >= NIGHT_START_HOUR or hour < NIGHT_END_HOUR


def _fold(values: np.ndarray, limit: float) -> np.ndarray:
    """Reflect arbitrary coordinates into [0, limit]."""
    v = np.abs(np.mod(values, 2.0 * limit))
    return np.where(v > limit, 2.0 * limit - v, v)


def _simulate(config: SynthConfig, rng: np.random.Generator):
    ids = config.animal_ids()
    species_of = {}
    for species, count in config.animals:
        for k in range(count):
            species_of[f"{species.name}-{k + 1}"] = species
    n_animals = len(ids)
    n_slots = config.slot_count
    width = config.arena_km[0] * 1000.0
    height = config.arena_km[1] * 1000.0
    index = {a: k for k, a in enumerate(ids)}
    mean_step = np.array([MEAN_STEP_M.get(species_of[a].name, DEFAULT_STEP_M) for a in ids])
    is_predator = np.array([species_of[a].role == Role.PREDATOR for a in ids])

    pos = np.empty((n_slots, n_animals, 2))
    pos[0, :, 0] = rng.uniform(0.0, width, n_animals)
    pos[0, :, 1] = rng.uniform(0.0, height, n_animals)
    heading = rng.uniform(0.0, 2.0 * math.pi, n_animals)

    pairings = config.planted_pairings
    enc = config.planted_encounter
    prey_idx = np.array([index[a] for a in enc.prey]) if enc else None
    pred_idx = index[enc.predator] if enc else None

    hour0 = config.start.hour
    step_hours = config.step.total_seconds() / 3600.0

    for t in range(1, n_slots):
        turn = rng.normal(0.0, TURN_SIGMA, n_animals)
        lengths = rng.gamma(STEP_SHAPE, 1.0, n_animals) * (mean_step / STEP_SHAPE)
        heading = heading + turn

        depart_hour = (hour0 + (t - 1) * step_hours) % 24.0
        if config.nocturnal_boost != 1.0 and _is_night_hour(int(depart_hour)):
            lengths = np.where(is_predator, lengths * config.nocturnal_boost, lengths)

        p = pos[t - 1] + np.column_stack((lengths * np.cos(heading), lengths * np.sin(heading)))

        if enc is not None and enc.start_slot <= t <= enc.end_slot:
            centroid = p[prey_idx].mean(axis=0)
            offsets = p[prey_idx] - centroid
            dist = np.linalg.norm(offsets, axis=1)
            far = dist > PREY_COHESION_DIST
            if far.any():
                pull = PREY_COHESION_CLOSURE * (dist[far] - PREY_COHESION_DIST)
                p[prey_idx[far]] -= offsets[far] * (pull / dist[far])[:, None]
            centroid = p[prey_idx].mean(axis=0)
            away = p[pred_idx] - centroid
            d = float(np.linalg.norm(away))
            direction = away / d if d > 0 else np.array([1.0, 0.0])
            if t < enc.hold_start:
                slots_left = enc.hold_start - t
                excess = max(d - ENCOUNTER_HOLD_DIST, 0.0)
                p[pred_idx] = centroid + direction * (d - excess / slots_left)
            elif t < enc.leave_start:
                p[pred_idx] = centroid + direction * ENCOUNTER_HOLD_DIST
            else:
                steps_out = t - enc.leave_start + 1
                p[pred_idx] = centroid + direction * (ENCOUNTER_HOLD_DIST
                                                      + ENCOUNTER_LEAVE_SPEED * steps_out)

        for pairing in pairings:
            ia, ib = index[pairing.a], index[pairing.b]
            if pairing.start_slot <= t <= pairing.end_slot:
                delta = p[ib] - p[ia]
                d = float(np.linalg.norm(delta))
                if d > pairing.tether:
                    shift = 0.5 * TETHER_CLOSURE * (d - pairing.tether) / d
                    p[ia] = p[ia] + delta * shift
                    p[ib] = p[ib] - delta * shift
            elif pairing.end_slot < t <= pairing.end_slot + DISSOLVE_SLOTS:
                delta = p[ib] - p[ia]
                d = float(np.linalg.norm(delta))
                direction = delta / d if d > 0 else np.array([1.0, 0.0])
                p[ia] = p[ia] - direction * DISSOLVE_FACTOR * mean_step[ia]
                p[ib] = p[ib] + direction * DISSOLVE_FACTOR * mean_step[ib]

        p[:, 0] = _fold(p[:, 0], width)
        p[:, 1] = _fold(p[:, 1], height)
        pos[t] = p

    return ids, species_of, pos


def _draw_lifespans(config: SynthConfig, ids: list[str], rng: np.random.Generator) -> dict[str, tuple[int, int]]:
    n = config.slot_count
    protected: set[str] = set()
    for p in config.planted_pairings:
        protected.update((p.a, p.b))
    if config.planted_encounter:
        protected.add(config.planted_encounter.predator)
        protected.update(config.planted_encounter.prey)

    lifespans = {}
    s = config.lifespan_stagger
    for a in ids:
        lead = int(rng.integers(0, s + 1)) if s else 0
        trail = int(rng.integers(0, s + 1)) if s else 0
        if a in protected:
            lead = trail = 0
        lifespans[a] = (lead, n - 1 - trail)
    # Anchor the timeline at the first emitted fix so config slot indices
    # survive the ingest round trip (its grid epoch is the earliest fix).
    min_lead = min(v[0] for v in lifespans.values())
    if min_lead:
        lifespans = {a: (lo - min_lead, hi) for a, (lo, hi) in lifespans.items()}
    return lifespans


def _inject_gaps(config: SynthConfig, ids: list[str],
                 lifespans: dict[str, tuple[int, int]],
                 rng: np.random.Generator) -> dict[str, list[tuple[int, int]]]:
    gaps: dict[str, list[tuple[int, int]]] = {a: [] for a in ids}
    if config.gap_rate <= 0.0:
        return gaps
    start_p = config.gap_rate / config.mean_gap_len
    geom_p = 1.0 / config.mean_gap_len
    for a in ids:
        first, last = lifespans[a]
        s = first + 1
        while s <= last - 1:
            if rng.random() < start_p:
                length = int(rng.geometric(geom_p))
                e = min(s + length - 1, last - 1)
                gaps[a].append((s, e))
                s = e + 2  # keep one measured slot between gaps
            else:
                s += 1
    return gaps


def generate(config: SynthConfig) -> tuple[str, GroundTruth]:
    """Run the simulation; return the collar CSV text and its ground truth."""
    _validate(config)
    rng = np.random.default_rng(config.seed)
    ids, species_of, pos = _simulate(config, rng)
    lifespans = _draw_lifespans(config, ids, rng)
    gaps = _inject_gaps(config, ids, lifespans, rng)

    lat0, lon0 = EXPORT_ORIGIN
    k = EARTH_RADIUS_M * math.pi / 180.0
    cos0 = math.cos(math.radians(lat0))
    step_seconds = int(config.step.total_seconds())

    timestamps = [iso_utc(config.start + timedelta(seconds=t * step_seconds))
                  for t in range(config.slot_count)]
    out = io.StringIO()
    out.write("animal_id,species,timestamp,lat,lon\n")
    for a_idx, a in enumerate(ids):
        first, last = lifespans[a]
        deleted = np.zeros(config.slot_count, dtype=bool)
        for s, e in gaps[a]:
            deleted[s:e + 1] = True
        species = species_of[a].name
        lat = lat0 + pos[:, a_idx, 1] / k
        lon = lon0 + pos[:, a_idx, 0] / (k * cos0)
        for t in range(first, last + 1):
            if deleted[t]:
                continue
            out.write(f"{a},{species},{timestamps[t]},{lat[t]:.7f},{lon[t]:.7f}\n")

    truth = GroundTruth(
        pairings=[{"pair": sorted((p.a, p.b)), "start_slot": p.start_slot,
                   "end_slot": p.end_slot, "tether": p.tether}
                  for p in config.planted_pairings],
        encounter=None,
        injected_gaps=[{"animal": a, "start_slot": s, "end_slot": e}
                       for a in ids for (s, e) in gaps[a]],
        lifespans=lifespans,
        slot_count=config.slot_count,
        start=iso_utc(config.start),
        step_seconds=step_seconds,
    )
    enc = config.planted_encounter
    if enc is not None:
        truth.encounter = {
            "predator": enc.predator,
            "prey": list(enc.prey),
            "increase": {"start_slot": enc.start_slot, "end_slot": enc.hold_start - 1},
            "stable": {"start_slot": enc.hold_start, "end_slot": enc.leave_start - 1},
            "decrease": {"start_slot": enc.leave_start, "end_slot": enc.end_slot},
        }
    return out.getvalue(), truth


def config_from_json(text: str) -> SynthConfig:
    """Build a SynthConfig from its JSON document form (see README)."""
    raw = json.loads(text)
    animals = []
    for entry in raw.get("species", []):
        role = Role(entry.get("role", DEFAULT_ROLES.get(entry["name"], Role.OTHER)))
        animals.append((Species(entry["name"], role), int(entry["count"])))
    pairings = [
        PlantedPairing(a=p["a"], b=p["b"], start_slot=int(p["start_slot"]),
                       end_slot=int(p["end_slot"]), tether=float(p.get("tether", 200.0)))
        for p in raw.get("planted_pairings", [])
    ]
    enc = None
    if raw.get("planted_encounter"):
        e = raw["planted_encounter"]
        enc = PlantedEncounter(
            predator=e["predator"], prey=tuple(e["prey"]), start_slot=int(e["start_slot"]),
            approach_slots=int(e.get("approach_slots", 24)),
            hold_slots=int(e.get("hold_slots", 24)),
            leave_slots=int(e.get("leave_slots", 24)),
        )
    return SynthConfig(
        seed=int(raw.get("seed", 0)),
        animals=animals,
        months=int(raw.get("months", 30)),
        step=timedelta(hours=float(raw.get("step_hours", 2.0))),
        arena_km=tuple(raw.get("arena_km", (30.0, 40.0))),
        start=parse_utc(raw["start"]) if "start" in raw else utc(2011, 1, 1),
        planted_pairings=pairings,
        planted_encounter=enc,
        gap_rate=float(raw.get("gap_rate", 0.0)),
        mean_gap_len=float(raw.get("mean_gap_len", 3.0)),
        nocturnal_boost=float(raw.get("nocturnal_boost", 1.0)),
        lifespan_stagger=int(raw.get("lifespan_stagger", 0)),
    )

import type {
  IGSummary,
  Matrix,
  PairSeries,
  Snapshot,
  UncertaintyRows,
  ViewConfig,
} from "../src/types.js";

export const GRID = {
  epoch: "2011-01-01T00:00:00Z",
  step_seconds: 7200,
  slot_count: 360,
};

export const ARENA = {
  min_x: 0, min_y: 0, max_x: 30000, max_y: 40000, m: 50000,
};

export function pairSeries(days = 30): PairSeries {
  const samples = [];
  const n = days * 12;
  for (let slot = 0; slot < n; slot++) {
    samples.push({
      slot,
      value: 30000 + 15000 * Math.sin(slot / 20),
      provenance: "both-measured" as const,
    });
  }
  return {
    pair: ["lion-1", "lion-2"],
    window: {
      start_slot: 0, end_slot: n - 1,
      start_time: "2011-01-01T00:00:00Z", end_time: "2011-01-31T00:00:00Z",
    },
    m: 50000,
    samples,
  };
}

/** Neighbor walked straight toward the focal: r_now equals r_max. */
export function approachingIG(): IGSummary {
  return {
    focal: "lion-1",
    slot: 100,
    window: {
      start_slot: 91, end_slot: 100,
      start_time: "2011-01-08T14:00:00Z", end_time: "2011-01-09T08:00:00Z",
    },
    m: 50000,
    neighbors: [
      {
        animal: "zebra-1", species: "zebra",
        r_now: 42000, r_min: 18000, r_max: 42000,
        coverage: 1.0, trend: "approaching",
      },
      {
        animal: "zebra-2", species: "zebra",
        r_now: 26000, r_min: 22000, r_max: 34000,
        coverage: 1.0, trend: "receding",
      },
    ],
  };
}

export function snapshot(): Snapshot {
  return {
    slot: 100,
    time: "2011-01-09T08:00:00Z",
    season: "summer",
    duration_slots: 12,
    entities: [
      { animal: "lion-1", species: "lion", role: "predator", state: "measured",
        x: 15000, y: 20000, uncertainty: 0, radius: 60 },
      { animal: "zebra-1", species: "zebra", role: "herbivore", state: "interpolated",
        x: 18000, y: 22000, uncertainty: 3, radius: 180 },
      { animal: "zebra-2", species: "zebra", role: "herbivore", state: "unavailable",
        x: null, y: null, uncertainty: 0, radius: null },
    ],
  };
}

export function matrix(): Matrix {
  return {
    window: {
      start_slot: 89, end_slot: 100,
      start_time: "2011-01-08T10:00:00Z", end_time: "2011-01-09T08:00:00Z",
    },
    m: 50000,
    animals: ["lion-1", "zebra-1", "zebra-2"],
    pairs: [
      { i: "lion-1", j: "zebra-1", mean: 45000, coverage: 1.0, intensity: 0.9 },
      { i: "lion-1", j: "zebra-2", mean: null, coverage: 0.0, intensity: 0.0 },
      { i: "zebra-1", j: "zebra-2", mean: 20000, coverage: 0.8, intensity: 0.4 },
    ],
  };
}

export function uncertaintyRows(): UncertaintyRows {
  return {
    slot_count: 360,
    buckets: 4,
    rows: [
      {
        animal: "lion-1", first_valid: 0, last_valid: 359,
        cells: [
          { state: "measured", max_uncertainty: 0 },
          { state: "interpolated", max_uncertainty: 2 },
          { state: "measured", max_uncertainty: 0 },
          { state: "unavailable", max_uncertainty: 0 },
        ],
      },
      {
        animal: "zebra-1", first_valid: 10, last_valid: 350,
        cells: [
          { state: "unavailable", max_uncertainty: 0 },
          { state: "measured", max_uncertainty: 0 },
          { state: "interpolated", max_uncertainty: 5 },
          { state: "measured", max_uncertainty: 0 },
        ],
      },
    ],
  };
}

export function fullViewConfig(name = "case-study"): ViewConfig {
  return {
    name,
    current_slot: 123,
    duration_slots: 36,
    curve_mode: "bundle",
    alpha: 0.75,
    species_filter: ["lion", "zebra"],
    selected_pair: ["lion-1", "lion-2"],
    focal_animal: "zebra-1",
  };
}

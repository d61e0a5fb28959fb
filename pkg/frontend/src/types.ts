/** Wire types for the movekin JSON API. */

export interface GridMeta {
  epoch: string;
  step_seconds: number;
  slot_count: number;
}

export interface ArenaMeta {
  min_x: number;
  min_y: number;
  max_x: number;
  max_y: number;
  m: number;
}

export interface Meta {
  grid: GridMeta;
  arena: ArenaMeta;
  census: { total: number; by_species: Record<string, number> };
  origin: [number, number] | null;
}

export interface AnimalInfo {
  id: string;
  species: string;
  role: "predator" | "herbivore" | "other";
  first_valid: number;
  last_valid: number;
  first_time: string;
  last_time: string;
}

export type SlotStateName = "measured" | "interpolated" | "unavailable";

export interface SnapshotEntity {
  animal: string;
  species: string;
  role: string;
  state: SlotStateName;
  x: number | null;
  y: number | null;
  uncertainty: number;
  radius: number | null;
}

export interface Snapshot {
  slot: number;
  time: string;
  season: string;
  duration_slots: number;
  entities: SnapshotEntity[];
}

export interface WindowInfo {
  start_slot: number;
  end_slot: number;
  start_time: string;
  end_time: string;
}

export interface TraceRun {
  start_slot: number;
  vertices: [number, number][];
}

export interface Trace {
  animal: string;
  window: WindowInfo;
  mode: string;
  alpha: number;
  runs: TraceRun[];
  source: { slot: number; x: number; y: number; state: SlotStateName }[];
}

export interface PairSample {
  slot: number;
  value: number | null;
  provenance: "both-measured" | "some-interpolated" | "undefined";
}

export interface PairSeries {
  pair: [string, string];
  window: WindowInfo;
  m: number;
  samples: PairSample[];
}

export interface MatrixPair {
  i: string;
  j: string;
  mean: number | null;
  coverage: number;
  intensity: number;
}

export interface Matrix {
  window: WindowInfo;
  m: number;
  animals: string[];
  pairs: MatrixPair[];
}

export interface IGNeighbor {
  animal: string;
  species: string;
  r_now: number | null;
  r_min: number;
  r_max: number;
  coverage: number;
  trend: "approaching" | "receding" | "mixed" | null;
}

export interface IGSummary {
  focal: string;
  slot: number;
  window: WindowInfo;
  m: number;
  neighbors: IGNeighbor[];
}

export interface UncertaintyCell {
  state: SlotStateName;
  max_uncertainty: number;
}

export interface UncertaintyRow {
  animal: string;
  first_valid: number;
  last_valid: number;
  cells: UncertaintyCell[];
}

export interface UncertaintyRows {
  slot_count: number;
  buckets: number;
  rows: UncertaintyRow[];
}

export type CurveModeName =
  | "cubic-basis"
  | "natural-cubic"
  | "bundle"
  | "cardinal"
  | "catmull-rom"
  | "none";

/** The eight persisted state fields. */
export interface ViewConfig {
  name: string;
  current_slot: number;
  duration_slots: number;
  curve_mode: CurveModeName;
  alpha: number;
  species_filter: string[];
  selected_pair: [string, string] | null;
  focal_animal: string | null;
}

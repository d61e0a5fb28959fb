/** Central UI state mirroring the persisted ViewConfig fields, plus
 *  transient interaction state (playback, brush, hidden animals).
 *
 *  Every mutation notifies subscribers exactly once, so each affected
 *  panel issues at most one refetch per change. */

import type { CurveModeName, ViewConfig } from "./types.js";

export interface Playback {
  playing: boolean;
  speed: number; // slots advanced per second of wall time
}

export interface UIState {
  current_slot: number;
  duration_slots: number;
  curve_mode: CurveModeName;
  alpha: number;
  species_filter: string[];
  selected_pair: [string, string] | null;
  focal_animal: string | null;
  playback: Playback;
  brush: [number, number] | null;
  hidden_animals: string[];
}

export type Listener = (state: UIState, changed: (keyof UIState)[]) => void;

export function defaultState(): UIState {
  return {
    current_slot: 0,
    duration_slots: 12,
    curve_mode: "none",
    alpha: 0.5,
    species_filter: [],
    selected_pair: null,
    focal_animal: null,
    playback: { playing: false, speed: 4 },
    brush: null,
    hidden_animals: [],
  };
}

export class Store {
  private state: UIState = defaultState();
  private listeners: Listener[] = [];
  slotCount = 1;

  get(): UIState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<UIState>): void {
    const changed: (keyof UIState)[] = [];
    for (const key of Object.keys(patch) as (keyof UIState)[]) {
      if (JSON.stringify(this.state[key]) !== JSON.stringify(patch[key])) {
        changed.push(key);
      }
    }
    if (!changed.length) return;
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state, changed);
  }

  setSlot(slot: number): void {
    this.update({ current_slot: Math.max(0, Math.min(this.slotCount - 1, Math.round(slot))) });
  }

  /** Focusing an animal halts any ongoing animation; clicking the focal
   *  animal again dismisses the overlay. */
  toggleFocal(animal: string): void {
    if (this.state.focal_animal === animal) {
      this.update({ focal_animal: null });
    } else {
      this.update({
        focal_animal: animal,
        playback: { ...this.state.playback, playing: false },
      });
    }
  }

  toggleHidden(animal: string): void {
    const hidden = this.state.hidden_animals.includes(animal)
      ? this.state.hidden_animals.filter((a) => a !== animal)
      : [...this.state.hidden_animals, animal];
    this.update({ hidden_animals: hidden });
  }

  toViewConfig(name: string): ViewConfig {
    const s = this.state;
    return {
      name,
      current_slot: s.current_slot,
      duration_slots: s.duration_slots,
      curve_mode: s.curve_mode,
      alpha: s.alpha,
      species_filter: [...s.species_filter],
      selected_pair: s.selected_pair ? [...s.selected_pair] : null,
      focal_animal: s.focal_animal,
    };
  }

  applyViewConfig(config: ViewConfig): void {
    this.update({
      current_slot: config.current_slot,
      duration_slots: config.duration_slots,
      curve_mode: config.curve_mode,
      alpha: config.alpha,
      species_filter: [...config.species_filter],
      selected_pair: config.selected_pair ? [...config.selected_pair] : null,
      focal_animal: config.focal_animal,
    });
  }
}

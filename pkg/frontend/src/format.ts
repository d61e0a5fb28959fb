/** Time arithmetic between the wall clock and grid slots. */

import type { GridMeta } from "./types.js";

/** Parse "28/02/2011 00:00" (DD/MM/YYYY HH:mm, UTC) to a Date, or null. */
export function parseTypedTime(text: string): Date | null {
  const match = /^(\d{2})\/(\d{2})\/(\d{4})[ T](\d{2}):(\d{2})$/.exec(text.trim());
  if (!match) return null;
  const [, dd, mm, yyyy, hh, min] = match;
  const date = new Date(Date.UTC(+yyyy, +mm - 1, +dd, +hh, +min));
  return Number.isNaN(date.getTime()) ? null : date;
}

export function slotOfDate(date: Date, grid: GridMeta): number {
  const epochMs = Date.parse(grid.epoch);
  const slot = Math.round((date.getTime() - epochMs) / (grid.step_seconds * 1000));
  return Math.max(0, Math.min(grid.slot_count - 1, slot));
}

export function dateOfSlot(slot: number, grid: GridMeta): Date {
  return new Date(Date.parse(grid.epoch) + slot * grid.step_seconds * 1000);
}

export function formatSlotTime(slot: number, grid: GridMeta): string {
  const d = dateOfSlot(slot, grid);
  const pad = (n: number) => String(n).padStart(2, "0");
  return (
    `${pad(d.getUTCDate())}/${pad(d.getUTCMonth() + 1)}/${d.getUTCFullYear()} ` +
    `${pad(d.getUTCHours())}:${pad(d.getUTCMinutes())}`
  );
}

export const SLOTS_PER_DAY = (grid: GridMeta): number =>
  Math.round(86_400 / grid.step_seconds);

/** Species colors follow the animals' natural appearance. */
export const SPECIES_COLORS: Record<string, string> = {
  lion: "#e0820a",
  wildebeest: "#8d99ae",
  zebra: "#1c1c1c",
};

export function speciesColor(species: string, role: string): string {
  if (species in SPECIES_COLORS) return SPECIES_COLORS[species];
  return role === "predator" ? "#c2541b" : "#5f7470";
}

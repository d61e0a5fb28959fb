/** Global timeline: scrub bar, typed time input, season readout, and
 *  arrow-key day jumps that preserve the time of day. */

import { SLOTS_PER_DAY, formatSlotTime, parseTypedTime, slotOfDate } from "./format.js";
import { clear, svgEl } from "./svg.js";
import type { GridMeta } from "./types.js";

export interface TimelineCallbacks {
  onScrub: (slot: number) => void;
}

export class Timeline {
  private grid: GridMeta | null = null;
  private slot = 0;
  private svg: SVGSVGElement;
  private input: HTMLInputElement;
  private readout: HTMLSpanElement;
  private seasonEl: HTMLSpanElement;
  private width = 720;

  constructor(private root: HTMLElement, private callbacks: TimelineCallbacks) {
    root.classList.add("timeline");
    this.svg = svgEl("svg", {
      width: this.width, height: 26, role: "slider", "data-part": "scrub",
    }) as SVGSVGElement;
    root.appendChild(this.svg);
    this.svg.addEventListener("pointerdown", (ev) => this.scrubTo(ev));

    const controls = document.createElement("div");
    controls.className = "timeline-controls";
    root.appendChild(controls);

    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.placeholder = "DD/MM/YYYY HH:mm";
    this.input.setAttribute("data-part", "time-input");
    controls.appendChild(this.input);
    this.input.addEventListener("change", () => this.typeTime(this.input.value));

    this.readout = document.createElement("span");
    this.readout.setAttribute("data-part", "time-readout");
    controls.appendChild(this.readout);

    this.seasonEl = document.createElement("span");
    this.seasonEl.setAttribute("data-part", "season");
    this.seasonEl.className = "season";
    controls.appendChild(this.seasonEl);
  }

  setGrid(grid: GridMeta): void {
    this.grid = grid;
    this.render();
  }

  setSlot(slot: number): void {
    this.slot = slot;
    this.render();
  }

  /** Season text comes from the snapshot payload (API-derived). */
  setSeason(season: string): void {
    this.seasonEl.textContent = season;
  }

  typeTime(text: string): boolean {
    if (!this.grid) return false;
    const date = parseTypedTime(text);
    if (!date) return false;
    this.callbacks.onScrub(slotOfDate(date, this.grid));
    return true;
  }

  /** Arrow keys jump whole days, preserving the time of day. */
  handleKey(key: string): boolean {
    if (!this.grid) return false;
    const day = SLOTS_PER_DAY(this.grid);
    if (key === "ArrowRight") {
      this.callbacks.onScrub(Math.min(this.grid.slot_count - 1, this.slot + day));
      return true;
    }
    if (key === "ArrowLeft") {
      this.callbacks.onScrub(Math.max(0, this.slot - day));
      return true;
    }
    return false;
  }

  private scrubTo(ev: PointerEvent): void {
    if (!this.grid) return;
    const rect = this.svg.getBoundingClientRect();
    const frac = rect.width > 0 ? (ev.clientX - rect.left) / rect.width : 0;
    const slot = Math.round(frac * (this.grid.slot_count - 1));
    this.callbacks.onScrub(Math.max(0, Math.min(this.grid.slot_count - 1, slot)));
  }

  private render(): void {
    if (!this.grid) return;
    clear(this.svg);
    svgEl("rect", {
      x: 0, y: 10, width: this.width, height: 6, fill: "#d8d4cb", rx: 3,
    }, this.svg);
    const frac = this.grid.slot_count > 1 ? this.slot / (this.grid.slot_count - 1) : 0;
    svgEl("line", {
      x1: frac * this.width, x2: frac * this.width, y1: 2, y2: 24,
      stroke: "#c0392b", "stroke-width": 2, "data-part": "cursor",
    }, this.svg);
    this.readout.textContent = `${formatSlotTime(this.slot, this.grid)} (slot ${this.slot})`;
  }
}

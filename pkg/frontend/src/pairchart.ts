/** Pairwise relatedness chart: vertically mirrored halves. The bottom
 *  half always shows the full fetched series and carries the brush; the
 *  top half zooms to the brushed slot range. Brushing re-renders only the
 *  top half, never the bottom data. A red vertical line marks the global
 *  current time in both halves. */

import { clear, polylinePath, svgEl } from "./svg.js";
import type { PairSeries } from "./types.js";

export interface PairChartCallbacks {
  onBrush: (range: [number, number] | null) => void;
}

const WIDTH = 720;
const HALF = 110;
const GAP = 16;
const HEIGHT = HALF * 2 + GAP;

export class PairChart {
  private svg: SVGSVGElement;
  private topLayer: SVGGElement;
  private bottomLayer: SVGGElement;
  private brushLayer: SVGGElement;
  private markerLayer: SVGGElement;
  private series: PairSeries | null = null;
  private brush: [number, number] | null = null;
  private currentSlot = 0;
  private defaultWindow = 12;
  private dragStartX: number | null = null;

  constructor(private root: HTMLElement, private callbacks: PairChartCallbacks) {
    root.classList.add("pair-chart");
    this.svg = svgEl("svg", {
      width: WIDTH, height: HEIGHT, "data-part": "pair-chart",
    }) as SVGSVGElement;
    root.appendChild(this.svg);
    this.topLayer = svgEl("g", { "data-layer": "detail" }, this.svg) as SVGGElement;
    this.bottomLayer = svgEl("g", { "data-layer": "overview" }, this.svg) as SVGGElement;
    this.brushLayer = svgEl("g", { "data-layer": "brush" }, this.svg) as SVGGElement;
    this.markerLayer = svgEl("g", { "data-layer": "markers" }, this.svg) as SVGGElement;

    this.svg.addEventListener("pointerdown", (ev) => this.dragStart(ev));
    this.svg.addEventListener("pointermove", (ev) => this.dragMove(ev));
    this.svg.addEventListener("pointerup", (ev) => this.dragEnd(ev));
  }

  setData(series: PairSeries): void {
    this.series = series;
    this.renderBottom();
    this.renderTop();
    this.renderMarker();
  }

  setCurrentSlot(slot: number, defaultWindow: number): void {
    this.currentSlot = slot;
    this.defaultWindow = defaultWindow;
    if (!this.brush) this.renderTop();
    this.renderMarker();
  }

  /** Brush in slot coordinates; null clears. Only the top half re-renders. */
  setBrush(range: [number, number] | null): void {
    this.brush = range;
    this.renderTop();
    this.renderBrushRect();
  }

  getBrush(): [number, number] | null {
    return this.brush;
  }

  detailPointCount(): number {
    return this.topLayer.querySelectorAll('[data-part="detail-point"]').length;
  }

  private slotRange(): [number, number] {
    const s = this.series!;
    return [s.window.start_slot, s.window.end_slot];
  }

  private xOf(slot: number, lo: number, hi: number): number {
    const span = Math.max(hi - lo, 1);
    return ((slot - lo) / span) * WIDTH;
  }

  private slotAtX(x: number): number {
    const [lo, hi] = this.slotRange();
    const frac = Math.max(0, Math.min(1, x / WIDTH));
    return Math.round(lo + frac * (hi - lo));
  }

  private segments(lo: number, hi: number): [number, number][][] {
    // contiguous defined runs only; undefined stretches break the line
    const out: [number, number][][] = [];
    let run: [number, number][] = [];
    for (const sample of this.series!.samples) {
      if (sample.slot < lo || sample.slot > hi) continue;
      if (sample.value === null) {
        if (run.length) out.push(run);
        run = [];
      } else {
        run.push([sample.slot, sample.value]);
      }
    }
    if (run.length) out.push(run);
    return out;
  }

  private renderBottom(): void {
    clear(this.bottomLayer);
    if (!this.series) return;
    const [lo, hi] = this.slotRange();
    const m = this.series.m;
    const y0 = HALF + GAP;
    svgEl("rect", {
      x: 0, y: y0, width: WIDTH, height: HALF,
      fill: "#fbfaf7", stroke: "#ddd8cc", "data-part": "overview-bg",
    }, this.bottomLayer);
    // mirrored: value 0 at the top edge of the lower half, m at the bottom
    for (const run of this.segments(lo, hi)) {
      const points = run.map(([slot, value]): [number, number] =>
        [this.xOf(slot, lo, hi), y0 + (value / m) * HALF]);
      svgEl("path", {
        d: polylinePath(points), fill: "none", stroke: "#1b6ca8",
        "stroke-width": 1, "data-part": "overview-line",
      }, this.bottomLayer);
    }
  }

  private renderTop(): void {
    clear(this.topLayer);
    if (!this.series) return;
    const [seriesLo, seriesHi] = this.slotRange();
    let [lo, hi] = this.brush ?? this.defaultRange();
    lo = Math.max(lo, seriesLo);
    hi = Math.min(hi, seriesHi);
    if (hi < lo) [lo, hi] = [seriesLo, seriesHi];
    const m = this.series.m;
    svgEl("rect", {
      x: 0, y: 0, width: WIDTH, height: HALF,
      fill: "#ffffff", stroke: "#ddd8cc", "data-part": "detail-bg",
    }, this.topLayer);
    for (const run of this.segments(lo, hi)) {
      const points = run.map(([slot, value]): [number, number] =>
        [this.xOf(slot, lo, hi), HALF - (value / m) * HALF]);
      svgEl("path", {
        d: polylinePath(points), fill: "none", stroke: "#1b6ca8",
        "stroke-width": 1.2, "data-part": "detail-line",
      }, this.topLayer);
      for (const [x, y] of points) {
        svgEl("circle", {
          cx: x, cy: y, r: 2.4, fill: "#1b6ca8", "data-part": "detail-point",
        }, this.topLayer);
      }
    }
    const label = svgEl("text", {
      x: 6, y: 12, "font-size": 10, fill: "#555", "data-part": "detail-range",
    }, this.topLayer);
    label.textContent = `slots ${lo}-${hi}`;
  }

  private defaultRange(): [number, number] {
    // no brush: a trailing window around the global current time
    return [this.currentSlot - this.defaultWindow + 1, this.currentSlot];
  }

  private renderBrushRect(): void {
    clear(this.brushLayer);
    if (!this.series || !this.brush) return;
    const [lo, hi] = this.slotRange();
    const x0 = this.xOf(this.brush[0], lo, hi);
    const x1 = this.xOf(this.brush[1], lo, hi);
    svgEl("rect", {
      x: Math.min(x0, x1), y: HALF + GAP,
      width: Math.max(Math.abs(x1 - x0), 1), height: HALF,
      fill: "#1b6ca8", "fill-opacity": 0.15, stroke: "#1b6ca8",
      "data-part": "brush-rect",
    }, this.brushLayer);
  }

  private renderMarker(): void {
    clear(this.markerLayer);
    if (!this.series) return;
    const [lo, hi] = this.slotRange();
    if (this.currentSlot < lo || this.currentSlot > hi) return;
    const x = this.xOf(this.currentSlot, lo, hi);
    svgEl("line", {
      x1: x, x2: x, y1: HALF + GAP, y2: HALF + GAP + HALF,
      stroke: "#c0392b", "stroke-width": 1.5, "data-part": "time-marker",
    }, this.markerLayer);
    const top = this.brush ?? this.defaultRange();
    if (this.currentSlot >= top[0] && this.currentSlot <= top[1]) {
      const tx = this.xOf(this.currentSlot, Math.max(top[0], lo), Math.min(top[1], hi));
      svgEl("line", {
        x1: tx, x2: tx, y1: 0, y2: HALF,
        stroke: "#c0392b", "stroke-width": 1.5, "data-part": "time-marker-top",
      }, this.markerLayer);
    }
  }

  private dragStart(ev: PointerEvent): void {
    const { y, x } = this.localXY(ev);
    if (y < HALF + GAP) return; // brush lives on the lower half only
    this.dragStartX = x;
  }

  private dragMove(ev: PointerEvent): void {
    if (this.dragStartX === null) return;
    const { x } = this.localXY(ev);
    const a = this.slotAtX(Math.min(this.dragStartX, x));
    const b = this.slotAtX(Math.max(this.dragStartX, x));
    this.brush = [a, b];
    this.renderBrushRect();
  }

  private dragEnd(ev: PointerEvent): void {
    if (this.dragStartX === null) return;
    const { x } = this.localXY(ev);
    const a = this.slotAtX(Math.min(this.dragStartX, x));
    const b = this.slotAtX(Math.max(this.dragStartX, x));
    this.dragStartX = null;
    const range: [number, number] | null = a === b ? null : [a, b];
    this.setBrush(range);
    this.callbacks.onBrush(range);
  }

  private localXY(ev: PointerEvent): { x: number; y: number } {
    const rect = this.svg.getBoundingClientRect();
    return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  }
}

/** Availability strip: one heatmap row per animal. Cell color encodes
 *  worst state in the bucket; interpolated cells deepen with the maximum
 *  uncertainty degree. Clicking a label hides/shows that animal in the
 *  main view; small arrowheads mark the selected pair's rows. */

import { clear, svgEl } from "./svg.js";
import type { UncertaintyRows } from "./types.js";

const CELL_W = 3;
const ROW_H = 14;
const LABEL_W = 110;

export interface StripCallbacks {
  onToggleAnimal: (animal: string) => void;
}

export class UncertaintyStrip {
  private svg: SVGSVGElement;
  private data: UncertaintyRows | null = null;
  private selectedPair: [string, string] | null = null;
  private hidden = new Set<string>();

  constructor(private root: HTMLElement, private callbacks: StripCallbacks) {
    root.classList.add("uncertainty-strip");
    this.svg = svgEl("svg", { width: 10, height: 10, "data-part": "strip" }) as SVGSVGElement;
    root.appendChild(this.svg);
  }

  setData(data: UncertaintyRows): void {
    this.data = data;
    this.render();
  }

  setSelectedPair(pair: [string, string] | null): void {
    this.selectedPair = pair;
    this.render();
  }

  setHidden(hidden: string[]): void {
    this.hidden = new Set(hidden);
    this.render();
  }

  private cellColor(state: string, maxU: number): string {
    if (state === "unavailable") return "#e8e4da";
    if (state === "measured") return "#2e86ab";
    // interpolated: deeper color at higher degree
    const depth = Math.min(1, 0.25 + 0.15 * maxU);
    return `rgba(224, 130, 20, ${depth.toFixed(3)})`;
  }

  private render(): void {
    if (!this.data) return;
    clear(this.svg);
    const { rows, buckets } = this.data;
    this.svg.setAttribute("width", String(LABEL_W + buckets * CELL_W + 10));
    this.svg.setAttribute("height", String(rows.length * ROW_H + 4));
    rows.forEach((row, idx) => {
      const y = idx * ROW_H + 2;
      const selected = this.selectedPair?.includes(row.animal) ?? false;
      if (selected) {
        const marker = svgEl("text", {
          x: 2, y: y + 9, "font-size": 9, fill: "#c0392b",
          "data-part": "pair-marker", "data-animal": row.animal,
        }, this.svg);
        marker.textContent = "▷";
      }
      const label = svgEl("text", {
        x: 14, y: y + 9, "font-size": 9,
        fill: this.hidden.has(row.animal) ? "#b5ab99" : "#333",
        "data-label": row.animal,
        cursor: "pointer",
      }, this.svg);
      label.textContent = row.animal;
      label.addEventListener("click", () => this.callbacks.onToggleAnimal(row.animal));
      row.cells.forEach((cell, c) => {
        svgEl("rect", {
          x: LABEL_W + c * CELL_W, y, width: CELL_W, height: ROW_H - 3,
          fill: this.cellColor(cell.state, cell.max_uncertainty),
          "data-row": row.animal, "data-state": cell.state,
        }, this.svg);
      });
    });
  }
}

/** Individual-to-group overlay: concentric circles around the focal
 *  animal, one per neighbor, radius proportional to current relatedness;
 *  a capped radial bar spans [r_min, r_max] along each neighbor's bearing.
 *
 *  Reading rule: the bar segment inside the r_now circle (down to r_min)
 *  is the positive side; the segment outside (up to r_max) is negative.
 *  A longer inner segment means the neighbor has been approaching. */

import { clear, svgEl } from "./svg.js";
import type { IGNeighbor, IGSummary } from "./types.js";

export interface OverlayGeometry {
  cx: number;
  cy: number;
  maxRadiusPx: number;
  angles: Map<string, number>;
}

export class IGOverlay {
  constructor(private layer: SVGGElement) {}

  clear(): void {
    clear(this.layer);
  }

  render(summary: IGSummary, geometry: OverlayGeometry): void {
    this.clear();
    const scale = geometry.maxRadiusPx / summary.m;
    svgEl("circle", {
      cx: geometry.cx, cy: geometry.cy, r: 4,
      fill: "#c0392b", "data-part": "focal-dot",
    }, this.layer);

    let fallbackAngle = -Math.PI / 2;
    for (const neighbor of summary.neighbors) {
      if (neighbor.r_now === null) continue;
      const angle = geometry.angles.get(neighbor.animal) ?? (fallbackAngle += 0.5);
      this.renderNeighbor(neighbor, geometry, scale, angle);
    }
  }

  private renderNeighbor(
    neighbor: IGNeighbor,
    geometry: OverlayGeometry,
    scale: number,
    angle: number,
  ): void {
    const { cx, cy } = geometry;
    const rNow = neighbor.r_now! * scale;
    const rMin = neighbor.r_min * scale;
    const rMax = neighbor.r_max * scale;
    const innerLen = rNow - rMin;
    const outerLen = rMax - rNow;
    const g = svgEl("g", {
      "data-neighbor": neighbor.animal,
      "data-trend": neighbor.trend ?? "",
      "data-inner-len": innerLen.toFixed(3),
      "data-outer-len": outerLen.toFixed(3),
    }, this.layer);

    svgEl("circle", {
      cx, cy, r: Math.max(rNow, 0.5),
      fill: "none", stroke: "#7a6f5d", "stroke-opacity": 0.55,
      "data-part": "proximity-circle",
    }, g);

    const dir = [Math.cos(angle), Math.sin(angle)];
    const at = (r: number): [number, number] => [cx + dir[0] * r, cy + dir[1] * r];
    const [x0, y0] = at(rMin);
    const [x1, y1] = at(rMax);
    svgEl("line", {
      x1: x0, y1: y0, x2: x1, y2: y1,
      stroke: "#2f4858", "stroke-width": 2, "data-part": "range-bar",
    }, g);
    // perpendicular caps at both ends
    const capHalf = 4;
    const perp = [-dir[1], dir[0]];
    for (const [r, part] of [[rMin, "cap-min"], [rMax, "cap-max"]] as const) {
      const [px, py] = at(r);
      svgEl("line", {
        x1: px - perp[0] * capHalf, y1: py - perp[1] * capHalf,
        x2: px + perp[0] * capHalf, y2: py + perp[1] * capHalf,
        stroke: "#2f4858", "stroke-width": 2, "data-part": part,
      }, g);
    }
    const [nx, ny] = at(rNow);
    svgEl("circle", {
      cx: nx, cy: ny, r: 3, fill: "#2f4858", "data-part": "now-marker",
    }, g);
    const label = svgEl("text", {
      x: nx + 5, y: ny - 5, "font-size": 9, fill: "#2f4858",
      "data-part": "trend-label",
    }, g);
    label.textContent = `${neighbor.animal} (${neighbor.trend ?? "?"})`;
  }
}

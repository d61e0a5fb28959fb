/** Arena view: species-colored animal circles with uncertainty encoding,
 *  trace lines with break gaps, a scale bar, and the i-G overlay anchor.
 *
 *  Entity encoding: measured = solid fill; interpolated = dashed outline,
 *  radius from the API's display radius, opacity falling with the degree;
 *  unavailable = no circle (the off-air list names it instead). */

import { speciesColor } from "./format.js";
import { IGOverlay } from "./igoverlay.js";
import { clear, polylinePath, svgEl } from "./svg.js";
import type { ArenaMeta, IGSummary, Snapshot, SnapshotEntity, Trace } from "./types.js";

export interface MainViewCallbacks {
  onEntityClick: (animal: string) => void;
}

export class MainView {
  private svg: SVGSVGElement;
  private traceLayer: SVGGElement;
  private entityLayer: SVGGElement;
  private overlayLayer: SVGGElement;
  private offAir: HTMLDivElement;
  private arena: ArenaMeta | null = null;
  private snapshot: Snapshot | null = null;
  private traces: Trace[] = [];
  private hidden: Set<string> = new Set();
  readonly overlay: IGOverlay;
  private size = 640;

  constructor(private root: HTMLElement, private callbacks: MainViewCallbacks) {
    root.classList.add("main-view");
    this.svg = svgEl("svg", {
      width: this.size, height: this.size, "data-part": "arena",
    }) as SVGSVGElement;
    root.appendChild(this.svg);
    this.traceLayer = svgEl("g", { "data-layer": "traces" }, this.svg) as SVGGElement;
    this.entityLayer = svgEl("g", { "data-layer": "entities" }, this.svg) as SVGGElement;
    this.overlayLayer = svgEl("g", { "data-layer": "ig-overlay" }, this.svg) as SVGGElement;
    this.overlay = new IGOverlay(this.overlayLayer);
    this.offAir = document.createElement("div");
    this.offAir.setAttribute("data-part", "off-air");
    this.offAir.className = "off-air";
    root.appendChild(this.offAir);
  }

  setArena(arena: ArenaMeta): void {
    this.arena = arena;
    this.render();
  }

  setHidden(hidden: string[]): void {
    this.hidden = new Set(hidden);
    this.render();
  }

  setSnapshot(snapshot: Snapshot): void {
    this.snapshot = snapshot;
    this.render();
  }

  setTraces(traces: Trace[]): void {
    this.traces = traces;
    this.render();
  }

  setOverlay(summary: IGSummary | null): void {
    if (!summary || !this.snapshot || !this.arena) {
      this.overlay.clear();
      return;
    }
    const focal = this.snapshot.entities.find((e) => e.animal === summary.focal);
    if (!focal || focal.x === null || focal.y === null) {
      this.overlay.clear();
      return;
    }
    const neighborAngles = new Map<string, number>();
    const [fx, fy] = this.project(focal.x, focal.y);
    for (const entity of this.snapshot.entities) {
      if (entity.x === null || entity.y === null) continue;
      const [ex, ey] = this.project(entity.x, entity.y);
      neighborAngles.set(entity.animal, Math.atan2(ey - fy, ex - fx));
    }
    this.overlay.render(summary, { cx: fx, cy: fy, maxRadiusPx: 180, angles: neighborAngles });
  }

  project(x: number, y: number): [number, number] {
    const a = this.arena;
    if (!a) return [0, 0];
    const spanX = Math.max(a.max_x - a.min_x, 1);
    const spanY = Math.max(a.max_y - a.min_y, 1);
    const scale = Math.min(this.size / spanX, this.size / spanY);
    // planar y grows north; SVG y grows down
    return [(x - a.min_x) * scale, this.size - (y - a.min_y) * scale];
  }

  private metersPerPixel(): number {
    const a = this.arena;
    if (!a) return 1;
    const spanX = Math.max(a.max_x - a.min_x, 1);
    const spanY = Math.max(a.max_y - a.min_y, 1);
    return 1 / Math.min(this.size / spanX, this.size / spanY);
  }

  private render(): void {
    if (!this.arena) return;
    clear(this.traceLayer);
    clear(this.entityLayer);
    this.renderFrame();
    this.renderTraces();
    this.renderEntities();
  }

  private renderFrame(): void {
    const [x0, y0] = this.project(this.arena!.min_x, this.arena!.max_y);
    const [x1, y1] = this.project(this.arena!.max_x, this.arena!.min_y);
    svgEl("rect", {
      x: x0, y: y0, width: x1 - x0, height: y1 - y0,
      fill: "#f7f5ef", stroke: "#b9b2a2", "data-part": "arena-rect",
    }, this.traceLayer);
    // 5 km scale bar
    const barMeters = 5000;
    const px = barMeters / this.metersPerPixel();
    const g = svgEl("g", { "data-part": "scale-bar" }, this.traceLayer);
    svgEl("line", {
      x1: 12, y1: this.size - 14, x2: 12 + px, y2: this.size - 14,
      stroke: "#444", "stroke-width": 2,
    }, g);
    const label = svgEl("text", {
      x: 12, y: this.size - 20, "font-size": 10, fill: "#444",
    }, g);
    label.textContent = "5 km";
  }

  private renderTraces(): void {
    for (const trace of this.traces) {
      if (this.hidden.has(trace.animal)) continue;
      const entity = this.snapshot?.entities.find((e) => e.animal === trace.animal);
      const color = entity ? speciesColor(entity.species, entity.role) : "#888";
      for (const run of trace.runs) {
        const points = run.vertices.map(([x, y]) => this.project(x, y));
        svgEl("path", {
          d: polylinePath(points),
          fill: "none",
          stroke: color,
          "stroke-width": 1.2,
          "stroke-opacity": 0.75,
          "data-trace": trace.animal,
        }, this.traceLayer);
      }
    }
  }

  private renderEntities(): void {
    const off: string[] = [];
    if (!this.snapshot) return;
    for (const entity of this.snapshot.entities) {
      if (this.hidden.has(entity.animal)) continue;
      if (entity.state === "unavailable" || entity.x === null || entity.y === null) {
        off.push(entity.animal);
        continue;
      }
      this.renderEntity(entity);
    }
    this.offAir.textContent = off.length ? `no data: ${off.join(", ")}` : "";
  }

  private renderEntity(entity: SnapshotEntity): void {
    const [cx, cy] = this.project(entity.x!, entity.y!);
    const color = speciesColor(entity.species, entity.role);
    // glyph encoding: the API's display radius (60 m baseline) maps to a
    // 5 px dot, growing with the uncertainty degree
    const radiusPx = Math.max(3, (entity.radius ?? 60) / 12);
    const interpolated = entity.state === "interpolated";
    const opacity = interpolated
      ? Math.max(0.25, 1 - 0.12 * entity.uncertainty)
      : 1.0;
    const circle = svgEl("circle", {
      cx, cy, r: radiusPx,
      fill: interpolated ? "none" : color,
      stroke: color,
      "stroke-width": interpolated ? 1.5 : 1,
      opacity,
      "data-entity": entity.animal,
      "data-state": entity.state,
      "data-uncertainty": entity.uncertainty,
    }, this.entityLayer);
    if (interpolated) {
      circle.setAttribute("stroke-dasharray", "4 3");
    }
    circle.addEventListener("click", () => this.callbacks.onEntityClick(entity.animal));
    const label = svgEl("text", {
      x: cx + radiusPx + 2, y: cy + 3, "font-size": 9, fill: "#333",
      "data-entity-label": entity.animal,
    }, this.entityLayer);
    label.textContent = entity.animal;
  }
}

/** Chord view: animals on a ring, one ribbon per pair with any defined
 *  relatedness in the window; bolder and more saturated at higher
 *  normalized intensity. Self-ribbons never exist (the matrix has no
 *  diagonal). */

import { speciesColor } from "./format.js";
import { clear, svgEl } from "./svg.js";
import type { Matrix } from "./types.js";

const SIZE = 320;
const RING = SIZE / 2 - 30;

export class ChordView {
  private svg: SVGSVGElement;
  private speciesOf = new Map<string, { species: string; role: string }>();

  constructor(private root: HTMLElement) {
    root.classList.add("chord-view");
    this.svg = svgEl("svg", {
      width: SIZE, height: SIZE, "data-part": "chord",
    }) as SVGSVGElement;
    root.appendChild(this.svg);
  }

  setSpecies(animals: { id: string; species: string; role: string }[]): void {
    this.speciesOf = new Map(animals.map((a) => [a.id, { species: a.species, role: a.role }]));
  }

  setData(matrix: Matrix): void {
    clear(this.svg);
    const angles = new Map<string, number>();
    const n = matrix.animals.length;
    matrix.animals.forEach((animal, k) => {
      angles.set(animal, (2 * Math.PI * k) / n - Math.PI / 2);
    });
    const cx = SIZE / 2;
    const cy = SIZE / 2;
    const at = (animal: string): [number, number] => {
      const a = angles.get(animal)!;
      return [cx + RING * Math.cos(a), cy + RING * Math.sin(a)];
    };

    for (const pair of matrix.pairs) {
      if (pair.mean === null || pair.intensity <= 0) continue;
      const [x0, y0] = at(pair.i);
      const [x1, y1] = at(pair.j);
      svgEl("path", {
        d: `M${x0.toFixed(1)},${y0.toFixed(1)} Q${cx},${cy} ${x1.toFixed(1)},${y1.toFixed(1)}`,
        fill: "none",
        stroke: "#1b6ca8",
        "stroke-width": (0.4 + 4.6 * pair.intensity).toFixed(2),
        "stroke-opacity": (0.12 + 0.88 * pair.intensity).toFixed(3),
        "data-ribbon": `${pair.i}|${pair.j}`,
        "data-intensity": pair.intensity.toFixed(6),
      }, this.svg);
    }

    for (const animal of matrix.animals) {
      const [x, y] = at(animal);
      const info = this.speciesOf.get(animal) ?? { species: "", role: "other" };
      svgEl("circle", {
        cx: x, cy: y, r: 5,
        fill: speciesColor(info.species, info.role),
        "data-node": animal,
      }, this.svg);
      const angle = angles.get(animal)!;
      const label = svgEl("text", {
        x: cx + (RING + 12) * Math.cos(angle),
        y: cy + (RING + 12) * Math.sin(angle),
        "font-size": 8,
        "text-anchor": "middle",
        fill: "#333",
      }, this.svg);
      label.textContent = animal;
    }
  }
}

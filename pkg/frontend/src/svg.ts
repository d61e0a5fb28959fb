/** Tiny SVG helpers; all rendering is plain DOM so it runs under jsdom. */

export const SVG_NS = "http://www.w3.org/2000/svg";

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
  parent?: Element,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  parent?.appendChild(el);
  return el;
}

export function clear(el: Element): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

export function polylinePath(points: [number, number][]): string {
  if (!points.length) return "";
  const [first, ...rest] = points;
  return (
    `M${first[0].toFixed(2)},${first[1].toFixed(2)}` +
    rest.map(([x, y]) => `L${x.toFixed(2)},${y.toFixed(2)}`).join("")
  );
}

/** Minimal deterministic SVG building blocks shared by all figure kinds. */

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  return f;
}

/** Pad a data extent so points do not sit on the frame. */
export function extent(values: number[], pad = 0.05): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const m = (hi - lo) * pad;
  return [lo - m, hi + m];
}

/** Fixed-precision coordinate formatting keeps renders byte-identical. */
export const fmt = (v: number): string => v.toFixed(2);

export function tag(name: string, attrs: Record<string, string | number>, body = ""): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${v}"`)
    .join("");
  return body === "" ? `<${name}${a}/>` : `<${name}${a}>${body}</${name}>`;
}

export function polylinePath(points: Array<[number, number]>): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join("");
}

export function frame(x: number, y: number, w: number, h: number): string {
  return tag("rect", {
    class: "frame",
    x: fmt(x),
    y: fmt(y),
    width: fmt(w),
    height: fmt(h),
    fill: "none",
    stroke: "#333",
  });
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n${body}\n</svg>\n`
  );
}

/** Deterministic class-name to color assignment (sorted order). */
export function colorMap(classes: string[]): Map<string, string> {
  const palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
  const map = new Map<string, string>();
  [...new Set(classes)].sort().forEach((c, i) => map.set(c, palette[i % palette.length]));
  return map;
}

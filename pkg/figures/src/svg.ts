// Minimal deterministic SVG assembly: plain string building, fixed number
// formatting, no dependence on object iteration order or locale.

export function fmt(value: number): string {
  const s = value.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

export function group(translateX: number, translateY: number, children: string[], cls?: string): string {
  const klass = cls === undefined ? "" : ` class="${cls}"`;
  return [`<g${klass} transform="translate(${fmt(translateX)},${fmt(translateY)})">`, ...children, "</g>"].join(
    "\n",
  );
}

export function rect(
  x: number,
  y: number,
  width: number,
  height: number,
  fill: string,
  cls?: string,
): string {
  const klass = cls === undefined ? "" : ` class="${cls}"`;
  return `<rect${klass} x="${fmt(x)}" y="${fmt(y)}" width="${fmt(width)}" height="${fmt(height)}" fill="${fill}"/>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function polyline(points: Array<[number, number]>, stroke: string, dashed = false): string {
  const attr = dashed ? ' stroke-dasharray="5,3"' : "";
  const coords = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${coords}" fill="none" stroke="${stroke}" stroke-width="1.3"${attr}/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  options: { size?: number; anchor?: "start" | "middle" | "end"; fill?: string } = {},
): string {
  const size = options.size ?? 11;
  const anchor = options.anchor ?? "start";
  const fill = options.fill ?? "#222";
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" fill="${fill}">${escapeText(content)}</text>`;
}

export interface Scale {
  (value: number): number;
  lo: number;
  hi: number;
}

export function linearScale(lo: number, hi: number, rangeLo: number, rangeHi: number): Scale {
  const span = hi - lo;
  const scale = ((value: number) =>
    rangeLo + ((value - lo) / span) * (rangeHi - rangeLo)) as Scale;
  scale.lo = lo;
  scale.hi = hi;
  return scale;
}

export function ticks(lo: number, hi: number, count = 5): number[] {
  const out: number[] = [];
  for (let i = 0; i < count; i += 1) {
    out.push(lo + ((hi - lo) * i) / (count - 1));
  }
  return out;
}

export function tickLabel(value: number): string {
  if (value === 0) return "0";
  const s = value.toPrecision(3);
  // trim trailing zeros without switching to exponent notation
  return s.includes("e") ? s : String(Number(s));
}

/** Small SVG scene builder with linear/log scales and axes.
 *
 * Rendering is a pure function of the input data: no timestamps, no
 * randomness, stable number formatting.
 */

export type Scale = {
  toPx: (v: number) => number;
  domain: [number, number];
  kind: "linear" | "log";
};

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    toPx: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    domain,
    kind: "linear",
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error("log scale needs a positive domain");
  }
  const [r0, r1] = range;
  const span = Math.log(d1) - Math.log(d0) || 1;
  return {
    toPx: (v) => r0 + ((Math.log(v) - Math.log(d0)) / span) * (r1 - r0),
    domain,
    kind: "log",
  };
}

export function extent(values: number[], pad = 0.05): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || Math.abs(hi) || 1;
  return [lo - pad * span, hi + pad * span];
}

const fmt = (v: number) => {
  const r = Math.round(v * 1e6) / 1e6;
  return Object.is(r, -0) ? "0" : String(r);
};

export function ticks(scale: Scale, count = 5): number[] {
  const [d0, d1] = scale.domain;
  if (scale.kind === "log") {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(d0)); Math.pow(10, e) <= d1 * 1.0001; e++) {
      out.push(Math.pow(10, e));
    }
    return out.length >= 2 ? out : [d0, d1];
  }
  const span = d1 - d0;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const scaled = span / count / step;
  const mult = scaled >= 5 ? 10 : scaled >= 2 ? 5 : scaled >= 1 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(d0 / s) * s; v <= d1 + 1e-12; v += s) {
    out.push(Math.round(v * 1e9) / 1e9);
  }
  return out;
}

export class SvgScene {
  readonly width: number;
  readonly height: number;
  readonly margin = { left: 62, right: 16, top: 34, bottom: 46 };
  private parts: string[] = [];

  constructor(width = 640, height = 440) {
    this.width = width;
    this.height = height;
  }

  get plotRangeX(): [number, number] {
    return [this.margin.left, this.width - this.margin.right];
  }

  get plotRangeY(): [number, number] {
    return [this.height - this.margin.bottom, this.margin.top];
  }

  add(part: string): void {
    this.parts.push(part);
  }

  line(x1: number, y1: number, x2: number, y2: number, style: string): void {
    this.add(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${style}/>`,
    );
  }

  polyline(points: Array<[number, number]>, style: string): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polyline points="${pts}" fill="none" ${style}/>`);
  }

  circle(x: number, y: number, r: number, style: string): void {
    this.add(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" ${style}/>`);
  }

  cross(x: number, y: number, r: number, style: string): void {
    this.line(x - r, y - r, x + r, y + r, style);
    this.line(x - r, y + r, x + r, y - r, style);
  }

  diamond(x: number, y: number, r: number, style: string): void {
    const pts = `${fmt(x)},${fmt(y - r)} ${fmt(x + r)},${fmt(y)} ${fmt(x)},${fmt(y + r)} ${fmt(x - r)},${fmt(y)}`;
    this.add(`<polygon points="${pts}" ${style}/>`);
  }

  polygon(points: Array<[number, number]>, style: string): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polygon points="${pts}" ${style}/>`);
  }

  text(x: number, y: number, content: string, style = ""): void {
    this.add(`<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" ${style}>${escapeXml(content)}</text>`);
  }

  errorBarY(x: number, y: number, err: number, yScale: Scale, style: string): void {
    const y0 = yScale.toPx(y - err);
    const y1 = yScale.toPx(y + err);
    this.line(x, y0, x, y1, style);
    this.line(x - 3, y0, x + 3, y0, style);
    this.line(x - 3, y1, x + 3, y1, style);
  }

  errorBarX(x: number, y: number, err: number, xScale: Scale, style: string): void {
    const x0 = xScale.toPx(x - err);
    const x1 = xScale.toPx(x + err);
    this.line(x0, y, x1, y, style);
    this.line(x0, y - 3, x0, y + 3, style);
    this.line(x1, y - 3, x1, y + 3, style);
  }

  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string, title = ""): void {
    const [x0, x1] = this.plotRangeX;
    const [y0, y1] = this.plotRangeY;
    const frame = 'stroke="#222" stroke-width="1"';
    this.line(x0, y0, x1, y0, frame);
    this.line(x0, y0, x0, y1, frame);
    for (const t of ticks(xScale)) {
      const px = xScale.toPx(t);
      this.line(px, y0, px, y0 + 5, frame);
      this.text(px, y0 + 20, fmt(t), 'font-size="11" text-anchor="middle"');
    }
    for (const t of ticks(yScale)) {
      const py = yScale.toPx(t);
      this.line(x0 - 5, py, x0, py, frame);
      this.text(x0 - 8, py + 4, fmt(t), 'font-size="11" text-anchor="end"');
    }
    this.text((x0 + x1) / 2, this.height - 10, xLabel, 'font-size="13" text-anchor="middle"');
    this.add(
      `<text x="16" y="${fmt((y0 + y1) / 2)}" font-family="sans-serif" font-size="13" ` +
        `text-anchor="middle" transform="rotate(-90 16 ${fmt((y0 + y1) / 2)})">${escapeXml(yLabel)}</text>`,
    );
    if (title) {
      this.text((x0 + x1) / 2, 20, title, 'font-size="14" text-anchor="middle" font-weight="bold"');
    }
  }

  legend(entries: Array<{ label: string; style: string }>, x?: number, y?: number): void {
    let yy = y ?? this.margin.top + 8;
    const xx = x ?? this.width - this.margin.right - 130;
    for (const e of entries) {
      this.line(xx, yy - 4, xx + 22, yy - 4, e.style);
      this.text(xx + 28, yy, e.label, 'font-size="11"');
      yy += 16;
    }
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

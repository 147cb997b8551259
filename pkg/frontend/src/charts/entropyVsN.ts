/** Steady-state entropy versus system size, log-linear, one line per p
 * (main-text figure style); error bars come from the raw_std column. */

import type { AggregateRow } from "../schemas.js";
import { SERIES_COLORS, SvgScene, extent, linearScale, logScale } from "../svg.js";

export interface EntropyVsNOptions {
  quantity: string;
  eta: number;
}

export function renderEntropyVsN(rows: AggregateRow[], opts: EntropyVsNOptions): string {
  const sel = rows.filter((r) => r.quantity === opts.quantity && r.eta === opts.eta);
  if (sel.length === 0) {
    throw new Error(`no aggregate rows for quantity=${opts.quantity} eta=${opts.eta}`);
  }
  const byP = new Map<number, AggregateRow[]>();
  for (const r of sel) {
    const list = byP.get(r.p) ?? [];
    list.push(r);
    byP.set(r.p, list);
  }
  const scene = new SvgScene();
  const ns = sel.map((r) => r.N);
  const x = logScale([Math.min(...ns) / 1.15, Math.max(...ns) * 1.15], scene.plotRangeX);
  const y = linearScale(
    extent(sel.flatMap((r) => [r.mean - r.raw_std, r.mean + r.raw_std])),
    scene.plotRangeY,
  );
  scene.axes(x, y, "system size N", `${opts.quantity} (bits)`,
             `${opts.quantity} vs N (eta=${opts.eta})`);
  const legend: Array<{ label: string; style: string }> = [];
  [...byP.keys()].sort((a, b) => a - b).forEach((p, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const style = `stroke="${color}" stroke-width="1.6"`;
    const pts = byP.get(p)!.sort((a, b) => a.N - b.N);
    scene.polyline(pts.map((r) => [x.toPx(r.N), y.toPx(r.mean)]), style);
    for (const r of pts) {
      scene.errorBarY(x.toPx(r.N), r.mean, r.raw_std, y, style);
      scene.circle(x.toPx(r.N), y.toPx(r.mean), 2.6, `fill="${color}"`);
    }
    legend.push({ label: `p = ${p}`, style });
  });
  scene.legend(legend);
  return scene.render();
}

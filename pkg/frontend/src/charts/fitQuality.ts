/** chi^2/dof of the extensive, area, and log fits versus measurement rate. */

import type { FitRow } from "../schemas.js";
import { SERIES_COLORS, SvgScene, linearScale, logScale } from "../svg.js";

export interface FitQualityOptions {
  quantity: string;
  eta: number;
}

const LAW_ORDER = ["extensive", "area", "log"];

export function renderFitQuality(rows: FitRow[], opts: FitQualityOptions): string {
  const sel = rows.filter(
    (r) => r.quantity === opts.quantity && r.eta === opts.eta && !r.restricted,
  );
  if (sel.length === 0) {
    throw new Error(`no fit rows for quantity=${opts.quantity} eta=${opts.eta}`);
  }
  const scene = new SvgScene();
  const ps = sel.map((r) => r.p);
  const chis = sel.map((r) => Math.max(r.chi2_per_dof, 1e-12));
  const x = linearScale([Math.min(...ps) - 0.01, Math.max(...ps) + 0.01], scene.plotRangeX);
  const y = logScale(
    [Math.min(...chis) / 2, Math.max(...chis) * 2],
    scene.plotRangeY,
  );
  scene.axes(x, y, "measurement rate p", "chi2 / dof",
             `fit quality: ${opts.quantity} (eta=${opts.eta})`);
  const unitStyle = 'stroke="#888" stroke-width="1" stroke-dasharray="5,4"';
  scene.line(scene.plotRangeX[0], y.toPx(1), scene.plotRangeX[1], y.toPx(1), unitStyle);
  const legend: Array<{ label: string; style: string }> = [];
  LAW_ORDER.forEach((law, i) => {
    const pts = sel
      .filter((r) => r.law === law)
      .sort((a, b) => a.p - b.p);
    if (pts.length === 0) return;
    const color = SERIES_COLORS[i];
    const style = `stroke="${color}" stroke-width="1.6"`;
    scene.polyline(
      pts.map((r) => [x.toPx(r.p), y.toPx(Math.max(r.chi2_per_dof, 1e-12))]),
      style,
    );
    for (const r of pts) {
      scene.circle(x.toPx(r.p), y.toPx(Math.max(r.chi2_per_dof, 1e-12)), 2.6, `fill="${color}"`);
    }
    legend.push({ label: law, style });
  });
  scene.legend(legend);
  return scene.render();
}

/** ln F(p) with linear interpolation, the faint largest-N-dropped companion
 * series, and the extracted critical rate with its error band. */

import type { CriticalRow, FitRow } from "../schemas.js";
import { lnFSeries } from "../schemas.js";
import { SvgScene, extent, linearScale } from "../svg.js";

export interface FTestOptions {
  quantity: string;
  eta: number;
  critical?: CriticalRow[];
}

export function renderFTest(rows: FitRow[], opts: FTestOptions): string {
  const full = lnFSeries(rows, opts.quantity, opts.eta, false);
  if (full.length === 0) {
    throw new Error(`no ln F points for quantity=${opts.quantity} eta=${opts.eta}`);
  }
  const restricted = lnFSeries(rows, opts.quantity, opts.eta, true);
  const scene = new SvgScene();
  const ps = full.map((d) => d.p);
  const ys = [...full, ...restricted].map((d) => d.lnF);
  const x = linearScale([Math.min(...ps) - 0.01, Math.max(...ps) + 0.01], scene.plotRangeX);
  const y = linearScale(extent([...ys, 0]), scene.plotRangeY);
  scene.axes(x, y, "measurement rate p", "ln F",
             `F-test: ${opts.quantity} (eta=${opts.eta})`);
  scene.line(scene.plotRangeX[0], y.toPx(0), scene.plotRangeX[1], y.toPx(0),
             'stroke="#888" stroke-width="1" stroke-dasharray="5,4"');

  const faint = 'stroke="#9ec9e8" stroke-width="1.4"';
  if (restricted.length > 0) {
    scene.polyline(restricted.map((d) => [x.toPx(d.p), y.toPx(d.lnF)]), faint);
    for (const d of restricted) {
      scene.diamond(x.toPx(d.p), y.toPx(d.lnF), 3.4, 'fill="#9ec9e8"');
    }
  }
  const strong = 'stroke="#1f77b4" stroke-width="1.8"';
  scene.polyline(full.map((d) => [x.toPx(d.p), y.toPx(d.lnF)]), strong);
  for (const d of full) {
    scene.diamond(x.toPx(d.p), y.toPx(d.lnF), 4.2, 'fill="#1f77b4"');
  }

  const crit = (opts.critical ?? []).find(
    (r) => r.quantity === opts.quantity && r.eta === opts.eta,
  );
  if (crit) {
    const [yLo, yHi] = scene.plotRangeY;
    scene.line(x.toPx(crit.p_c), yLo, x.toPx(crit.p_c), yHi,
               'stroke="#000" stroke-width="1.6" class="p-c"');
    for (const edge of [crit.p_c - crit.sigma, crit.p_c + crit.sigma]) {
      scene.line(x.toPx(edge), yLo, x.toPx(edge), yHi,
                 'stroke="#000" stroke-width="1" stroke-dasharray="6,4" class="p-c-err"');
    }
    scene.text(x.toPx(crit.p_c) + 5, scene.margin.top + 14,
               `p_c = ${crit.p_c.toFixed(4)}`, 'font-size="11"');
  }
  scene.legend([
    { label: "all system sizes", style: strong },
    { label: "largest N dropped", style: faint },
  ]);
  return scene.render();
}

/** eta vs p phase diagram: entanglement transitions as bullets, magic
 * transitions as crosses, horizontal error bars, three shaded regions. */

import type { CriticalRow } from "../schemas.js";
import { SvgScene, linearScale } from "../svg.js";

const REGION_COLORS = ["#c8e6f5", "#d9f2d0", "#f8d7d0"];

function curve(rows: CriticalRow[], quantity: string): CriticalRow[] {
  return rows
    .filter((r) => r.quantity === quantity)
    .sort((a, b) => a.eta - b.eta);
}

function interp(points: CriticalRow[], eta: number): number {
  if (points.length === 1) return points[0].p_c;
  let lo = points[0];
  let hi = points[points.length - 1];
  if (eta <= lo.eta) return lo.p_c;
  if (eta >= hi.eta) return hi.p_c;
  for (let i = 0; i < points.length - 1; i++) {
    if (points[i].eta <= eta && eta <= points[i + 1].eta) {
      lo = points[i];
      hi = points[i + 1];
      break;
    }
  }
  const f = hi.eta === lo.eta ? 0 : (eta - lo.eta) / (hi.eta - lo.eta);
  return lo.p_c + f * (hi.p_c - lo.p_c);
}

export function renderPhaseDiagram(rows: CriticalRow[]): string {
  if (rows.length === 0) {
    throw new Error("critical report contains no rows");
  }
  const ent = curve(rows, "entanglement");
  const mag = curve(rows, "magic");
  const scene = new SvgScene(560, 460);
  const pLo = Math.min(...rows.map((r) => r.p_c - r.sigma)) - 0.01;
  const pHi = Math.max(...rows.map((r) => r.p_c + r.sigma)) + 0.01;
  const etas = rows.map((r) => r.eta);
  const eLo = Math.min(...etas) * 0.8;
  const eHi = Math.max(...etas) * 1.1;
  const x = linearScale([pLo, pHi], scene.plotRangeX);
  const y = linearScale([eLo, eHi], scene.plotRangeY);

  // shaded phases: both transitions present -> I | II | III, else two bands
  const etaGrid: number[] = [];
  for (let i = 0; i <= 40; i++) etaGrid.push(eLo + ((eHi - eLo) * i) / 40);
  const boundaries = [ent, mag].filter((c) => c.length > 0);
  let leftEdge = etaGrid.map((e) => [x.toPx(pLo), y.toPx(e)] as [number, number]);
  boundaries.forEach((bnd, bi) => {
    const edge = etaGrid.map((e) => [x.toPx(interp(bnd, e)), y.toPx(e)] as [number, number]);
    scene.polygon([...leftEdge, ...edge.slice().reverse()],
                  `fill="${REGION_COLORS[bi]}" stroke="none" opacity="0.8"`);
    leftEdge = edge;
  });
  scene.polygon(
    [...leftEdge, [x.toPx(pHi), y.toPx(eHi)], [x.toPx(pHi), y.toPx(eLo)]],
    `fill="${REGION_COLORS[boundaries.length]}" stroke="none" opacity="0.8"`,
  );

  scene.axes(x, y, "measurement rate p", "T-gate prefactor eta", "phase diagram");
  const entStyle = 'stroke="#1f4e79" stroke-width="1.4"';
  for (const r of ent) {
    scene.errorBarX(r.p_c, y.toPx(r.eta), r.sigma, x, entStyle);
    scene.circle(x.toPx(r.p_c), y.toPx(r.eta), 4, 'fill="#1f4e79"');
  }
  const magStyle = 'stroke="#a61b29" stroke-width="1.6"';
  for (const r of mag) {
    scene.errorBarX(r.p_c, y.toPx(r.eta), r.sigma, x, magStyle);
    scene.cross(x.toPx(r.p_c), y.toPx(r.eta), 4.5, magStyle);
  }
  scene.legend([
    { label: "entanglement p_c (bullets)", style: entStyle },
    { label: "magic p_c (crosses)", style: magStyle },
  ], scene.margin.left + 10);
  return scene.render();
}

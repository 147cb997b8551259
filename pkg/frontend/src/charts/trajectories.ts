/** Per-trajectory observable fan (gray) with the ensemble mean (black). */

import type { RawRow } from "../schemas.js";
import { SvgScene, extent, linearScale } from "../svg.js";

export interface TrajectoriesOptions {
  quantity?: "magic" | "entanglement";
  eta?: number;
  p?: number;
  N?: number;
}

export function renderTrajectories(rows: RawRow[], opts: TrajectoriesOptions = {}): string {
  if (rows.length === 0) {
    throw new Error("raw CSV contains no rows");
  }
  let sel = rows;
  for (const key of ["eta", "p", "N"] as const) {
    const want = opts[key];
    if (want !== undefined) sel = sel.filter((r) => r[key] === want);
  }
  if (sel.length === 0) {
    throw new Error("no raw rows match the requested grid point");
  }
  // default to the first grid point present
  const first = sel[0];
  sel = sel.filter((r) => r.eta === first.eta && r.p === first.p && r.N === first.N);
  const quantity =
    opts.quantity ?? (sel.every((r) => r.magic === null) ? "entanglement" : "magic");
  const value = (r: RawRow): number | null =>
    quantity === "magic" ? r.magic : r.entanglement;
  if (sel.every((r) => value(r) === null)) {
    throw new Error(`column '${quantity}' is empty for this grid point`);
  }

  const byTraj = new Map<number, RawRow[]>();
  for (const r of sel) {
    const list = byTraj.get(r.traj) ?? [];
    list.push(r);
    byTraj.set(r.traj, list);
  }
  const scene = new SvgScene();
  const x = linearScale([0, Math.max(...sel.map((r) => r.t))], scene.plotRangeX);
  const vals = sel.map(value).filter((v): v is number => v !== null);
  const y = linearScale(extent(vals), scene.plotRangeY);
  scene.axes(x, y, "time step t", `${quantity} (bits)`,
             `${byTraj.size} trajectories (eta=${first.eta}, p=${first.p}, N=${first.N})`);

  const meanByT = new Map<number, { sum: number; count: number }>();
  for (const trajRows of byTraj.values()) {
    const pts: Array<[number, number]> = [];
    for (const r of trajRows.sort((a, b) => a.t - b.t)) {
      const v = value(r);
      if (v === null) continue;
      pts.push([x.toPx(r.t), y.toPx(v)]);
      const acc = meanByT.get(r.t) ?? { sum: 0, count: 0 };
      acc.sum += v;
      acc.count += 1;
      meanByT.set(r.t, acc);
    }
    scene.polyline(pts, 'stroke="#9a9a9a" stroke-width="0.7" opacity="0.55" class="trajectory"');
  }
  const meanPts = [...meanByT.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([t, acc]) => [x.toPx(t), y.toPx(acc.sum / acc.count)] as [number, number]);
  scene.polyline(meanPts, 'stroke="#000000" stroke-width="2.4" class="mean"');
  return scene.render();
}

/** Typed access to the simulator's documented file interfaces.
 *
 * Aggregate CSV: eta,p,beta,N,quantity,mean,raw_std,rescaled_std,P,n_traj
 * Raw CSV:       eta,p,beta,N,traj,seed,t,entanglement,magic,magic_err
 * Fit report:    rows keyed by (quantity, eta, p, law [, restricted])
 * Critical:      rows keyed by (quantity, eta)
 */

import { readFileSync } from "fs";
import { columnIndex, numberCell, parseCsv } from "./csv.js";

export interface AggregateRow {
  eta: number;
  p: number;
  beta: number;
  N: number;
  quantity: string;
  mean: number;
  raw_std: number;
  rescaled_std: number;
  P: number;
  n_traj: number;
}

export interface RawRow {
  eta: number;
  p: number;
  beta: number;
  N: number;
  traj: number;
  seed: number;
  t: number;
  entanglement: number;
  magic: number | null;
  magic_err: number | null;
}

export interface FitRow {
  quantity: string;
  eta: number;
  p: number;
  law: string;
  restricted: boolean;
  a: number;
  b: number;
  gamma: number | null;
  chi2_per_dof: number;
  n_points: number;
  dof: number;
}

export interface CriticalRow {
  quantity: string;
  eta: number;
  p_c: number;
  sigma_a: number;
  sigma_b: number;
  sigma: number;
  sigma_a_capped: boolean;
}

export function readAggregate(path: string): AggregateRow[] {
  const table = parseCsv(readFileSync(path, "utf8"));
  const col = (name: string) => columnIndex(table, name);
  const idx = {
    eta: col("eta"), p: col("p"), beta: col("beta"), N: col("N"),
    quantity: col("quantity"), mean: col("mean"), raw_std: col("raw_std"),
    rescaled_std: col("rescaled_std"), P: col("P"), n_traj: col("n_traj"),
  };
  return table.rows.map((r) => ({
    eta: numberCell(r, idx.eta, "eta"),
    p: numberCell(r, idx.p, "p"),
    beta: numberCell(r, idx.beta, "beta"),
    N: numberCell(r, idx.N, "N"),
    quantity: r[idx.quantity],
    mean: numberCell(r, idx.mean, "mean"),
    raw_std: numberCell(r, idx.raw_std, "raw_std"),
    rescaled_std: numberCell(r, idx.rescaled_std, "rescaled_std"),
    P: numberCell(r, idx.P, "P"),
    n_traj: numberCell(r, idx.n_traj, "n_traj"),
  }));
}

export function readRaw(path: string): RawRow[] {
  const table = parseCsv(readFileSync(path, "utf8"));
  const col = (name: string) => columnIndex(table, name);
  const idx = {
    eta: col("eta"), p: col("p"), beta: col("beta"), N: col("N"),
    traj: col("traj"), seed: col("seed"), t: col("t"),
    entanglement: col("entanglement"), magic: col("magic"),
    magic_err: col("magic_err"),
  };
  return table.rows.map((r) => ({
    eta: numberCell(r, idx.eta, "eta"),
    p: numberCell(r, idx.p, "p"),
    beta: numberCell(r, idx.beta, "beta"),
    N: numberCell(r, idx.N, "N"),
    traj: numberCell(r, idx.traj, "traj"),
    seed: Number(r[idx.seed]),
    t: numberCell(r, idx.t, "t"),
    entanglement: numberCell(r, idx.entanglement, "entanglement"),
    magic: r[idx.magic] === "" ? null : numberCell(r, idx.magic, "magic"),
    magic_err: r[idx.magic_err] === "" ? null : numberCell(r, idx.magic_err, "magic_err"),
  }));
}

function requireField(obj: Record<string, unknown>, field: string, where: string): unknown {
  if (!(field in obj) || obj[field] === undefined) {
    throw new Error(`${where}: missing field '${field}'`);
  }
  return obj[field];
}

export function readFitReport(path: string): FitRow[] {
  const data = JSON.parse(readFileSync(path, "utf8"));
  if (!Array.isArray(data)) {
    throw new Error("fit report: expected a JSON array");
  }
  return data.map((row, i) => {
    const where = `fit report row ${i}`;
    return {
      quantity: String(requireField(row, "quantity", where)),
      eta: Number(requireField(row, "eta", where)),
      p: Number(requireField(row, "p", where)),
      law: String(requireField(row, "law", where)),
      restricted: Boolean(row.restricted ?? false),
      a: Number(requireField(row, "a", where)),
      b: Number(requireField(row, "b", where)),
      gamma: row.gamma === null ? null : Number(row.gamma),
      chi2_per_dof: Number(requireField(row, "chi2_per_dof", where)),
      n_points: Number(requireField(row, "n_points", where)),
      dof: Number(requireField(row, "dof", where)),
    };
  });
}

export function readCriticalReport(path: string): CriticalRow[] {
  const data = JSON.parse(readFileSync(path, "utf8"));
  if (!Array.isArray(data)) {
    throw new Error("critical report: expected a JSON array");
  }
  return data.map((row, i) => {
    const where = `critical report row ${i}`;
    return {
      quantity: String(requireField(row, "quantity", where)),
      eta: Number(requireField(row, "eta", where)),
      p_c: Number(requireField(row, "p_c", where)),
      sigma_a: Number(requireField(row, "sigma_a", where)),
      sigma_b: Number(requireField(row, "sigma_b", where)),
      sigma: Number(requireField(row, "sigma", where)),
      sigma_a_capped: Boolean(row.sigma_a_capped ?? false),
    };
  });
}

/** ln F(p) series from full or restricted fit rows of one (quantity, eta). */
export function lnFSeries(
  rows: FitRow[], quantity: string, eta: number, restricted: boolean,
): Array<{ p: number; lnF: number }> {
  const sel = rows.filter(
    (r) => r.quantity === quantity && r.eta === eta && r.restricted === restricted,
  );
  const byP = new Map<number, { ext?: number; area?: number }>();
  for (const r of sel) {
    const cell = byP.get(r.p) ?? {};
    if (r.law === "extensive") cell.ext = r.chi2_per_dof;
    if (r.law === "area") cell.area = r.chi2_per_dof;
    byP.set(r.p, cell);
  }
  const out: Array<{ p: number; lnF: number }> = [];
  for (const [p, cell] of [...byP.entries()].sort((a, b) => a[0] - b[0])) {
    if (cell.ext === undefined || cell.area === undefined || cell.area === 0) continue;
    out.push({ p, lnF: Math.log(cell.ext / cell.area) });
  }
  return out;
}

#!/usr/bin/env node
/** figures <kind> --in <paths> --out <file> [--quantity q] [--eta x] [--p x] [--n x]
 *
 * Kinds: entropy_vs_n, phase_diagram, trajectories, fit_quality, f_test.
 * Inputs are the simulator's documented files: aggregate CSV, raw CSV,
 * fit_report.json, critical_report.json (f_test accepts fit,critical).
 */

import { writeFileSync } from "fs";
import { renderEntropyVsN } from "./charts/entropyVsN.js";
import { renderFTest } from "./charts/fTest.js";
import { renderFitQuality } from "./charts/fitQuality.js";
import { renderPhaseDiagram } from "./charts/phaseDiagram.js";
import { renderTrajectories } from "./charts/trajectories.js";
import {
  readAggregate,
  readCriticalReport,
  readFitReport,
  readRaw,
} from "./schemas.js";

export const KINDS = [
  "entropy_vs_n",
  "phase_diagram",
  "trajectories",
  "fit_quality",
  "f_test",
] as const;
export type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  inputs: string[];
  out: string;
  quantity?: string;
  eta?: number;
  p?: number;
  n?: number;
}

export function parseArgs(argv: string[]): Args {
  const [kind, ...rest] = argv;
  if (!KINDS.includes(kind as Kind)) {
    throw new Error(`unknown figure kind '${kind}' (expected one of ${KINDS.join(", ")})`);
  }
  const args: Partial<Args> = { kind: kind as Kind };
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`flag ${flag} needs a value`);
    switch (flag) {
      case "--in":
        args.inputs = value.split(",");
        break;
      case "--out":
        args.out = value;
        break;
      case "--quantity":
        args.quantity = value;
        break;
      case "--eta":
        args.eta = Number(value);
        break;
      case "--p":
        args.p = Number(value);
        break;
      case "--n":
        args.n = Number(value);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!args.inputs || args.inputs.length === 0) throw new Error("--in is required");
  if (!args.out) throw new Error("--out is required");
  return args as Args;
}

function unique<T>(values: T[], what: string, requested?: T): T {
  if (requested !== undefined) return requested;
  const distinct = [...new Set(values)];
  if (distinct.length !== 1) {
    throw new Error(`ambiguous ${what} (${distinct.join(", ")}); pass --${what}`);
  }
  return distinct[0];
}

export function renderFigure(args: Args): string {
  switch (args.kind) {
    case "entropy_vs_n": {
      const rows = readAggregate(args.inputs[0]);
      const quantity = unique(rows.map((r) => r.quantity), "quantity", args.quantity);
      const eta = unique(rows.filter((r) => r.quantity === quantity).map((r) => r.eta),
                         "eta", args.eta);
      return renderEntropyVsN(rows, { quantity, eta });
    }
    case "phase_diagram":
      return renderPhaseDiagram(readCriticalReport(args.inputs[0]));
    case "trajectories":
      return renderTrajectories(readRaw(args.inputs[0]), {
        quantity: args.quantity as "magic" | "entanglement" | undefined,
        eta: args.eta,
        p: args.p,
        N: args.n,
      });
    case "fit_quality": {
      const rows = readFitReport(args.inputs[0]);
      const quantity = unique(rows.map((r) => r.quantity), "quantity", args.quantity);
      const eta = unique(rows.filter((r) => r.quantity === quantity).map((r) => r.eta),
                         "eta", args.eta);
      return renderFitQuality(rows, { quantity, eta });
    }
    case "f_test": {
      const rows = readFitReport(args.inputs[0]);
      const quantity = unique(rows.map((r) => r.quantity), "quantity", args.quantity);
      const eta = unique(rows.filter((r) => r.quantity === quantity).map((r) => r.eta),
                         "eta", args.eta);
      const critical = args.inputs[1] ? readCriticalReport(args.inputs[1]) : undefined;
      return renderFTest(rows, { quantity, eta, critical });
    }
  }
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    writeFileSync(args.out, renderFigure(args));
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    console.error(`figures: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

import { fileURLToPath } from "url";
import { argv as processArgv, exit } from "process";

if (processArgv[1] && fileURLToPath(import.meta.url) === processArgv[1]) {
  exit(main(processArgv.slice(2)));
}

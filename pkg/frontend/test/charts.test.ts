import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { main, parseArgs, renderFigure } from "../src/cli.js";
import { renderEntropyVsN } from "../src/charts/entropyVsN.js";
import { renderFTest } from "../src/charts/fTest.js";
import { renderFitQuality } from "../src/charts/fitQuality.js";
import { renderPhaseDiagram } from "../src/charts/phaseDiagram.js";
import { renderTrajectories } from "../src/charts/trajectories.js";
import {
  lnFSeries,
  readAggregate,
  readCriticalReport,
  readFitReport,
  readRaw,
} from "../src/schemas.js";

const FIX = join(__dirname, "fixtures");

describe("schema readers", () => {
  it("parses the aggregate CSV", () => {
    const rows = readAggregate(join(FIX, "aggregate.csv"));
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0].quantity).toBe("entanglement");
    expect(rows.every((r) => r.rescaled_std <= r.raw_std + 1e-12)).toBe(true);
  });

  it("parses raw CSV with empty magic columns", () => {
    const rows = readRaw(join(FIX, "raw.csv"));
    expect(rows.every((r) => r.magic === null)).toBe(true);
    const mps = readRaw(join(FIX, "raw_mps.csv"));
    expect(mps.some((r) => r.magic !== null)).toBe(true);
  });

  it("names the offending column on schema mismatch", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "eta,p,beta,N,quantity,mean\n2.0,0.1,1.0,8,magic,1.0\n");
    expect(() => readAggregate(bad)).toThrow(/raw_std/);
    const bad2 = join(dir, "bad2.csv");
    writeFileSync(
      bad2,
      "eta,p,beta,N,quantity,mean,raw_std,rescaled_std,P,n_traj\n" +
        "2.0,0.1,1.0,8,magic,oops,0.1,0.05,2,16\n",
    );
    expect(() => readAggregate(bad2)).toThrow(/mean/);
  });

  it("computes ln F from fit rows", () => {
    const rows = readFitReport(join(FIX, "fit_report.json"));
    const series = lnFSeries(rows, "magic", 2.0, false);
    expect(series.length).toBeGreaterThan(3);
    expect(series[0].lnF).toBeLessThan(0);
    expect(series[series.length - 1].lnF).toBeGreaterThan(0);
    const restricted = lnFSeries(rows, "magic", 2.0, true);
    expect(restricted.length).toBeGreaterThan(3);
  });
});

describe("charts", () => {
  it("entropy_vs_n renders one line per p on a log axis", () => {
    const rows = readAggregate(join(FIX, "aggregate.csv"));
    const svg = renderEntropyVsN(rows, { quantity: "entanglement", eta: 0.0 });
    expect(svg).toContain("<svg");
    const lines = svg.match(/<polyline/g) ?? [];
    expect(lines.length).toBe(3); // three p values
  });

  it("phase_diagram shows bullets, crosses, error bars, and regions", () => {
    const crit = readCriticalReport(join(FIX, "critical_report.json"));
    const svg = renderPhaseDiagram(crit);
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThanOrEqual(2);
    expect((svg.match(/<polygon/g) ?? []).length).toBeGreaterThanOrEqual(3); // shaded phases
  });

  it("trajectories draws the fan plus mean", () => {
    const rows = readRaw(join(FIX, "raw_mps.csv"));
    const svg = renderTrajectories(rows, {});
    const fan = svg.match(/class="trajectory"/g) ?? [];
    expect(fan.length).toBe(16);
    expect(svg).toContain('class="mean"');
  });

  it("trajectories falls back to entanglement for tableau data", () => {
    const rows = readRaw(join(FIX, "raw.csv"));
    const svg = renderTrajectories(rows, {});
    expect(svg).toContain("entanglement (bits)");
  });

  it("fit_quality plots all three laws", () => {
    const rows = readFitReport(join(FIX, "fit_report.json"));
    const svg = renderFitQuality(rows, { quantity: "magic", eta: 2.0 });
    expect(svg).toContain("extensive");
    expect(svg).toContain("area");
    expect(svg).toContain("log");
  });

  it("f_test draws both series and the critical line", () => {
    const rows = readFitReport(join(FIX, "fit_report.json"));
    const crit = readCriticalReport(join(FIX, "critical_report.json"));
    const svg = renderFTest(rows, { quantity: "magic", eta: 2.0, critical: crit });
    expect(svg).toContain('class="p-c"');
    expect((svg.match(/class="p-c-err"/g) ?? []).length).toBe(2);
    expect((svg.match(/<polygon/g) ?? []).length).toBeGreaterThan(8); // diamonds
  });

  it("rendering is a pure function of its inputs", () => {
    const rows = readAggregate(join(FIX, "aggregate.csv"));
    const a = renderEntropyVsN(rows, { quantity: "entanglement", eta: 0.0 });
    const b = renderEntropyVsN(rows, { quantity: "entanglement", eta: 0.0 });
    expect(a).toBe(b);
  });
});

describe("cli", () => {
  it("parses arguments and rejects unknown kinds", () => {
    const args = parseArgs([
      "entropy_vs_n", "--in", "a.csv", "--out", "f.svg", "--quantity", "magic",
    ]);
    expect(args.kind).toBe("entropy_vs_n");
    expect(args.inputs).toEqual(["a.csv"]);
    expect(() => parseArgs(["nope", "--in", "a", "--out", "b"])).toThrow(/unknown figure kind/);
  });

  it("renders every kind end to end through main()", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const cases: Array<[string, string[]]> = [
      ["entropy_vs_n", [join(FIX, "aggregate.csv")]],
      ["phase_diagram", [join(FIX, "critical_report.json")]],
      ["trajectories", [join(FIX, "raw_mps.csv")]],
      ["fit_quality", [join(FIX, "fit_report.json")]],
      ["f_test", [join(FIX, "fit_report.json"), join(FIX, "critical_report.json")]],
    ];
    for (const [kind, inputs] of cases) {
      const out = join(dir, `${kind}.svg`);
      const extra = kind === "fit_quality" || kind === "f_test"
        ? ["--quantity", "magic"]
        : kind === "entropy_vs_n" ? ["--quantity", "entanglement"] : [];
      const code = main([kind, "--in", inputs.join(","), "--out", out, ...extra]);
      expect(code).toBe(0);
      expect(readFileSync(out, "utf8")).toContain("</svg>");
    }
  });

  it("fails with a named column on schema mismatch", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "eta,p\n1,2\n");
    const code = main(["entropy_vs_n", "--in", bad, "--out", join(dir, "x.svg")]);
    expect(code).toBe(1);
  });
});

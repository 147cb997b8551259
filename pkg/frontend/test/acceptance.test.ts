/** The five figure kinds against the dataset of the reduced-scale sweeps
 * (fixtures copied verbatim from the simulator's acceptance outputs). */

import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const FIX = join(__dirname, "fixtures", "reduced_scale");

describe.skipIf(!existsSync(FIX))("reduced-scale sweep dataset", () => {
  const dir = mkdtempSync(join(tmpdir(), "figs-acc-"));

  const render = (kind: string, inputs: string[], extra: string[] = []) => {
    const out = join(dir, `${kind}.svg`);
    const code = main([kind, "--in", inputs.join(","), "--out", out, ...extra]);
    expect(code, `${kind} failed`).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("</svg>");
    return svg;
  };

  it("entropy_vs_n renders from the separation sweep aggregate", () => {
    const svg = render("entropy_vs_n", [join(FIX, "aggregate_separation.csv")],
                       ["--quantity", "magic"]);
    expect(svg).toContain("magic (bits)");
  });

  it("phase_diagram renders both transition curves", () => {
    const svg = render("phase_diagram", [join(FIX, "critical_report.json")]);
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThanOrEqual(1);
  });

  it("trajectories shows the per-trajectory fan plus mean", () => {
    const svg = render("trajectories", [join(FIX, "raw_16traj.csv")]);
    expect((svg.match(/class="trajectory"/g) ?? []).length).toBe(16);
    expect(svg).toContain('class="mean"');
  });

  it("fit_quality renders the three-law comparison", () => {
    render("fit_quality", [join(FIX, "fit_report.json")],
           ["--quantity", "entanglement", "--eta", "0"]);
  });

  it("f_test renders ln F with the extracted critical rate", () => {
    const svg = render(
      "f_test",
      [join(FIX, "fit_report.json"), join(FIX, "critical_report.json")],
      ["--quantity", "entanglement", "--eta", "0"],
    );
    expect(svg).toContain('class="p-c"');
  });
});

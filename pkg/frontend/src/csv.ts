/** Minimal strict CSV reader for the simulator's outputs (no quoting). */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV input");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(`CSV row ${i + 2}: expected ${header.length} cells, got ${cells.length}`);
    }
    return cells;
  });
  return { header, rows };
}

/** Column accessor that names the offending column on any mismatch. */
export function columnIndex(table: CsvTable, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`missing column '${name}' (have: ${table.header.join(", ")})`);
  }
  return idx;
}

export function numberCell(row: string[], idx: number, column: string): number {
  const v = Number(row[idx]);
  if (row[idx] === "" || Number.isNaN(v)) {
    throw new Error(`column '${column}': not a number ('${row[idx]}')`);
  }
  return v;
}

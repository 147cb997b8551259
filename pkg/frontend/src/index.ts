export { parseCsv } from "./csv.js";
export {
  readAggregate,
  readCriticalReport,
  readFitReport,
  readRaw,
  lnFSeries,
} from "./schemas.js";
export { renderEntropyVsN } from "./charts/entropyVsN.js";
export { renderPhaseDiagram } from "./charts/phaseDiagram.js";
export { renderTrajectories } from "./charts/trajectories.js";
export { renderFitQuality } from "./charts/fitQuality.js";
export { renderFTest } from "./charts/fTest.js";
export { KINDS, main, parseArgs, renderFigure } from "./cli.js";

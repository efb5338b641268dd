export { parseCsv, readCsv, readJson } from "./csv.js";
export { linearFit, logLogSlope } from "./fit.js";
export {
  SchemaMismatch,
  Table,
  column,
  columnsWithPrefix,
  modeCount,
  modeModulus,
  requireColumns,
} from "./schema.js";
export { renderPanels } from "./svg.js";
export { renderTrajectory } from "./figures/trajectory.js";
export { renderDecay } from "./figures/decay.js";
export { renderOverlay } from "./figures/overlay.js";
export { renderScaling, renderScalingDetailed } from "./figures/scaling.js";
export { renderExtrapolation } from "./figures/extrapolation.js";
export { FigureSpec, renderFigure, renderSpecFile } from "./render.js";

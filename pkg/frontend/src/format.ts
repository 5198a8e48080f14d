import { EstimatedParams, MppData } from "./types.js";

// Readouts show service numbers verbatim (template interpolation is the
// shortest exact decimal), so what is on screen is what the model said.

export function formatMppReadout(mpp: MppData): string {
  return `${mpp.p_mp_w} W at ${mpp.v_mp_v} V / ${mpp.i_mp_a} A`;
}

export function formatEstimated(
  estimated: EstimatedParams,
): Array<[string, string]> {
  return [
    ["ideality factor n", `${estimated.n}`],
    ["series resistance", `${estimated.rs_ohm} ohm`],
    ["saturation current", `${estimated.i0_stc_a} A`],
    ["iterations", `${estimated.iterations}`],
  ];
}

import { CurveResponse } from "../src/types.js";

// Hand-built curve bodies with exact decimal values. power_w is the
// elementwise product of the other two series, as the service guarantees.

export const CURVE_A: CurveResponse = {
  voltage_v: [43.5, 34.5, 20.0, 0.0],
  current_a: [0.0, 4.35, 4.6, 4.75],
  power_w: [0.0, 150.075, 92.0, 0.0],
  mpp: { v_mp_v: 34.5, i_mp_a: 4.35, p_mp_w: 150.075 },
};

export const CURVE_B: CurveResponse = {
  voltage_v: [41.25, 33.0, 18.0, 0.0],
  current_a: [0.0, 2.1, 2.3, 2.375],
  power_w: [0.0, 69.3, 41.4, 0.0],
  mpp: { v_mp_v: 33.0, i_mp_a: 2.1, p_mp_w: 69.3 },
};

export function cloneCurve(curve: CurveResponse): CurveResponse {
  return JSON.parse(JSON.stringify(curve));
}

// Wire types for the pvsim HTTP service. Field names mirror the JSON
// bodies exactly; keep them in sync with the service responses.

export interface DatasheetForm {
  voc_stc: number;
  isc_stc: number;
  vmp_stc: number;
  imp_stc: number;
  cell_count: number;
  alpha_isc: number;
  beta_voc: number;
  name?: string;
}

export interface EstimatedParams {
  n: number;
  rs_ohm: number;
  i0_stc_a: number;
  iterations: number;
  residual: number;
}

export interface RegisterResponse {
  panel_id: string;
  estimated: EstimatedParams;
}

export interface PanelInfo {
  panel_id: string;
  name: string | null;
}

export interface MppData {
  v_mp_v: number;
  i_mp_a: number;
  p_mp_w: number;
}

export interface CurveResponse {
  voltage_v: number[];
  current_a: number[];
  power_w: number[];
  mpp: MppData;
}

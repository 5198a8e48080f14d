import {
  CurveResponse,
  DatasheetForm,
  PanelInfo,
  RegisterResponse,
} from "./types.js";

// Curve resolution requested by the UI. Plenty for a few hundred pixels
// of chart while keeping responses small during slider drags.
export const CURVE_POINTS = 600;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly tag: string,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) {
    return;
  }
  let tag = "HttpError";
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (typeof body.error === "string") {
      tag = body.error;
    }
    if (typeof body.detail === "string") {
      detail = body.detail;
    }
  } catch {
    // non-JSON error body, keep the status line
  }
  throw new ApiError(response.status, tag, detail);
}

export async function listPanels(): Promise<PanelInfo[]> {
  const response = await fetch("/panels");
  await raiseForStatus(response);
  return response.json();
}

export async function registerPanel(
  sheet: DatasheetForm,
): Promise<RegisterResponse> {
  const response = await fetch("/panels", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(sheet),
  });
  await raiseForStatus(response);
  return response.json();
}

export async function fetchCurve(
  panelId: string,
  irradianceWm2: number,
  temperatureC: number,
  points: number = CURVE_POINTS,
): Promise<CurveResponse> {
  const query = new URLSearchParams({
    irradiance_w_m2: String(irradianceWm2),
    temperature_c: String(temperatureC),
    points: String(points),
  });
  const response = await fetch(
    `/panels/${encodeURIComponent(panelId)}/curve?${query}`,
  );
  await raiseForStatus(response);
  return response.json();
}

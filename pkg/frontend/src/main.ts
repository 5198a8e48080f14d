import { ApiError, fetchCurve, listPanels, registerPanel } from "./api.js";
import { curveExtents, LineChart } from "./charts.js";
import { formatEstimated, formatMppReadout } from "./format.js";
import {
  CurveStore,
  IRRADIANCE_SLIDER,
  TEMPERATURE_SLIDER,
  UiState,
} from "./state.js";
import { DatasheetForm } from "./types.js";

const NUMERIC_FIELDS = [
  "voc_stc",
  "isc_stc",
  "vmp_stc",
  "imp_stc",
  "cell_count",
  "alpha_isc",
  "beta_voc",
] as const;

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) {
    throw new Error(`missing element #${id}`);
  }
  return element as T;
}

function fieldInput(name: string): HTMLInputElement {
  return byId<HTMLInputElement>(`field-${name}`);
}

function fieldError(name: string): HTMLElement {
  return byId<HTMLElement>(`error-${name}`);
}

/** Client-side gate: all seven fields must parse as numbers before any
 * request goes out. Physical consistency is the service's call. */
function readForm(): DatasheetForm | null {
  const values: Record<string, number> = {};
  let valid = true;
  for (const name of NUMERIC_FIELDS) {
    const input = fieldInput(name);
    const raw = input.value.trim();
    const parsed = Number(raw);
    if (raw === "" || !Number.isFinite(parsed)) {
      fieldError(name).textContent = raw === "" ? "required" : "not a number";
      input.classList.add("invalid");
      valid = false;
    } else {
      fieldError(name).textContent = "";
      input.classList.remove("invalid");
      values[name] = parsed;
    }
  }
  if (!valid) {
    return null;
  }
  const sheet: DatasheetForm = {
    voc_stc: values.voc_stc,
    isc_stc: values.isc_stc,
    vmp_stc: values.vmp_stc,
    imp_stc: values.imp_stc,
    cell_count: values.cell_count,
    alpha_isc: values.alpha_isc,
    beta_voc: values.beta_voc,
  };
  const name = byId<HTMLInputElement>("field-name").value.trim();
  if (name !== "") {
    sheet.name = name;
  }
  return sheet;
}

function setBanner(message: string | null): void {
  const banner = byId<HTMLElement>("banner");
  banner.textContent = message ?? "";
  banner.hidden = message === null;
}

async function refreshPanelList(select: HTMLSelectElement): Promise<void> {
  const panels = await listPanels();
  const current = select.value;
  select.innerHTML = "";
  const placeholder = document.createElement("option");
  placeholder.value = "";
  placeholder.textContent = "registered panels...";
  select.appendChild(placeholder);
  for (const panel of panels) {
    const option = document.createElement("option");
    option.value = panel.panel_id;
    option.textContent = panel.name ?? panel.panel_id;
    select.appendChild(option);
  }
  select.value = current;
}

function renderEstimated(state: UiState): void {
  const list = byId<HTMLElement>("estimated");
  list.innerHTML = "";
  if (state.estimated === null) {
    const note = document.createElement("p");
    note.className = "muted";
    note.textContent =
      state.panelId === null
        ? "Estimate a datasheet or pick a registered panel to begin."
        : `Exploring ${state.panelName ?? state.panelId}.`;
    list.appendChild(note);
    return;
  }
  for (const [label, value] of formatEstimated(state.estimated)) {
    const row = document.createElement("div");
    row.className = "param-row";
    const dt = document.createElement("span");
    dt.className = "param-label";
    dt.textContent = label;
    const dd = document.createElement("span");
    dd.className = "param-value";
    dd.textContent = value;
    row.append(dt, dd);
    list.appendChild(row);
  }
}

function main(): void {
  const store = new CurveStore(fetchCurve);
  const ivChart = new LineChart(byId<HTMLCanvasElement>("iv-chart"), {
    xLabel: "voltage (V)",
    yLabel: "current (A)",
    stroke: "#2563eb",
  });
  const pvChart = new LineChart(byId<HTMLCanvasElement>("pv-chart"), {
    xLabel: "voltage (V)",
    yLabel: "power (W)",
    stroke: "#dc2626",
  });

  const irradiance = byId<HTMLInputElement>("irradiance");
  const temperature = byId<HTMLInputElement>("temperature");
  irradiance.min = String(IRRADIANCE_SLIDER.min);
  irradiance.max = String(IRRADIANCE_SLIDER.max);
  irradiance.step = String(IRRADIANCE_SLIDER.step);
  irradiance.value = String(IRRADIANCE_SLIDER.initial);
  temperature.min = String(TEMPERATURE_SLIDER.min);
  temperature.max = String(TEMPERATURE_SLIDER.max);
  temperature.step = String(TEMPERATURE_SLIDER.step);
  temperature.value = String(TEMPERATURE_SLIDER.initial);

  irradiance.addEventListener("input", () => {
    store.setIrradiance(Number(irradiance.value));
  });
  temperature.addEventListener("input", () => {
    store.setTemperature(Number(temperature.value));
  });

  store.subscribe((state) => {
    byId<HTMLElement>("irradiance-value").textContent =
      `${state.irradianceWm2} W/m²`;
    byId<HTMLElement>("temperature-value").textContent =
      `${state.temperatureC} °C`;
    const enabled = state.panelId !== null;
    irradiance.disabled = !enabled;
    temperature.disabled = !enabled;
    byId<HTMLElement>("charts").classList.toggle(
      "busy",
      state.requestInFlight,
    );
    renderEstimated(state);
    setBanner(state.error);
    if (state.curve !== null) {
      const extents = curveExtents(state.curve);
      const mpp = state.curve.mpp;
      ivChart.render(
        state.curve.voltage_v,
        state.curve.current_a,
        extents.voltage,
        extents.current,
        { x: mpp.v_mp_v, y: mpp.i_mp_a },
      );
      pvChart.render(
        state.curve.voltage_v,
        state.curve.power_w,
        extents.voltage,
        extents.power,
        { x: mpp.v_mp_v, y: mpp.p_mp_w },
      );
      byId<HTMLElement>("mpp-readout").textContent = formatMppReadout(mpp);
    }
  });

  const select = byId<HTMLSelectElement>("panel-select");
  select.addEventListener("change", () => {
    if (select.value !== "") {
      const label = select.options[select.selectedIndex].textContent;
      store.selectPanel(select.value, label, null);
    }
  });

  const form = byId<HTMLFormElement>("datasheet-form");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const sheet = readForm();
    if (sheet === null) {
      return;
    }
    setBanner(null);
    void (async () => {
      try {
        const result = await registerPanel(sheet);
        store.selectPanel(result.panel_id, sheet.name ?? null, result.estimated);
        select.value = "";
        await refreshPanelList(select);
      } catch (error) {
        if (error instanceof ApiError) {
          setBanner(error.message);
        } else {
          setBanner(`service unreachable: ${String(error)}`);
        }
      }
    })();
  });

  void refreshPanelList(select).catch(() => {
    setBanner("could not load the panel list; is the service running?");
  });
}

main();

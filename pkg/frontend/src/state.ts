import { CurveResponse, EstimatedParams } from "./types.js";

export interface SliderRange {
  min: number;
  max: number;
  step: number;
  initial: number;
}

export const IRRADIANCE_SLIDER: SliderRange = {
  min: 100,
  max: 1200,
  step: 10,
  initial: 1000,
};

export const TEMPERATURE_SLIDER: SliderRange = {
  min: -25,
  max: 75,
  step: 1,
  initial: 25,
};

// Slider drags fire dozens of input events per second; one request per
// quiet window keeps the charts live without flooding the service.
export const DEBOUNCE_MS = 80;

export interface UiState {
  panelId: string | null;
  panelName: string | null;
  estimated: EstimatedParams | null;
  irradianceWm2: number;
  temperatureC: number;
  curve: CurveResponse | null;
  requestInFlight: boolean;
  error: string | null;
}

export type CurveFetcher = (
  panelId: string,
  irradianceWm2: number,
  temperatureC: number,
) => Promise<CurveResponse>;

export interface TimerHost {
  set(callback: () => void, ms: number): number;
  clear(id: number): void;
}

const realTimers: TimerHost = {
  set: (callback, ms) => setTimeout(callback, ms) as unknown as number,
  clear: (id) => clearTimeout(id),
};

export function snapToRange(value: number, range: SliderRange): number {
  if (!Number.isFinite(value)) {
    return range.initial;
  }
  const clamped = Math.min(range.max, Math.max(range.min, value));
  const steps = Math.round((clamped - range.min) / range.step);
  return Math.min(range.max, range.min + steps * range.step);
}

/**
 * Holds everything the page renders and owns the fetch discipline:
 * slider changes are debounced, at most one curve request is in flight,
 * and a response landing after a newer slider change is discarded and
 * replaced by a fresh request for the latest values. The displayed MPP
 * therefore always belongs to the displayed curve.
 */
export class CurveStore {
  private state: UiState = {
    panelId: null,
    panelName: null,
    estimated: null,
    irradianceWm2: IRRADIANCE_SLIDER.initial,
    temperatureC: TEMPERATURE_SLIDER.initial,
    curve: null,
    requestInFlight: false,
    error: null,
  };

  private readonly listeners = new Set<(state: UiState) => void>();
  private timerId: number | null = null;
  private fetching = false;
  private stale = false;

  constructor(
    private readonly fetcher: CurveFetcher,
    private readonly timers: TimerHost = realTimers,
    private readonly debounceMs: number = DEBOUNCE_MS,
  ) {}

  get snapshot(): UiState {
    return { ...this.state };
  }

  subscribe(listener: (state: UiState) => void): () => void {
    this.listeners.add(listener);
    listener(this.snapshot);
    return () => {
      this.listeners.delete(listener);
    };
  }

  selectPanel(
    panelId: string,
    name: string | null,
    estimated: EstimatedParams | null,
  ): void {
    this.update({
      panelId,
      panelName: name,
      estimated,
      curve: null,
      error: null,
    });
    this.refreshNow();
  }

  setIrradiance(valueWm2: number): void {
    const snapped = snapToRange(valueWm2, IRRADIANCE_SLIDER);
    if (snapped === this.state.irradianceWm2) {
      return;
    }
    this.update({ irradianceWm2: snapped });
    this.scheduleRefresh();
  }

  setTemperature(valueC: number): void {
    const snapped = snapToRange(valueC, TEMPERATURE_SLIDER);
    if (snapped === this.state.temperatureC) {
      return;
    }
    this.update({ temperatureC: snapped });
    this.scheduleRefresh();
  }

  private update(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.snapshot);
    }
  }

  private scheduleRefresh(): void {
    if (this.timerId !== null) {
      this.timers.clear(this.timerId);
    }
    this.timerId = this.timers.set(() => {
      this.timerId = null;
      this.refreshNow();
    }, this.debounceMs);
  }

  private refreshNow(): void {
    if (this.state.panelId === null) {
      return;
    }
    if (this.fetching) {
      // The active request no longer matches the UI; drop its response
      // when it arrives and let the loop re-issue with fresh values.
      this.stale = true;
      return;
    }
    void this.fetchLoop();
  }

  private async fetchLoop(): Promise<void> {
    this.fetching = true;
    this.update({ requestInFlight: true });
    try {
      for (;;) {
        this.stale = false;
        const panelId = this.state.panelId;
        if (panelId === null) {
          break;
        }
        const irradiance = this.state.irradianceWm2;
        const temperature = this.state.temperatureC;
        let curve: CurveResponse | null = null;
        let failure: string | null = null;
        try {
          curve = await this.fetcher(panelId, irradiance, temperature);
        } catch (error) {
          failure = error instanceof Error ? error.message : String(error);
        }
        if (this.stale) {
          continue;
        }
        if (curve !== null) {
          this.update({ curve, error: null });
        } else {
          // Keep the last good curve on screen; just surface the banner.
          this.update({ error: failure });
        }
        break;
      }
    } finally {
      this.fetching = false;
      this.update({ requestInFlight: false });
    }
  }
}

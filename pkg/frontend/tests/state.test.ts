import { describe, expect, it } from "vitest";

import {
  CurveFetcher,
  CurveStore,
  IRRADIANCE_SLIDER,
  snapToRange,
  TEMPERATURE_SLIDER,
  TimerHost,
} from "../src/state.js";
import { CurveResponse } from "../src/types.js";
import { CURVE_A, CURVE_B, cloneCurve } from "./fixtures.js";

class ManualTimers implements TimerHost {
  private nextId = 1;
  private readonly pending = new Map<number, () => void>();

  set(callback: () => void, _ms: number): number {
    const id = this.nextId++;
    this.pending.set(id, callback);
    return id;
  }

  clear(id: number): void {
    this.pending.delete(id);
  }

  fire(): void {
    const callbacks = [...this.pending.values()];
    this.pending.clear();
    for (const callback of callbacks) {
      callback();
    }
  }

  get count(): number {
    return this.pending.size;
  }
}

interface RecordedCall {
  panelId: string;
  irradiance: number;
  temperature: number;
  resolve: (curve: CurveResponse) => void;
  reject: (error: Error) => void;
}

function deferredFetcher(): { fetcher: CurveFetcher; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetcher: CurveFetcher = (panelId, irradiance, temperature) =>
    new Promise((resolve, reject) => {
      calls.push({ panelId, irradiance, temperature, resolve, reject });
    });
  return { fetcher, calls };
}

const settle = () => new Promise<void>((resolve) => setTimeout(resolve, 0));

describe("CurveStore rendering", () => {
  it("shows a fixture curve and its MPP verbatim", async () => {
    const store = new CurveStore(
      async () => cloneCurve(CURVE_A),
      new ManualTimers(),
    );
    store.selectPanel("bp_sx_150", "BP SX 150", null);
    await settle();

    const state = store.snapshot;
    expect(state.curve).toEqual(CURVE_A);
    expect(state.curve!.mpp.p_mp_w).toBe(150.075);
    expect(state.curve!.mpp.v_mp_v).toBe(34.5);
    expect(state.curve!.mpp.i_mp_a).toBe(4.35);
    expect(state.requestInFlight).toBe(false);
    expect(state.error).toBeNull();
  });

  it("does not fetch before a panel is selected", async () => {
    const timers = new ManualTimers();
    const { fetcher, calls } = deferredFetcher();
    const store = new CurveStore(fetcher, timers);

    store.setIrradiance(500);
    store.setTemperature(50);
    timers.fire();
    await settle();

    expect(calls.length).toBe(0);
    expect(store.snapshot.curve).toBeNull();
  });
});

describe("debounce", () => {
  it("coalesces a 10-event burst into one request at the final values", async () => {
    const timers = new ManualTimers();
    const { fetcher, calls } = deferredFetcher();
    const store = new CurveStore(fetcher, timers);

    store.selectPanel("panel-1", null, null);
    expect(calls.length).toBe(1);
    calls[0].resolve(cloneCurve(CURVE_A));
    await settle();

    const burst = [990, 950, 900, 850, 800, 750, 700, 650, 600, 550];
    for (const value of burst) {
      store.setIrradiance(value);
    }
    expect(timers.count).toBe(1);
    expect(calls.length).toBe(1);

    timers.fire();
    await settle();
    expect(calls.length).toBe(2);
    expect(calls[1].irradiance).toBe(550);
    expect(calls[1].temperature).toBe(25);

    calls[1].resolve(cloneCurve(CURVE_B));
    await settle();
    expect(store.snapshot.curve).toEqual(CURVE_B);
  });
});

describe("latest-wins", () => {
  it("discards the stale response after a 10-event slider burst", async () => {
    const timers = new ManualTimers();
    const { fetcher, calls } = deferredFetcher();
    const store = new CurveStore(fetcher, timers);

    const seen: Array<CurveResponse | null> = [];
    store.subscribe((state) => {
      seen.push(state.curve);
    });

    store.selectPanel("panel-1", null, null);
    expect(calls.length).toBe(1);

    // 10 slider events while the first request is still on the wire.
    const burst: Array<["g" | "t", number]> = [
      ["g", 900], ["g", 800], ["t", 30], ["g", 700], ["t", 35],
      ["g", 900], ["t", 40], ["g", 1100], ["g", 1150], ["g", 1200],
    ];
    for (const [kind, value] of burst) {
      if (kind === "g") {
        store.setIrradiance(value);
      } else {
        store.setTemperature(value);
      }
    }
    timers.fire();
    await settle();
    // At most one request in flight: the burst only marks it stale.
    expect(calls.length).toBe(1);

    calls[0].resolve(cloneCurve(CURVE_A));
    await settle();

    // The stale body was discarded and a fresh request went out for the
    // final slider state.
    expect(calls.length).toBe(2);
    expect(calls[1].irradiance).toBe(1200);
    expect(calls[1].temperature).toBe(40);
    expect(store.snapshot.curve).toBeNull();
    expect(store.snapshot.requestInFlight).toBe(true);

    calls[1].resolve(cloneCurve(CURVE_B));
    await settle();

    const state = store.snapshot;
    expect(state.curve).toEqual(CURVE_B);
    expect(state.requestInFlight).toBe(false);

    // The stale curve never reached a render: only null or the final
    // response was ever observable.
    for (const curve of seen) {
      if (curve !== null) {
        expect(curve).toEqual(CURVE_B);
      }
    }
  });

  it("re-fetches when the panel changes mid-flight", async () => {
    const timers = new ManualTimers();
    const { fetcher, calls } = deferredFetcher();
    const store = new CurveStore(fetcher, timers);

    store.selectPanel("panel-1", null, null);
    store.selectPanel("panel-2", null, null);
    expect(calls.length).toBe(1);

    calls[0].resolve(cloneCurve(CURVE_A));
    await settle();

    expect(calls.length).toBe(2);
    expect(calls[1].panelId).toBe("panel-2");
    calls[1].resolve(cloneCurve(CURVE_B));
    await settle();
    expect(store.snapshot.curve).toEqual(CURVE_B);
  });
});

describe("errors", () => {
  it("keeps the last good curve and surfaces the message", async () => {
    const timers = new ManualTimers();
    const { fetcher, calls } = deferredFetcher();
    const store = new CurveStore(fetcher, timers);

    store.selectPanel("panel-1", null, null);
    calls[0].resolve(cloneCurve(CURVE_A));
    await settle();
    expect(store.snapshot.curve).toEqual(CURVE_A);

    store.setTemperature(60);
    timers.fire();
    await settle();
    calls[1].reject(new Error("cell temperature must be positive kelvin"));
    await settle();

    const state = store.snapshot;
    expect(state.curve).toEqual(CURVE_A);
    expect(state.error).toBe("cell temperature must be positive kelvin");
    expect(state.requestInFlight).toBe(false);
  });

  it("clears the error banner on the next good response", async () => {
    const timers = new ManualTimers();
    const { fetcher, calls } = deferredFetcher();
    const store = new CurveStore(fetcher, timers);

    store.selectPanel("panel-1", null, null);
    calls[0].reject(new Error("boom"));
    await settle();
    expect(store.snapshot.error).toBe("boom");

    store.setIrradiance(400);
    timers.fire();
    await settle();
    calls[1].resolve(cloneCurve(CURVE_B));
    await settle();

    expect(store.snapshot.error).toBeNull();
    expect(store.snapshot.curve).toEqual(CURVE_B);
  });
});

describe("slider ranges", () => {
  it("snaps to the configured step and clamps to the range", () => {
    expect(snapToRange(94, IRRADIANCE_SLIDER)).toBe(100);
    expect(snapToRange(5000, IRRADIANCE_SLIDER)).toBe(1200);
    expect(snapToRange(1004, IRRADIANCE_SLIDER)).toBe(1000);
    expect(snapToRange(1006, IRRADIANCE_SLIDER)).toBe(1010);
    expect(snapToRange(-30, TEMPERATURE_SLIDER)).toBe(-25);
    expect(snapToRange(80, TEMPERATURE_SLIDER)).toBe(75);
    expect(snapToRange(30.4, TEMPERATURE_SLIDER)).toBe(30);
    expect(snapToRange(Number.NaN, TEMPERATURE_SLIDER)).toBe(25);
  });

  it("defaults match the documented slider setup", () => {
    expect(IRRADIANCE_SLIDER).toEqual({
      min: 100,
      max: 1200,
      step: 10,
      initial: 1000,
    });
    expect(TEMPERATURE_SLIDER).toEqual({
      min: -25,
      max: 75,
      step: 1,
      initial: 25,
    });
  });

  it("ignores a repeat of the current value", () => {
    const timers = new ManualTimers();
    const { fetcher, calls } = deferredFetcher();
    const store = new CurveStore(fetcher, timers);
    store.selectPanel("panel-1", null, null);

    store.setIrradiance(1000);
    expect(timers.count).toBe(0);
    expect(calls.length).toBe(1);
  });
});

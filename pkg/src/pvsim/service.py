"""HTTP JSON API over the estimation and simulation layers.

Endpoints:

    GET  /panels                         list registered panels
    POST /panels                         register a datasheet, estimate params
    GET  /panels/{id}/curve              curve arrays + tracked MPP

Wire units are W/m2 and degC (converted at this boundary) and numbers
are serialized with full round-trip precision, so service responses can
be compared against direct library calls value for value.  The registry
is single-writer/many-readers: registrations serialize on a lock while
reads work on immutable snapshots and never block.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .datasheet import bundled_panel, bundled_panel_names, parse_datasheet
from .errors import DatasheetError, PvSimError
from .estimation import (
    DEFAULT_CONTEXT,
    EstimatedParams,
    PanelDatasheet,
    StcContext,
    estimate_parameters,
)
from .simulation import EnvConditions, generate_iv_curve, track_mpp

MAX_CURVE_POINTS = 20000


@dataclass(frozen=True)
class PanelEntry:
    datasheet: PanelDatasheet
    params: EstimatedParams


class PanelRegistry:
    """Panel store with atomic registration.

    Estimation runs before the registry is touched, so a failing POST
    cannot leave a partial entry.  Writers replace the entry dict as a
    whole under a lock; readers only ever see complete snapshots.
    """

    def __init__(self, ctx: StcContext = DEFAULT_CONTEXT) -> None:
        self._ctx = ctx
        self._entries: dict[str, PanelEntry] = {}
        self._write_lock = threading.Lock()
        self._counter = 0

    def register_bundled(self) -> None:
        for name in bundled_panel_names():
            datasheet = bundled_panel(name)
            params = estimate_parameters(datasheet, self._ctx)
            self._store(name, PanelEntry(datasheet=datasheet, params=params))

    def register(self, datasheet: PanelDatasheet) -> tuple[str, EstimatedParams]:
        params = estimate_parameters(datasheet, self._ctx)
        with self._write_lock:
            self._counter += 1
            panel_id = f"panel-{self._counter}"
            updated = dict(self._entries)
            updated[panel_id] = PanelEntry(datasheet=datasheet, params=params)
            self._entries = updated
        return panel_id, params

    def _store(self, panel_id: str, entry: PanelEntry) -> None:
        with self._write_lock:
            updated = dict(self._entries)
            updated[panel_id] = entry
            self._entries = updated

    def get(self, panel_id: str) -> PanelEntry | None:
        return self._entries.get(panel_id)

    def list_entries(self) -> list[tuple[str, PanelEntry]]:
        return list(self._entries.items())

    @property
    def ctx(self) -> StcContext:
        return self._ctx


def _error(status: int, tag: str, detail: str) -> JSONResponse:
    return JSONResponse({"error": tag, "detail": detail}, status_code=status)


def create_app(ctx: StcContext = DEFAULT_CONTEXT,
               ui_dir: str | None = None) -> FastAPI:
    """Build the application with bundled panels pre-registered."""
    registry = PanelRegistry(ctx)
    registry.register_bundled()

    app = FastAPI(title="pvsim", version="0.1.0")
    app.state.registry = registry

    @app.get("/panels")
    def list_panels() -> JSONResponse:
        payload = [
            {"panel_id": panel_id, "name": entry.datasheet.name}
            for panel_id, entry in registry.list_entries()
        ]
        return JSONResponse(payload)

    @app.post("/panels")
    async def create_panel(request: Request) -> JSONResponse:
        raw = await request.body()
        try:
            datasheet = parse_datasheet(raw.decode("utf-8"))
        except UnicodeDecodeError:
            return _error(400, "DatasheetError", "body is not valid UTF-8")
        except DatasheetError as exc:
            return _error(400, type(exc).__name__, str(exc))
        try:
            panel_id, params = registry.register(datasheet)
        except PvSimError as exc:
            return _error(422, type(exc).__name__, str(exc))
        return JSONResponse(
            {
                "panel_id": panel_id,
                "estimated": {
                    "n": params.n,
                    "rs_ohm": params.rs,
                    "i0_stc_a": params.i0_stc,
                    "iterations": params.iterations,
                    "residual": params.residual,
                },
            },
            status_code=201,
        )

    @app.get("/panels/{panel_id}/curve")
    def panel_curve(
        panel_id: str,
        irradiance_w_m2: str = "1000",
        temperature_c: str = "25",
        points: str = "2000",
    ) -> JSONResponse:
        entry = registry.get(panel_id)
        if entry is None:
            return _error(404, "UnknownPanel", f"no panel with id {panel_id!r}")
        try:
            irradiance = float(irradiance_w_m2)
            temperature = float(temperature_c)
            sample_count = int(points)
        except ValueError as exc:
            return _error(400, "BadQuery", str(exc))
        if not 2 <= sample_count <= MAX_CURVE_POINTS:
            return _error(
                400, "BadQuery",
                f"points must be in [2, {MAX_CURVE_POINTS}], got {sample_count}")
        try:
            env = EnvConditions.from_w_m2_and_celsius(
                irradiance, temperature, registry.ctx)
            curve = generate_iv_curve(entry.datasheet, entry.params, env,
                                      registry.ctx, points=sample_count)
        except PvSimError as exc:
            return _error(400, type(exc).__name__, str(exc))
        mpp = track_mpp(curve)
        return JSONResponse({
            "voltage_v": curve.voltage.tolist(),
            "current_a": curve.current.tolist(),
            "power_w": curve.power.tolist(),
            "mpp": {"v_mp_v": mpp.v_mp, "i_mp_a": mpp.i_mp, "p_mp_w": mpp.p_mp},
        })

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        # Mounted after the API routes so /panels keeps precedence.
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(port: int = 8080, bind: str = "127.0.0.1",
          ui_dir: str | None = None) -> None:
    """Run the service with uvicorn; blocks until interrupted."""
    import uvicorn

    uvicorn.run(create_app(ui_dir=ui_dir), host=bind, port=port,
                log_level="info")

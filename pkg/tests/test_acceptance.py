"""Acceptance gate: one test per headline requirement.

Each test pins the advertised tolerance exactly and prints a PASS line
(visible with ``pytest -s``); a failures prints through pytest itself.
Reference routes (bisection, dense grids, 50-digit evaluation, forward
synthesis) come from tests/oracles.py and never import formula code
from the package.
"""

import json
import math
import random
import socket
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import httpx
import numpy as np
import pytest
import uvicorn
from scipy.optimize import brentq

import oracles
from pvsim import (
    DEFAULT_CONTEXT,
    EnvConditions,
    PanelDatasheet,
    PvSimError,
    condition_model,
    estimate_ideality_factor,
    estimate_parameters,
    generate_iv_curve,
    ideality_residual,
    ideality_residual_derivative,
    open_circuit_voltage,
    short_circuit_current,
    track_mpp,
    voltage_at_current,
)
from pvsim.service import create_app

STC = EnvConditions(irradiance_kw_m2=1.0, cell_temp_k=298.0)


def as_datasheet(panel: oracles.RefPanel) -> PanelDatasheet:
    return PanelDatasheet(voc_stc=panel.voc, isc_stc=panel.isc,
                          vmp_stc=panel.vmp, imp_stc=panel.imp,
                          cell_count=panel.cells, alpha_isc=panel.alpha,
                          beta_voc=panel.beta)


def best_runtime(fn, repeats: int = 5) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def test_table_2_reproduction(bp):
    params = estimate_parameters(bp)
    assert abs(params.n - 1.64) <= 0.01
    assert abs(params.rs - 0.342) <= 0.005
    assert abs(params.i0_stc - 2.83e-6) <= 0.05e-6
    assert params.iterations == 2
    runtime = best_runtime(lambda: estimate_parameters(bp))
    assert runtime < 0.010, f"estimation took {runtime * 1e3:.2f} ms"
    print("\nACCEPTANCE table-2-reproduction: PASS "
          f"(n={params.n:.4f}, rs={params.rs:.4f}, i0={params.i0_stc:.3e}, "
          f"iterations={params.iterations}, {runtime * 1e3:.2f} ms)")


def test_convergence_bound_on_perturbed_datasheets(bp):
    datasheets = [bp] + [as_datasheet(p) for p in oracles.perturbed_panels()]
    converged = 0
    declared = 0
    for ds in datasheets:
        try:
            params = estimate_parameters(ds, tolerance=1e-4)
        except PvSimError:
            declared += 1
            continue
        converged += 1
        assert params.iterations <= 6, \
            f"{ds}: converged but took {params.iterations} iterations"
        assert math.isfinite(params.n) and params.n > 0
        assert params.residual <= 1e-4
    assert converged >= 1
    assert converged + declared == len(datasheets)
    print(f"\nACCEPTANCE convergence-bound: PASS "
          f"({converged} converged in <=6 iterations, "
          f"{declared} raised declared errors, never silent garbage)")


def test_root_matches_bisection_oracle(bp):
    datasheets = [(bp, oracles.BP_SX_150)] + [
        (as_datasheet(p), p) for p in oracles.perturbed_panels()]
    compared = 0
    outside_window = 0
    for ds, panel in datasheets:
        try:
            result = estimate_ideality_factor(ds)
        except PvSimError:
            continue
        if not 0.5 <= result.n <= 5.0:
            outside_window += 1     # beyond the oracle's bracket by design
            continue
        oracle_root = oracles.bisect_root(panel, lo=0.5, hi=5.0)
        assert oracle_root is not None, \
            f"Newton found {result.n} in [0.5, 5] but the oracle sees no bracket"
        assert abs(result.n - oracle_root) <= 1e-3, \
            f"Newton {result.n} vs bisection {oracle_root}"
        compared += 1
    assert compared >= 10
    print(f"\nACCEPTANCE root-oracle-equivalence: PASS "
          f"({compared} roots matched within 1e-3, "
          f"{outside_window} roots outside the [0.5, 5] oracle window)")


def test_mpp_at_stc(bp, bp_params):
    curve = generate_iv_curve(bp, bp_params, STC, points=2000)
    mpp = track_mpp(curve)
    assert abs(mpp.p_mp - 150.075) / 150.075 <= 0.01
    assert abs(mpp.v_mp - 34.5) <= 0.5
    runtime = best_runtime(
        lambda: track_mpp(generate_iv_curve(bp, bp_params, STC, points=2000)))
    assert runtime < 0.050, f"curve + MPP took {runtime * 1e3:.2f} ms"
    print(f"\nACCEPTANCE mpp-at-stc: PASS (p_mp={mpp.p_mp:.3f} W, "
          f"v_mp={mpp.v_mp:.3f} V, {runtime * 1e3:.2f} ms)")


def test_construction_identities(bp, bp_params):
    # Solve the implicit diode equation for current at a fixed voltage
    # (test-side route) and check the datasheet anchor points.
    m = DEFAULT_CONTEXT.thermal_coefficient_stc(bp.cell_count)

    def current_at(voltage: float) -> float:
        def residual(i: float) -> float:
            return bp.isc_stc - bp_params.i0_stc * math.expm1(
                m * (voltage + i * bp_params.rs) / bp_params.n) - i
        return brentq(residual, -1.0, bp.isc_stc, xtol=1e-15, rtol=9e-16)

    open_circuit_current = current_at(bp.voc_stc)
    assert abs(open_circuit_current) <= 1e-8 * bp.isc_stc
    mpp_current = current_at(bp.vmp_stc)
    assert abs(mpp_current - bp.imp_stc) / bp.imp_stc <= 1e-8
    print(f"\nACCEPTANCE construction-identities: PASS "
          f"(I(voc)={open_circuit_current:.2e} A, "
          f"I(vmp) off by {abs(mpp_current - bp.imp_stc) / bp.imp_stc:.2e} rel)")


def test_environmental_sweeps(bp, bp_params):
    for t_c in (0.0, 25.0, 50.0, 75.0):
        env = EnvConditions.from_w_m2_and_celsius(1000.0, t_c, DEFAULT_CONTEXT)
        voc = open_circuit_voltage(bp, bp_params, env, DEFAULT_CONTEXT)
        assert abs(voc - (43.5 - 0.16 * (t_c - 25.0))) <= 0.01, f"T={t_c} C"
    for g_w in range(200, 1001, 100):
        env = EnvConditions.from_w_m2_and_celsius(float(g_w), 25.0,
                                                  DEFAULT_CONTEXT)
        isc = short_circuit_current(bp, env, DEFAULT_CONTEXT)
        assert abs(isc - 4.75 * (g_w / 1000.0)) <= 1e-6, f"G={g_w} W/m2"
    print("\nACCEPTANCE environmental-sweeps: PASS "
          "(Voc linear in T within 0.01 V; Isc linear in G within 1e-6 A)")


def test_derivative_check(bp):
    rng = random.Random(20260813)
    worst = 0.0
    for _ in range(20):
        n = rng.uniform(0.8, 3.5)
        h = 1e-6 * n
        fd = (ideality_residual(n + h, bp) - ideality_residual(n - h, bp)) / (2 * h)
        analytic = ideality_residual_derivative(n, bp)
        rel = abs(analytic - fd) / abs(fd)
        worst = max(worst, rel)
        assert rel <= 1e-5, f"n={n}: analytic {analytic} vs FD {fd}"
    print(f"\nACCEPTANCE derivative-check: PASS (worst relative error {worst:.2e})")


def test_round_trip_recovery():
    cases = [
        (1.8, 0.3, 1e-6, 5.0, 72),
        (1.3, 0.15, 5e-8, 8.0, 60),
        (2.2, 0.45, 5e-6, 3.5, 96),
    ]
    worst = 0.0
    for n_true, rs_true, i0_true, isc, cells in cases:
        voc, isc_out, vmp, imp = oracles.synthesize_datasheet(
            n_true, rs_true, i0_true, isc, cells)
        ds = PanelDatasheet(voc_stc=voc, isc_stc=isc_out, vmp_stc=vmp,
                            imp_stc=imp, cell_count=cells,
                            alpha_isc=0.00065, beta_voc=-0.16)
        params = estimate_parameters(ds)
        for recovered, truth in ((params.n, n_true), (params.rs, rs_true),
                                 (params.i0_stc, i0_true)):
            rel = abs(recovered - truth) / truth
            worst = max(worst, rel)
            assert rel <= 0.01, f"target {truth} recovered as {recovered}"
    print(f"\nACCEPTANCE round-trip-recovery: PASS "
          f"(worst parameter error {worst:.2e} rel, bound 1e-2)")


def test_property_suites_grid(bp, bp_params):
    checked = 0
    for g in np.linspace(0.2, 1.2, 5):
        for t in np.linspace(273.0, 348.0, 5):
            env = EnvConditions(irradiance_kw_m2=float(g), cell_temp_k=float(t))
            curve = generate_iv_curve(bp, bp_params, env, DEFAULT_CONTEXT)
            assert np.all(np.diff(curve.voltage) < 0), (g, t)
            assert np.all(np.diff(curve.current) > 0), (g, t)
            assert oracles.is_unimodal(curve.power), (g, t)
            mpp = track_mpp(curve)
            model = condition_model(bp, bp_params, env, DEFAULT_CONTEXT)
            di = model.isc_gt * 1e-7
            i_mid = min(max(mpp.i_mp, di), model.isc_gt - di)
            v_hi = voltage_at_current(i_mid - di, model)
            v_lo = voltage_at_current(i_mid + di, model)
            slope = (v_hi * (i_mid - di) - v_lo * (i_mid + di)) / (v_hi - v_lo)
            assert abs(slope) <= 0.005 * mpp.p_mp / mpp.v_mp, (g, t, slope)
            checked += 1
    assert checked == 25
    print("\nACCEPTANCE property-suites: PASS "
          "(monotonicity, unimodality, dP/dV at MPP on the 5x5 grid)")


@pytest.fixture(scope="module")
def acceptance_server():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
    config = uvicorn.Config(create_app(), host="127.0.0.1", port=port,
                            log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("service did not start in time")
        time.sleep(0.01)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def test_service_equivalence_and_atomicity(acceptance_server, bp, bp_params):
    base = acceptance_server
    env = EnvConditions.from_w_m2_and_celsius(1000.0, 50.0, DEFAULT_CONTEXT)
    curve = generate_iv_curve(bp, bp_params, env, DEFAULT_CONTEXT, points=2000)
    mpp = track_mpp(curve)
    expected = {
        "voltage_v": curve.voltage.tolist(),
        "current_a": curve.current.tolist(),
        "power_w": curve.power.tolist(),
        "mpp": {"v_mp_v": mpp.v_mp, "i_mp_a": mpp.i_mp, "p_mp_w": mpp.p_mp},
    }
    params = {"irradiance_w_m2": "1000", "temperature_c": "50",
              "points": "2000"}

    with httpx.Client(base_url=base, timeout=30.0) as client:
        response = client.get("/panels/bp_sx_150/curve", params=params)
        assert response.status_code == 200
        assert response.json() == expected
        repeat = client.get("/panels/bp_sx_150/curve", params=params)
        assert repeat.content == response.content
        before = len(client.get("/panels").json())

    body = {
        "voc_stc": 43.5, "isc_stc": 4.75, "vmp_stc": 34.5, "imp_stc": 4.35,
        "cell_count": 72, "alpha_isc": 0.00065, "beta_voc": -0.16,
    }
    bad_body = {key: value for key, value in body.items() if key != "voc_stc"}

    def post_valid(k: int) -> str:
        with httpx.Client(base_url=base, timeout=30.0) as client:
            response = client.post("/panels",
                                   json=dict(body, name=f"acc-{k}"))
            assert response.status_code == 201
            return response.json()["panel_id"]

    def post_invalid(_: int) -> None:
        with httpx.Client(base_url=base, timeout=30.0) as client:
            assert client.post("/panels", json=bad_body).status_code == 400

    def get_curve(_: int) -> None:
        with httpx.Client(base_url=base, timeout=30.0) as client:
            reply = client.get("/panels/bp_sx_150/curve", params=params)
            assert reply.json() == expected

    def get_listing(_: int) -> int:
        with httpx.Client(base_url=base, timeout=30.0) as client:
            return len(client.get("/panels").json())

    with ThreadPoolExecutor(max_workers=12) as pool:
        valid = [pool.submit(post_valid, k) for k in range(6)]
        invalid = [pool.submit(post_invalid, k) for k in range(4)]
        curves = [pool.submit(get_curve, k) for k in range(6)]
        listings = [pool.submit(get_listing, k) for k in range(6)]
        ids = [f.result() for f in valid]
        for f in invalid + curves:
            f.result()
        counts = [f.result() for f in listings]

    assert len(set(ids)) == 6
    assert all(before <= count <= before + 6 for count in counts)
    with httpx.Client(base_url=base, timeout=30.0) as client:
        assert len(client.get("/panels").json()) == before + 6
    print("\nACCEPTANCE service-equivalence: PASS "
          "(bodies numerically identical to the library; registry atomic "
          "under concurrent POST/GET)")

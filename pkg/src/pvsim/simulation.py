"""Operating-condition scaling, I-V/P-V curve generation, MPP tracking.

The STC estimate from :mod:`pvsim.estimation` is translated to an
arbitrary (irradiance, temperature) operating point with the standard
scaling relations

    Voc|G,T = Voc|stc + b*(T - Tstc) + (n/m_T) * ln(G)
    Isc|G,T = Isc|stc * G^(1 + a*(T - Tstc))
    I0|G,T  = Isc|G,T / (exp(m_T * Voc|G,T / n) - 1)

with G in kW/m2, T in kelvin and m_T = q/(N*k*T).  The ideality factor
and series resistance are treated as environment independent.  Curves
are sampled in current (uniform on [0, Isc|G,T]) and mapped to voltage
through the closed-form inversion of the single-diode equation, so no
per-sample root finding is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelRangeError, NumericalRangeError
from .estimation import DEFAULT_CONTEXT, EstimatedParams, PanelDatasheet, StcContext

DEFAULT_CURVE_POINTS = 2000

# Appended V=0 crossing is located to this voltage tolerance.
ZERO_CROSSING_TOL_V = 1e-9


@dataclass(frozen=True)
class EnvConditions:
    """Operating environment: irradiance in kW/m2, cell temperature in K."""

    irradiance_kw_m2: float
    cell_temp_k: float

    def __post_init__(self) -> None:
        if not self.irradiance_kw_m2 > 0.0:
            raise ModelRangeError(
                f"irradiance must be positive, got {self.irradiance_kw_m2} kW/m2")
        if not self.cell_temp_k > 0.0:
            raise ModelRangeError(
                f"cell temperature must be positive kelvin, got {self.cell_temp_k}")

    @classmethod
    def from_w_m2_and_celsius(
        cls,
        irradiance_w_m2: float,
        temperature_c: float,
        ctx: StcContext = DEFAULT_CONTEXT,
    ) -> "EnvConditions":
        """Build conditions from the user-facing units (W/m2, degC)."""
        return cls(
            irradiance_kw_m2=irradiance_w_m2 / 1000.0,
            cell_temp_k=ctx.kelvin_from_celsius(temperature_c),
        )


STC_CONDITIONS = EnvConditions(irradiance_kw_m2=1.0,
                               cell_temp_k=DEFAULT_CONTEXT.t_stc_k)


@dataclass(frozen=True)
class ConditionedModel:
    """Single-diode model constants frozen at one operating point."""

    voc_gt: float
    isc_gt: float
    i0_gt: float
    m_t: float
    n: float
    rs: float

    def __post_init__(self) -> None:
        for label in ("voc_gt", "isc_gt", "i0_gt", "m_t", "n"):
            if not getattr(self, label) > 0.0:
                raise ModelRangeError(
                    f"{label} must be positive, got {getattr(self, label)!r}")
        if self.rs < 0.0:
            raise ModelRangeError(f"rs must not be negative, got {self.rs!r}")


@dataclass(frozen=True)
class IvCurve:
    """Sampled I-V characteristic and its power profile.

    ``current`` is strictly increasing from 0, ``voltage`` strictly
    decreasing and non-negative, and ``power`` is the element-wise
    product of the two.  Arrays are read-only.
    """

    voltage: np.ndarray
    current: np.ndarray
    power: np.ndarray
    env: EnvConditions

    def __post_init__(self) -> None:
        if not (len(self.voltage) == len(self.current) == len(self.power)):
            raise ValueError("curve arrays must have equal lengths")
        if len(self.voltage) < 2:
            raise ValueError("curve needs at least 2 samples")
        for array in (self.voltage, self.current, self.power):
            array.setflags(write=False)


@dataclass(frozen=True)
class MppPoint:
    """Tracked maximum power point; ``index`` is the argmax sample."""

    v_mp: float
    i_mp: float
    p_mp: float
    index: int


def open_circuit_voltage(
    datasheet: PanelDatasheet,
    params: EstimatedParams,
    env: EnvConditions,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> float:
    """Open-circuit voltage at the given operating point. [V]

    Raises
    ------
    ModelRangeError
        If the result is not positive (irradiance too low for the
        logarithmic term).
    """
    m_t = ctx.thermal_coefficient(datasheet.cell_count, env.cell_temp_k)
    voc = (
        datasheet.voc_stc
        + datasheet.beta_voc * (env.cell_temp_k - ctx.t_stc_k)
        + (params.n / m_t) * math.log(env.irradiance_kw_m2)
    )
    if voc <= 0.0:
        raise ModelRangeError(
            f"open-circuit voltage is {voc:.6g} V at G={env.irradiance_kw_m2} "
            f"kW/m2, T={env.cell_temp_k} K; operating point is outside the model")
    return voc


def short_circuit_current(
    datasheet: PanelDatasheet,
    env: EnvConditions,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> float:
    """Short-circuit current at the given operating point. [A]

    Note the quirk of the scaling law: at exactly G = 1 kW/m2 the
    temperature exponent has no effect, so Isc stays at its STC value
    for every temperature.
    """
    exponent = 1.0 + datasheet.alpha_isc * (env.cell_temp_k - ctx.t_stc_k)
    return datasheet.isc_stc * env.irradiance_kw_m2 ** exponent


def saturation_current_env(
    datasheet: PanelDatasheet,
    params: EstimatedParams,
    env: EnvConditions,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> float:
    """Reverse saturation current at the given operating point. [A]

    Recomputed from the shifted open-circuit point exactly as the STC
    value is computed from the datasheet, so at STC this degenerates to
    ``params.i0_stc`` bit for bit.
    """
    voc = open_circuit_voltage(datasheet, params, env, ctx)
    isc = short_circuit_current(datasheet, env, ctx)
    m_t = ctx.thermal_coefficient(datasheet.cell_count, env.cell_temp_k)
    try:
        denom = math.expm1(m_t * voc / params.n)
    except OverflowError as exc:
        raise NumericalRangeError(
            f"exp(m_T*voc/n) overflows at T={env.cell_temp_k} K") from exc
    if denom <= 0.0 or math.isinf(denom):
        raise NumericalRangeError(
            f"saturation current is not representable at T={env.cell_temp_k} K")
    return isc / denom


def condition_model(
    datasheet: PanelDatasheet,
    params: EstimatedParams,
    env: EnvConditions,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> ConditionedModel:
    """Freeze all per-operating-point constants into one struct."""
    voc = open_circuit_voltage(datasheet, params, env, ctx)
    isc = short_circuit_current(datasheet, env, ctx)
    i0 = saturation_current_env(datasheet, params, env, ctx)
    m_t = ctx.thermal_coefficient(datasheet.cell_count, env.cell_temp_k)
    return ConditionedModel(
        voc_gt=voc, isc_gt=isc, i0_gt=i0, m_t=m_t, n=params.n, rs=params.rs)


def voltage_at_current(i: float, model: ConditionedModel) -> float:
    """Terminal voltage for a given output current. [V]

    Closed-form inversion of the single-diode equation:

        V(I) = (n/m_T) * ln(1 + (Isc - I)/I0) - I*Rs

    Strictly decreasing in I.  At I=0 this reproduces voc_gt by
    construction; at I=Isc it is -Isc*Rs, i.e. below zero whenever
    Rs > 0 (curve generation clips that tail at the V=0 axis).

    Raises
    ------
    ModelRangeError
        If ``i`` lies outside [0, isc_gt].
    """
    if not 0.0 <= i <= model.isc_gt:
        raise ModelRangeError(
            f"current {i!r} A outside the model domain [0, {model.isc_gt!r}]")
    return (model.n / model.m_t) * math.log1p((model.isc_gt - i) / model.i0_gt) \
        - i * model.rs


def _zero_crossing_current(model: ConditionedModel,
                           i_lo: float, i_hi: float) -> float:
    # Bisection for V(i)=0 given V(i_lo) >= 0 > V(i_hi); V is strictly
    # decreasing so the bracket is valid.  Stops at |V| <= tolerance or
    # when the interval hits float granularity.
    best_i = i_lo
    best_v = voltage_at_current(i_lo, model)
    for _ in range(200):
        mid = 0.5 * (i_lo + i_hi)
        if mid == i_lo or mid == i_hi:
            break
        v = voltage_at_current(mid, model)
        if abs(v) < abs(best_v):
            best_i, best_v = mid, v
        if abs(v) <= ZERO_CROSSING_TOL_V:
            return mid
        if v >= 0.0:
            i_lo = mid
        else:
            i_hi = mid
    return best_i


def generate_iv_curve(
    datasheet: PanelDatasheet,
    params: EstimatedParams,
    env: EnvConditions,
    ctx: StcContext = DEFAULT_CONTEXT,
    *,
    points: int = DEFAULT_CURVE_POINTS,
) -> IvCurve:
    """Sample the I-V characteristic at the given operating point.

    Currents are sampled uniformly on [0, isc_gt]; voltages follow from
    the closed-form inversion; power is the element-wise product.
    Samples with negative voltage (the resistive tail past the V=0
    axis) are dropped and replaced by the axis crossing itself, located
    by bisection, so the returned curve spans exactly voc_gt down to 0.

    Parameters
    ----------
    points : int
        Uniform current sample count before clipping, >= 2.

    Returns
    -------
    IvCurve
    """
    if points < 2:
        raise ValueError(f"points must be at least 2, got {points}")
    model = condition_model(datasheet, params, env, ctx)
    current = np.linspace(0.0, model.isc_gt, points)
    voltage = (model.n / model.m_t) * np.log1p(
        (model.isc_gt - current) / model.i0_gt) - current * model.rs

    keep = voltage >= 0.0
    if not keep.all():
        kept_v = voltage[keep]
        kept_i = current[keep]
        first_dropped = float(current[~keep][0])
        i_cross = _zero_crossing_current(model, float(kept_i[-1]), first_dropped)
        if i_cross > kept_i[-1]:
            voltage = np.append(kept_v, 0.0)
            current = np.append(kept_i, i_cross)
        else:
            # Last kept sample already sits on the axis within tolerance.
            voltage = kept_v.copy()
            voltage[-1] = 0.0
            current = kept_i
    power = voltage * current
    return IvCurve(voltage=voltage, current=current, power=power, env=env)


def _parabolic_vertex(x0: float, y0: float, x1: float, y1: float,
                      x2: float, y2: float) -> tuple[float, float] | None:
    # Vertex of the quadratic through three points with distinct x.
    # Returns None unless the parabola opens downward (a true maximum).
    s01 = (y0 - y1) / (x0 - x1)
    s12 = (y1 - y2) / (x1 - x2)
    curvature = (s01 - s12) / (x0 - x2)
    if not math.isfinite(curvature) or curvature >= 0.0:
        return None
    xv = 0.5 * (x1 + x2) - s12 / (2.0 * curvature)
    yv = y2 + s12 * (xv - x2) + curvature * (xv - x2) * (xv - x1)
    if not (math.isfinite(xv) and math.isfinite(yv)):
        return None
    return xv, yv


def track_mpp(curve: IvCurve) -> MppPoint:
    """Locate the maximum power point of a generated curve.

    The discrete argmax (ties broken by lowest index) is refined by a
    parabolic fit through the sample and its two neighbours whenever the
    argmax is interior; the fit removes grid-quantization bias from the
    reported voltage.  If the fit is degenerate, does not improve on the
    sample, or implies a current above the sampled range, the sample
    itself is reported.
    """
    idx = int(np.argmax(curve.power))
    v_mp = float(curve.voltage[idx])
    i_mp = float(curve.current[idx])
    p_mp = float(curve.power[idx])
    if 0 < idx < len(curve.power) - 1:
        vertex = _parabolic_vertex(
            float(curve.voltage[idx - 1]), float(curve.power[idx - 1]),
            v_mp, p_mp,
            float(curve.voltage[idx + 1]), float(curve.power[idx + 1]))
        if vertex is not None:
            xv, yv = vertex
            lo = float(curve.voltage[idx + 1])  # voltage decreases with index
            hi = float(curve.voltage[idx - 1])
            # On very coarse grids the fitted peak can escape the curve's
            # physical envelope; a vertex implying more current than any
            # sample is extrapolation artifact, not quantization bias.
            i_cap = float(np.max(curve.current))
            if lo < xv < hi and yv >= p_mp and xv > 0.0 and yv <= xv * i_cap:
                v_mp = xv
                i_mp = yv / xv
                p_mp = v_mp * i_mp
    return MppPoint(v_mp=v_mp, i_mp=i_mp, p_mp=p_mp, index=idx)

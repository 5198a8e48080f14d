"""Single-diode parameter estimation from datasheet values.

A crystalline panel under the single-diode model (series resistance
included, shunt resistance neglected) satisfies

    I = Isc - I0 * (exp(m * (V + I*Rs) / n) - 1),    m = q / (N*k*T),

with three unknowns: the diode ideality factor ``n``, the series
resistance ``Rs`` and the reverse saturation current ``I0``.  Requiring
the curve to pass exactly through the open-circuit, short-circuit and
maximum-power datasheet points collapses the problem to a single scalar
root-finding problem in ``n``; ``I0`` and ``Rs`` then follow in closed
form.  This module implements that reduction and solves it with a
damped-free Newton iteration using the analytic derivative.

All temperatures are kelvin and all currents amperes.  Estimation is
always performed at standard test conditions (STC); see
:mod:`pvsim.simulation` for translating the result to other operating
conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    ConvergenceError,
    DatasheetError,
    DivergenceError,
    NumericalRangeError,
    SingularStepError,
)

BOLTZMANN_J_PER_K = 1.381e-23
ELECTRON_CHARGE_C = 1.602e-19

# Newton iterates outside this open interval are treated as divergence.
IDEALITY_LOWER_BOUND = 0.0
IDEALITY_UPPER_BOUND = 10.0


@dataclass(frozen=True)
class StcContext:
    """Physical constants and the STC reference temperature.

    The defaults reproduce the customary rounded constants used in
    photovoltaic datasheet work (k = 1.381e-23 J/K, q = 1.602e-19 C,
    T = 298 K, 273 between Celsius and kelvin).  Override fields to use
    e.g. CODATA values; every routine in the package threads a context
    through rather than hard-coding constants.
    """

    boltzmann_k: float = BOLTZMANN_J_PER_K
    electron_charge_q: float = ELECTRON_CHARGE_C
    t_stc_k: float = 298.0
    celsius_offset: float = 273.0

    def thermal_coefficient(self, cell_count: int, cell_temp_k: float) -> float:
        """Return m = q / (N*k*T), the inverse thermal voltage of the stack."""
        if cell_temp_k <= 0.0:
            raise ValueError("cell temperature must be positive kelvin")
        return self.electron_charge_q / (cell_count * self.boltzmann_k * cell_temp_k)

    def thermal_coefficient_stc(self, cell_count: int) -> float:
        """m evaluated at the STC temperature."""
        return self.thermal_coefficient(cell_count, self.t_stc_k)

    def kelvin_from_celsius(self, temperature_c: float) -> float:
        return temperature_c + self.celsius_offset


DEFAULT_CONTEXT = StcContext()


@dataclass(frozen=True)
class PanelDatasheet:
    """The seven datasheet values that drive the whole toolkit.

    Parameters
    ----------
    voc_stc : float
        Open-circuit voltage at STC. [V]
    isc_stc : float
        Short-circuit current at STC. [A]
    vmp_stc : float
        Voltage at the rated maximum power point. [V]
    imp_stc : float
        Current at the rated maximum power point. [A]
    cell_count : int
        Number of series-connected cells.
    alpha_isc : float
        Relative temperature coefficient of the short-circuit
        current. [1/degC]
    beta_voc : float
        Temperature coefficient of the open-circuit voltage,
        typically negative. [V/degC]
    name : str, optional
        Free-form label carried through reports.
    """

    voc_stc: float
    isc_stc: float
    vmp_stc: float
    imp_stc: float
    cell_count: int
    alpha_isc: float
    beta_voc: float
    name: str | None = None

    def __post_init__(self) -> None:
        for label in ("voc_stc", "isc_stc", "vmp_stc", "imp_stc",
                      "alpha_isc", "beta_voc"):
            value = getattr(self, label)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise DatasheetError(f"{label} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise DatasheetError(f"{label} must be finite, got {value!r}")
        if isinstance(self.cell_count, bool) or not isinstance(self.cell_count, int):
            raise DatasheetError(
                f"cell_count must be an integer, got {self.cell_count!r}")
        if self.cell_count < 1:
            raise DatasheetError(
                f"cell_count must be at least 1, got {self.cell_count}")
        if not 0.0 < self.vmp_stc < self.voc_stc:
            raise DatasheetError(
                "datasheet requires 0 < vmp_stc < voc_stc, got "
                f"vmp_stc={self.vmp_stc} voc_stc={self.voc_stc}")
        if not 0.0 < self.imp_stc < self.isc_stc:
            raise DatasheetError(
                "datasheet requires 0 < imp_stc < isc_stc, got "
                f"imp_stc={self.imp_stc} isc_stc={self.isc_stc}")
        if self.name is not None and not isinstance(self.name, str):
            raise DatasheetError(f"name must be text, got {self.name!r}")


@dataclass(frozen=True)
class EstimatedParams:
    """Single-diode parameters recovered from a datasheet at STC."""

    n: float
    rs: float
    i0_stc: float
    iterations: int
    residual: float

    def __post_init__(self) -> None:
        if not self.n > 0.0:
            raise ValueError(f"ideality factor must be positive, got {self.n}")
        if not self.i0_stc > 0.0:
            raise ValueError(
                f"saturation current must be positive, got {self.i0_stc}")
        if self.rs < 0.0:
            raise ValueError(f"series resistance must not be negative, got {self.rs}")
        if self.iterations < 1:
            raise ValueError("iteration count must be at least 1")


class NewtonResult(NamedTuple):
    """Converged ideality factor plus the iteration diagnostics."""

    n: float
    iterations: int
    residual: float


class ResidualSample(NamedTuple):
    """One grid point of the scalar residual; ``ok`` is False where the
    evaluation left floating-point range (value is then NaN)."""

    n: float
    value: float
    ok: bool


def saturation_current_at_stc(
    n: float,
    datasheet: PanelDatasheet,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> float:
    """Reverse saturation current implied by the open-circuit point.

    Forcing I = 0 at V = voc_stc in the single-diode equation gives

        I0 = Isc / (exp(m * Voc / n) - 1)

    evaluated with ``expm1`` so small exponents stay accurate.

    Parameters
    ----------
    n : float
        Ideality factor, > 0.
    datasheet : PanelDatasheet
    ctx : StcContext

    Returns
    -------
    float
        Saturation current at STC. [A]

    Raises
    ------
    NumericalRangeError
        If the exponential overflows (very small ``n``).
    """
    if n <= 0.0:
        raise ValueError(f"ideality factor must be positive, got {n}")
    m = ctx.thermal_coefficient_stc(datasheet.cell_count)
    exponent = m * datasheet.voc_stc / n
    try:
        denom = math.expm1(exponent)
    except OverflowError as exc:
        raise NumericalRangeError(
            f"exp(m*voc/n) overflows for n={n!r}; "
            "the ideality factor is too small for this panel") from exc
    if denom <= 0.0 or math.isinf(denom):
        raise NumericalRangeError(
            f"saturation current is not representable for n={n!r}")
    return datasheet.isc_stc / denom


def series_resistance_at_stc(
    n: float,
    i0_stc: float,
    datasheet: PanelDatasheet,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> float:
    """Series resistance implied by the maximum-power point.

    Forcing the curve through (vmp_stc, imp_stc) gives

        Rs = (n / (m * Imp)) * ln(1 + (Isc - Imp) / I0) - Vmp / Imp.

    Returns
    -------
    float
        Series resistance. [ohm]

    Raises
    ------
    DatasheetError
        If the implied resistance is negative, which means the three
        datasheet points are not consistent with this diode model.
    """
    if n <= 0.0:
        raise ValueError(f"ideality factor must be positive, got {n}")
    if i0_stc <= 0.0:
        raise ValueError(f"saturation current must be positive, got {i0_stc}")
    m = ctx.thermal_coefficient_stc(datasheet.cell_count)
    headroom = datasheet.isc_stc - datasheet.imp_stc
    rs = (n / (m * datasheet.imp_stc)) * math.log1p(headroom / i0_stc) \
        - datasheet.vmp_stc / datasheet.imp_stc
    if rs < 0.0:
        raise DatasheetError(
            f"implied series resistance is negative ({rs:.6g} ohm); "
            "the datasheet points are inconsistent with a single-diode panel")
    return rs


def ideality_residual(
    n: float,
    datasheet: PanelDatasheet,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> float:
    """Scalar residual whose root is the panel's ideality factor.

    Substituting the closed forms for I0 and Rs back into the
    maximum-power condition dP/dV = 0 leaves one equation in ``n``:

        f(n) = n*Imp + (S + I0(n)) * (n * ln(1 + S/I0(n)) - 2*m*Vmp),

    with S = Isc - Imp.  f is evaluated entirely through ``expm1`` and
    ``log1p``; the only failure mode is exponent overflow for tiny n.
    """
    i0 = saturation_current_at_stc(n, datasheet, ctx)
    m = ctx.thermal_coefficient_stc(datasheet.cell_count)
    headroom = datasheet.isc_stc - datasheet.imp_stc
    log_term = math.log1p(headroom / i0)
    return n * datasheet.imp_stc + (headroom + i0) * (
        n * log_term - 2.0 * m * datasheet.vmp_stc)


def ideality_residual_derivative(
    n: float,
    datasheet: PanelDatasheet,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> float:
    """Analytic df/dn for the residual above.

    Uses dI0/dn = I0 * (x/n) / (1 - exp(-x)) with x = m*voc/n, which is
    the overflow-free form of differentiating Isc/expm1(x): the naive
    quotient squares expm1(x) and overflows long before x itself does.
    """
    m = ctx.thermal_coefficient_stc(datasheet.cell_count)
    x = m * datasheet.voc_stc / n
    i0 = saturation_current_at_stc(n, datasheet, ctx)
    headroom = datasheet.isc_stc - datasheet.imp_stc
    log_term = math.log1p(headroom / i0)
    di0_ratio = (x / n) / (1.0 - math.exp(-x))
    di0 = i0 * di0_ratio
    return (
        datasheet.imp_stc
        + di0 * (n * log_term - 2.0 * m * datasheet.vmp_stc)
        + (headroom + i0) * log_term
        - n * headroom * di0_ratio
    )


def estimate_ideality_factor(
    datasheet: PanelDatasheet,
    ctx: StcContext = DEFAULT_CONTEXT,
    *,
    initial_n: float = 1.0,
    tolerance: float = 1e-4,
    max_iterations: int = 50,
) -> NewtonResult:
    """Solve f(n) = 0 by Newton-Raphson with the analytic derivative.

    The loop applies the full Newton update each pass and stops once the
    magnitude of an applied step is within ``tolerance`` and the
    residual at the new iterate is negligible compared with the
    residual at n = 1 (guards against a tiny step taken far from any
    root).  ``iterations`` counts applied updates, so a start that lands
    within tolerance on its second update reports 2.

    Raises
    ------
    DivergenceError
        If an iterate leaves the open interval (0, 10).
    SingularStepError
        If the derivative vanishes at an iterate.
    ConvergenceError
        If ``max_iterations`` updates never meet the stopping rule.
    NumericalRangeError
        If the residual evaluation overflows along the way.
    """
    if initial_n <= 0.0:
        raise ValueError(f"initial_n must be positive, got {initial_n}")
    if tolerance <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be at least 1, got {max_iterations}")

    # Residual scale used by the sanity gate at termination.
    reference = abs(ideality_residual(1.0, datasheet, ctx))
    residual_gate = max(1e-6 * reference, 1e-12)

    n = initial_n
    for iteration in range(1, max_iterations + 1):
        value = ideality_residual(n, datasheet, ctx)
        slope = ideality_residual_derivative(n, datasheet, ctx)
        if slope == 0.0 or not math.isfinite(slope):
            raise SingularStepError(
                f"residual derivative is {slope!r} at n={n!r}; cannot step")
        step = value / slope
        n -= step
        if not IDEALITY_LOWER_BOUND < n < IDEALITY_UPPER_BOUND:
            raise DivergenceError(
                f"iterate n={n!r} left ({IDEALITY_LOWER_BOUND}, "
                f"{IDEALITY_UPPER_BOUND}) after {iteration} update(s)")
        if abs(step) <= tolerance:
            residual = abs(ideality_residual(n, datasheet, ctx))
            if residual <= residual_gate and residual <= tolerance:
                return NewtonResult(n=n, iterations=iteration, residual=residual)
    raise ConvergenceError(
        f"no convergence within {max_iterations} iterations "
        f"(tolerance {tolerance}, last iterate n={n!r})")


def estimate_parameters(
    datasheet: PanelDatasheet,
    ctx: StcContext = DEFAULT_CONTEXT,
    *,
    initial_n: float = 1.0,
    tolerance: float = 1e-4,
    max_iterations: int = 50,
) -> EstimatedParams:
    """Recover (n, Rs, I0) at STC from the seven datasheet values.

    This is the headline operation: Newton for the ideality factor,
    then the two closed forms.  Any failure surfaces as a specific
    :class:`~pvsim.errors.PvSimError` subclass; no partial results are
    returned.

    Examples
    --------
    >>> bp = PanelDatasheet(voc_stc=43.5, isc_stc=4.75, vmp_stc=34.5,
    ...                     imp_stc=4.35, cell_count=72,
    ...                     alpha_isc=0.00065, beta_voc=-0.16)
    >>> p = estimate_parameters(bp)
    >>> round(p.n, 2), round(p.rs, 3), p.iterations
    (1.64, 0.342, 2)
    """
    solution = estimate_ideality_factor(
        datasheet, ctx,
        initial_n=initial_n, tolerance=tolerance, max_iterations=max_iterations)
    i0 = saturation_current_at_stc(solution.n, datasheet, ctx)
    rs = series_resistance_at_stc(solution.n, i0, datasheet, ctx)
    return EstimatedParams(
        n=solution.n,
        rs=rs,
        i0_stc=i0,
        iterations=solution.iterations,
        residual=solution.residual,
    )


def sample_ideality_residual(
    datasheet: PanelDatasheet,
    n_min: float,
    n_max: float,
    count: int,
    ctx: StcContext = DEFAULT_CONTEXT,
) -> list[ResidualSample]:
    """Tabulate f(n) on an even grid, for plotting and root bracketing.

    Grid points where the evaluation overflows are reported with
    ``ok=False`` and a NaN value instead of aborting the sweep, so a
    plot over an aggressive range still shows the representable part.
    """
    if not 0.0 < n_min < n_max:
        raise ValueError(
            f"need 0 < n_min < n_max, got n_min={n_min} n_max={n_max}")
    if count < 2:
        raise ValueError(f"count must be at least 2, got {count}")
    samples: list[ResidualSample] = []
    for n in np.linspace(n_min, n_max, count):
        n = float(n)
        try:
            value = ideality_residual(n, datasheet, ctx)
            ok = math.isfinite(value)
        except NumericalRangeError:
            value, ok = math.nan, False
        samples.append(ResidualSample(n=n, value=value if ok else math.nan, ok=ok))
    return samples

"""Single-diode solar panel simulator.

Estimates diode model parameters (ideality factor, series resistance,
reverse saturation current) from seven datasheet values, generates
I-V/P-V curves at arbitrary irradiance and temperature, and tracks the
maximum power point.  Exposed as a library, a CLI (``pvsim``) and an
HTTP JSON service.
"""

from .errors import (
    ConvergenceError,
    DatasheetError,
    DivergenceError,
    EstimationError,
    ModelRangeError,
    NumericalRangeError,
    PvSimError,
    SingularStepError,
)
from .estimation import (
    BOLTZMANN_J_PER_K,
    DEFAULT_CONTEXT,
    ELECTRON_CHARGE_C,
    EstimatedParams,
    NewtonResult,
    PanelDatasheet,
    ResidualSample,
    StcContext,
    estimate_ideality_factor,
    estimate_parameters,
    ideality_residual,
    ideality_residual_derivative,
    sample_ideality_residual,
    saturation_current_at_stc,
    series_resistance_at_stc,
)
from .simulation import (
    ConditionedModel,
    EnvConditions,
    IvCurve,
    MppPoint,
    STC_CONDITIONS,
    condition_model,
    generate_iv_curve,
    open_circuit_voltage,
    saturation_current_env,
    short_circuit_current,
    track_mpp,
    voltage_at_current,
)
from .datasheet import (
    bundled_panel,
    bundled_panel_names,
    export_curve_csv,
    format_decimal,
    load_datasheet,
    parse_datasheet,
    serialize_datasheet,
)

__version__ = "0.1.0"

__all__ = [
    "BOLTZMANN_J_PER_K",
    "ConditionedModel",
    "ConvergenceError",
    "DatasheetError",
    "DEFAULT_CONTEXT",
    "DivergenceError",
    "ELECTRON_CHARGE_C",
    "EnvConditions",
    "EstimatedParams",
    "EstimationError",
    "IvCurve",
    "ModelRangeError",
    "MppPoint",
    "NewtonResult",
    "NumericalRangeError",
    "PanelDatasheet",
    "PvSimError",
    "ResidualSample",
    "STC_CONDITIONS",
    "SingularStepError",
    "StcContext",
    "bundled_panel",
    "bundled_panel_names",
    "condition_model",
    "estimate_ideality_factor",
    "estimate_parameters",
    "export_curve_csv",
    "format_decimal",
    "generate_iv_curve",
    "ideality_residual",
    "ideality_residual_derivative",
    "load_datasheet",
    "open_circuit_voltage",
    "parse_datasheet",
    "sample_ideality_residual",
    "saturation_current_at_stc",
    "saturation_current_env",
    "serialize_datasheet",
    "series_resistance_at_stc",
    "short_circuit_current",
    "track_mpp",
    "voltage_at_current",
]

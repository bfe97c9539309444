"""Periodic solutions of a relay delay equation with a two-level coefficient.

The package constructs slowly oscillating periodic solutions of

    x'(t) = a(t) * f(x(t - 1))

exactly (event-driven piecewise-affine propagation), classifies them
through one-dimensional affine return maps, and verifies numerically that
they persist when the relay nonlinearity and the two-level coefficient
are smoothed.

Module map:

    model     parameter/validation layer, coefficient and nonlinearity values
    exact     event-driven exact propagation and piecewise-affine paths
    maps      affine return maps, fixed points, classification, basins
    numeric   one-step integrator for the smoothed system, comparisons
    tables    embedded benchmark dataset
    analysis  benchmark regression, coexistence pairing, scans, convergence
    cli       command-line interface (relaydde <subcommand>)
"""

from .analysis import (
    CoexistenceReport,
    ConvergenceFailed,
    ConvergenceRow,
    ConvergenceTable,
    PairingFailed,
    RowResult,
    ScanCell,
    ScanReport,
    coexistence_check,
    format_table_report,
    grade_row,
    reproduce_tables,
    scan,
    smoothing_convergence,
)
from .exact import (
    ConstantHistory,
    DegenerateStall,
    PiecewisePath,
    is_slowly_oscillating,
    path_sup_distance,
    propagate,
    shape_signature,
    zeros,
)
from .maps import (
    DIVERGES_2T,
    SHAPE_INVALID,
    STABLE_2T,
    STABLE_T,
    UNSTABLE_T,
    AffineMap1D,
    BasinDescriptor,
    Classification,
    HZero,
    MIsOne,
    NoCycle,
    NotApplicable,
    apply_F,
    basin,
    classify,
    dual_params,
    type1_coefficients,
    type1_fixed_point,
    type1_map,
    type2_coefficients,
    type2_map,
    type2_two_cycle,
)
from .model import (
    INV_E,
    Params,
    Profile,
    RelayDDEError,
    SmoothingSpec,
    coefficient_value,
    nonlinearity_slope_at_zero,
    nonlinearity_value,
    oscillation_condition,
    params_from_mapping,
    parse_config_text,
    smoothing_from_mapping,
    validate_geometry,
)
from .numeric import (
    DenseSolution,
    NonFiniteState,
    ShapeLost,
    StepTooLarge,
    compare_exact_smoothed,
    corner_windows,
    default_step,
    integrate,
    one_period_multiplier,
    parabola_coefficients,
    perturbation_growth,
)
from .tables import ROWS, TableRow, rows_for

__all__ = [
    "AffineMap1D",
    "BasinDescriptor",
    "Classification",
    "CoexistenceReport",
    "ConstantHistory",
    "ConvergenceFailed",
    "ConvergenceRow",
    "ConvergenceTable",
    "DIVERGES_2T",
    "DegenerateStall",
    "DenseSolution",
    "HZero",
    "INV_E",
    "MIsOne",
    "NoCycle",
    "NonFiniteState",
    "NotApplicable",
    "PairingFailed",
    "Params",
    "PiecewisePath",
    "Profile",
    "ROWS",
    "RelayDDEError",
    "RowResult",
    "SHAPE_INVALID",
    "STABLE_2T",
    "STABLE_T",
    "ScanCell",
    "ScanReport",
    "ShapeLost",
    "SmoothingSpec",
    "StepTooLarge",
    "TableRow",
    "UNSTABLE_T",
    "apply_F",
    "basin",
    "classify",
    "coefficient_value",
    "coexistence_check",
    "compare_exact_smoothed",
    "corner_windows",
    "default_step",
    "dual_params",
    "format_table_report",
    "grade_row",
    "integrate",
    "is_slowly_oscillating",
    "nonlinearity_slope_at_zero",
    "nonlinearity_value",
    "one_period_multiplier",
    "oscillation_condition",
    "parabola_coefficients",
    "params_from_mapping",
    "parse_config_text",
    "path_sup_distance",
    "perturbation_growth",
    "propagate",
    "reproduce_tables",
    "rows_for",
    "scan",
    "shape_signature",
    "smoothing_convergence",
    "smoothing_from_mapping",
    "type1_coefficients",
    "type1_fixed_point",
    "type1_map",
    "type2_coefficients",
    "type2_map",
    "type2_two_cycle",
    "validate_geometry",
    "zeros",
]

__version__ = "0.1.0"

"""chaoscope: chaos indicators for the quadratic and Henon families.

Derivative-growth exponents, attracting cycles and the period-doubling
cascade, topological entropy (exact lap counts, separated sets, Markov
spectral radius), invariant-density evidence, and a machine-over-the-reals
toolkit whose halting sets decompose into basic semi-algebraic pieces.
"""

from . import bss
from .cycles import (
    CascadeResult,
    CycleRecord,
    Stability,
    Window,
    find_cycle_by_convergence,
    merge_windows,
    run_cascade,
    scan_windows,
    superstable_parameter,
)
from .entropy import (
    EntPlusClass,
    EntropyEstimate,
    EntropyMethod,
    NotMarkovError,
    PiecewiseLinearMap,
    check_monotonicity,
    decide_ent_plus,
    entropy_lap,
    entropy_pl_markov,
    estimate_entropy_separated,
    lap_count,
    lap_sequence,
    parse_pl_map,
    refine_to_markov,
    separated_set,
    zero_entropy_boundary,
)
from .lyapunov import (
    CocycleTrace,
    ExponentClass,
    classify_exponent,
    exponent_scan,
    lyapunov_generic,
    lyapunov_henon,
    lyapunov_quadratic,
    positive_run_count,
)
from .maps import (
    ESCAPE_RADIUS,
    HenonParams,
    OrbitState,
    QuadraticParams,
    critical_point,
    critical_value,
    henon_apply,
    henon_jacobian,
    invariant_interval,
    iterate,
    quad_apply,
    quad_derivative,
)
from .srb import (
    DensityHistogram,
    EscapedOrbitError,
    SrbEvidence,
    birkhoff_average,
    classify_srb_evidence,
    estimate_density,
    histogram_csv,
)

__version__ = "0.1.0"

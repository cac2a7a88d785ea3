"""Exact desk-scale arithmetic for overconvergent Laurent series, Frobenius
traces, logarithmic forms of Milnor symbols, and cyclotomic-layer readouts.

Everything is computed over residues mod p^M with explicit windows and a
precision ledger: operations either stay exact or say how many digits they
spent.
"""

from .config import (
    DESK,
    PrimeConfig,
    RamificationConfig,
    RingConfig,
)
from .coeffs import CoeffElement
from .cyclo import (
    CyclotomicRing,
    DualExpForm,
    EvaluationMap,
    LayerElement,
    cyclotomic_modulus,
    diagram_check_trace_compat,
    dual_exp,
    evaluate,
    field_trace,
    kato_scaled_trace,
    kummer_trace,
)
from .eisenstein import (
    DerivativeStructure,
    EisensteinData,
    PiExpansion,
    derivative_structure,
    expand_pi,
    frobenius_lift,
)
from .errors import (
    DeskError,
    DomainError,
    EvaluationDiverges,
    InputError,
    NewtonStall,
    NotAUnit,
    NotDivisible,
    NotEisenstein,
    NotInvertible,
    NotPlusPart,
    RamifiedUnsupported,
    WindowOverflow,
    ZeroInput,
)
from .forms import (
    LogForm,
    MilnorSymbol,
    SymbolProduct,
    check_steinberg,
    exp_map,
    exp_series,
    psi_form,
    symbol_dlog,
    trace_form,
    volume_form,
)
from .frobenius import (
    PhiBasis,
    PhiDecomposition,
    frobenius,
    phi_decompose,
    phi_pi,
    psi_classical,
    sigma_select,
    sigma_trace,
    tau_select,
    tau_trace,
    trace_phi,
    trace_phi_select,
)
from .logderiv import (
    ConvergenceLedger,
    log_derivative,
    overconvergence_of_limit,
)
from .overconv import (
    OverconvergenceReport,
    factor_p_power,
    invertibility_check,
    minimal_level,
)
from .scalars import INF, PadicScalar
from .series import SeriesElement
from .suite import run_suite

__all__ = [
    "CoeffElement",
    "ConvergenceLedger",
    "CyclotomicRing",
    "DESK",
    "DerivativeStructure",
    "DeskError",
    "DomainError",
    "DualExpForm",
    "EisensteinData",
    "EvaluationDiverges",
    "EvaluationMap",
    "INF",
    "InputError",
    "LayerElement",
    "LogForm",
    "MilnorSymbol",
    "NewtonStall",
    "NotAUnit",
    "NotDivisible",
    "NotEisenstein",
    "NotInvertible",
    "NotPlusPart",
    "OverconvergenceReport",
    "PadicScalar",
    "PhiBasis",
    "PhiDecomposition",
    "PiExpansion",
    "PrimeConfig",
    "RamificationConfig",
    "RamifiedUnsupported",
    "RingConfig",
    "SeriesElement",
    "SymbolProduct",
    "WindowOverflow",
    "ZeroInput",
    "check_steinberg",
    "cyclotomic_modulus",
    "derivative_structure",
    "diagram_check_trace_compat",
    "dual_exp",
    "evaluate",
    "exp_map",
    "exp_series",
    "expand_pi",
    "factor_p_power",
    "field_trace",
    "frobenius",
    "frobenius_lift",
    "invertibility_check",
    "kato_scaled_trace",
    "kummer_trace",
    "log_derivative",
    "minimal_level",
    "overconvergence_of_limit",
    "phi_decompose",
    "phi_pi",
    "psi_classical",
    "psi_form",
    "run_suite",
    "sigma_select",
    "sigma_trace",
    "symbol_dlog",
    "tau_select",
    "tau_trace",
    "trace_form",
    "trace_phi",
    "trace_phi_select",
    "volume_form",
]

"""opeq: operator-equation solvers, solvability diagnostics, and a
grid-sampled function-module counterexample lab."""

__version__ = "0.1.0"

from .conditions import (
    ConditionReport,
    majorization_lambda,
    pt_conditions,
    range_inclusion,
    verify_solution,
)
from .linalg import (
    InputError,
    HermitianEig,
    RankPolicy,
    SvdResult,
    adjoint,
    as_matrix,
    frob,
    herm_eig,
    orthonormalize,
    pinv,
    psd_gap,
    psd_power,
    psd_sqrt,
    range_projector,
    spectral_norm,
    svd,
)
from .module_model import (
    GridFunction,
    ModuleElement,
    ModuleOperator,
    PureState,
    demo,
    in_ideal_M,
    localize,
    localize_op,
    module_inner,
    multiplier_preimage,
    op_adjoint,
    op_apply,
    op_compose,
    op_psd_gap,
    thl2_decompose,
)
from .solvers import (
    PtReport,
    ReducedSolution,
    axb_reduced_solve,
    congruence_solve,
    douglas_reduced_solve,
    pt_solve,
    riccati_geomean,
)
from .sweep import run_sweep

__all__ = [
    "ConditionReport",
    "GridFunction",
    "HermitianEig",
    "InputError",
    "ModuleElement",
    "ModuleOperator",
    "PtReport",
    "PureState",
    "RankPolicy",
    "ReducedSolution",
    "SvdResult",
    "adjoint",
    "as_matrix",
    "axb_reduced_solve",
    "congruence_solve",
    "demo",
    "douglas_reduced_solve",
    "frob",
    "herm_eig",
    "in_ideal_M",
    "localize",
    "localize_op",
    "majorization_lambda",
    "module_inner",
    "multiplier_preimage",
    "op_adjoint",
    "op_apply",
    "op_compose",
    "op_psd_gap",
    "orthonormalize",
    "pinv",
    "psd_gap",
    "psd_power",
    "psd_sqrt",
    "pt_conditions",
    "pt_solve",
    "range_inclusion",
    "range_projector",
    "riccati_geomean",
    "run_sweep",
    "spectral_norm",
    "svd",
    "verify_solution",
    "__version__",
]

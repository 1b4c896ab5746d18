"""Coupled cubic NLS laboratory.

Thin Python surface over the C++ core: coefficient algebra, closed-form
asymptotic profiles, spectral operators, the split-step and profile-frame
solvers, and decay-rate fitting.
"""

from ._core import (
    CnlsError,
    Coefficients,
    Field,
    FieldPair,
    FinalData,
    GaussianSpec,
    Grid,
    Regime,
    RunMode,
    SolverConfig,
    Trajectory,
    apply_D,
    apply_J,
    apply_M,
    cft,
    check_nonvanishing,
    derive,
    eval_f1,
    eval_f2,
    eval_w2tilde,
    extract_scattering,
    factorization_residual,
    fit_decay_rate,
    free_propagate,
    gaussian_final_data,
    icft,
    integrate_rk4,
    l2_norm,
    chirp_residual,
    linf_norm,
    make_vanishing_data,
    residual_E,
    sample_uap,
    solve_cauchy,
    solve_final_state,
    solve_profile_frame,
    strang_step,
)

__all__ = [
    "CnlsError", "Coefficients", "Field", "FieldPair", "FinalData", "GaussianSpec",
    "Grid", "Regime", "RunMode", "SolverConfig", "Trajectory",
    "apply_D", "apply_J", "apply_M", "cft", "check_nonvanishing", "derive",
    "eval_f1", "eval_f2", "eval_w2tilde", "extract_scattering",
    "factorization_residual", "fit_decay_rate", "free_propagate",
    "gaussian_final_data", "icft", "integrate_rk4", "l2_norm", "chirp_residual",
    "linf_norm", "make_vanishing_data", "residual_E", "sample_uap",
    "solve_cauchy", "solve_final_state", "solve_profile_frame", "strang_step",
]

"""Spin squeezing of coupled pairs of spin-1 systems.

The package computes the coupled squeezing parameter xi of pure two-spin-1
states under explicit transverse-frame policies, carries literal
transcriptions of the known closed-form xi expressions for special state
families together with a harness that compares them against the numerical
engine, and generates squeezed states by unitary evolution under
pair-exchange and cross-quadratic generators.
"""

from .linalg import expectation, is_anti_hermitian, is_hermitian, kron, matrix_exponential
from .spin import (
    Frame,
    build_frame,
    build_frame_xz,
    embed,
    mean_spin,
    spin1_matrices,
    spin_component,
)
from .states import (
    CoupledState,
    DegenerateDenominatorError,
    SchmidtInfo,
    Spin1State,
    Spinor,
    StateFormatError,
    ZAlignmentRecord,
    canonical_squeezed,
    complete_z_alignment_numeric,
    config,
    is_oriented,
    load_state,
    majorana,
    product,
    save_state,
    schmidt,
    schwinger,
    solve_z_alignment,
    transverse_expectations,
    z_alignment_audit,
)
from .squeezing import (
    DiscrepancyRecord,
    Fixed,
    MeanSpinAligned,
    Moments,
    Optimized,
    SqueezingReport,
    ZeroDenominatorError,
    closed_form_xi,
    compare_closed_forms,
    family_state,
    ku_parameter,
    puri_parameter,
    run_standard_comparisons,
    squeezing_report,
    xi_config1,
    xi_config2,
    xi_config3,
    xi_coherent_times_squeezed,
    xi_oracle,
    xi_product_pair,
)
from .dynamics import (
    Generator,
    Propagator,
    Trajectory,
    TwoStageScan,
    builtin_initial,
    cross_quadratic_generator,
    evolve,
    pair_exchange_generator,
    trajectory,
    two_stage_minimum,
)

__version__ = "0.1.0"

__all__ = [
    "CoupledState",
    "DegenerateDenominatorError",
    "DiscrepancyRecord",
    "Fixed",
    "Frame",
    "Generator",
    "MeanSpinAligned",
    "Moments",
    "Optimized",
    "Propagator",
    "SchmidtInfo",
    "Spin1State",
    "Spinor",
    "SqueezingReport",
    "StateFormatError",
    "Trajectory",
    "TwoStageScan",
    "ZAlignmentRecord",
    "ZeroDenominatorError",
    "builtin_initial",
    "build_frame",
    "build_frame_xz",
    "canonical_squeezed",
    "closed_form_xi",
    "compare_closed_forms",
    "complete_z_alignment_numeric",
    "config",
    "cross_quadratic_generator",
    "embed",
    "evolve",
    "expectation",
    "family_state",
    "is_anti_hermitian",
    "is_hermitian",
    "is_oriented",
    "kron",
    "ku_parameter",
    "load_state",
    "majorana",
    "matrix_exponential",
    "mean_spin",
    "pair_exchange_generator",
    "product",
    "puri_parameter",
    "run_standard_comparisons",
    "save_state",
    "schmidt",
    "schwinger",
    "solve_z_alignment",
    "spin1_matrices",
    "spin_component",
    "squeezing_report",
    "trajectory",
    "transverse_expectations",
    "two_stage_minimum",
    "xi_config1",
    "xi_config2",
    "xi_config3",
    "xi_coherent_times_squeezed",
    "xi_oracle",
    "xi_product_pair",
    "z_alignment_audit",
]

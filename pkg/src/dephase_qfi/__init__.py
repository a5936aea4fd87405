"""Precision bounds for frequency estimation with dephasing qubits.

The library computes exact quantum Fisher information, variational
purification bounds and closed-form resolutions for n qubits dephasing in
uncorrelated, partially correlated or maximally correlated environments,
and ships a CLI for sweeps, scenario reports and self-verification.
"""

from .analytics import (
    FlatFunctionError,
    ResolutionQuery,
    UndefinedResolutionError,
    closed_form_uncorrelated,
    collective_family_qfi,
    correlated_closed_form,
    golden_minimize,
    improvement_closed_form,
    improvement_factor,
    optimal_resolution_uncorrelated,
    optimal_time_closed,
    optimal_time_numeric,
    parity_limit,
    partial_corr_argument,
    partial_corr_asymptote,
    ramsey_max_correlated,
    ramsey_uncorrelated,
)
from .linalg import (
    MAX_QUBITS,
    Spectrum,
    build_pauli_string,
    eigh,
    partial_trace_env,
    partial_trace_sys,
    solve_anticommutator,
    tensor,
)
from .models import (
    Correlation,
    DephasingModel,
    ProbeKind,
    ProbeState,
    SpectralSamples,
    coherence_from_spectrum,
    collective_exponent,
    dephased_state,
    local_exponent,
    mixed_collective_coherence,
    sector_charges,
)
from .purify import (
    EnvInitState,
    PurifiedState,
    UnsupportedCaseError,
    ghz_plus_overlap,
    phase_generator,
    purify_max_correlated,
    purify_partial,
    purify_uncorrelated,
    rotation_angle,
    signed_sector_power,
)
from .qfi import (
    QfiReport,
    collective_xyz_basis,
    complete_env_basis,
    evaluate_scenario,
    family_basis,
    minimize_ansatz,
    optimal_h,
    phase_drho,
    purify_scenario,
    qfi_pure,
    qfi_sld,
    single_qubit_xyz_basis,
    symmetric_pair_basis,
    variational_cq,
)

__version__ = "0.1.0"

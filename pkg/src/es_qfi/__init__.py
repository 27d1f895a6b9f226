"""Quantum Fisher information for the scatterer coupling in a microring
resonator with retroreflective feedback."""

from .errors import (
    InvalidParams,
    NotHermitian,
    PoleError,
    SingularDenominator,
    SingularMatrix,
    UndefinedPhase,
    ZeroSensitivity,
)
from .gwsm import gwsm_a, gwsm_definition, gwsm_from_k_derivative, gwsm_spectrum
from .optimize import (
    Axis,
    FrequencyOptimum,
    SweepGrid,
    landscape_all,
    offsurface_scan,
    optimize_spectrum,
    sweep_oqfi,
)
from .qfi import (
    QfiResult,
    coherent_qfi,
    coherent_qfi_fidelity_oracle,
    noon_overlap_oracle,
    noon_qfi,
    noon_qfi_fidelity_oracle,
    oqfi_value,
)
from .resonator import SystemParams, build_model, transfer_k, transfer_k_closed_form
from .states import ModeComponent, ModeState, NoonSpec, inner, optimal_coherent_probe, optimal_noon_probe

__version__ = "0.1.0"

"""Master-equation dynamics for adiabatically steered two-level systems.

Units: hbar = k_B = 1, so energies, frequencies and rates all carry 1/time.
A spectrum with physical units is recovered via S_X(omega) = hbar^2 S(omega).
"""

from .bath import (
    RateSet,
    SpectralDensity,
    eval_spectrum,
    flat,
    ohmic_thermal,
    rates,
    rates_from_spectra,
    shifted_rates,
    spectrum_from_csv,
    superadiabatic_elements,
    tabulated,
    zero_temperature_ohmic,
)
from .control import (
    AdiabaticFrame,
    ControlPath,
    EigenFrame,
    FrameHistory,
    compute_w,
    coupling_elements,
    eigensystem,
    frame_at,
    linear_sweep,
    local_alpha,
    path_from_csv,
    rotating_cone,
    sample_history,
    sampled_path,
    w_from_eigenframes,
)
from .dynamics import (
    DensityState,
    SolverConfig,
    Trajectory,
    integrate,
    purity,
    rhs_full,
    rhs_nonsteered,
    rhs_secular,
    rhs_superadiabatic_oracle,
    superadiabatic_oracle_pullback,
)
from .errors import (
    GapCollapse,
    LoopNotClosed,
    NonFiniteState,
    NonUniformGridUnsupported,
    OutOfRange,
    ParseError,
    QSteerError,
    StepRejectionLimit,
    StepTooCoarse,
    ValidationError,
)
from .frames import (
    SuperadiabaticBasis,
    from_superadiabatic,
    interaction_to_schrodinger,
    schrodinger_to_interaction,
    superadiabatic_basis,
    to_superadiabatic,
)
from .gauge import (
    BerryPhases,
    PhaseSchedule,
    PhaseShiftedFrame,
    apply_phase,
    apply_phase_frame,
    berry_phase,
    hs_norm,
    optimal_schedule,
    phase_shifted_frame,
)

__version__ = "0.1.0"

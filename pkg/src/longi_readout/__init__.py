"""Inverse-engineered longitudinal-coupling modulations for fast qubit readout.

Library layout:

- params: system parameter records
- modulation: waveform kinds, the design boundary contract, Euler-Lagrange lift
- cavity: analytic pointer-state dynamics of the damped cavity
- readout: homodyne signal, noise, SNR, scaling-exponent fits
- floquet: counter-diabatic term and its engineered-drive emulation
- oracle: dense Lindblad master-equation verification route
- ga: genetic-algorithm search over Fourier-series waveforms
- circuit: transmon-SQUID-resonator estimates
- bangbang: bounded-control minimal-time analysis
- cli: command-line orchestration writing CSV/JSON artifacts and figures
"""

from .bangbang import (
    ControlProblem,
    MinimalTimeReport,
    adjoint_trajectory,
    arc_invariant,
    bang_trajectory,
    minimal_time,
)
from .cavity import (
    CavityTrajectory,
    cavity_field,
    cavity_trajectory,
    displacement_envelope,
    pointer_separation,
)
from .circuit import (
    CircuitParams,
    CouplingEstimate,
    QubitFrequencyReport,
    canonical_circuit,
    charge_qubit_splitting,
    derived_frequencies,
    longitudinal_coupling_estimate,
    pauli_projection,
    squid_energy,
    transmon_matrix,
)
from .errors import (
    AlignmentError,
    ConfigError,
    DomainError,
    FitError,
    GridError,
    InfeasibleError,
    ResolutionError,
    SingularCoefficientError,
    TruncationError,
)
from .floquet import (
    FloquetSpec,
    bessel_j,
    bessel_j_series,
    cd_amplitude,
    cd_coefficient_for_drive,
    effective_coupling,
    floquet_drive,
    magnus_average,
)
from .ga import GAConfig, OptimizedModulation, decode_coeffs, fitness, ga_run
from .modulation import (
    BoundaryReport,
    Modulation,
    baseline_drive,
    baseline_value,
    coupling_from_drive,
    euler_lagrange_residual,
    polynomial_drive,
    polynomial_drive_value,
    second_derivative_lift,
    trigonometric_drive,
    trigonometric_drive_value,
    verify_boundaries,
)
from .oracle import (
    EvolutionConfig,
    MasterEvolution,
    QubitCavityState,
    build_hamiltonian,
    evolve_floquet,
    evolve_lindblad,
    evolve_master,
    expectation,
    frame_elimination_check,
    vacuum_state,
)
from .params import SystemParams, canonical_params
from .readout import (
    SNRCurve,
    SqueezeSpec,
    fit_scaling_exponent,
    homodyne_signal,
    noise_power,
    snr_curve,
)

__version__ = "0.1.0"

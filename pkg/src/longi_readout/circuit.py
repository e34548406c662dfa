"""Transmon-SQUID-resonator circuit estimates.

Charge-basis transmon Hamiltonian with a flux-tunable SQUID contribution to
the Josephson energy, Pauli projections of the coupling operator cos(theta),
and the closed-form coupling-strength estimate for the longitudinal scheme.
Energies are angular frequencies (hbar = 1) internally; SI units enter only
in the coupling estimate, which needs the flux quantum.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.constants import e as _ECHARGE, hbar as _HBAR


@dataclass(frozen=True)
class CircuitParams:
    """Transmon + SQUID + resonator parameters.

    E_J is the transmon junction energy at the operating point (its own
    flux law is not modeled; phi_x is carried for bookkeeping only).
    phi_s is the SQUID flux in units of the reduced flux quantum; it tunes
    the SQUID energy E_JS(phi_s) and with it both the qubit splitting and
    the coupling. All energies in rad/s.
    """

    E_J: float
    E_C: float
    E_Sigma: float
    d_asym: float
    n_g: float = 0.5
    phi_x: float = np.pi / 4
    phi_s: float = np.pi / 4
    L_r: float = 0.0
    omega_r: float = 0.0
    n_cut: int = 15

    def __post_init__(self):
        if self.E_C <= 0:
            raise ValueError("E_C must be positive")
        if not (0.0 <= self.d_asym < 1.0):
            raise ValueError("d_asym must lie in [0, 1)")
        if self.n_cut < 10:
            raise ValueError("n_cut must be at least 10")


def squid_energy(E_Sigma: float, d_asym: float, phi: float) -> float:
    """Flux-tunable Josephson energy of an asymmetric SQUID.

    E(phi) = E_Sigma sqrt(cos^2 phi + d^2 sin^2 phi), the positive branch of
    E_Sigma cos(phi) sqrt(1 + d^2 tan^2 phi); finite at cos phi = 0 and
    flux-independent in the d = 1 limit.
    """
    return float(E_Sigma * np.sqrt(np.cos(phi) ** 2 + d_asym**2 * np.sin(phi) ** 2))


def total_josephson_energy(cp: CircuitParams) -> float:
    """E_J + E_JS(phi_s), the effective transmon Josephson energy."""
    return cp.E_J + squid_energy(cp.E_Sigma, cp.d_asym, cp.phi_s)


def transmon_matrix(cp: CircuitParams, e_jtilde: Optional[float] = None) -> np.ndarray:
    """Charge-basis Hamiltonian E_C (n - n_g)^2 - E_Jtilde cos(theta).

    Basis |n>, n = -n_cut..n_cut; cos(theta) couples neighboring charge
    states with amplitude 1/2. Real symmetric by construction.
    """
    if e_jtilde is None:
        e_jtilde = total_josephson_energy(cp)
    n = np.arange(-cp.n_cut, cp.n_cut + 1)
    h = np.diag(cp.E_C * (n - cp.n_g) ** 2).astype(float)
    off = -0.5 * e_jtilde * np.ones(len(n) - 1)
    h += np.diag(off, 1) + np.diag(off, -1)
    return h


def cos_theta_matrix(n_cut: int) -> np.ndarray:
    """cos(theta) in the charge basis: (|n><n+1| + h.c.)/2."""
    dim = 2 * n_cut + 1
    off = 0.5 * np.ones(dim - 1)
    return np.diag(off, 1) + np.diag(off, -1)


def eigensystem(cp: CircuitParams, e_jtilde: Optional[float] = None):
    """Sorted eigenvalues and eigenvectors of the transmon Hamiltonian."""
    vals, vecs = np.linalg.eigh(transmon_matrix(cp, e_jtilde))
    return vals, vecs


def charge_qubit_splitting(E_C: float, e_jtilde: float, n_g: float) -> float:
    """Two-level charge-subspace splitting sqrt((E_C(1-2n_g))^2 + E_Jtilde^2).

    At n_g = 1/2 this reduces to E_Jtilde exactly.
    """
    return float(np.hypot(E_C * (1.0 - 2.0 * n_g), e_jtilde))


def pauli_projection(cp: CircuitParams, e_jtilde: Optional[float] = None):
    """Pauli coefficients of cos(theta) in the qubit eigenbasis.

    Returns (alpha_x, alpha_y, alpha_z, alpha_I) with
    alpha_k = Tr[sigma_k C_q]/2 where C_q is cos(theta) projected onto the
    two lowest eigenstates (|g> the ground state, sigma_z = |e><e| - |g><g|).
    In the eigenbasis of a real Hamiltonian the x and y parts vanish.
    """
    vals, vecs = eigensystem(cp, e_jtilde)
    if vals[2] - vals[1] < 1e-6 * max(vals[1] - vals[0], cp.E_C):
        warnings.warn(
            "second excited state nearly degenerate with the qubit subspace",
            stacklevel=2,
        )
    v_g, v_e = vecs[:, 0], vecs[:, 1]
    # deterministic gauge: largest-magnitude component positive
    v_g = v_g * np.sign(v_g[np.argmax(np.abs(v_g))])
    v_e = v_e * np.sign(v_e[np.argmax(np.abs(v_e))])
    c = cos_theta_matrix(cp.n_cut)
    c_gg = float(v_g @ c @ v_g)
    c_ee = float(v_e @ c @ v_e)
    c_ge = complex(v_g @ c @ v_e)
    alpha_x = c_ge.real
    alpha_y = c_ge.imag
    alpha_z = 0.5 * (c_ee - c_gg)
    alpha_i = 0.5 * (c_ee + c_gg)
    return alpha_x, alpha_y, alpha_z, alpha_i


@dataclass(frozen=True)
class CouplingEstimate:
    """Closed-form longitudinal coupling estimate with reference targets.

    value = (omega_q / 2 phi0) sqrt(hbar omega_r L_r / 2) in rad/s with
    phi0 = hbar/2e. The reference design targets for the stock parameter
    set (2pi x 2.57 GHz and ratio 0.5793) are reported together with the
    deviations of the computed values from them; the targets are known to
    be mutually inconsistent, so nothing asserts equality.
    """

    value: float
    ratio_to_omega_r: float
    target_value: float
    target_ratio: float
    deviation_value: float
    deviation_ratio: float

    def to_dict(self) -> dict:
        return {
            "value_rad_per_s": self.value,
            "ratio_to_omega_r": self.ratio_to_omega_r,
            "targets": {"value_rad_per_s": self.target_value, "ratio": self.target_ratio},
            "deviations": {"value": self.deviation_value, "ratio": self.deviation_ratio},
        }


FLUX_QUANTUM_REDUCED = _HBAR / (2.0 * _ECHARGE)  # hbar/2e, in Wb


def longitudinal_coupling_estimate(
    omega_q: float, omega_r: float, impedance: float
) -> CouplingEstimate:
    """Coupling estimate from qubit frequency and resonator impedance.

    ``impedance`` is omega_r * L_r in ohms. The scaling is sqrt(omega_r L_r),
    so doubling the impedance raises the coupling by sqrt(2).
    """
    if omega_q < 0 or omega_r <= 0 or impedance < 0:
        raise ValueError("frequencies and impedance must be positive")
    value = (omega_q / (2.0 * FLUX_QUANTUM_REDUCED)) * np.sqrt(_HBAR * impedance / 2.0)
    target_value = 2.0 * np.pi * 2.57e9
    target_ratio = 0.5793
    ratio = value / omega_r
    return CouplingEstimate(
        value=float(value),
        ratio_to_omega_r=float(ratio),
        target_value=target_value,
        target_ratio=target_ratio,
        deviation_value=float(value - target_value),
        deviation_ratio=float(ratio - target_ratio),
    )


@dataclass(frozen=True)
class QubitFrequencyReport:
    """Closed-form qubit-frequency estimate next to the exact splitting.

    omega_q_formula evaluates sqrt(E_C^2 + d E_Sigma^2) (hbar = 1), the
    reference closed form for the stock operating point; omega_q_exact is
    the two lowest eigenvalues' difference from full diagonalization. The
    two disagree (the closed form does not parse dimensionally without an
    implicit convention), so both are reported with their discrepancy and
    the 2pi x 3.28 GHz reference target.
    """

    omega_q_formula: float
    omega_q_exact: float
    e_jtilde: float
    discrepancy: float
    target: float

    def to_dict(self) -> dict:
        return {
            "omega_q_formula_rad_per_s": self.omega_q_formula,
            "omega_q_exact_rad_per_s": self.omega_q_exact,
            "E_Jtilde_rad_per_s": self.e_jtilde,
            "discrepancy_rad_per_s": self.discrepancy,
            "targets": {"omega_q_rad_per_s": self.target},
        }


def derived_frequencies(cp: CircuitParams) -> QubitFrequencyReport:
    """Evaluate both qubit-frequency routes for the operating point."""
    formula = float(np.sqrt(cp.E_C**2 + cp.d_asym * cp.E_Sigma**2))
    vals, _ = eigensystem(cp)
    exact = float(vals[1] - vals[0])
    return QubitFrequencyReport(
        omega_q_formula=formula,
        omega_q_exact=exact,
        e_jtilde=total_josephson_energy(cp),
        discrepancy=formula - exact,
        target=2.0 * np.pi * 3.28e9,
    )


def spectrum_vs_squid_flux(cp: CircuitParams, phis, n_levels: int = 4) -> np.ndarray:
    """Low-lying spectrum along the SQUID flux (columns: levels)."""
    phis = np.asarray(phis, dtype=float)
    out = np.empty((len(phis), n_levels))
    for i, phi in enumerate(phis):
        ej = cp.E_J + squid_energy(cp.E_Sigma, cp.d_asym, phi)
        vals, _ = eigensystem(cp, e_jtilde=ej)
        out[i] = vals[:n_levels]
    return out


def pauli_maps_vs_squid_flux(cp: CircuitParams, phis) -> np.ndarray:
    """alpha_k coefficients along the SQUID flux (columns: x, y, z, I)."""
    phis = np.asarray(phis, dtype=float)
    out = np.empty((len(phis), 4))
    for i, phi in enumerate(phis):
        ej = cp.E_J + squid_energy(cp.E_Sigma, cp.d_asym, phi)
        out[i] = pauli_projection(cp, e_jtilde=ej)
    return out


def canonical_circuit() -> CircuitParams:
    """Stock circuit parameter set (E_J/2pi = 20 GHz, E_C = E_J/67, ...)."""
    E_J = 2 * np.pi * 20e9
    return CircuitParams(
        E_J=E_J,
        E_C=E_J / 67.0,
        E_Sigma=2 * np.pi * 30e9,
        d_asym=0.02,
        n_g=0.5,
        phi_x=np.pi / 4,
        phi_s=np.pi / 4,
        L_r=200e3 / (2 * np.pi * 6.6e9),
        omega_r=2 * np.pi * 6.6e9,
        n_cut=15,
    )

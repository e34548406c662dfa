"""Homodyne signal, noise power, SNR curves, and scaling-exponent fits.

The integrated homodyne operator over a measuring window tau is
M(tau) = sqrt(kappa) int_0^tau (a_out^dag e^{i phi} + a_out e^{-i phi}) dt
with a_out = sqrt(kappa) a, so the branch mean is
<M>_l = kappa int_0^tau 2 Re(<a>_l e^{-i phi}) dt. Vacuum input gives an
integrated quadrature noise of kappa*tau per branch; a squeezed cavity
multiplies that by cosh(2r) + sinh(2r) cos(2(phi - theta)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cavity import CavityTrajectory
from .errors import DomainError, FitError, GridError


@dataclass(frozen=True)
class SqueezeSpec:
    """Single-mode squeezing of the cavity plus the homodyne angle.

    r is the squeezing parameter, theta the squeeze angle, phi the homodyne
    local-oscillator angle (all dimensionless/rad). phi - theta = pi/2
    aligns the measured quadrature with the squeezed one, reducing the
    noise by e^{-2r}.
    """

    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeezing parameter r must be nonnegative")


@dataclass(frozen=True)
class SNRCurve:
    """Signal, total noise variance (both branches), and SNR vs tau."""

    taus: np.ndarray
    signal: np.ndarray
    noise_var: np.ndarray
    snr: np.ndarray
    squeeze: Optional[SqueezeSpec] = None

    def export_csv(self, path) -> None:
        np.savetxt(
            path,
            np.column_stack([self.taus, self.signal, self.noise_var, self.snr]),
            delimiter=",",
            header="tau,signal,noise_var,snr",
            comments="",
        )


def _quadrature_projection(traj: CavityTrajectory, phi: float) -> np.ndarray:
    """2 Re(<a>_e e^{-i phi}) - 2 Re(<a>_g e^{-i phi}) on the trajectory grid."""
    diff = traj.alpha_e - traj.alpha_g
    return 2.0 * np.real(diff * np.exp(-1j * phi))


def _cumtrapz(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y, dtype=float)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


def homodyne_signal(traj: CavityTrajectory, phi: float, tau: float) -> float:
    """|<M>_e - <M>_g| at measuring time ``tau``.

    Integrates the branch difference of the measured quadrature on the
    trajectory grid (trapezoid; the grid is the resolution contract).
    """
    t = traj.times
    if tau < t[0] - 1e-12 * t[-1] or tau > t[-1] * (1 + 1e-12):
        raise DomainError("tau outside the trajectory support")
    proj = _quadrature_projection(traj, phi)
    cum = _cumtrapz(proj, t)
    return float(traj.kappa * np.abs(np.interp(tau, t, cum)))


def noise_power(kappa: float, tau: float, sq: Optional[SqueezeSpec] = None) -> float:
    """Integrated quadrature noise variance for one qubit branch.

    Vacuum: kappa*tau. Squeezed: kappa*tau*(cosh 2r + sinh 2r cos 2(phi-theta)).
    The angular dependence is trigonometric: the phi - theta = pi/2 case
    must reduce to kappa*tau*e^{-2r}.
    """
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    if sq is None:
        return kappa * tau
    factor = np.cosh(2.0 * sq.r) + np.sinh(2.0 * sq.r) * np.cos(2.0 * (sq.phi - sq.theta))
    return kappa * tau * factor


def snr_curve(
    traj: CavityTrajectory,
    phi: float,
    taus,
    sq: Optional[SqueezeSpec] = None,
) -> SNRCurve:
    """Pointwise SNR(tau) = signal / sqrt(N_e + N_g) over a tau grid.

    With vacuum noise the denominator is sqrt(2 kappa tau); both branches
    carry the same squeezing, so a squeezed run rescales every point by the
    same factor.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or len(taus) == 0:
        raise GridError("taus must be a nonempty 1-D array")
    if np.any(np.diff(taus) <= 0):
        raise GridError("taus must be strictly increasing")
    t = traj.times
    if taus[0] < t[0] - 1e-12 * t[-1] or taus[-1] > t[-1] * (1 + 1e-12):
        raise DomainError("taus outside the trajectory support")
    if sq is not None:
        phi = sq.phi
    proj = _quadrature_projection(traj, phi)
    cum = _cumtrapz(proj, t)
    signal = traj.kappa * np.abs(np.interp(taus, t, cum))
    noise = np.array([noise_power(traj.kappa, tau, sq) for tau in taus])
    total = 2.0 * noise
    with np.errstate(divide="ignore", invalid="ignore"):
        snr = np.where(total > 0, signal / np.sqrt(total), 0.0)
    return SNRCurve(taus=taus, signal=signal, noise_var=total, snr=snr, squeeze=sq)


def fit_scaling_exponent(curve: SNRCurve, window: tuple) -> float:
    """Least-squares slope of log SNR vs log tau inside ``window``.

    The abscissa offset log(kappa) does not affect the slope, so the fit is
    done directly against log tau.
    """
    lo, hi = window
    if not (lo < hi):
        raise FitError("window must satisfy tau_lo < tau_hi")
    mask = (curve.taus >= lo) & (curve.taus <= hi)
    if np.count_nonzero(mask) < 10:
        raise FitError("window must contain at least 10 points")
    snr = curve.snr[mask]
    if np.any(snr <= 0):
        raise FitError("SNR must be positive throughout the fit window")
    slope = np.polyfit(np.log(curve.taus[mask]), np.log(snr), 1)[0]
    return float(slope)

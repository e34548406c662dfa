"""Analytic pointer-state dynamics of the damped cavity.

The mean cavity field under a real drive waveform g(t) and decay kappa obeys
d<a>/dt = -i g(t) <sigma_z> - (kappa/2) <a| with vacuum input, giving

    <a(t)> = -i sigma_z e^{-kappa t/2} int_0^t g(s) e^{kappa s/2} ds.

The input-noise term contributes nothing to means (vacuum input); it enters
only the noise variances in the readout metrics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._quad import adaptive_simpson, cumulative_adaptive_simpson
from .errors import GridError
from .modulation import Modulation
from .params import SystemParams


@dataclass(frozen=True)
class CavityTrajectory:
    """Mean cavity field per qubit branch on a time grid.

    alpha_e is <a(t)> for sigma_z = +1, alpha_g for sigma_z = -1. For a
    vacuum initial state the two branches are exact mirror images
    (alpha_g = -alpha_e) and both start at zero.
    """

    times: np.ndarray
    alpha_e: np.ndarray
    alpha_g: np.ndarray
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "alpha_e", np.asarray(self.alpha_e, dtype=complex))
        object.__setattr__(self, "alpha_g", np.asarray(self.alpha_g, dtype=complex))
        if not (len(self.times) == len(self.alpha_e) == len(self.alpha_g)):
            raise GridError("trajectory arrays must share one grid")

    def export_csv(self, path) -> None:
        """CSV columns: t, Re<a>_e, Im<a>_e, Re<a>_g, Im<a>_g, d."""
        d = pointer_separation(self)
        np.savetxt(
            path,
            np.column_stack(
                [
                    self.times,
                    self.alpha_e.real,
                    self.alpha_e.imag,
                    self.alpha_g.real,
                    self.alpha_g.imag,
                    d,
                ]
            ),
            delimiter=",",
            header="t,re_alpha_e,im_alpha_e,re_alpha_g,im_alpha_g,d",
            comments="",
        )


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise GridError("grid must be a nonempty 1-D array")
    if np.any(np.diff(grid) <= 0):
        raise GridError("grid must be strictly increasing")
    if grid[0] < 0:
        raise GridError("grid must start at or after t = 0")
    return grid


def cavity_field(m: Modulation, kappa: float, sigma_z: int, grid) -> np.ndarray:
    """Mean field <a(t)> on ``grid`` for one qubit branch.

    Evaluated by cumulative adaptive Simpson quadrature of the drive
    integral; purely imaginary (times sigma_z) for a real drive.
    """
    if sigma_z not in (+1, -1):
        raise ValueError("sigma_z must be +1 or -1")
    grid = _check_grid(grid)
    scale = max(np.max(np.abs(m.value(np.linspace(0, m.t_f, 257)))), 1e-300)
    tol = 1e-10 * scale * m.t_f
    weighted = lambda s: float(m.value(s)) * np.exp(0.5 * kappa * s)
    integral = cumulative_adaptive_simpson(weighted, np.concatenate([[0.0], grid]), tol)[1:]
    return -1j * sigma_z * np.exp(-0.5 * kappa * grid) * integral


def cavity_trajectory(m: Modulation, p: SystemParams, grid=None, n_points: int = 201) -> CavityTrajectory:
    """Both pointer branches from vacuum; alpha_g = -alpha_e by symmetry."""
    if grid is None:
        grid = np.linspace(0.0, m.t_f, n_points)
    grid = _check_grid(grid)
    alpha_e = cavity_field(m, p.kappa, +1, grid)
    return CavityTrajectory(times=grid, alpha_e=alpha_e, alpha_g=-alpha_e, kappa=p.kappa)


def pointer_separation(traj: CavityTrajectory) -> np.ndarray:
    """Relative separation d(t) = sqrt(kappa) |alpha_e - alpha_g|.

    The sqrt(kappa) carries the output-field convention <a_out> = sqrt(kappa)<a>.
    """
    return np.sqrt(traj.kappa) * np.abs(traj.alpha_e - traj.alpha_g)


def displacement_envelope(m: Modulation, kappa: float, t_f: float) -> float:
    """Terminal displacement magnitude e^{-kappa t_f/2} int_0^{t_f} g e^{kappa s/2} ds.

    Equals |<a(t_f)>| for the sigma_z = +1 branch; the figure of merit for
    comparing pulse families across (kappa, t_f).
    """
    scale = max(np.max(np.abs(m.value(np.linspace(0, min(t_f, m.t_f), 257)))), 1e-300)
    tol = 1e-10 * scale * t_f
    weighted = lambda s: float(m.value(s)) * np.exp(0.5 * kappa * s)
    return float(np.exp(-0.5 * kappa * t_f) * adaptive_simpson(weighted, 0.0, t_f, tol))

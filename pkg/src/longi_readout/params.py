"""Physical constants of the qubit-cavity readout problem."""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class SystemParams:
    """Parameters of a cavity longitudinally coupled to a qubit.

    All rates and frequencies are angular (rad/s), times in seconds.

    Parameters
    ----------
    omega_q : float
        Qubit transition frequency.
    omega_r : float
        Cavity (LC oscillator) frequency.
    kappa : float
        Cavity decay rate.
    g0 : float
        Reference longitudinal coupling amplitude.
    t_f : float
        Protocol duration.
    """

    omega_q: float
    omega_r: float
    kappa: float
    g0: float
    t_f: float

    def __post_init__(self):
        if self.omega_r <= 0:
            raise ValueError("omega_r must be positive")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.t_f <= 0:
            raise ValueError("t_f must be positive")
        if self.g0 < 0:
            raise ValueError("g0 must be nonnegative")
        # plausibility guard only; strongly overdamped cavities are out of regime
        if self.kappa > self.omega_r / 10:
            warnings.warn(
                "kappa exceeds omega_r/10; the rotating-frame cavity model "
                "assumes kappa << omega_r",
                stacklevel=2,
            )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def canonical_params() -> SystemParams:
    """Stock parameter set used throughout the test-bench scenarios.

    kappa/2pi = 1 MHz, g0/2pi = 21 MHz, omega_r/2pi = 6.6 GHz,
    omega_q/2pi = 3.28 GHz, t_f = pi/(100 kappa).
    """
    import numpy as np

    kappa = 2 * np.pi * 1e6
    return SystemParams(
        omega_q=2 * np.pi * 3.28e9,
        omega_r=2 * np.pi * 6.6e9,
        kappa=kappa,
        g0=2 * np.pi * 21e6,
        t_f=np.pi / (100 * kappa),
    )

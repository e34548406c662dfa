"""Coupling waveforms and the inverse-engineering design operations.

The toolkit distinguishes two waveforms: the *drive* waveform (the auxiliary
curve the damped cavity effectively integrates) and the *coupling* waveform
(the physical longitudinal coupling). They are related by the second-order
lift g -> g + g''/omega_r^2, which is the Euler-Lagrange closure condition of
the design frame; for cavity frequencies far above the pulse bandwidth the
two are nearly identical.

Everything here is immutable after construction and every operation is a
pure function of its inputs, so waveforms are safe to share across
concurrent sweep workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._quad import adaptive_simpson
from .errors import DomainError, ResolutionError
from .params import SystemParams

# waveform kinds
POLYNOMIAL = "polynomial"
TRIGONOMETRIC = "trigonometric"
FOURIER_SERIES = "fourier_series"
SAMPLED = "sampled"
CONSTANT_BASELINE = "constant_baseline"
BANG_BANG = "bang_bang"

_KINDS = (POLYNOMIAL, TRIGONOMETRIC, FOURIER_SERIES, SAMPLED, CONSTANT_BASELINE, BANG_BANG)

# weights of sin(x)cos^5(x) = [5 sin(2x) + 4 sin(4x) + sin(6x)] / 32, the exact
# sine-series expansion used for the trig-pulse derivatives and lifts
_TRIG_SINE_WEIGHTS = np.array([5.0, 4.0, 1.0]) / 32.0


@dataclass(frozen=True)
class Modulation:
    """A time-dependent coupling waveform on [0, t_f] with derivative access.

    ``coefficients`` are interpreted per ``kind``:

    - ``polynomial``: ascending coefficients b_l of sum b_l t^l (rad/s).
    - ``trigonometric``: single amplitude A of A sin(pi t/2t_f) cos^5(pi t/2t_f).
    - ``fourier_series``: interleaved pairs [c_0, d_0, c_1, d_1, ...] of
      sum_m c_m cos(m pi t/t_f) + d_m sin(m pi t/t_f), m starting at 0.
    - ``constant_baseline``: single constant level.
    - ``bang_bang``: [u_0, s_1, u_1, s_2, u_2, ...] piecewise-constant levels
      u_i separated by switch times s_i.
    - ``sampled``: ``samples`` holds values on the implied uniform grid
      linspace(0, t_f, len(samples)); coefficients unused.
    """

    kind: str
    coefficients: tuple = ()
    t_f: float = 0.0
    samples: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown modulation kind {self.kind!r}")
        if self.t_f <= 0:
            raise ValueError("t_f must be positive")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if self.kind == SAMPLED:
            if self.samples is None or len(self.samples) < 2:
                raise ResolutionError("sampled modulation needs at least 2 samples")
            object.__setattr__(self, "samples", tuple(float(v) for v in self.samples))
        elif self.samples is not None:
            raise ValueError("samples are only meaningful for the sampled kind")
        # derivative coefficients are hot in the integrators; cache them
        if self.kind == POLYNOMIAL:
            b = np.array(self.coefficients)
            object.__setattr__(self, "_d1c", np.polynomial.polynomial.polyder(b))
            object.__setattr__(self, "_d2c", np.polynomial.polynomial.polyder(b, 2))

    # -- evaluation ------------------------------------------------------

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        slack = 1e-12 * self.t_f
        if np.any(t < -slack) or np.any(t > self.t_f + slack):
            raise DomainError(f"time outside [0, {self.t_f}]")
        return np.clip(t, 0.0, self.t_f)

    def _sample_times(self):
        return np.linspace(0.0, self.t_f, len(self.samples))

    def _fourier_terms(self):
        c = np.array(self.coefficients[0::2])
        d = np.array(self.coefficients[1::2])
        m = np.arange(max(len(c), len(d)))
        c = np.pad(c, (0, len(m) - len(c)))
        d = np.pad(d, (0, len(m) - len(d)))
        return m, c, d

    def value(self, t):
        """Waveform value at time(s) ``t`` (rad/s)."""
        t = self._check_domain(t)
        if self.kind == POLYNOMIAL:
            return np.polynomial.polynomial.polyval(t, np.array(self.coefficients))
        if self.kind == TRIGONOMETRIC:
            x = np.pi * t / (2.0 * self.t_f)
            return self.coefficients[0] * np.sin(x) * np.cos(x) ** 5
        if self.kind == FOURIER_SERIES:
            m, c, d = self._fourier_terms()
            ph = np.multiply.outer(np.asarray(t), m) * (np.pi / self.t_f)
            return np.cos(ph) @ c + np.sin(ph) @ d
        if self.kind == CONSTANT_BASELINE:
            return np.broadcast_to(np.float64(self.coefficients[0]), np.shape(t)).copy() if np.ndim(t) else float(self.coefficients[0])
        if self.kind == BANG_BANG:
            levels = np.array(self.coefficients[0::2])
            switches = np.array(self.coefficients[1::2])
            idx = np.searchsorted(switches, t, side="right")
            out = levels[idx]
            return out if np.ndim(t) else float(out)
        # sampled
        return np.interp(t, self._sample_times(), np.array(self.samples))

    def d1(self, t):
        """First time derivative (rad/s^2)."""
        t = self._check_domain(t)
        if self.kind == POLYNOMIAL:
            return np.polynomial.polynomial.polyval(t, self._d1c)
        if self.kind == TRIGONOMETRIC:
            x = np.pi * t / (2.0 * self.t_f)
            s, c = np.sin(x), np.cos(x)
            return self.coefficients[0] * (np.pi / (2.0 * self.t_f)) * (c**6 - 5.0 * s**2 * c**4)
        if self.kind == FOURIER_SERIES:
            m, c, d = self._fourier_terms()
            w = m * np.pi / self.t_f
            ph = np.multiply.outer(np.asarray(t), m) * (np.pi / self.t_f)
            return -np.sin(ph) @ (w * c) + np.cos(ph) @ (w * d)
        if self.kind in (CONSTANT_BASELINE, BANG_BANG):
            return np.zeros_like(t) if np.ndim(t) else 0.0
        return np.interp(t, self._sample_times(), self._fd(1))

    def d2(self, t):
        """Second time derivative (rad/s^3)."""
        t = self._check_domain(t)
        if self.kind == POLYNOMIAL:
            return np.polynomial.polynomial.polyval(t, self._d2c)
        if self.kind == TRIGONOMETRIC:
            x = np.pi * t / (2.0 * self.t_f)
            s, c = np.sin(x), np.cos(x)
            return (
                self.coefficients[0]
                * (np.pi / (2.0 * self.t_f)) ** 2
                * (-16.0 * s * c**5 + 20.0 * s**3 * c**3)
            )
        if self.kind == FOURIER_SERIES:
            m, c, d = self._fourier_terms()
            w = m * np.pi / self.t_f
            ph = np.multiply.outer(np.asarray(t), m) * (np.pi / self.t_f)
            return -np.cos(ph) @ (w**2 * c) - np.sin(ph) @ (w**2 * d)
        if self.kind in (CONSTANT_BASELINE, BANG_BANG):
            return np.zeros_like(t) if np.ndim(t) else 0.0
        return np.interp(t, self._sample_times(), self._fd(2))

    def _fd(self, order: int) -> np.ndarray:
        """Finite-difference derivative on the sample grid.

        Second-order centered stencils, one-sided at the endpoints.
        """
        v = np.array(self.samples)
        n = len(v)
        if n < 5:
            raise ResolutionError("need at least 5 samples for finite differences")
        h = self.t_f / (n - 1)
        if order == 1:
            out = np.empty(n)
            out[1:-1] = (v[2:] - v[:-2]) / (2 * h)
            out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
            out[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
            return out
        out = np.empty(n)
        out[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2
        out[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h**2
        out[-1] = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / h**2
        return out

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "coefficients": list(self.coefficients), "t_f": self.t_f}
        if self.samples is not None:
            d["samples"] = list(self.samples)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Modulation":
        return cls(
            kind=d["kind"],
            coefficients=tuple(d.get("coefficients", ())),
            t_f=d["t_f"],
            samples=tuple(d["samples"]) if d.get("samples") is not None else None,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "Modulation":
        return cls.from_dict(json.loads(s))

    def export_csv(self, path, n_points: int = 1001) -> None:
        """Write the waveform as two-column CSV (t_seconds, value_rad_per_s)."""
        if self.kind == SAMPLED:
            t = self._sample_times()
        else:
            t = np.linspace(0.0, self.t_f, n_points)
        np.savetxt(
            path,
            np.column_stack([t, self.value(t)]),
            delimiter=",",
            header="t_seconds,value_rad_per_s",
            comments="",
        )

    def resampled(self, n_points: int) -> "Modulation":
        """Sampled copy of this waveform on a uniform grid."""
        t = np.linspace(0.0, self.t_f, n_points)
        return Modulation(kind=SAMPLED, t_f=self.t_f, samples=tuple(self.value(t)))


@dataclass(frozen=True)
class BoundaryReport:
    """Result of checking a drive waveform against the design contract.

    ``residuals`` holds, in rad/s and in order:
    |g(0)|, |g(t_f)|, t_f|g'(0)|, t_f|g'(t_f)|, t_f^2|g''(0)|, t_f^2|g''(t_f)|.
    ``displacement_integral`` is the pulse area normalized by the target
    g0*pi/(2*kappa), so the contract value is 1.
    """

    residuals: tuple
    displacement_integral: float
    tol: float
    passed: bool


# -- designed waveforms ---------------------------------------------------


def polynomial_drive_value(p: SystemParams, t):
    """Sixth-order polynomial drive, evaluated in factored closed form.

    g(t) = -70 pi g0 t^3 (t - t_f)^3 / (kappa t_f^7); nonnegative on
    [0, t_f], vanishing with two derivatives at both endpoints, with pulse
    area exactly g0 pi / (2 kappa).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > p.t_f):
        raise DomainError("time outside [0, t_f]")
    return -70.0 * np.pi * p.g0 * t**3 * (t - p.t_f) ** 3 / (p.kappa * p.t_f**7)


def trigonometric_drive_value(p: SystemParams, t):
    """Half-period sine-cosine drive.

    g(t) = (3 g0 pi^2 / 2 kappa t_f) sin(pi t/2t_f) cos^5(pi t/2t_f); pulse
    area exactly g0 pi / (2 kappa). Front-loaded: the peak sits near
    0.25 t_f and the start slope is nonzero.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > p.t_f):
        raise DomainError("time outside [0, t_f]")
    x = np.pi * t / (2.0 * p.t_f)
    return 3.0 * p.g0 * np.pi**2 / (2.0 * p.kappa * p.t_f) * np.sin(x) * np.cos(x) ** 5


def baseline_value(p: SystemParams, t):
    """Comparison baseline: constant envelope g0 in the rotating frame.

    This is the rotating-frame reduction of a coupling modulated resonantly
    at the cavity frequency; it is the reference every designed pulse is
    ratioed against.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > p.t_f):
        raise DomainError("time outside [0, t_f]")
    return p.g0 * np.ones_like(t) if t.ndim else float(p.g0)


def polynomial_drive(p: SystemParams) -> Modulation:
    """Designed polynomial drive as a Modulation (expanded coefficients)."""
    a = -70.0 * np.pi * p.g0 / (p.kappa * p.t_f**7)
    # t^3 (t - t_f)^3 = -t_f^3 t^3 + 3 t_f^2 t^4 - 3 t_f t^5 + t^6
    coeffs = (0.0, 0.0, 0.0, -a * p.t_f**3, 3 * a * p.t_f**2, -3 * a * p.t_f, a)
    return Modulation(kind=POLYNOMIAL, coefficients=coeffs, t_f=p.t_f)


def trigonometric_drive(p: SystemParams) -> Modulation:
    amp = 3.0 * p.g0 * np.pi**2 / (2.0 * p.kappa * p.t_f)
    return Modulation(kind=TRIGONOMETRIC, coefficients=(amp,), t_f=p.t_f)


def baseline_drive(p: SystemParams) -> Modulation:
    return Modulation(kind=CONSTANT_BASELINE, coefficients=(p.g0,), t_f=p.t_f)


def trigonometric_sine_coefficients(p: SystemParams) -> np.ndarray:
    """Exact sine-series weights d_1..d_3 of the trig drive on sin(m pi t/t_f)."""
    amp = 3.0 * p.g0 * np.pi**2 / (2.0 * p.kappa * p.t_f)
    return amp * _TRIG_SINE_WEIGHTS


# -- design-frame operations ----------------------------------------------


def second_derivative_lift(m: Modulation, omega_r: float) -> Modulation:
    """Map a waveform g to g + g''/omega_r^2.

    This single map serves two roles: it turns a drive waveform into the
    physical coupling that realizes it (Euler-Lagrange closure of the design
    frame), and it produces the rotated-frame effective coupling that
    absorbs the counter-diabatic correction.
    """
    if omega_r <= 0:
        raise ValueError("omega_r must be positive")
    w2 = omega_r**2
    if m.kind == POLYNOMIAL:
        b = np.array(m.coefficients)
        d2 = np.polynomial.polynomial.polyder(b, 2)
        out = b.copy()
        out[: len(d2)] += d2 / w2
        return Modulation(kind=POLYNOMIAL, coefficients=tuple(out), t_f=m.t_f)
    if m.kind == TRIGONOMETRIC:
        # exact sine-series expansion, lifted term by term
        d = m.coefficients[0] * _TRIG_SINE_WEIGHTS
        mm = np.arange(1, 4)
        lifted = d * (1.0 - (mm * np.pi / (m.t_f * omega_r)) ** 2)
        coeffs = []
        for dm in lifted:
            coeffs.extend([0.0, dm])
        return Modulation(kind=FOURIER_SERIES, coefficients=(0.0, 0.0, *coeffs), t_f=m.t_f)
    if m.kind == FOURIER_SERIES:
        mm, c, d = m._fourier_terms()
        scale = 1.0 - (mm * np.pi / (m.t_f * omega_r)) ** 2
        coeffs = []
        for cm, dm in zip(c * scale, d * scale):
            coeffs.extend([cm, dm])
        return Modulation(kind=FOURIER_SERIES, coefficients=tuple(coeffs), t_f=m.t_f)
    if m.kind in (CONSTANT_BASELINE, BANG_BANG):
        return m
    # sampled: finite differences on the native grid
    if len(m.samples) < 5:
        raise ResolutionError("sampled lift needs at least 5 grid points")
    lifted = np.array(m.samples) + m._fd(2) / w2
    return Modulation(kind=SAMPLED, t_f=m.t_f, samples=tuple(lifted))


def coupling_from_drive(m: Modulation, omega_r: float) -> Modulation:
    """Physical coupling waveform realizing the drive ``m``."""
    return second_derivative_lift(m, omega_r)


def verify_boundaries(m: Modulation, p: SystemParams, tol: float = 1e-6) -> BoundaryReport:
    """Check the design contract: endpoint zeros and the pulse-area target.

    Residuals are nondimensionalized with powers of t_f so that all six are
    comparable to g0; ``passed`` requires every residual below tol*g0 and
    the normalized pulse area within tol of 1.
    """
    tf = m.t_f
    residuals = (
        abs(float(m.value(0.0))),
        abs(float(m.value(tf))),
        tf * abs(float(m.d1(0.0))),
        tf * abs(float(m.d1(tf))),
        tf**2 * abs(float(m.d2(0.0))),
        tf**2 * abs(float(m.d2(tf))),
    )
    target = p.g0 * np.pi / (2.0 * p.kappa)
    area = adaptive_simpson(lambda s: float(m.value(s)), 0.0, tf, tol=1e-12 * p.g0 * tf)
    disp = float(area / target)
    passed = all(r < tol * p.g0 for r in residuals) and abs(disp - 1.0) < tol
    return BoundaryReport(residuals=residuals, displacement_integral=disp, tol=tol, passed=passed)


def euler_lagrange_residual(
    drive: Modulation, coupling: Modulation, omega_r: float, n_grid: int = 1000
) -> float:
    """Normalized closure residual max |g'' + omega_r^2 (g - G)| of a pair.

    Normalization is omega_r^2 * max|g| over an ``n_grid``-point grid, so a
    pair produced by ``coupling_from_drive`` scores ~1e-16 and a curved
    drive paired with itself scores max|g''| / (omega_r^2 max|g|).
    """
    t = np.linspace(0.0, drive.t_f, n_grid)
    g = np.asarray(drive.value(t), dtype=float)
    resid = drive.d2(t) + omega_r**2 * (g - np.asarray(coupling.value(t), dtype=float))
    scale = omega_r**2 * np.max(np.abs(g))
    if scale == 0.0:
        return float(np.max(np.abs(resid)))
    return float(np.max(np.abs(resid)) / scale)

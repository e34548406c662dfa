import json

import numpy as np
import pytest
from scipy.integrate import quad

from longi_readout.errors import DomainError, ResolutionError
from longi_readout.modulation import (
    FOURIER_SERIES,
    SAMPLED,
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
    trigonometric_sine_coefficients,
    verify_boundaries,
)
from longi_readout.params import SystemParams, canonical_params


@pytest.fixture(scope="module")
def p():
    return canonical_params()


class TestDesignedValues:
    def test_poly_endpoints_zero(self, p):
        assert polynomial_drive_value(p, 0.0) == 0.0
        assert polynomial_drive_value(p, p.t_f) == 0.0

    def test_poly_midpoint(self, p):
        # closed form at t_f/2: 35 pi g0 / (32 kappa t_f)
        expect = 35.0 * np.pi * p.g0 / (32.0 * p.kappa * p.t_f)
        assert polynomial_drive_value(p, p.t_f / 2) == pytest.approx(expect, rel=1e-14)
        assert expect / p.kappa == pytest.approx(2296.875, rel=1e-12)

    def test_trig_endpoints_zero(self, p):
        assert trigonometric_drive_value(p, 0.0) == 0.0
        assert abs(trigonometric_drive_value(p, p.t_f)) < 1e-12 * p.g0

    def test_trig_third_point(self, p):
        # prefactor times sin(pi/6) cos^5(pi/6)
        pref = 3.0 * p.g0 * np.pi**2 / (2.0 * p.kappa * p.t_f)
        expect = pref * np.sin(np.pi / 6) * np.cos(np.pi / 6) ** 5
        assert trigonometric_drive_value(p, p.t_f / 3) == pytest.approx(expect, rel=1e-14)
        assert pref == pytest.approx(3150.0 * np.pi * p.kappa, rel=1e-12)

    def test_out_of_range_raises(self, p):
        with pytest.raises(DomainError):
            polynomial_drive_value(p, -p.t_f / 10)
        with pytest.raises(DomainError):
            trigonometric_drive_value(p, 1.5 * p.t_f)
        with pytest.raises(DomainError):
            baseline_value(p, 2 * p.t_f)

    def test_baseline_constant(self, p):
        t = np.linspace(0, p.t_f, 10)
        assert np.all(baseline_value(p, t) == p.g0)

    @pytest.mark.parametrize("builder,value_fn", [
        (polynomial_drive, polynomial_drive_value),
        (trigonometric_drive, trigonometric_drive_value),
    ])
    def test_modulation_matches_closed_form(self, p, builder, value_fn):
        m = builder(p)
        t = np.linspace(0, p.t_f, 257)
        assert np.allclose(m.value(t), value_fn(p, t), rtol=1e-12, atol=1e-9 * p.g0)

    @pytest.mark.parametrize("builder", [polynomial_drive, trigonometric_drive])
    def test_nonnegative(self, p, builder):
        t = np.linspace(0, p.t_f, 2001)
        assert np.all(builder(p).value(t) >= -1e-9 * p.g0)

    def test_trig_sine_expansion_exact(self, p):
        # sin x cos^5 x = (5 sin 2x + 4 sin 4x + sin 6x)/32
        d = trigonometric_sine_coefficients(p)
        t = np.linspace(0, p.t_f, 101)
        series = sum(dm * np.sin((m + 1) * np.pi * t / p.t_f) for m, dm in enumerate(d))
        assert np.allclose(series, trigonometric_drive_value(p, t), rtol=1e-12, atol=1e-12 * p.g0)


class TestDerivatives:
    def test_polynomial_derivatives(self, p):
        m = polynomial_drive(p)
        t = np.linspace(0, p.t_f, 41)
        h = p.t_f / 1e6
        num = (np.asarray(m.value(np.clip(t + h, 0, p.t_f))) - m.value(np.clip(t - h, 0, p.t_f))) / (2 * h)
        inner = slice(1, -1)
        assert np.allclose(m.d1(t)[inner], num[inner], rtol=1e-5, atol=1e-4 * np.max(np.abs(m.d1(t))))

    def test_trig_second_derivative_vs_series(self, p):
        # analytic d2 equals the term-wise differentiated sine series
        m = trigonometric_drive(p)
        d = trigonometric_sine_coefficients(p)
        t = np.linspace(0, p.t_f, 101)
        series = sum(
            -dm * ((mm + 1) * np.pi / p.t_f) ** 2 * np.sin((mm + 1) * np.pi * t / p.t_f)
            for mm, dm in enumerate(d)
        )
        assert np.allclose(m.d2(t), series, rtol=1e-10, atol=1e-10 * np.max(np.abs(series)))

    def test_fourier_series_derivatives(self, p):
        m = Modulation(kind=FOURIER_SERIES, coefficients=(0, 0, 1e8, 2e8, 3e7, 0), t_f=p.t_f)
        t = np.linspace(0, p.t_f, 31)
        h = p.t_f * 1e-7
        num1 = (np.asarray(m.value(np.clip(t + h, 0, p.t_f))) - m.value(np.clip(t - h, 0, p.t_f))) / (2 * h)
        assert np.allclose(m.d1(t)[1:-1], num1[1:-1], rtol=1e-4)

    def test_sampled_derivatives(self, p):
        base = polynomial_drive(p)
        m = base.resampled(501)
        t = np.linspace(0.05 * p.t_f, 0.95 * p.t_f, 21)
        assert np.allclose(m.d1(t), base.d1(t), rtol=2e-3, atol=2e-3 * np.max(np.abs(base.d1(t))))
        assert np.allclose(m.d2(t), base.d2(t), rtol=2e-2, atol=2e-2 * np.max(np.abs(base.d2(t))))

    def test_sampled_too_few_points_for_fd(self, p):
        m = Modulation(kind=SAMPLED, t_f=p.t_f, samples=(0.0, 1.0, 0.0))
        with pytest.raises(ResolutionError):
            m.d1(p.t_f / 2)


class TestEulerLagrangeLift:
    def test_constant_unchanged(self, p):
        m = baseline_drive(p)
        out = coupling_from_drive(m, p.omega_r)
        t = np.linspace(0, p.t_f, 11)
        assert np.allclose(out.value(t), m.value(t))

    def test_sine_lift_closed_form(self, p):
        # A sin(wt) -> A (1 - w^2/omega_r^2) sin(wt)
        A = 3.0 * p.g0
        m = Modulation(kind=FOURIER_SERIES, coefficients=(0, 0, 0, A), t_f=p.t_f)
        out = second_derivative_lift(m, p.omega_r)
        w = np.pi / p.t_f
        t = np.linspace(0, p.t_f, 64)
        expect = A * (1 - (w / p.omega_r) ** 2) * np.sin(w * t)
        assert np.allclose(out.value(t), expect, rtol=1e-12)

    @pytest.mark.parametrize("builder", [polynomial_drive, trigonometric_drive])
    def test_closure_residual(self, p, builder):
        drive = builder(p)
        coupling = coupling_from_drive(drive, p.omega_r)
        assert euler_lagrange_residual(drive, coupling, p.omega_r) < 1e-8

    def test_coupling_close_to_drive(self, p):
        drive = polynomial_drive(p)
        coupling = coupling_from_drive(drive, p.omega_r)
        t = np.linspace(0, p.t_f, 2001)
        dev = np.max(np.abs(coupling.value(t) - drive.value(t))) / np.max(np.abs(drive.value(t)))
        assert dev < 1e-3

    def test_self_pair_residual_is_curvature(self, p):
        drive = polynomial_drive(p)
        r = euler_lagrange_residual(drive, drive, p.omega_r)
        t = np.linspace(0, p.t_f, 1000)
        expect = np.max(np.abs(drive.d2(t))) / (p.omega_r**2 * np.max(np.abs(drive.value(t))))
        assert r == pytest.approx(expect, rel=1e-6)

    def test_sampled_lift_needs_points(self, p):
        m = Modulation(kind=SAMPLED, t_f=p.t_f, samples=(0.0, 1.0, 2.0, 1.0))
        with pytest.raises(ResolutionError):
            coupling_from_drive(m, p.omega_r)


class TestBoundaries:
    def test_poly_passes(self, p):
        rep = verify_boundaries(polynomial_drive(p), p)
        assert rep.passed
        assert all(r < 1e-9 * p.g0 for r in rep.residuals)
        assert rep.displacement_integral == pytest.approx(1.0, abs=1e-9)

    def test_trig_area_exact_but_start_slope_fails(self, p):
        # the half-period sine-cosine pulse rises linearly at t = 0
        rep = verify_boundaries(trigonometric_drive(p), p)
        assert not rep.passed
        assert rep.displacement_integral == pytest.approx(1.0, abs=1e-9)
        assert rep.residuals[2] == pytest.approx(75.0 * np.pi**2 * p.g0, rel=1e-10)

    def test_pure_sine_fails_start_slope(self, p):
        m = Modulation(kind=FOURIER_SERIES, coefficients=(0, 0, 0, p.g0), t_f=p.t_f)
        rep = verify_boundaries(m, p)
        assert not rep.passed
        assert rep.residuals[2] > 1e-3 * p.g0

    @pytest.mark.parametrize("builder", [polynomial_drive, trigonometric_drive])
    def test_area_against_scipy(self, p, builder):
        m = builder(p)
        area, _ = quad(lambda s: float(m.value(s)), 0, p.t_f, limit=400)
        assert area == pytest.approx(p.g0 * np.pi / (2 * p.kappa), rel=1e-10)


class TestScalingCovariance:
    @pytest.mark.parametrize("builder,value_fn", [
        (polynomial_drive, polynomial_drive_value),
        (trigonometric_drive, trigonometric_drive_value),
    ])
    @pytest.mark.parametrize("s", [0.5, 2.0, 7.3])
    def test_tf_kappa_rescaling(self, p, builder, value_fn, s):
        # t_f -> s t_f with kappa -> kappa/s maps waveforms onto each other
        p2 = SystemParams(p.omega_q, p.omega_r, p.kappa / s, p.g0, s * p.t_f)
        t = np.linspace(0, p.t_f, 37)
        assert np.allclose(value_fn(p2, s * t), value_fn(p, t), rtol=1e-12)


class TestSerialization:
    @pytest.mark.parametrize("builder", [polynomial_drive, trigonometric_drive, baseline_drive])
    def test_json_roundtrip(self, p, builder):
        m = builder(p)
        again = Modulation.from_json(m.to_json())
        assert again == m

    def test_json_schema_fields(self, p):
        d = json.loads(polynomial_drive(p).to_json())
        assert set(d) == {"kind", "coefficients", "t_f"}

    def test_sampled_roundtrip_with_samples(self, p):
        m = polynomial_drive(p).resampled(64)
        again = Modulation.from_json(m.to_json())
        assert again == m
        assert "samples" in json.loads(m.to_json())

    def test_csv_export(self, p, tmp_path):
        path = tmp_path / "wave.csv"
        polynomial_drive(p).export_csv(path, n_points=17)
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (17, 2)
        assert data[0, 0] == 0.0 and data[-1, 0] == pytest.approx(p.t_f)

    def test_bang_bang_piecewise(self, p):
        m = Modulation(kind="bang_bang", coefficients=(2.0, 0.5 * p.t_f, 0.0), t_f=p.t_f)
        assert m.value(0.25 * p.t_f) == 2.0
        assert m.value(0.75 * p.t_f) == 0.0
        assert m.d1(0.25 * p.t_f) == 0.0

import numpy as np
import pytest
from scipy.special import jv

from longi_readout.errors import SingularCoefficientError
from longi_readout.floquet import (
    FloquetSpec,
    bessel_j,
    bessel_j_series,
    cd_amplitude,
    cd_coefficient_for_drive,
    effective_coupling,
    floquet_drive,
    floquet_drive_descriptor,
    magnus_average,
)
from longi_readout.modulation import (
    Modulation,
    baseline_drive,
    coupling_from_drive,
    polynomial_drive,
    second_derivative_lift,
    trigonometric_drive,
)
from longi_readout.params import canonical_params

# first zero of J_1
J1_ZERO = 3.8317059702075125


@pytest.fixture(scope="module")
def p():
    return canonical_params()


class TestBessel:
    def test_j0_at_zero(self):
        assert bessel_j(0, 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_j1_at_zero(self):
        assert bessel_j(1, 0.0) == pytest.approx(0.0, abs=1e-14)

    def test_j1_at_one(self):
        assert bessel_j(1, 1.0) == pytest.approx(0.44005058574493354, abs=1e-12)

    @pytest.mark.parametrize("n", range(6))
    def test_quadrature_matches_series(self, n):
        for z in np.linspace(-5, 5, 21):
            assert bessel_j(n, z) == pytest.approx(bessel_j_series(n, z), abs=1e-10)

    @pytest.mark.parametrize("n", range(4))
    def test_against_scipy(self, n):
        for z in np.linspace(-8, 8, 17):
            assert bessel_j(n, z) == pytest.approx(float(jv(n, z)), abs=1e-12)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            bessel_j(-1, 1.0)


class TestCDAmplitude:
    def test_constant_coupling(self, p):
        assert cd_amplitude(baseline_drive(p), p.omega_r, p.t_f / 3) == 0.0

    def test_linear_ramp(self, p):
        A = 2.0 * p.g0
        m = Modulation(kind="polynomial", coefficients=(0.0, A / p.t_f), t_f=p.t_f)
        assert cd_amplitude(m, p.omega_r, 0.123 * p.t_f) == pytest.approx(
            A / (p.omega_r * p.t_f), rel=1e-12
        )

    def test_symmetric_pulse_extremum_at_midpoint(self, p):
        gz = coupling_from_drive(polynomial_drive(p), p.omega_r)
        mid = cd_amplitude(gz, p.omega_r, p.t_f / 2)
        scale = np.max(np.abs(gz.d1(np.linspace(0, p.t_f, 500)))) / p.omega_r
        assert abs(mid) < 1e-10 * scale


class TestEffectiveCoupling:
    def test_static_unchanged(self, p):
        m = baseline_drive(p)
        out = effective_coupling(m, p.omega_r)
        t = np.linspace(0, p.t_f, 9)
        assert np.allclose(out.value(t), m.value(t))

    def test_sine_closed_form(self, p):
        A = p.g0
        m = Modulation(kind="fourier_series", coefficients=(0, 0, 0, A), t_f=p.t_f)
        out = effective_coupling(m, p.omega_r)
        w = np.pi / p.t_f
        t = np.linspace(0, p.t_f, 65)
        assert np.allclose(out.value(t), A * (1 - (w / p.omega_r) ** 2) * np.sin(w * t), rtol=1e-12)

    def test_lift_second_order_per_application(self, p):
        # each application moves a sine coefficient by exactly (w/omega_r)^2
        A = p.g0
        m = Modulation(kind="fourier_series", coefficients=(0, 0, 0, A), t_f=p.t_f)
        once = effective_coupling(m, p.omega_r)
        twice = effective_coupling(once, p.omega_r)
        t = np.linspace(0, p.t_f, 65)
        w = np.pi / p.t_f
        x = (w / p.omega_r) ** 2
        diff = np.max(np.abs(twice.value(t) - once.value(t)))
        assert diff == pytest.approx(A * x * (1 - x), rel=1e-10)

    def test_lift_inverts_to_fourth_order(self, p):
        # composing the lift with its first-order inverse g - g''/omega_r^2
        # recovers the waveform to O((w/omega_r)^4)
        A = p.g0
        m = Modulation(kind="fourier_series", coefficients=(0, 0, 0, A), t_f=p.t_f)
        lifted = effective_coupling(m, p.omega_r)
        w = np.pi / p.t_f
        x = (w / p.omega_r) ** 2
        t = np.linspace(0, p.t_f, 65)
        inverse = np.asarray(lifted.value(t)) - np.asarray(lifted.d2(t)) / p.omega_r**2
        # multiplier (1 - x)(1 + x) = 1 - x^2
        assert np.max(np.abs(inverse - m.value(t))) <= 1.01 * A * x**2


class TestFloquetDrive:
    def test_spec_validation(self):
        with pytest.raises(ValueError):
            FloquetSpec(Omega=1.0, nu=-1.0)
        with pytest.raises(SingularCoefficientError):
            FloquetSpec(Omega=J1_ZERO, nu=1e9)

    def test_nodes(self, p):
        gz = coupling_from_drive(polynomial_drive(p), p.omega_r)
        spec = FloquetSpec(Omega=1.0, nu=20 * 2 * np.pi / p.t_f)
        diag, coup = floquet_drive(gz, p.omega_r, spec, np.pi / (2 * spec.nu))
        scale = np.max(np.abs(gz.d1(np.linspace(0, p.t_f, 200)))) / p.omega_r
        assert abs(coup) < 1e-9 * scale  # cosine node
        diag0, _ = floquet_drive(gz, p.omega_r, spec, 0.0)
        assert diag0 == 0.0  # sine node

    def test_divisor_is_j1(self, p):
        gz = coupling_from_drive(polynomial_drive(p), p.omega_r)
        spec = FloquetSpec(Omega=1.0, nu=10 * 2 * np.pi / p.t_f)
        t = 0.2 * p.t_f
        _, coup = floquet_drive(gz, p.omega_r, spec, t)
        expect = gz.d1(t) * np.cos(spec.nu * t) / (p.omega_r * 0.44005058574493354)
        assert coup == pytest.approx(expect, rel=1e-10)

    def test_descriptor_fields(self, p):
        gz = coupling_from_drive(polynomial_drive(p), p.omega_r)
        spec = FloquetSpec(Omega=1.0, nu=10 * 2 * np.pi / p.t_f)
        d = floquet_drive_descriptor(spec, gz)
        assert set(d) == {"Omega", "nu", "gz_ref", "sign_convention"}


class TestMagnusAverage:
    def test_zero_drive(self, p):
        spec = FloquetSpec(Omega=1.0, nu=10 * 2 * np.pi / p.t_f)
        avg, ok = magnus_average(0.0, spec, 0.0, p.omega_r)
        assert avg == 0 and ok

    def test_engineered_coefficient_reproduces_cd(self, p):
        spec = FloquetSpec(Omega=1.0, nu=10 * 2 * np.pi / p.t_f)
        gz_dot = 4.7e8
        C1 = cd_coefficient_for_drive(gz_dot, p.omega_r, spec.Omega)
        avg, ok = magnus_average(C1, spec, gz_dot, p.omega_r, tol=1e-8)
        assert ok
        # the average lands on the counter-diabatic coefficient -i gz_dot/omega_r
        assert avg == pytest.approx(-1j * gz_dot / p.omega_r, abs=1e-10 * gz_dot / p.omega_r)

    @pytest.mark.parametrize("Omega", [0.5, 1.0, 2.0])
    def test_identity_across_omega(self, p, Omega):
        spec = FloquetSpec(Omega=Omega, nu=15 * 2 * np.pi / p.t_f)
        gz_dot = 1e8
        C1 = cd_coefficient_for_drive(gz_dot, p.omega_r, Omega)
        avg, ok = magnus_average(C1, spec, gz_dot, p.omega_r, tol=1e-8)
        assert ok

    def test_even_harmonic_cannot_match(self, p):
        # cos(2 nu t) drives average through J_2: purely real, never -i x
        spec = FloquetSpec(Omega=1.0, nu=10 * 2 * np.pi / p.t_f)
        T = 2 * np.pi / spec.nu
        t = np.linspace(0, T, 16385)
        avg = np.trapezoid(np.cos(2 * spec.nu * t) * np.exp(-1j * spec.Omega * np.cos(spec.nu * t)), t) / T
        assert abs(avg.imag) < 1e-12
        assert abs(avg.real) > 1e-3

    def test_singular_coefficient(self, p):
        with pytest.raises(SingularCoefficientError):
            cd_coefficient_for_drive(1e8, p.omega_r, J1_ZERO)

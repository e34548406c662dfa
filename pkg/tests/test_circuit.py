import numpy as np
import pytest

from longi_readout.circuit import (
    CircuitParams,
    canonical_circuit,
    charge_qubit_splitting,
    cos_theta_matrix,
    derived_frequencies,
    eigensystem,
    longitudinal_coupling_estimate,
    pauli_maps_vs_squid_flux,
    pauli_projection,
    spectrum_vs_squid_flux,
    squid_energy,
    total_josephson_energy,
    transmon_matrix,
)


@pytest.fixture(scope="module")
def cp():
    return canonical_circuit()


class TestSquidEnergy:
    def test_zero_flux(self):
        assert squid_energy(1.0, 0.02, 0.0) == 1.0

    def test_quarter_flux(self):
        assert squid_energy(1.0, 0.02, np.pi / 4) == pytest.approx(0.707248, abs=5e-7)

    @pytest.mark.parametrize("phi", [0.0, 0.4, np.pi / 2, 2.2, np.pi])
    def test_symmetric_limit_flux_independent(self, phi):
        assert squid_energy(1.0, 1.0, phi) == pytest.approx(1.0, abs=1e-14)

    def test_finite_at_half_flux(self):
        assert squid_energy(1.0, 0.1, np.pi / 2) == pytest.approx(0.1, abs=1e-14)


class TestTransmonMatrix:
    def test_real_symmetric(self, cp):
        h = transmon_matrix(cp)
        assert np.allclose(h, h.T)
        assert np.isrealobj(h)

    def test_zero_josephson_diagonal(self):
        cp0 = CircuitParams(E_J=0, E_C=1.0, E_Sigma=0, d_asym=0, n_g=0.3, n_cut=10)
        vals, _ = eigensystem(cp0)
        n = np.arange(-10, 11)
        assert np.allclose(vals, np.sort((n - 0.3) ** 2))

    def test_two_level_splitting_analytic(self):
        assert charge_qubit_splitting(1.0, 3.0, 0.5) == pytest.approx(3.0)
        assert charge_qubit_splitting(2.0, 0.0, 0.0) == pytest.approx(2.0)

    def test_cutoff_convergence(self, cp):
        c15 = CircuitParams(cp.E_J, cp.E_C, cp.E_Sigma, cp.d_asym, cp.n_g, n_cut=15)
        c30 = CircuitParams(cp.E_J, cp.E_C, cp.E_Sigma, cp.d_asym, cp.n_g, n_cut=30)
        v15, _ = eigensystem(c15)
        v30, _ = eigensystem(c30)
        assert abs(v15[0] - v30[0]) < 1e-10 * cp.E_J
        assert abs(v15[1] - v30[1]) < 1e-10 * cp.E_J

    def test_gate_charge_periodicity(self, cp):
        c1 = CircuitParams(cp.E_J, cp.E_C, cp.E_Sigma, cp.d_asym, 0.3, n_cut=25)
        c2 = CircuitParams(cp.E_J, cp.E_C, cp.E_Sigma, cp.d_asym, 1.3, n_cut=25)
        v1, _ = eigensystem(c1)
        v2, _ = eigensystem(c2)
        assert np.max(np.abs(v1[:4] - v2[:4])) < 1e-9 * cp.E_J

    def test_spectrum_continuity_in_gate_charge(self, cp):
        eps = 1e-7
        base = CircuitParams(cp.E_J, cp.E_C, cp.E_Sigma, cp.d_asym, 0.37, n_cut=15)
        bump = CircuitParams(cp.E_J, cp.E_C, cp.E_Sigma, cp.d_asym, 0.37 + eps, n_cut=15)
        v1, _ = eigensystem(base)
        v2, _ = eigensystem(bump)
        assert np.max(np.abs(v1[:3] - v2[:3])) < 10 * eps * cp.E_C

    def test_param_validation(self):
        with pytest.raises(ValueError):
            CircuitParams(E_J=1, E_C=-1, E_Sigma=1, d_asym=0)
        with pytest.raises(ValueError):
            CircuitParams(E_J=1, E_C=1, E_Sigma=1, d_asym=1.2)
        with pytest.raises(ValueError):
            CircuitParams(E_J=1, E_C=1, E_Sigma=1, d_asym=0, n_cut=5)


class TestPauliProjection:
    def test_no_transverse_parts(self, cp):
        ax, ay, az, ai = pauli_projection(cp)
        assert abs(ax) < 1e-9
        assert abs(ay) < 1e-12
        assert abs(az) <= 1.0

    def test_degenerate_charge_limit(self):
        # E_Jtilde -> 0 at n_g = 1/2: eigenstates are (|0> +/- |1>)/sqrt(2)
        cp = CircuitParams(
            E_J=0.0, E_C=2 * np.pi * 1e9, E_Sigma=2 * np.pi * 1e5, d_asym=0.0,
            n_g=0.5, n_cut=10,
        )
        ax, ay, az, ai = pauli_projection(cp)
        assert abs(abs(az) - 0.5) < 1e-6
        assert abs(ax) < 1e-9 and abs(ay) < 1e-12

    def test_operator_norm_bound(self, cp):
        # cos(theta) has operator norm <= 1, so |alpha_z| <= 1 everywhere
        for phi in np.linspace(0, np.pi, 7):
            ej = cp.E_J + squid_energy(cp.E_Sigma, cp.d_asym, phi)
            _, _, az, ai = pauli_projection(cp, e_jtilde=ej)
            assert abs(az) <= 1.0 and abs(ai) <= 1.0

    def test_cos_theta_matrix(self):
        c = cos_theta_matrix(2)
        assert c.shape == (5, 5)
        assert np.allclose(np.diag(c, 1), 0.5)


class TestReports:
    def test_coupling_estimate_zero_frequency(self):
        est = longitudinal_coupling_estimate(0.0, 2 * np.pi * 6.6e9, 200e3)
        assert est.value == 0.0

    def test_coupling_estimate_impedance_scaling(self):
        wq, wr = 2 * np.pi * 3.28e9, 2 * np.pi * 6.6e9
        e1 = longitudinal_coupling_estimate(wq, wr, 200e3)
        e2 = longitudinal_coupling_estimate(wq, wr, 400e3)
        assert e2.value / e1.value == pytest.approx(np.sqrt(2), rel=1e-12)

    def test_coupling_estimate_reports_targets(self):
        est = longitudinal_coupling_estimate(2 * np.pi * 3.28e9, 2 * np.pi * 6.6e9, 200e3)
        d = est.to_dict()
        assert d["targets"]["value_rad_per_s"] == pytest.approx(2 * np.pi * 2.57e9)
        assert d["targets"]["ratio"] == 0.5793
        assert "deviations" in d and "value" in d["deviations"]

    def test_derived_frequencies_reduces_to_ec(self, cp):
        c = CircuitParams(cp.E_J, cp.E_C, cp.E_Sigma, 0.0, cp.n_g, n_cut=15)
        rep = derived_frequencies(c)
        assert rep.omega_q_formula == pytest.approx(cp.E_C, rel=1e-12)

    def test_derived_frequencies_report_complete(self, cp):
        rep = derived_frequencies(cp)
        d = rep.to_dict()
        assert set(d) == {
            "omega_q_formula_rad_per_s",
            "omega_q_exact_rad_per_s",
            "E_Jtilde_rad_per_s",
            "discrepancy_rad_per_s",
            "targets",
        }
        assert d["targets"]["omega_q_rad_per_s"] == pytest.approx(2 * np.pi * 3.28e9)
        assert rep.discrepancy == rep.omega_q_formula - rep.omega_q_exact

    def test_e_sigma_zero_discrepancy_channel(self, cp):
        c = CircuitParams(cp.E_J, cp.E_C, 0.0, 0.0, cp.n_g, n_cut=15)
        rep = derived_frequencies(c)
        assert rep.omega_q_formula == pytest.approx(cp.E_C, rel=1e-12)
        # exact splitting is Josephson-dominated, far from E_C
        assert rep.omega_q_exact > 5 * cp.E_C


class TestFluxSweeps:
    def test_spectrum_flat_along_squid_flux(self, cp):
        phis = np.linspace(0, np.pi / 2, 41)
        spec = spectrum_vs_squid_flux(cp, phis)
        gap = spec[:, 1] - spec[:, 0]
        grad = np.max(np.abs(np.gradient(gap, phis)))
        assert grad < 0.5 * cp.E_Sigma     # bounded slope: no abrupt changes
        assert np.max(np.abs(np.diff(gap))) < 0.02 * np.max(gap)  # no jumps

    def test_pauli_maps_shape(self, cp):
        phis = np.linspace(0, np.pi / 2, 9)
        alphas = pauli_maps_vs_squid_flux(cp, phis)
        assert alphas.shape == (9, 4)
        assert np.max(np.abs(alphas[:, 0])) < 1e-8  # no sigma_x anywhere

import numpy as np
import pytest

from wgqed.errors import DispersionPole, FlatSpectrumError
from wgqed.model import ChainConfig, ExcitationBasis, fock_state, heff_block, interaction_matrices
from wgqed.spectra import (
    PolaritonConfig,
    dominant_wavevector,
    infinite_chain_shift,
    polariton_bands,
    qubit_branch_shift,
    single_excitation_modes,
    subradiant_scaling_fit,
)

from oracles import full_heff, sector_indices


class TestSingleExcitationModes:
    def test_two_qubits_pi(self):
        modes = single_excitation_modes(ChainConfig(2, np.pi))
        assert [m.decay for m in modes] == pytest.approx([0.0, 2.0], abs=1e-12)
        assert [m.shift for m in modes] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_two_qubits_pi_half(self):
        modes = single_excitation_modes(ChainConfig(2, np.pi / 2))
        assert [m.decay for m in modes] == pytest.approx([1.0, 1.0], abs=1e-12)
        assert [m.shift for m in modes] == pytest.approx([-0.5, 0.5], abs=1e-12)

    def test_trace_identities(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(2, 40))
            k1d_d = float(rng.uniform(0.05, 1.95)) * np.pi
            modes = single_excitation_modes(ChainConfig(n, k1d_d))
            assert sum(m.decay for m in modes) == pytest.approx(n, abs=1e-10)
            assert sum(m.shift for m in modes) == pytest.approx(0.0, abs=1e-10)

    def test_eigen_residuals(self):
        cfg = ChainConfig(30, 0.2 * np.pi)
        H = heff_block(interaction_matrices(cfg), ExcitationBasis(30, 1)).matrix
        for mode in single_excitation_modes(cfg):
            lam = mode.shift - 0.5j * mode.decay
            assert np.linalg.norm(H @ mode.vector - lam * mode.vector) <= 1e-10

    def test_decay_nonnegative(self):
        for k in (0.2, 0.5, 0.7, 1.3):
            modes = single_excitation_modes(ChainConfig(25, k * np.pi))
            assert min(m.decay for m in modes) >= -1e-10

    def test_matches_independent_full_space_oracle_n10(self):
        """Most subradiant decay vs diagonalizing the projected 2^N operator."""
        H_full = full_heff(10, 0.7 * np.pi)
        idx = sector_indices(10, 1)
        lam = np.linalg.eigvals(H_full[np.ix_(idx, idx)])
        gamma_min_oracle = np.min(-2 * lam.imag)
        modes = single_excitation_modes(ChainConfig(10, 0.7 * np.pi))
        assert modes[0].decay == pytest.approx(gamma_min_oracle, abs=1e-12)

    def test_inversion_symmetry_of_decay_spectrum(self):
        cfg = ChainConfig(12, 0.37 * np.pi)
        modes = single_excitation_modes(cfg)
        flipped = [
            np.abs(np.vdot(m.vector[::-1], m.vector)) for m in modes
        ]
        # standing waves have definite parity: reversal preserves each mode
        assert np.allclose(flipped, 1.0, atol=1e-8)

    def test_decay_extrema_locations_n30(self):
        """Radiant modes near +-k1D, decay minima at the zone edge for 0.2pi."""
        modes = single_excitation_modes(ChainConfig(30, 0.2 * np.pi))
        most_radiant = max(modes, key=lambda m: m.decay)
        assert abs(most_radiant.k_dom - 0.2 * np.pi) < 0.15
        assert modes[0].k_dom == pytest.approx(np.pi, abs=np.pi / 30)

    def test_dicke_limit(self):
        for n in (5, 10, 30):
            modes = single_excitation_modes(ChainConfig(n, 2 * np.pi))
            assert modes[-1].decay == pytest.approx(n, rel=1e-9)
            assert all(m.decay <= 1e-10 for m in modes[:-1])


class TestDominantWavevector:
    def test_pure_spin_wave(self):
        n = 30
        k_d = 2 * np.pi * 3 / n
        cfg = ChainConfig(n, 0.5)
        v = fock_state(cfg, k_d, 1)
        assert dominant_wavevector(v) == pytest.approx(k_d, abs=1e-12)

    def test_uniform_gives_zero(self):
        assert dominant_wavevector(np.ones(16) / 4.0) == 0.0

    def test_alternating_gives_pi(self):
        v = np.array([1.0, -1, 1, -1, 1, -1]) / np.sqrt(6)
        assert dominant_wavevector(v) == pytest.approx(np.pi)

    def test_site_basis_vector_flagged(self):
        v = np.zeros(12)
        v[4] = 1.0
        with pytest.raises(FlatSpectrumError):
            dominant_wavevector(v)

    def test_most_subradiant_at_zone_edge(self):
        modes = single_excitation_modes(ChainConfig(30, 0.2 * np.pi))
        assert modes[0].k_dom / np.pi == pytest.approx(1.0, abs=8 / (8 * 30))


class TestScalingFit:
    def test_synthetic_cubic(self):
        from wgqed.fitting import loglog_fit
        n = np.array([10, 20, 30, 40, 60])
        slope, _, r2 = loglog_fit(n, 5.0 / n**3)
        assert slope == pytest.approx(-3.0, abs=1e-10)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_most_subradiant_slopes(self):
        cfg = ChainConfig(10, 0.2 * np.pi)
        slopes_n, slopes_xi = subradiant_scaling_fit(cfg, [10, 20, 30, 40, 60],
                                                     [1, 2])
        assert slopes_n[1] == pytest.approx(-3.0, abs=0.15)
        assert slopes_n[2] == pytest.approx(-3.0, abs=0.15)

    def test_xi_squared_law_at_fixed_n(self):
        cfg = ChainConfig(40, 0.2 * np.pi)
        _, slopes_xi = subradiant_scaling_fit(cfg, [30, 40, 50], [1, 2, 3, 4, 5, 6])
        assert slopes_xi[40] == pytest.approx(2.0, abs=0.3)

    def test_too_few_points(self):
        cfg = ChainConfig(10, 0.2 * np.pi)
        with pytest.raises(ValueError):
            subradiant_scaling_fit(cfg, [10, 20], [1])


class TestInfiniteChainShift:
    def test_closed_form_value(self):
        cfg = ChainConfig(10, 0.2 * np.pi)
        expected = 0.5 / np.tan(0.1 * np.pi)
        assert infinite_chain_shift(0.0, cfg) == pytest.approx(expected)
        assert infinite_chain_shift(0.0, cfg) == pytest.approx(1.53884, abs=1e-5)

    def test_zone_edge_finite(self):
        cfg = ChainConfig(10, 0.3 * np.pi)
        val = infinite_chain_shift(np.pi, cfg)
        cot = lambda x: 1 / np.tan(x)
        assert val == pytest.approx(0.25 * (cot((np.pi + 0.3 * np.pi) / 2)
                                            + cot((0.3 * np.pi - np.pi) / 2)))

    def test_pole_raises(self):
        cfg = ChainConfig(10, 0.2 * np.pi)
        with pytest.raises(DispersionPole):
            infinite_chain_shift(0.2 * np.pi, cfg)
        with pytest.raises(DispersionPole):
            infinite_chain_shift(-0.2 * np.pi, cfg)

    def test_finite_chain_tracks_dispersion(self):
        """Interior-mode shifts follow J_k at the labeled wavevector (N=30)."""
        cfg = ChainConfig(30, 0.2 * np.pi)
        for mode in single_excitation_modes(cfg):
            if abs(mode.k_dom - cfg.k1d_d) <= 0.2:
                continue
            j_inf = infinite_chain_shift(mode.k_dom, cfg)
            assert mode.shift == pytest.approx(j_inf, rel=0.05)


class TestPolaritonBands:
    def make(self, g=0.01, k1d_d=0.32 * np.pi, n=30):
        return PolaritonConfig(g=g, omega_eg=k1d_d, omega_f=10.0,
                               quantization_length=float(n))

    def test_decoupled_limit(self):
        p = self.make(g=1e-9)
        pts = polariton_bands(np.linspace(-np.pi, np.pi, 41), p)
        for pt in pts:
            bare = sorted([p.omega_eg, abs(pt.k_d)])
            assert pt.omega_lower == pytest.approx(bare[0], abs=1e-6)
            assert pt.omega_upper == pytest.approx(bare[1], abs=1e-6)

    def test_avoided_crossing_at_k1d(self):
        p = self.make()
        k1d = p.omega_eg
        pts = polariton_bands([k1d, -k1d], p)
        for pt in pts:
            gap = pt.omega_upper - pt.omega_lower
            assert gap > 0
            assert gap == pytest.approx(2 * p.g * np.sqrt(2 * np.pi * k1d / p.quantization_length),
                                        rel=1e-9)
            assert pt.qubit_weight_upper == pytest.approx(0.5, abs=1e-9)

    def test_qubit_dominant_away_from_crossing(self):
        p = self.make()
        pts = polariton_bands([0.05, 0.9 * np.pi], p)
        for pt in pts:
            w = max(pt.qubit_weight_upper, pt.qubit_weight_lower)
            assert w > 0.99

    def test_gamma_consistency(self):
        p = self.make()
        assert p.implied_gamma_1d == pytest.approx(2 * np.pi * p.g**2 * p.omega_eg)

    def test_qubit_branch_flat_where_shift_small(self):
        """Band-model qubit branch stays within 1% of omega_eg of the cot form."""
        cfg = ChainConfig(30, 0.32 * np.pi)
        p = self.make()
        scale = p.implied_gamma_1d  # dispersion code works in Gamma_1D units
        for k_d in np.linspace(0.01, np.pi, 37):
            if abs(abs(k_d) - cfg.k1d_d) < 0.3:
                continue
            j_cot = infinite_chain_shift(k_d, cfg) * scale
            if abs(j_cot) >= 1e-3 * p.omega_eg:
                continue
            pt = polariton_bands([k_d], p)[0]
            assert abs(qubit_branch_shift(pt, p) - j_cot) < 0.01 * p.omega_eg

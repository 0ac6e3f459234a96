"""Beam-splitter output densities: nulls, factorization, completeness."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import homsim
from homsim import (
    ConditionalState,
    PhotonPairConfig,
    PortPair,
    TimeGrid,
    ZeroDensityInstant,
    conditional_density,
    conditional_state,
    dephased_joint_density,
    detection_density,
    first_detection_density,
    gaussian_pair,
    joint_density,
    joint_density_spectral,
    make_gaussian_mode,
    make_sampled_mode,
    overlap,
    p_joint_gaussian,
    port_pair_probabilities,
    same_port_density,
    to_spectrum,
    write_density_csv,
)
from conftest import MODE_GRID, random_mode, random_sampled_mode


def plane_quadrature(density_fn):
    """2-D trapezoid of a two-time density over the mode-grid plane.

    Probes on (a stride of) the shared sample grid, where sampled-mode
    values are exact rather than interpolated.
    """
    t = MODE_GRID.times[::2]
    surf = density_fn(t[:, None], (t[None, :] - t[:, None]))
    return np.trapezoid(np.trapezoid(surf, t, axis=1), t)


class TestJointDensity:
    def test_null_at_equal_times(self, rng):
        for _ in range(30):
            m1, m2 = random_mode(rng), random_mode(rng)
            t0 = rng.uniform(-4, 4, 20)
            # squared-ulp residue only (complex multiply is not bitwise
            # commutative under FMA contraction)
            assert np.abs(joint_density(m1, m2, t0, 0.0)).max() < 1e-30

    def test_identical_modes_identically_zero(self, rng):
        m = random_mode(rng)
        t0 = rng.uniform(-4, 4, 100)
        tau = rng.uniform(-4, 4, 100)
        assert np.abs(joint_density(m, m, t0, tau)).max() == 0.0

    def test_matches_closed_form(self, rng):
        # oracle: the closed-form evaluator for the standard pulse pair
        for _ in range(10):
            cfg = PhotonPairConfig(delta_tau=rng.uniform(-2, 2),
                                   delta=rng.uniform(-8, 8),
                                   omega_mean=rng.uniform(-5, 5))
            m1, m2 = gaussian_pair(cfg)
            t0 = rng.uniform(-3, 3, 50)
            tau = rng.uniform(-3, 3, 50)
            np.testing.assert_allclose(joint_density(m1, m2, t0, tau),
                                       p_joint_gaussian(t0, tau, cfg),
                                       atol=1e-9)

    def test_detector_exchange_symmetry(self, rng):
        for _ in range(10):
            m1, m2 = random_mode(rng), random_mode(rng)
            t0 = rng.uniform(-3, 3, 20)
            tau = rng.uniform(-3, 3, 20)
            np.testing.assert_allclose(joint_density(m1, m2, t0, tau),
                                       joint_density(m1, m2, t0 + tau, -tau),
                                       rtol=1e-12, atol=1e-300)

    @settings(max_examples=30, deadline=None)
    @given(t0=st.floats(-4, 4), tau=st.floats(-4, 4),
           dt=st.floats(-2, 2), d=st.floats(-8, 8))
    def test_bounded_by_dephased(self, t0, tau, dt, d):
        # |a - b|^2 <= 2|a|^2 + 2|b|^2
        m1, m2 = gaussian_pair(PhotonPairConfig(delta_tau=dt, delta=d))
        assert joint_density(m1, m2, t0, tau) <= 4.0 * dephased_joint_density(
            m1, m2, t0, tau) + 1e-15


class TestSamePortDensity:
    def test_identical_modes_factorize(self):
        m = make_gaussian_mode(0.0, 3.0)
        t0, tau = 0.4, 0.7
        got = same_port_density(m, m, t0, tau)
        assert got == pytest.approx(detection_density(m, t0)
                                    * detection_density(m, t0 + tau), rel=1e-12)

    def test_equal_time_value(self, rng):
        m1, m2 = random_mode(rng), random_mode(rng)
        t0 = 0.3
        got = same_port_density(m1, m2, t0, 0.0)
        expected = abs(complex(m1(t0)) * complex(m2(t0))) ** 2
        assert got == pytest.approx(expected, rel=1e-12, abs=1e-300)

    def test_sum_rule_pointwise(self, rng):
        # joint + same = (P1(ta) P2(tb) + P2(ta) P1(tb)) / 2
        for _ in range(5):
            m1, m2 = random_mode(rng), random_mode(rng)
            t0 = rng.uniform(-3, 3, 30)
            tau = rng.uniform(-3, 3, 30)
            lhs = (joint_density(m1, m2, t0, tau)
                   + same_port_density(m1, m2, t0, tau))
            rhs = 0.5 * (detection_density(m1, t0) * detection_density(m2, t0 + tau)
                         + detection_density(m2, t0) * detection_density(m1, t0 + tau))
            np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-300)

    def test_completeness_by_quadrature(self, rng):
        # oracle: 2-D quadrature; opposite pairs live on the full plane,
        # same-port pairs on the ordered half-plane (half the symmetric
        # full-plane integral)
        for _ in range(3):
            m1, m2 = random_mode(rng), random_mode(rng)
            opposite = plane_quadrature(lambda a, tau: joint_density(m1, m2, a, tau))
            same_full = plane_quadrature(
                lambda a, tau: same_port_density(m1, m2, a, tau))
            total = opposite + 2.0 * (same_full / 2.0)
            assert total == pytest.approx(1.0, abs=1e-4)


class TestFirstDetection:
    def test_ports_agree(self, rng):
        m1, m2 = random_mode(rng), random_mode(rng)
        t0 = rng.uniform(-4, 4, 20)
        np.testing.assert_array_equal(
            first_detection_density(m1, m2, 3, t0),
            first_detection_density(m1, m2, 4, t0))

    def test_unit_integral(self, rng):
        # oracle: quadrature; one photon expected per output on average
        for _ in range(5):
            m1, m2 = random_mode(rng), random_mode(rng)
            t = np.linspace(-10, 10, 4001)
            val = np.trapezoid(first_detection_density(m1, m2, 3, t), t)
            assert val == pytest.approx(1.0, abs=1e-4)

    def test_simultaneous_gaussians(self):
        m1, m2 = gaussian_pair(PhotonPairConfig(delta_tau=0.0, delta=5.0))
        t0 = np.linspace(-3, 3, 61)
        np.testing.assert_allclose(
            first_detection_density(m1, m2, 3, t0),
            np.sqrt(2 / np.pi) * np.exp(-2 * t0 ** 2), rtol=1e-12)

    def test_bad_port(self):
        m1, m2 = gaussian_pair(PhotonPairConfig())
        with pytest.raises(ValueError):
            first_detection_density(m1, m2, 5, 0.0)


class TestConditionalState:
    def test_degenerate_conditioning(self):
        # second envelope vanishes at t0: the survivor is surely photon 2
        t = MODE_GRID.times
        env1 = np.exp(-t ** 2)
        env2 = np.where(t > 1.0, np.exp(-(t - 3.0) ** 2), 0.0)
        m1 = make_sampled_mode(env1, np.zeros_like(t), MODE_GRID)
        m2 = make_sampled_mode(env2, np.zeros_like(t), MODE_GRID)
        state = conditional_state(m1, m2, -1.0)
        assert abs(state.weight_mode1) == pytest.approx(0.0, abs=1e-12)
        assert abs(state.weight_mode2) == pytest.approx(1.0, abs=1e-12)

    def test_identical_modes_balanced(self):
        m = make_gaussian_mode(0.0, 2.0)
        state = conditional_state(m, m, 0.5)
        assert abs(state.weight_mode1) == pytest.approx(2 ** -0.5, abs=1e-12)
        assert abs(state.weight_mode2) == pytest.approx(2 ** -0.5, abs=1e-12)

    def test_simultaneous_gaussians_carrier_phase(self):
        m1, m2 = gaussian_pair(PhotonPairConfig(delta_tau=0.0, delta=4.0))
        t0 = 0.7
        state = conditional_state(m1, m2, t0)
        assert abs(state.weight_mode1) == pytest.approx(2 ** -0.5, abs=1e-12)
        assert abs(state.weight_mode2) == pytest.approx(2 ** -0.5, abs=1e-12)
        rel = state.weight_mode2 / state.weight_mode1
        assert np.angle(rel) == pytest.approx(
            np.angle(np.exp(1j * 4.0 * t0)), abs=1e-12)

    def test_zero_density_instant(self):
        m1 = make_gaussian_mode(-30.0, 0.0)
        m2 = make_gaussian_mode(+30.0, 0.0)
        with pytest.raises(ZeroDensityInstant):
            conditional_state(m1, m2, 0.0)

    def test_weights_validated(self):
        with pytest.raises(ValueError):
            ConditionalState(weight_mode1=1.0, weight_mode2=1.0)


class TestConditionalDensity:
    def test_same_port_at_conditioning_instant(self, rng):
        for _ in range(10):
            m1, m2 = random_mode(rng), random_mode(rng)
            t0 = float(rng.uniform(-1.5, 1.5))
            state = conditional_state(m1, m2, t0)
            assert conditional_density(state, m1, m2, 4, t0) == pytest.approx(
                0.0, abs=1e-20)
            assert conditional_density(state, m1, m2, 3, t0) > 0.0

    def test_factorization_identity(self, rng):
        # first detection x conditional port 4 must rebuild the joint density
        for _ in range(10):
            m1, m2 = random_mode(rng), random_mode(rng)
            t0 = float(rng.uniform(-1.5, 1.5))
            state = conditional_state(m1, m2, t0)
            tau = rng.uniform(-3, 3, 40)
            lhs = (first_detection_density(m1, m2, 3, t0)
                   * conditional_density(state, m1, m2, 4, t0 + tau))
            rhs = joint_density(m1, m2, t0, tau)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-280)

    def test_beat_oscillation_period(self):
        # port-4 fringe oscillates at the carrier difference
        delta = 5.0
        m1, m2 = gaussian_pair(PhotonPairConfig(delta_tau=0.0, delta=delta))
        state = conditional_state(m1, m2, 0.0)
        tau = np.linspace(0, 2 * np.pi / delta * 3, 1201)
        vals = conditional_density(state, m1, m2, 4, tau)
        # zeros of the fringe at multiples of 2*pi/delta
        for n in range(4):
            idx = np.argmin(np.abs(tau - n * 2 * np.pi / delta))
            assert vals[idx] < 1e-6 * vals.max()


class TestDephased:
    def test_equal_time_value(self, rng):
        m1, m2 = random_mode(rng), random_mode(rng)
        t0 = 0.4
        got = dephased_joint_density(m1, m2, t0, 0.0)
        assert got == pytest.approx(
            0.5 * detection_density(m1, t0) * detection_density(m2, t0),
            rel=1e-12, abs=1e-300)

    def test_plane_integral_half(self, rng):
        # oracle: 2-D quadrature; distinguishable photons split half the time
        for _ in range(3):
            m1, m2 = random_mode(rng), random_mode(rng)
            val = plane_quadrature(
                lambda a, tau: dephased_joint_density(m1, m2, a, tau))
            assert val == pytest.approx(0.5, abs=1e-4)

    def test_phase_modulation_invariance(self, rng):
        # probe on the sample grid, where the density is phase-exact
        t = MODE_GRID.times
        env = np.exp(-t ** 2)
        base = make_sampled_mode(env, np.zeros_like(t), MODE_GRID)
        mod = make_sampled_mode(env, 3.0 * np.sin(2.0 * t), MODE_GRID)
        other = make_gaussian_mode(0.5, 2.0)
        t0 = t[200:-400:61]
        tau = 102 * MODE_GRID.spacing
        np.testing.assert_allclose(
            dephased_joint_density(base, other, t0, tau),
            dephased_joint_density(mod, other, t0, tau), rtol=1e-12, atol=0)


class TestSpectralRoute:
    def test_matches_time_route(self, rng):
        grid = TimeGrid(-8.0, 8.0, 1024)
        for _ in range(3):
            m1 = random_sampled_mode(rng, grid)
            m2 = random_sampled_mode(rng, grid)
            s1, s2 = to_spectrum(m1), to_spectrum(m2)
            t0 = np.linspace(-2, 2, 21)[:, None]
            tau = np.linspace(-2, 2, 21)[None, :]
            time_route = joint_density(m1, m2, t0, tau)
            spectral_route = joint_density_spectral(s1, s2, t0, tau, grid=grid)
            assert np.abs(time_route - spectral_route).max() < 1e-6

    def test_null_at_equal_times(self, rng):
        grid = TimeGrid(-8.0, 8.0, 1024)
        m1 = random_sampled_mode(rng, grid)
        m2 = random_sampled_mode(rng, grid)
        s1, s2 = to_spectrum(m1), to_spectrum(m2)
        vals = joint_density_spectral(s1, s2, np.linspace(-2, 2, 11), 0.0,
                                      grid=grid)
        assert np.abs(vals).max() < 1e-25

    def test_aliasing_risk_propagates(self, rng):
        # a reconstruction grid too coarse for the spectrum must refuse
        grid = TimeGrid(-8.0, 8.0, 1024)
        m1 = random_sampled_mode(rng, grid)
        m2 = random_sampled_mode(rng, grid)
        s1, s2 = to_spectrum(m1), to_spectrum(m2)
        with pytest.raises(homsim.AliasingRisk):
            joint_density_spectral(s1, s2, 0.0, 0.5, grid=TimeGrid(-8, 8, 16))

    def test_gaussian_spectra_match_closed_form(self):
        cfg = PhotonPairConfig(delta_tau=0.6, delta=3.0)
        grid = TimeGrid(-8.0, 8.0, 4096)
        m1, m2 = gaussian_pair(cfg, grid=grid)
        s1, s2 = to_spectrum(m1), to_spectrum(m2)
        t0 = np.linspace(-2, 2, 15)[:, None]
        tau = np.linspace(-2, 2, 15)[None, :]
        got = joint_density_spectral(s1, s2, t0, tau, grid=grid)
        np.testing.assert_allclose(got, p_joint_gaussian(t0, tau, cfg),
                                   atol=1e-5)


class TestPortPairProbabilities:
    def test_identical_modes(self):
        m = make_gaussian_mode(0.0, 1.0)
        p = port_pair_probabilities(m, m)
        assert p.opposite == pytest.approx(0.0, abs=1e-12)
        assert p.same_33 == pytest.approx(0.5, abs=1e-12)
        assert p.same_44 == pytest.approx(0.5, abs=1e-12)

    def test_orthogonal_modes(self):
        m1 = make_gaussian_mode(-10.0, 0.0)
        m2 = make_gaussian_mode(+10.0, 0.0)
        p = port_pair_probabilities(m1, m2)
        assert p.opposite == pytest.approx(0.5, abs=1e-12)
        assert p.same_33 == pytest.approx(0.25, abs=1e-12)

    def test_gaussian_delay_matches_plane_quadrature(self):
        # oracle: quadrature of the joint density over the plane
        cfg = PhotonPairConfig(delta_tau=0.9, delta=0.0)
        m1, m2 = gaussian_pair(cfg)
        p = port_pair_probabilities(m1, m2)
        oracle = plane_quadrature(lambda a, tau: joint_density(m1, m2, a, tau))
        assert p.opposite == pytest.approx(oracle, abs=1e-6)
        assert p.opposite == pytest.approx(0.5 - 0.5 * np.exp(-0.81), abs=1e-12)

    def test_sum_to_one(self, rng):
        for _ in range(10):
            p = port_pair_probabilities(random_mode(rng), random_mode(rng))
            assert p.total == pytest.approx(1.0, abs=1e-9)

    def test_overlap_identity(self, rng):
        # plane integral of the joint density equals (1 - |overlap|^2)/2
        for _ in range(5):
            m1, m2 = random_mode(rng), random_mode(rng)
            val = plane_quadrature(lambda a, tau: joint_density(m1, m2, a, tau))
            c = abs(overlap(m1, m2)) ** 2
            assert val == pytest.approx(0.5 * (1.0 - c), abs=1e-4)


class TestPortPairType:
    def test_valid(self):
        pair = PortPair(3, 4)
        assert not pair.same_port
        assert PortPair(4, 4).same_port

    def test_invalid(self):
        with pytest.raises(ValueError):
            PortPair(1, 3)


class TestDensityCsv:
    def test_format(self, tmp_path):
        m1, m2 = gaussian_pair(PhotonPairConfig(delta_tau=1.0))
        t0 = np.linspace(-1, 1, 3)
        tau = np.linspace(-1, 1, 3)
        surf = joint_density(m1, m2, t0[:, None], tau[None, :])
        path = tmp_path / "surface.csv"
        write_density_csv(path, t0, tau, surf)
        lines = path.read_text().splitlines()
        assert lines[0] == "t0,tau,density"
        assert len(lines) == 1 + 9
        first = lines[1].split(",")
        assert float(first[0]) == -1.0 and float(first[1]) == -1.0
        assert float(first[2]) == pytest.approx(surf[0, 0], rel=1e-15)

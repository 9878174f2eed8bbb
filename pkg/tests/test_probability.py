"""Momentum-grid assembly, reductions, and convergence guards."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

import bwdelay.probability
from bwdelay.amplitude import amplitude_parts
from bwdelay.errors import GridUnconverged
from bwdelay.kinematics import GammaProbe, onshell_from_spherical, solve_partner
from bwdelay.probability import (
    BOUNDARY_MARGIN,
    GridEvaluation,
    build_grid,
    default_p_max,
    differential_probability,
    energy_spectrum,
    spectrum_peaks,
    total_probability,
    _parabolic_refine,
)
from bwdelay.pulse import PulseSpec
from bwdelay.sweep import DoublePulseConfig, single_pulse_config
from bwdelay.units import ALPHA

GAMMA = GammaProbe(omega_gamma=1.01)
P1 = PulseSpec(xi=0.1, omega=1.01, n_cycles=4)
SINGLE = single_pulse_config(P1, GAMMA)
PAIR = DoublePulseConfig(pulse_first=P1, pulse_second=P1, gamma=GAMMA)
C_EDGE = GAMMA.k_minus - BOUNDARY_MARGIN


@pytest.fixture(scope="module")
def ev_small():
    return GridEvaluation(PAIR, build_grid(48, 24, 8, p_max=2.5))


def angular_weight(ev):
    """Recover the bare angular quadrature weight from the stored prefactor."""
    E = np.sqrt(1.0 + ev.p**2)
    return (
        ev.prefactor
        * (16.0 * math.pi**2 * GAMMA.omega_gamma)
        * E
        * ev.pminus_ele
        / (ALPHA * ev.p**2)
    )


class TestGridGeometry:
    def test_axis_weights(self):
        g = build_grid(40, 24, 10, p_max=3.0)
        assert np.sum(g.p_weights) == pytest.approx(3.0, rel=1e-13)
        assert np.sum(g.u_weights) == pytest.approx(2.0, rel=1e-13)
        assert np.sum(g.phi_weights) == pytest.approx(2.0 * math.pi, rel=1e-13)
        assert g.shape == (40, 24, 10)
        assert np.all(g.p_nodes > 0.0) and np.all(g.p_nodes < 3.0)
        assert np.all(np.diff(g.theta_nodes) > 0.0)

    def test_default_p_max_rule(self):
        assert default_p_max([P1]) == 2.5
        strong = PulseSpec(xi=0.6, omega=0.3535, n_cycles=4)
        assert default_p_max([P1, strong]) == 4.0

    def test_rejects_degenerate_axes(self):
        with pytest.raises(ValueError):
            build_grid(1, 24, 8)

    def test_weighted_volume_against_quadrature(self):
        # smooth density vanishing quadratically at the phase-space edge:
        # h = p^2 (C - p_-^+)^2 (1 + 0.3 cos phi); its integral over the
        # admissible region has a closed radial reduction
        ev = GridEvaluation(SINGLE, build_grid(100, 48, 16, p_max=2.5))
        pperp = np.hypot(ev.px, ev.py)
        cosf = np.where(pperp > 0.0, ev.px / np.maximum(pperp, 1e-300), 1.0)
        h = ev.p**2 * (C_EDGE - ev.pminus_pos) ** 2 * (1.0 + 0.3 * cosf)
        got = float(np.sum(angular_weight(ev) * ev.node_measure() * h))

        def radial(p):
            E = math.sqrt(1.0 + p * p)
            top = C_EDGE - E + p
            if top <= 0.0:
                return 0.0
            bot = max(C_EDGE - E - p, 0.0)
            return 2.0 * math.pi * p * (top**3 - bot**3) / 3.0

        kink = next(
            p for p in np.linspace(0.01, 2.5, 20000)
            if math.sqrt(1.0 + p * p) + p > C_EDGE
        )
        want, err = quad(radial, 0.0, 2.5, points=[kink], limit=400,
                         epsabs=1e-14, epsrel=1e-12)
        assert err < 1e-10
        assert got == pytest.approx(want, rel=1e-6)

    def test_admissible_region_volume(self):
        # indicator of the admissible region; first-order accurate only, so
        # the tolerance is loose
        ev = GridEvaluation(SINGLE, build_grid(100, 48, 16, p_max=2.5))
        got = float(np.sum(angular_weight(ev) * ev.node_measure() * ev.p**2))

        def radial(p):
            E = math.sqrt(1.0 + p * p)
            top = C_EDGE - E + p
            if top <= 0.0:
                return 0.0
            bot = max(C_EDGE - E - p, 0.0)
            return 2.0 * math.pi * p * (top - bot)

        want, _ = quad(radial, 0.0, 2.5, limit=400)
        assert got == pytest.approx(want, rel=1e-2)

    def test_boundary_margin_insensitive(self, monkeypatch):
        grid = build_grid(100, 48, 16, p_max=2.5)
        totals = []
        for margin in (0.002, 0.01, 0.03):
            monkeypatch.setattr(bwdelay.probability, "BOUNDARY_MARGIN", margin)
            ev = GridEvaluation(SINGLE, grid)
            totals.append(ev.total_of(ev.density_single(0)))
        assert totals[1] == pytest.approx(totals[0], rel=1e-9)
        assert totals[2] == pytest.approx(totals[0], rel=1e-9)

    def test_azimuthal_fold_matches_odd_grid(self):
        # even counts are folded across the polarization plane; an odd-count
        # grid takes the unfolded path and must integrate to the same totals
        folded = GridEvaluation(PAIR, build_grid(60, 32, 16, p_max=2.5))
        unfolded = GridEvaluation(PAIR, build_grid(60, 32, 15, p_max=2.5))
        for D in (0.0, 3.2):
            a = folded.total_of(folded.density_double(D))
            b = unfolded.total_of(unfolded.density_double(D))
            assert a == pytest.approx(b, rel=1e-8)


class TestReductions:
    def test_total_is_weighted_spectrum(self, ev_small):
        dens = ev_small.density_single(0)
        spec = ev_small.spectrum_of(dens)
        assert spec.size == ev_small.grid.p_nodes.size
        assert ev_small.total_of(dens) == pytest.approx(
            float(ev_small.grid.p_weights @ spec), rel=1e-14
        )

    def test_double_single_ratio_bounds(self, ev_small):
        single = ev_small.density_single(0)
        for D in (0.0, 0.7, 1.4, 3.2, 7.7):
            ratio = ev_small.density_double(D) / single
            assert np.all(ratio >= -1e-12)
            assert np.all(ratio <= 4.0 + 1e-9)

    def test_identical_pulses_share_amplitudes(self, ev_small):
        assert ev_small.amps[0] is ev_small.amps[1]

    def test_density_double_needs_two_pulses(self):
        ev = GridEvaluation(SINGLE, build_grid(24, 12, 4, p_max=2.5))
        with pytest.raises(ValueError):
            ev.density_double(0.0)

    def test_dressed_energies_shift_by_h_star(self, ev_small):
        expected = -(ev_small.Q0 + ev_small.amps[0].H_star / ev_small.L1)
        np.testing.assert_allclose(
            ev_small.dressed_energies(0), expected, rtol=0, atol=0
        )

    def test_against_pointwise_differential(self, ev_small):
        # rebuild full kinematics at a few stored nodes and compare with the
        # single-point amplitude assembly
        ang_w = angular_weight(ev_small)
        E = np.sqrt(1.0 + ev_small.p**2)
        u = (E - ev_small.pminus_pos) / ev_small.p
        D = 1.4
        dens = ev_small.density_double(D)
        rng = np.random.default_rng(3)
        for i in rng.choice(ev_small.node_count, size=6, replace=False):
            pt = onshell_from_spherical(
                float(ev_small.p[i]),
                float(np.arccos(np.clip(u[i], -1.0, 1.0))),
                float(np.arctan2(ev_small.py[i], ev_small.px[i])),
            )
            pair = solve_partner(pt, GAMMA)
            parts = amplitude_parts(
                pair, ev_small.fields[0], ev_small.fields[1], GAMMA, D=D
            )
            want = differential_probability(pair, parts, GAMMA)
            assert dens[i] / ang_w[i] == pytest.approx(want, rel=1e-8)


class TestConvergenceChecks:
    def test_total_check_passes_on_adequate_grid(self):
        tot = total_probability(SINGLE, build_grid(80, 40, 12, p_max=2.5),
                                check=True)
        assert tot > 0.0

    def test_total_check_rejects_sparse_radial_grid(self):
        with pytest.raises(GridUnconverged):
            total_probability(SINGLE, build_grid(4, 12, 4, p_max=2.5),
                              check=True)

    def test_spectrum_check_passes(self):
        table = energy_spectrum(SINGLE, build_grid(60, 24, 8, p_max=2.5),
                                check=True)
        assert table.dP_dp.max() > 0.0
        assert table.p_values.size == 60

    def test_cache_reuse_is_exact(self, ev_small):
        direct = total_probability(PAIR, ev_small.grid, cache=ev_small)
        fresh = total_probability(PAIR, ev_small.grid)
        assert direct == fresh
        t1 = energy_spectrum(PAIR, ev_small.grid, cache=ev_small)
        t2 = energy_spectrum(PAIR, ev_small.grid)
        np.testing.assert_array_equal(t1.dP_dp, t2.dP_dp)


class TestPeakFinding:
    def test_parabola_vertex_recovered(self):
        x = np.array([0.9, 1.0, 1.1])
        y = -((x - 1.04) ** 2)
        assert _parabolic_refine(x, y) == pytest.approx(1.04, abs=1e-12)

    def test_flat_triplet_returns_center(self):
        assert _parabolic_refine(np.array([0.0, 1.0, 2.0]),
                                 np.array([1.0, 1.0, 1.0])) == 1.0

    def test_single_peak_location(self):
        p = np.linspace(0.0, 2.0, 400)
        y = np.exp(-((p - 0.73) ** 2) / 0.02)
        locs = spectrum_peaks(p, y)
        assert locs.size == 1
        assert locs[0] == pytest.approx(0.73, abs=1e-4)

    def test_floor_suppresses_minor_bumps(self):
        p = np.linspace(0.0, 3.0, 600)
        y = np.exp(-((p - 1.0) ** 2) / 0.01) + 0.01 * np.exp(
            -((p - 2.5) ** 2) / 0.01
        )
        assert spectrum_peaks(p, y, floor=0.05).size == 1
        assert spectrum_peaks(p, y, floor=0.001).size == 2

    def test_empty_for_flat_or_nonpositive(self):
        p = np.linspace(0.0, 1.0, 50)
        assert spectrum_peaks(p, np.zeros(50)).size == 0
        assert spectrum_peaks(p[:2], np.ones(2)).size == 0

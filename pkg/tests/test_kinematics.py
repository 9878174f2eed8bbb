"""Light-cone algebra and partner-solving checks."""

import math

import pytest
from hypothesis import given, strategies as st

from bwdelay.errors import PhaseSpaceClosed
from bwdelay.kinematics import (
    GammaProbe,
    LightConeMomentum,
    lightcone_decompose,
    onshell_from_spherical,
    solve_partner,
)

finite = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
momentum_mag = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)
angle = st.floats(min_value=0.0, max_value=math.pi, allow_nan=False)
azimuth = st.floats(min_value=0.0, max_value=2.0 * math.pi, allow_nan=False)


def test_decompose_rest_frame():
    lc = lightcone_decompose(1.0, (0.0, 0.0), 0.0)
    assert lc.p_minus == 1.0
    assert lc.p_plus == 0.5


def test_decompose_counterpropagating_photon():
    lc = lightcone_decompose(1.01, (0.0, 0.0), -1.01)
    assert lc.p_minus == 2.02
    assert lc.p_plus == 0.0


def test_decompose_copropagating_photon():
    k0 = 0.2525
    lc = lightcone_decompose(k0, (0.0, 0.0), k0)
    assert lc.p_minus == 0.0
    assert lc.p_plus == k0


@given(E=finite, px=finite, py=finite, pz=finite)
def test_decompose_preserves_cartesian_fields(E, px, py, pz):
    lc = lightcone_decompose(E, (px, py), pz)
    assert lc.E == E and lc.p_perp == (px, py) and lc.p_par == pz
    assert lc.p_minus == E - pz
    assert lc.p_plus == 0.5 * (E + pz)


@given(p=momentum_mag, theta=angle, phi=azimuth)
def test_spherical_construction_is_on_shell(p, theta, phi):
    lc = onshell_from_spherical(p, theta, phi)
    assert abs(lc.mass_shell_residual()) < 1e-12 * max(1.0, lc.E**2)


def test_minkowski_dot_against_components():
    a = lightcone_decompose(2.0, (0.3, -0.4), 1.1)
    b = lightcone_decompose(1.5, (-0.2, 0.9), -0.7)
    expected = a.E * b.E - (0.3 * -0.2 + -0.4 * 0.9 + 1.1 * -0.7)
    assert a.minkowski_dot(b) == pytest.approx(expected, rel=1e-15)


class TestSolvePartner:
    gamma = GammaProbe(omega_gamma=1.01)

    def test_positron_at_rest_reference_values(self):
        # frozen closed-form solution for the rest-frame positron
        pair = solve_partner(lightcone_decompose(1.0, (0.0, 0.0), 0.0), self.gamma)
        ele = pair.p_minus_lepton
        assert ele.p_minus == pytest.approx(1.02, abs=1e-15)
        assert ele.p_plus == pytest.approx(0.49019607843137253, rel=1e-14)
        assert ele.E == pytest.approx(1.0001960784313725, rel=1e-14)
        assert ele.p_par == pytest.approx(-0.0198039215686275, rel=1e-12)
        assert pair.Q0 == pytest.approx(-0.9901960784313725, rel=1e-14)
        assert pair.E0 == -pair.Q0
        assert abs(ele.mass_shell_residual()) < 1e-12

    def test_transverse_balance(self):
        pos = onshell_from_spherical(0.3, math.pi / 2.0, 0.0)
        pair = solve_partner(pos, self.gamma)
        assert pair.p_minus_lepton.p_perp == (-0.3, 0.0)

    def test_phase_space_boundary_raises(self):
        # p+^- -> 2 omega_gamma from below blows up the electron energy;
        # at and beyond the boundary the point must be rejected outright
        pos = lightcone_decompose(2.03, (0.0, 0.0), -math.sqrt(2.03**2 - 1.0))
        assert pos.p_minus > self.gamma.k_minus
        with pytest.raises(PhaseSpaceClosed):
            solve_partner(pos, self.gamma)

    @given(p=st.floats(min_value=1e-3, max_value=5.0), theta=angle, phi=azimuth)
    def test_conservation_shell(self, p, theta, phi):
        pos = onshell_from_spherical(p, theta, phi)
        if pos.p_minus >= self.gamma.k_minus:
            with pytest.raises(PhaseSpaceClosed):
                solve_partner(pos, self.gamma)
            return
        pair = solve_partner(pos, self.gamma)
        ele = pair.p_minus_lepton
        scale = max(1.0, ele.E**2)
        assert abs(ele.mass_shell_residual()) < 1e-12 * scale
        # Q^- and Q_perp vanish identically
        assert pos.p_minus + ele.p_minus == pytest.approx(self.gamma.k_minus, rel=1e-14)
        assert pos.p_perp[0] + ele.p_perp[0] == 0.0
        assert pos.p_perp[1] + ele.p_perp[1] == 0.0
        # energy bookkeeping consistent with the light-cone components
        q_plus = self.gamma.momentum.p_plus - pos.p_plus - ele.p_plus
        q_minus = self.gamma.k_minus - pos.p_minus - ele.p_minus
        assert pair.Q0 == pytest.approx(q_plus + 0.5 * q_minus, abs=1e-12 * scale)

    @given(p=st.floats(min_value=0.0, max_value=5.0), theta=angle, phi=azimuth)
    def test_laser_product_reduces_to_minus_component(self, p, theta, phi):
        # the laser wave vector has k^- = 0 and no transverse part, so
        # k.p collapses to k^0 p^-; check against the full Minkowski product
        k0 = 0.2525
        laser = lightcone_decompose(k0, (0.0, 0.0), k0)
        lepton = onshell_from_spherical(p, theta, phi)
        full = laser.minkowski_dot(lepton)
        assert full == pytest.approx(k0 * lepton.p_minus, rel=1e-13, abs=1e-15)


def test_gamma_probe_invariants():
    g = GammaProbe(omega_gamma=1.01)
    assert g.k_minus == 2.02
    e1, e2 = g.polarization_basis
    assert e1[0] * e2[0] + e1[1] * e2[1] == 0.0
    assert e1[0] ** 2 + e1[1] ** 2 == 1.0
    assert g.momentum.p_plus == 0.0
    with pytest.raises(ValueError):
        GammaProbe(omega_gamma=-1.0)

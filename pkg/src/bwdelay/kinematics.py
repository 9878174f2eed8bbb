"""Light-cone four-momentum algebra and pair-momentum resolution.

The laser propagates along +z, the gamma quantum along -z, and the laser
polarization is fixed along +x.  With that frame choice the laser phase
depends on x^- = x^0 - x^3 only, so the natural momentum variables are

    p^- = E - p_par,    p^+ = (E + p_par) / 2,    p_perp = (p_x, p_y),

with the Minkowski product p.q = p^- q^+ + p^+ q^- - p_perp.q_perp and the
mass shell 2 p^+ p^- - |p_perp|^2 = m^2.  Momentum conservation transverse to
the laser axis and along the minus direction is exact, which lets the electron
momentum be solved in closed form from the positron momentum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import PhaseSpaceClosed

Vec2 = tuple[float, float]


@dataclass(frozen=True, slots=True)
class LightConeMomentum:
    """A four-momentum carried in both Cartesian and light-cone form."""

    E: float
    p_perp: Vec2
    p_par: float
    p_minus: float
    p_plus: float

    def minkowski_dot(self, other: "LightConeMomentum") -> float:
        """Invariant product p.q in the (+,-,-,-) signature."""
        return (
            self.p_minus * other.p_plus
            + self.p_plus * other.p_minus
            - self.p_perp[0] * other.p_perp[0]
            - self.p_perp[1] * other.p_perp[1]
        )

    @property
    def p_magnitude(self) -> float:
        return math.sqrt(
            self.p_perp[0] ** 2 + self.p_perp[1] ** 2 + self.p_par**2
        )

    def mass_shell_residual(self, mass: float = 1.0) -> float:
        """2 p^+ p^- - |p_perp|^2 - mass^2; zero for an on-shell momentum."""
        return (
            2.0 * self.p_plus * self.p_minus
            - self.p_perp[0] ** 2
            - self.p_perp[1] ** 2
            - mass**2
        )


def lightcone_decompose(E: float, p_perp: Vec2, p_par: float) -> LightConeMomentum:
    """Attach light-cone components to Cartesian four-momentum data.

    No on-shell condition is assumed; the Cartesian fields are preserved
    bit-exactly and only p^- and p^+ are derived.
    """
    return LightConeMomentum(
        E=E,
        p_perp=(p_perp[0], p_perp[1]),
        p_par=p_par,
        p_minus=E - p_par,
        p_plus=0.5 * (E + p_par),
    )


def onshell_from_spherical(p: float, theta: float, phi_az: float) -> LightConeMomentum:
    """On-shell lepton momentum from spherical coordinates (polar axis = laser axis)."""
    st = math.sin(theta)
    px = p * st * math.cos(phi_az)
    py = p * st * math.sin(phi_az)
    pz = p * math.cos(theta)
    return lightcone_decompose(math.sqrt(1.0 + p * p), (px, py), pz)


def _default_polarization_basis() -> tuple[Vec2, Vec2]:
    # transverse to the collision axis, so valid for both beam directions
    return ((1.0, 0.0), (0.0, 1.0))


@dataclass(frozen=True, slots=True)
class GammaProbe:
    """Incident gamma quantum: energy, fixed -z direction, polarization basis.

    The two polarization vectors live in the transverse (x, y) plane; the mode
    sum in the probability runs over exactly these two directions.
    """

    omega_gamma: float
    polarization_basis: tuple[Vec2, Vec2] = field(
        default_factory=_default_polarization_basis
    )

    def __post_init__(self) -> None:
        if self.omega_gamma <= 0.0:
            raise ValueError("omega_gamma must be positive")

    @property
    def k_minus(self) -> float:
        """k^- of the head-on photon, 2 omega_gamma."""
        return 2.0 * self.omega_gamma

    @property
    def momentum(self) -> LightConeMomentum:
        return lightcone_decompose(
            self.omega_gamma, (0.0, 0.0), -self.omega_gamma
        )


@dataclass(frozen=True, slots=True)
class PairKinematics:
    """A (positron, electron, Q) triple resolved on the conservation shell.

    Q = k_gamma - (p_+ + p_-) satisfies Q^- = 0 and Q_perp = 0 exactly by
    construction; only the energy component Q0 survives.  E0 = -Q0 is the
    bare energy the laser field must supply.
    """

    p_plus_lepton: LightConeMomentum
    p_minus_lepton: LightConeMomentum
    Q0: float
    E0: float


def solve_partner(p_plus_lepton: LightConeMomentum, gamma: GammaProbe) -> PairKinematics:
    """Resolve the electron momentum from the positron momentum.

    Transverse momenta balance exactly and the minus components satisfy
    p_-^- = 2 omega_gamma - p_+^-, after which the electron plus component
    follows from its mass shell.

    Raises PhaseSpaceClosed when p_+^- >= 2 omega_gamma: there the electron
    minus component would be nonpositive, so the positron momentum is
    kinematically forbidden and must be excluded from grids.
    """
    pm_minus = gamma.k_minus - p_plus_lepton.p_minus
    if pm_minus <= 0.0:
        raise PhaseSpaceClosed(
            f"positron p^- = {p_plus_lepton.p_minus:.6g} exceeds "
            f"2*omega_gamma = {gamma.k_minus:.6g}"
        )
    qx, qy = -p_plus_lepton.p_perp[0], -p_plus_lepton.p_perp[1]
    pm_plus = (1.0 + qx * qx + qy * qy) / (2.0 * pm_minus)
    E_minus = pm_plus + 0.5 * pm_minus
    electron = LightConeMomentum(
        E=E_minus,
        p_perp=(qx, qy),
        p_par=E_minus - pm_minus,
        p_minus=pm_minus,
        p_plus=pm_plus,
    )
    Q0 = gamma.omega_gamma - p_plus_lepton.E - E_minus
    return PairKinematics(
        p_plus_lepton=p_plus_lepton,
        p_minus_lepton=electron,
        Q0=Q0,
        E0=-Q0,
    )

"""Reduced matrix elements and the two-pathway pair-creation amplitude.

Creation in pulse j contributes

    F_j = (1/k_j^0) int_0^{2 pi} Ctilde_j(Phi) e^{-i (Q0/k_j^0) Phi - i H_j(Phi)} dPhi,

which is independent of where the pulse sits on the x^- axis.  The combined
amplitude of a two-pulse sequence is F_1 + F_2 e^{-i phi} with the dynamical
phase phi = H_1* + Q0 (L_1 + D) collecting the Volkov phase of the first
pulse and the free propagation between the pulse fronts.

The integrand is an entire function of Phi (trigonometric polynomials in both
the prefactor and the phase), so a Clenshaw-Curtis rule converges spectrally
once the node count resolves the total phase winding; the node budget is
chosen from a per-point winding estimate and grows on a power-of-two ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dct

from .errors import QuadratureUnderResolved, RegularizationSingular
from .kinematics import GammaProbe, PairKinematics
from .pulse import PulseField, VolkovCoefficients, volkov_phase_total
from .units import ELEMENTARY_CHARGE

REGULARIZATION_EPS = 1e-10
"""|Q0| below this cannot be regularized (reachable only for omega_gamma >= 2)."""

QUAD_RTOL = 1e-6
"""Relative amplitude change allowed when the node count is doubled."""


@dataclass(frozen=True, slots=True)
class QuadConfig:
    """Node policy for the phase-interval quadrature.

    base_nodes is the floor, nodes_per_winding scales with the estimated
    oscillation count, and the actual count is rounded up to base_nodes times
    a power of two so rules are shared across momentum points.
    """

    base_nodes: int = 512
    nodes_per_winding: int = 24
    max_nodes: int = 2**19

    def nodes_for(self, windings: float) -> int:
        wanted = max(self.base_nodes, self.nodes_per_winding * math.ceil(windings))
        n = self.base_nodes
        while n < wanted:
            n *= 2
        if n > self.max_nodes:
            raise QuadratureUnderResolved(
                f"{wanted} nodes needed for {windings:.3g} windings, "
                f"budget is {self.max_nodes}"
            )
        return n


@lru_cache(maxsize=32)
def clenshaw_curtis_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (ascending, in [0, 2 pi]) and weights of the n-interval rule.

    Weights come from the cosine-moment identity: interpolating at
    theta_k = k pi / n and integrating term by term gives
    w_k = (c_k / n) * DCT-I(mu)_k with mu_j = 2/(1-j^2) for even j, where
    c_k halves the endpoint weights.  Exact for polynomials of degree n.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("node count must be an even integer >= 2")
    j = np.arange(0, n + 1)
    mu = np.zeros(n + 1)
    even = j[j % 2 == 0]
    mu[even] = 2.0 / (1.0 - even.astype(float) ** 2)
    y = dct(mu, type=1)
    w = y / n
    w[0] *= 0.5
    w[-1] *= 0.5
    x = np.cos(np.pi * j / n)  # descending from +1 to -1
    phi = math.pi * (1.0 + x[::-1])
    return phi, math.pi * w[::-1].copy()


def winding_estimate(Q0: float, coeffs: VolkovCoefficients, field: PulseField) -> float:
    """Total phase turns of the integrand over the pulse interval."""
    span = (
        abs(Q0) / field.k0 * 2.0 * math.pi
        + abs(coeffs.h1) * field.int_abs_f
        + abs(coeffs.h2) * field.int_f2
    )
    return span / (2.0 * math.pi)


@dataclass(frozen=True, slots=True)
class ReducedElements:
    """Matrix-element pieces at a fixed phase, for one gamma polarization.

    C0 is the field-free term, Cj the pulse term, and Ctilde_j the
    regularized combination Cj - (k0/Q0) (dH/dPhi) C0 that absorbs the
    constant term into the pulse support.
    """

    C0: float
    Cj: float
    Ctilde_j: float


def _c0_value(pair: PairKinematics, eps_gamma) -> float:
    ex, ey = eps_gamma[0], eps_gamma[1]
    dpx = pair.p_minus_lepton.p_perp[0] - pair.p_plus_lepton.p_perp[0]
    dpy = pair.p_minus_lepton.p_perp[1] - pair.p_plus_lepton.p_perp[1]
    # spacelike polarization: eps.p = -eps_vec . p_vec
    return -(dpx * ex + dpy * ey)


def reduced_elements(
    phi,
    pair: PairKinematics,
    field_j: PulseField,
    eps_gamma,
    coeffs_j: VolkovCoefficients,
) -> ReducedElements:
    """C0, Cj and the regularized Ctilde_j at phase Phi.

    The pulse and gamma polarizations both lie in the transverse plane, so
    their product is the euclidean -eps_j . eps_gamma; the laser polarization
    is fixed along x.
    """
    if abs(pair.Q0) < REGULARIZATION_EPS:
        raise RegularizationSingular(
            f"|Q0| = {abs(pair.Q0):.3e} too small to regularize"
        )
    c0 = _c0_value(pair, eps_gamma)
    f = field_j.f(phi)
    eps_dot = -float(eps_gamma[0])  # eps_j . eps_gamma for eps_j = x
    cj = 2.0 * ELEMENTARY_CHARGE * field_j.a * f * eps_dot
    dh = coeffs_j.h1 * f + coeffs_j.h2 * f * f
    ctilde = cj - (field_j.k0 / pair.Q0) * dh * c0
    return ReducedElements(C0=c0, Cj=float(cj), Ctilde_j=float(ctilde))


def pulse_amplitude(
    pair: PairKinematics,
    field_j: PulseField,
    eps_gamma,
    coeffs_j: VolkovCoefficients,
    quad_cfg: QuadConfig = QuadConfig(),
) -> complex:
    """Single-pulse amplitude F_j for one gamma polarization.

    Deterministic for fixed inputs; the pulse offset delta never enters.
    """
    if abs(pair.Q0) < REGULARIZATION_EPS:
        raise RegularizationSingular(
            f"|Q0| = {abs(pair.Q0):.3e} too small to regularize"
        )
    if field_j.a == 0.0:
        return 0.0 + 0.0j
    n = quad_cfg.nodes_for(winding_estimate(pair.Q0, coeffs_j, field_j))
    phi, w = clenshaw_curtis_rule(n)
    f, f2, integral_f, integral_f2 = field_j.sample_tables(phi)
    psi = (pair.Q0 / field_j.k0) * phi + coeffs_j.h1 * integral_f + coeffs_j.h2 * integral_f2
    osc = np.exp(-1j * psi)
    c0 = _c0_value(pair, eps_gamma)
    eps_dot = -float(eps_gamma[0])
    ctilde = (
        2.0 * ELEMENTARY_CHARGE * field_j.a * eps_dot * f
        - (field_j.k0 / pair.Q0) * (coeffs_j.h1 * f + coeffs_j.h2 * f2) * c0
    )
    return complex(np.sum(w * ctilde * osc)) / field_j.k0


@dataclass(frozen=True, slots=True)
class PhaseSplit:
    """Dynamical phase and its laser-dressed/bare energy decomposition."""

    phi: float
    E_L: float
    E0: float


def dynamical_phase(H1_star: float, Q0: float, L1: float, D: float) -> PhaseSplit:
    """phi = H_1* + Q0 (L_1 + D), with the equivalent -phi = E_L L_1 + E0 D split.

    E_L = -(Q0 + H_1*/L_1) is the laser-dressed energy the first pulse must
    supply and E0 = -Q0 the bare requirement; the two forms are one algebraic
    identity and are asserted to agree.
    """
    delta = L1 + D
    phi = H1_star + Q0 * delta
    E_L = -(Q0 + H1_star / L1)
    E0 = -Q0
    assert abs(-phi - (E_L * L1 + E0 * D)) <= 1e-10 * max(1.0, abs(phi))
    return PhaseSplit(phi=phi, E_L=E_L, E0=E0)


def combined_intensity(F1, F2, phi):
    """|F1 + F2 e^{-i phi}|^2, elementwise over array inputs."""
    s = F1 + F2 * np.exp(-1j * np.asarray(phi, dtype=float))
    out = (s * s.conjugate()).real
    return out if out.shape else float(out)


@dataclass(frozen=True, slots=True)
class AmplitudeParts:
    """Everything needed to recombine the two pathways at one momentum point.

    F1 and F2 hold the per-pulse amplitudes for the two gamma polarizations
    (x, y); dyn_phase is evaluated at the stored front-to-front separation
    Delta = L_1 + D.
    """

    F1: np.ndarray
    F2: np.ndarray
    H1_star: float
    dyn_phase: float
    Delta: float


def amplitude_parts(
    pair: PairKinematics,
    field_1: PulseField,
    field_2: PulseField | None,
    gamma: GammaProbe,
    D: float = 0.0,
    quad_cfg: QuadConfig = QuadConfig(),
) -> AmplitudeParts:
    """Assemble per-pathway amplitudes and the dynamical phase at one point.

    A single-pulse configuration passes field_2 = None and gets F2 = 0 with a
    phase evaluated against the first pulse alone.
    """
    from .pulse import volkov_coefficients

    coeffs_1 = volkov_coefficients(pair, field_1)
    basis = gamma.polarization_basis
    F1 = np.array(
        [pulse_amplitude(pair, field_1, eps, coeffs_1, quad_cfg) for eps in basis]
    )
    if field_2 is None:
        F2 = np.zeros(2, dtype=complex)
    else:
        coeffs_2 = volkov_coefficients(pair, field_2)
        F2 = np.array(
            [pulse_amplitude(pair, field_2, eps, coeffs_2, quad_cfg) for eps in basis]
        )
    H1_star = volkov_phase_total(coeffs_1, field_1)
    split = dynamical_phase(H1_star, pair.Q0, field_1.length_L, D)
    return AmplitudeParts(
        F1=F1,
        F2=F2,
        H1_star=H1_star,
        dyn_phase=split.phi,
        Delta=field_1.length_L + D,
    )

"""Laser pulse shapes, amplitude normalization and Volkov phase accumulators.

A pulse is described on its phase interval Phi in [0, 2 pi] by the field
shape

    f'(Phi) = sin^2(Phi/2) * sin(N Phi + chi),

the potential shape f being its antiderivative with f(0) = 0.  Expanding the
sin^2 envelope turns f' into a three-term harmonic series, so f, its running
integrals If = int_0^Phi f and If2 = int_0^Phi f^2, and the pulse averages
<f>, <f^2> all have exact closed forms (for N = 1 the series acquires a DC
term and f picks up a linear part, which the closed forms carry along).

The Volkov phase accumulated by a created pair inside the pulse is

    H(Phi) = h1 * If(Phi) + h2 * If2(Phi),

with momentum-dependent coefficients h1, h2; its total H* = H(2 pi) controls
the interference between creation in the first and in the second pulse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CollinearSingularity, DegenerateShape
from .kinematics import PairKinematics
from .units import ELEMENTARY_CHARGE

COLLINEAR_EPS = 1e-8
"""Lower bound on k.p before the Volkov coefficients are considered singular."""

_FMAX_SCAN_POINTS = 65536
_FMAX_PHI_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class PulseSpec:
    """User-facing pulse parameters.

    xi is the dimensionless field-strength parameter, omega the central
    frequency in units of m, n_cycles the integer cycle count N >= 1, cep the
    carrier-envelope phase chi, and delta the phase shift positioning the
    pulse on the x^- axis (the first pulse always has delta = 0).
    """

    xi: float
    omega: float
    n_cycles: int
    cep: float = 0.0
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.xi < 0.0:
            raise ValueError("xi must be nonnegative")
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")
        if int(self.n_cycles) != self.n_cycles or self.n_cycles < 1:
            raise ValueError("n_cycles must be an integer >= 1")
        if self.delta < 0.0:
            raise ValueError("delta must be nonnegative")


@dataclass(frozen=True, slots=True)
class VolkovCoefficients:
    """Momentum-dependent weights of the two Volkov phase integrals."""

    h1: float
    h2: float


class _Harmonics:
    """A real function c0 + sum_k Re(c_k e^{i k Phi}) + lin * Phi.

    Coefficients are stored over signed integer modes with c_{-k} = conj(c_k),
    so plain complex sums are real up to rounding.  Supports pointwise
    evaluation, squaring, and exact antiderivatives (including the Phi e^{ikPhi}
    cross terms produced by a linear part).
    """

    def __init__(self, modes: dict[int, complex], lin: float = 0.0):
        self.modes = {k: complex(v) for k, v in modes.items() if v != 0}
        self.lin = float(lin)

    def value(self, phi: np.ndarray | float) -> np.ndarray | float:
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(phi.shape, dtype=complex)
        for k, c in self.modes.items():
            if k == 0:
                out += c
            else:
                out += c * np.exp(1j * k * phi)
        res = out.real + self.lin * phi
        return res if phi.shape else float(res)

    def antiderivative(self, phi: np.ndarray | float) -> np.ndarray | float:
        """int_0^phi of value."""
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(phi.shape, dtype=complex)
        for k, c in self.modes.items():
            if k == 0:
                out += c * phi
            else:
                out += c * (np.exp(1j * k * phi) - 1.0) / (1j * k)
        res = out.real + 0.5 * self.lin * phi * phi
        return res if phi.shape else float(res)

    def first_moment_integral(self, phi: np.ndarray | float) -> np.ndarray | float:
        """int_0^phi t * (harmonic part)(t) dt; the linear part is excluded."""
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(phi.shape, dtype=complex)
        for k, c in self.modes.items():
            if k == 0:
                out += c * 0.5 * phi * phi
            else:
                out += c * (
                    np.exp(1j * k * phi) * (phi / (1j * k) + 1.0 / (k * k))
                    - 1.0 / (k * k)
                )
        res = out.real
        return res if phi.shape else float(res)

    def squared_series(self) -> "_Harmonics":
        """Harmonic part of value^2 (the caller handles lin cross terms)."""
        sq: dict[int, complex] = {}
        items = list(self.modes.items())
        for k1, c1 in items:
            for k2, c2 in items:
                k = k1 + k2
                sq[k] = sq.get(k, 0.0) + c1 * c2
        return _Harmonics(sq, lin=0.0)


def _shape_series(n_cycles: int, cep: float) -> _Harmonics:
    """Closed-form potential shape f as a harmonic series plus linear part.

    f'(Phi) = 1/2 sin(N Phi + chi) - 1/4 sin((N+1) Phi + chi)
              - 1/4 sin((N-1) Phi + chi); each oscillatory term integrates to
    A_mu [cos chi - cos(mu Phi + chi)] with A_mu = coeff/mu, while the N = 1
    case contributes a constant -1/4 sin(chi) to f' and hence a linear term.
    """
    n = int(n_cycles)
    chi = float(cep)
    terms = {n: 0.5, n + 1: -0.25}
    lin = 0.0
    if n >= 2:
        terms[n - 1] = -0.25
    else:
        lin = -0.25 * math.sin(chi)
    const = 0.0
    modes: dict[int, complex] = {}
    for mu, coeff in terms.items():
        a_mu = coeff / mu
        const += a_mu * math.cos(chi)
        half = -0.5 * a_mu * complex(math.cos(chi), math.sin(chi))
        modes[mu] = modes.get(mu, 0.0) + half
        modes[-mu] = modes.get(-mu, 0.0) + half.conjugate()
    modes[0] = modes.get(0, 0.0) + const
    return _Harmonics(modes, lin=lin)


class PulseField:
    """A normalized pulse: spec plus every derived quantity downstream needs.

    Immutable after construction; all evaluation methods accept scalars or
    numpy arrays of phases in [0, 2 pi].
    """

    def __init__(self, spec: PulseSpec):
        self.spec = spec
        self.k0 = spec.omega / spec.n_cycles
        self.length_L = 2.0 * math.pi / self.k0

        self._f = _shape_series(spec.n_cycles, spec.cep)
        self._f2_series = self._f.squared_series()
        self._f_lin = self._f.lin

        self.f_max = self._locate_f_max()
        if spec.xi > 0.0 and self.f_max < 1e-12:
            raise DegenerateShape(
                "pulse shape vanishes identically; cannot realize xi "
                f"= {spec.xi:.6g}"
            )
        self.a = spec.xi / (ELEMENTARY_CHARGE * self.f_max) if spec.xi > 0.0 else 0.0

        two_pi = 2.0 * math.pi
        self.mean_f = float(self._f.antiderivative(two_pi)) / two_pi
        self.mean_f2 = float(self._integral_f2(np.asarray(two_pi))) / two_pi
        # int_0^{2pi} |f|; only feeds the winding estimate, so a dense
        # trapezoid is plenty
        grid = np.linspace(0.0, two_pi, 8193)
        self.int_abs_f = float(np.trapezoid(np.abs(self._f.value(grid)), grid))
        self.int_f2 = two_pi * self.mean_f2

    # -- shape evaluation ---------------------------------------------------

    def f(self, phi):
        return self._f.value(phi)

    def f_prime(self, phi):
        return shape_derivative(phi, self.spec)

    def integral_f(self, phi):
        """If(Phi) = int_0^Phi f."""
        return self._f.antiderivative(phi)

    def _integral_f2(self, phi):
        """If2(Phi) = int_0^Phi f^2, expanding (series + lin*Phi)^2."""
        out = self._f2_series.antiderivative(phi)
        if self._f_lin != 0.0:
            phi_arr = np.asarray(phi, dtype=float)
            out = (
                out
                + 2.0 * self._f_lin * self._f.first_moment_integral(phi_arr)
                + self._f_lin**2 * phi_arr**3 / 3.0
            )
        return out

    def integral_f2(self, phi):
        return self._integral_f2(phi)

    def sample_tables(self, phi: np.ndarray):
        """f, f^2, If, If2 on a phase grid, for quadrature assembly."""
        fv = np.asarray(self._f.value(phi), dtype=float)
        return fv, fv * fv, np.asarray(self.integral_f(phi), dtype=float), np.asarray(
            self.integral_f2(phi), dtype=float
        )

    # -- construction helpers -------------------------------------------------

    def _locate_f_max(self) -> float:
        phi = np.linspace(0.0, 2.0 * math.pi, _FMAX_SCAN_POINTS)
        vals = np.abs(self._f.value(phi))
        i = int(np.argmax(vals))
        lo = phi[max(i - 1, 0)]
        hi = phi[min(i + 1, phi.size - 1)]
        return _golden_max(lambda x: abs(float(self._f.value(x))), lo, hi, _FMAX_PHI_TOL)


def _golden_max(fun, lo: float, hi: float, tol: float) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
    return max(fc, fd)


def shape_derivative(phi, spec: PulseSpec):
    """Field shape f'(Phi) = sin^2(Phi/2) sin(N Phi + chi).

    Valid on [0, 2 pi]; outside the pulse window the caller applies the
    characteristic function.
    """
    phi = np.asarray(phi, dtype=float)
    val = np.sin(0.5 * phi) ** 2 * np.sin(spec.n_cycles * phi + spec.cep)
    return val if val.shape else float(val)


@lru_cache(maxsize=64)
def _cached_series(n_cycles: int, cep: float) -> _Harmonics:
    return _shape_series(n_cycles, cep)


def shape(phi, spec: PulseSpec):
    """Potential shape f(Phi) = int_0^Phi f', with f(0) = 0."""
    series = _cached_series(spec.n_cycles, spec.cep)
    return series.value(phi)


def normalize_amplitude(spec: PulseSpec) -> PulseField:
    """Build the derived pulse quantities and fix the amplitude a from xi.

    The field-strength parameter is defined through the potential shape,
    xi = e a max|f|, so a = xi / (e max|f|); a = 0 for xi = 0.
    """
    return PulseField(spec)


def pulse_wavenumber(spec: PulseSpec) -> float:
    """Fundamental wavenumber k0 = omega / n_cycles of the pulse support."""
    return spec.omega / spec.n_cycles


def pulse_length(spec: PulseSpec) -> float:
    """Support length L = 2 pi / k0 on the x^- axis."""
    return 2.0 * math.pi / pulse_wavenumber(spec)


def volkov_coefficients(
    pair: PairKinematics, field: PulseField, polarization=(1.0, 0.0, 0.0)
) -> VolkovCoefficients:
    """Weights h1, h2 of the linear and quadratic Volkov phase integrals.

        h1 = -e a [ eps.p+ / (k.p+) - eps.p- / (k.p-) ]
        h2 = -e^2 a^2 / 2 [ 1 / (k.p+) + 1 / (k.p-) ]

    with eps = (0, polarization) spacelike, so eps.p = -polarization . p_vec,
    and k.p = k^0 p^- for the laser wave vector.  h2 is nonpositive by
    construction and vanishes only with the field.
    """
    pp = pair.p_plus_lepton
    pm = pair.p_minus_lepton
    kp_plus = field.k0 * pp.p_minus
    kp_minus = field.k0 * pm.p_minus
    if kp_plus < COLLINEAR_EPS or kp_minus < COLLINEAR_EPS:
        raise CollinearSingularity(
            f"k.p+ = {kp_plus:.3e}, k.p- = {kp_minus:.3e} below {COLLINEAR_EPS:.0e}"
        )
    if field.a == 0.0:
        return VolkovCoefficients(h1=0.0, h2=0.0)
    ex, ey, ez = polarization
    eps_dot_pp = -(ex * pp.p_perp[0] + ey * pp.p_perp[1] + ez * pp.p_par)
    eps_dot_pm = -(ex * pm.p_perp[0] + ey * pm.p_perp[1] + ez * pm.p_par)
    ea = ELEMENTARY_CHARGE * field.a
    h1 = -ea * (eps_dot_pp / kp_plus - eps_dot_pm / kp_minus)
    h2 = -0.5 * ea * ea * (1.0 / kp_plus + 1.0 / kp_minus)
    return VolkovCoefficients(h1=h1, h2=h2)


def volkov_phase(phi, coeffs: VolkovCoefficients, field: PulseField):
    """Accumulated Volkov phase H(Phi) = h1 If(Phi) + h2 If2(Phi)."""
    return coeffs.h1 * field.integral_f(phi) + coeffs.h2 * field.integral_f2(phi)


def volkov_phase_total(coeffs: VolkovCoefficients, field: PulseField) -> float:
    """H* = H(2 pi) = 2 pi (h1 <f> + h2 <f^2>), the phase carried out of the pulse."""
    return 2.0 * math.pi * (coeffs.h1 * field.mean_f + coeffs.h2 * field.mean_f2)

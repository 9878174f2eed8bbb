"""Vectorized amplitude evaluation over many momentum nodes.

Each node needs two oscillatory sums over the pulse phase interval,

    T0  = sum_k w_k f(Phi_k)   e^{-i psi_k},
    T0b = sum_k w_k f(Phi_k)^2 e^{-i psi_k},
    psi_k = (Q0/k0) Phi_k + h1 If(Phi_k) + h2 If2(Phi_k),

from which both gamma-polarization amplitudes follow algebraically.  Nodes
are grouped by their quadrature level (shared Clenshaw-Curtis rule and shape
tables), and the inner sums run in a compiled kernel when numba is available,
falling back to chunked numpy otherwise.  Every node is independent, so the
results do not depend on thread count or evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplitude import QuadConfig, clenshaw_curtis_rule
from .errors import CollinearSingularity, QuadratureUnderResolved, RegularizationSingular
from .pulse import COLLINEAR_EPS, PulseField
from .units import ELEMENTARY_CHARGE

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None
    HAVE_NUMBA = False

_REG_EPS = 1e-10


def set_thread_count(n: int) -> None:
    """Bound the compiled kernel's worker count; ignored without numba."""
    if HAVE_NUMBA and n > 0:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


if HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True)
    def _phase_sums_kernel(q, h1, h2, phi, wf, wf2, int_f, int_f2, T0, T0b):
        n = q.shape[0]
        K = phi.shape[0]
        for i in numba.prange(n):
            qi = q[i]
            a1 = h1[i]
            a2 = h2[i]
            re0 = 0.0
            im0 = 0.0
            reb = 0.0
            imb = 0.0
            for k in range(K):
                psi = qi * phi[k] + a1 * int_f[k] + a2 * int_f2[k]
                c = math.cos(psi)
                s = math.sin(psi)
                re0 += wf[k] * c
                im0 -= wf[k] * s
                reb += wf2[k] * c
                imb -= wf2[k] * s
            T0[i] = complex(re0, im0)
            T0b[i] = complex(reb, imb)


def _phase_sums_numpy(q, h1, h2, phi, wf, wf2, int_f, int_f2, T0, T0b):
    K = phi.shape[0]
    chunk = max(1, 4_000_000 // K)
    for lo in range(0, q.shape[0], chunk):
        hi = lo + chunk
        psi = np.multiply.outer(q[lo:hi], phi)
        psi += np.multiply.outer(h1[lo:hi], int_f)
        psi += np.multiply.outer(h2[lo:hi], int_f2)
        osc = np.exp(-1j * psi)
        T0[lo:hi] = osc @ wf
        T0b[lo:hi] = osc @ wf2


@dataclass(frozen=True, slots=True)
class PulseNodeAmplitudes:
    """Per-node amplitudes of one pulse for both gamma polarizations."""

    Fx: np.ndarray
    Fy: np.ndarray
    H_star: np.ndarray
    h1: np.ndarray
    h2: np.ndarray


def volkov_coefficient_arrays(
    field: PulseField, px: np.ndarray, pminus_pos: np.ndarray, pminus_ele: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized h1, h2 over node arrays; mirrors pulse.volkov_coefficients."""
    kp_pos = field.k0 * pminus_pos
    kp_ele = field.k0 * pminus_ele
    m = min(float(np.min(kp_pos, initial=np.inf)), float(np.min(kp_ele, initial=np.inf)))
    if m < COLLINEAR_EPS:
        raise CollinearSingularity(
            f"minimum k.p = {m:.3e} below {COLLINEAR_EPS:.0e} on the grid"
        )
    if field.a == 0.0:
        z = np.zeros_like(px)
        return z, z.copy()
    ea = ELEMENTARY_CHARGE * field.a
    inv_sum = 1.0 / kp_pos + 1.0 / kp_ele
    # transverse balance p-_x = -p+_x is assumed (conservation shell), so
    # eps.p+ = -px and eps.p- = +px
    h1 = ea * px * inv_sum
    h2 = -0.5 * ea * ea * inv_sum
    return h1, h2


def evaluate_pulse_on_nodes(
    field: PulseField,
    Q0: np.ndarray,
    px: np.ndarray,
    py: np.ndarray,
    pminus_pos: np.ndarray,
    pminus_ele: np.ndarray,
    quad_cfg: QuadConfig = QuadConfig(),
    use_numba: bool = True,
) -> PulseNodeAmplitudes:
    """Amplitudes F^x, F^y and Volkov totals of one pulse at every node.

    The x-channel couples through both the pulse term (laser polarization is
    x) and the regularized constant term; the y-channel has no pulse term and
    survives through the constant term alone.
    """
    n = Q0.shape[0]
    if n and float(np.min(np.abs(Q0))) < _REG_EPS:
        raise RegularizationSingular("grid contains a node with |Q0| below 1e-10")
    h1, h2 = volkov_coefficient_arrays(field, px, pminus_pos, pminus_ele)
    H_star = 2.0 * math.pi * (h1 * field.mean_f + h2 * field.mean_f2)
    if field.a == 0.0 or n == 0:
        zero = np.zeros(n, dtype=complex)
        return PulseNodeAmplitudes(Fx=zero, Fy=zero.copy(), H_star=H_star, h1=h1, h2=h2)

    two_pi = 2.0 * math.pi
    windings = (
        np.abs(Q0) / field.k0 * two_pi
        + np.abs(h1) * field.int_abs_f
        + np.abs(h2) * field.int_f2
    ) / two_pi
    wanted = np.maximum(
        quad_cfg.base_nodes, quad_cfg.nodes_per_winding * np.ceil(windings)
    )
    levels = np.ceil(np.log2(wanted / quad_cfg.base_nodes)).astype(np.int64)
    max_level = int(math.log2(quad_cfg.max_nodes // quad_cfg.base_nodes))
    if int(levels.max()) > max_level:
        bad = int(np.sum(levels > max_level))
        raise QuadratureUnderResolved(
            f"{bad} node(s) need more than {quad_cfg.max_nodes} quadrature nodes"
        )

    q = Q0 / field.k0
    T0 = np.empty(n, dtype=complex)
    T0b = np.empty(n, dtype=complex)
    run_kernel = _phase_sums_kernel if (HAVE_NUMBA and use_numba) else _phase_sums_numpy
    for level in np.unique(levels):
        idx = np.nonzero(levels == level)[0]
        nodes = quad_cfg.base_nodes << int(level)
        phi, w = clenshaw_curtis_rule(int(nodes))
        f, f2, int_f, int_f2 = field.sample_tables(phi)
        t0 = np.empty(idx.size, dtype=complex)
        t0b = np.empty(idx.size, dtype=complex)
        run_kernel(
            np.ascontiguousarray(q[idx]),
            np.ascontiguousarray(h1[idx]),
            np.ascontiguousarray(h2[idx]),
            phi, w * f, w * f2, int_f, int_f2, t0, t0b,
        )
        T0[idx] = t0
        T0b[idx] = t0b

    ea = ELEMENTARY_CHARGE * field.a
    reg = (h1 * T0 + h2 * T0b) / Q0  # (1/Q0) dH-weighted moment
    # eps_j . eps_gamma^x = -1, C0^x = 2 px, C0^y = 2 py
    Fx = (-2.0 * ea * T0 - field.k0 * reg * (2.0 * px)) / field.k0
    Fy = (-field.k0 * reg * (2.0 * py)) / field.k0
    return PulseNodeAmplitudes(Fx=Fx, Fy=Fy, H_star=H_star, h1=h1, h2=h2)

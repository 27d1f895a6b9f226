"""Generalized Wigner-Smith matrix ``A = -i K^H dK/d(epsilon)``.

Three independent routes are provided: the symbolic closed form
(:func:`gwsm_a`), the resolvent definition ``-B^H R^H V R B``
(:func:`gwsm_definition`) and a central finite difference of ``K``
(:func:`gwsm_from_k_derivative`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularDenominator
from .resonator import V, SystemParams, build_model, transfer_k
from .smallcomplex import adjoint, cmat, eig_herm2, inverse2, IDENTITY

NEAR_SINGULAR = 1e-12  # |det(H_tilde - omega)|^2 / gamma^4
POLE = 1e-28
FD_STEP = 1e-5


@dataclass(frozen=True)
class GwsmSpectrum:
    lambda_minus: float
    lambda_plus: float
    v_minus: np.ndarray
    v_plus: np.ndarray
    near_singular: bool = False


def pole_denominator(p: SystemParams, omega):
    """``det(H_tilde - omega I) = zeta**2 - eps (eps - i gamma rho e^{2i phi})``
    with ``zeta = omega + i gamma / 2``. Works on scalars and arrays."""
    zeta = omega + 0.5j * p.gamma
    e = p.epsilon
    return zeta * zeta - e * (e - 1j * p.gamma * p.rho * p.e2)


def is_near_singular(p: SystemParams, omega: float) -> bool:
    return abs(pole_denominator(p, omega)) ** 2 < NEAR_SINGULAR * p.gamma**4


def _entries(p: SystemParams, omega):
    """Closed-form ``(A_ll, A_rr, A_lr)``; vectorises over ``omega``."""
    g, e, rho, tau = p.gamma, p.epsilon, p.rho, p.tau
    zeta = omega + 0.5j * g
    e2c = p.e2.conjugate()
    den = np.abs(pole_denominator(p, omega)) ** 2
    if np.ndim(den) == 0:
        if den <= POLE * g**4:
            raise SingularDenominator(f"resolvent pole at omega={omega}", float(den))
    t = -g * (e * (1 + rho * rho) * zeta + rho * e2c * (zeta * zeta + e * e))
    a_ll = 2.0 * np.real(t) / den
    a_rr = -g * e * tau * tau * 2.0 * np.real(zeta) / den
    a_lr = -g * tau * p.e1 * (e * e + 2 * e * rho * e2c * zeta + np.abs(zeta) ** 2) / den
    return a_ll, a_rr, a_lr


def gwsm_a(p: SystemParams, omega: float) -> np.ndarray:
    a_ll, a_rr, a_lr = _entries(p, omega)
    return cmat(a_ll, a_lr, complex(a_lr).conjugate(), a_rr)


def gwsm_definition(p: SystemParams, omega: float) -> np.ndarray:
    m = build_model(p)
    r = inverse2(m.h_tilde - omega * IDENTITY)
    return -adjoint(m.b) @ adjoint(r) @ V @ r @ m.b


def gwsm_from_k_derivative(
    p: SystemParams, omega: float, h: float | None = None, order: int = 2
) -> np.ndarray:
    """Finite-difference ``-i K^H dK/d(eps)``, Hermitised.

    ``order=2`` is the three-point central difference; ``order=4`` the
    five-point stencil with the same step.
    """
    h = FD_STEP * p.gamma if h is None else h

    def k_at(shift):
        return transfer_k(p.with_(epsilon=p.epsilon + shift * h), omega)

    if order == 2:
        dk = (k_at(1) - k_at(-1)) / (2.0 * h)
    elif order == 4:
        dk = (k_at(-2) - 8.0 * k_at(-1) + 8.0 * k_at(1) - k_at(2)) / (12.0 * h)
    else:
        raise ValueError("order must be 2 or 4")
    m = -1j * adjoint(transfer_k(p, omega)) @ dk
    return 0.5 * (m + adjoint(m))


def gwsm_trace_det(p: SystemParams, omega):
    g, e, rho, tau = p.gamma, p.epsilon, p.rho, p.tau
    zeta = omega + 0.5j * g
    den = np.abs(pole_denominator(p, omega)) ** 2
    if np.ndim(den) == 0 and den <= POLE * g**4:
        raise SingularDenominator(f"resolvent pole at omega={omega}", float(den))
    t = -g * (2 * e * zeta + rho * p.e2.conjugate() * (zeta * zeta + e * e))
    trace = 2.0 * np.real(t) / den
    det = -(g * g) * tau * tau / den
    return trace, det


def eigenvalues_from_trace_det(trace, det):
    # det <= 0 always, so the discriminant is non-negative
    half = 0.5 * trace
    root = np.sqrt(np.maximum(half * half - det, 0.0))
    return half - root, half + root


def spectrum_values(p: SystemParams, omega):
    """``(lambda_minus, lambda_plus)`` from trace and determinant; vectorised."""
    return eigenvalues_from_trace_det(*gwsm_trace_det(p, omega))


def gwsm_spectrum(p: SystemParams, omega: float) -> GwsmSpectrum:
    a = gwsm_a(p, omega)
    lm, lp, vm, vp = eig_herm2(a)
    return GwsmSpectrum(lm, lp, vm, vp, near_singular=is_near_singular(p, omega))


def lambda0_closed_form(p: SystemParams, omega: float) -> tuple[float, float]:
    """Eigenvalues on the exceptional surface (``epsilon == 0``)."""
    if p.epsilon != 0.0:
        raise ValueError("lambda0_closed_form requires epsilon == 0")
    g, rho, tau = p.gamma, p.rho, p.tau
    zeta = complex(omega, 0.5 * g)
    z2 = abs(zeta) ** 2
    c = (p.e2 * zeta.conjugate() / zeta).real
    root = math.sqrt(tau * tau + rho * rho * c * c)
    return -(g / z2) * (rho * c + root), -(g / z2) * (rho * c - root)


def scalar_spectrum(p: SystemParams, omega: float) -> tuple[float, float]:
    """Fast scalar ``(lambda_minus, lambda_plus)`` used inside optimisers."""
    g, e, rho, tau = p.gamma, p.epsilon, p.rho, p.tau
    zeta = complex(omega, 0.5 * g)
    d = zeta * zeta - e * (e - 1j * g * rho * p.e2)
    den = d.real * d.real + d.imag * d.imag
    if den <= POLE * g**4:
        raise SingularDenominator(f"resolvent pole at omega={omega}", den)
    t = -g * (2 * e * zeta + rho * p.e2.conjugate() * (zeta * zeta + e * e))
    half = t.real / den
    det = -(g * g) * tau * tau / den
    root = math.sqrt(max(half * half - det, 0.0))
    return half - root, half + root

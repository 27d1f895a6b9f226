"""Microring resonator with retroreflective feedback.

Two counter-propagating cavity modes (CW, CCW) couple at rate ``gamma`` to a
waveguide whose right end carries a beam splitter of reflectivity ``rho`` and
reflection phase ``2*phi``. A scatterer adds the symmetric cross-coupling
``epsilon``. Everything here is frequency domain, rotating at the cavity
resonance; ``omega`` is the detuning.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParams, SingularDenominator
from .smallcomplex import IDENTITY, SWAP, adjoint, cmat, inverse2

TWO_PI = 2.0 * math.pi

# perturbation direction: d(H_tilde)/d(epsilon)
V = SWAP


@dataclass(frozen=True)
class SystemParams:
    rho: float = 0.0
    phi: float = 0.0
    epsilon: float = 0.0
    gamma: float = 1.0
    tau: float = field(init=False)

    def __post_init__(self):
        for name in ("rho", "phi", "epsilon", "gamma"):
            v = getattr(self, name)
            if not isinstance(v, (int, float, np.floating, np.integer)) or not math.isfinite(v):
                raise InvalidParams(f"{name} must be a finite real number, got {v!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise InvalidParams(f"rho must lie in [0, 1], got {self.rho}")
        if self.gamma <= 0.0:
            raise InvalidParams(f"gamma must be positive, got {self.gamma}")
        phi = float(self.phi) % TWO_PI
        if phi == TWO_PI:  # -tiny % 2pi rounds up
            phi = 0.0
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "tau", math.sqrt(max(0.0, 1.0 - self.rho * self.rho)))

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @property
    def e1(self) -> complex:
        """Transmission phase factor exp(i phi)."""
        return cmath.exp(1j * self.phi)

    @property
    def e2(self) -> complex:
        """Reflection phase factor exp(2 i phi)."""
        return cmath.exp(2j * self.phi)


@dataclass(frozen=True)
class ModelMatrices:
    s: np.ndarray
    b: np.ndarray
    h_tilde: np.ndarray
    h_eff: np.ndarray


def beam_splitter(p: SystemParams) -> np.ndarray:
    return cmat(p.rho * p.e2, p.tau * p.e1, p.tau * p.e1, -p.rho)


def input_coupling(p: SystemParams) -> np.ndarray:
    return math.sqrt(p.gamma) * cmat(1.0, 0.0, p.rho * p.e2, p.tau * p.e1)


def h_tilde(p: SystemParams) -> np.ndarray:
    g = p.gamma
    return cmat(-0.5j * g, p.epsilon, p.epsilon - 1j * g * p.rho * p.e2, -0.5j * g)


def h_effective(p: SystemParams) -> np.ndarray:
    """Hermitian part of the cascaded SLH triple (coherent feedback term included)."""
    k = 0.5j * p.gamma * p.rho
    return cmat(0.0, p.epsilon + k * p.e2.conjugate(), p.epsilon - k * p.e2, 0.0)


def anti_hermitian_part(h: np.ndarray) -> np.ndarray:
    """Matrix "imaginary part" ``(h - h^H) / 2i``; Hermitian by construction."""
    return (h - adjoint(h)) / 2j


def build_model(p: SystemParams) -> ModelMatrices:
    return ModelMatrices(
        s=beam_splitter(p), b=input_coupling(p), h_tilde=h_tilde(p), h_eff=h_effective(p)
    )


def identity_residuals(p: SystemParams) -> dict:
    """Frobenius residuals of the structural identities; all should be ~1e-16."""
    m = build_model(p)
    bbh = m.b @ adjoint(m.b)
    return {
        "s_unitarity": float(np.linalg.norm(adjoint(m.s) @ m.s - IDENTITY)),
        "im_h_tilde": float(np.linalg.norm(anti_hermitian_part(m.h_tilde) + 0.5 * bbh)),
        "h_eff_identity": float(np.linalg.norm(m.h_tilde - (m.h_eff - 0.5j * bbh))),
        "h_eff_hermitian": float(np.linalg.norm(m.h_eff - adjoint(m.h_eff))),
    }


def omega_eigenvalues(p: SystemParams) -> tuple[complex, complex]:
    """Complex eigenfrequencies ``(Omega_plus, Omega_minus)`` of ``H_tilde``.

    Labels follow the principal square-root branch.
    """
    root = cmath.sqrt(p.epsilon**2 - 1j * p.epsilon * p.gamma * p.rho * p.e2)
    centre = -0.5j * p.gamma
    return centre + root, centre - root


def resolvent(p: SystemParams, omega: float) -> np.ndarray:
    return inverse2(h_tilde(p) - omega * IDENTITY)


def transfer_k(p: SystemParams, omega: float) -> np.ndarray:
    """Scattering matrix ``K = S (I + i B^H R B)`` mapping input to output ports."""
    m = build_model(p)
    r = inverse2(m.h_tilde - omega * IDENTITY)
    return m.s @ (IDENTITY + 1j * adjoint(m.b) @ r @ m.b)


def transfer_k_increment(p: SystemParams, d_eps: float, omega: float) -> np.ndarray:
    """Exact ``K_{eps + d_eps} - K_eps`` via ``R' - R = -d_eps R' V R``.

    Free of the cancellation that subtracting two order-one matrices incurs.
    """
    m = build_model(p)
    r = inverse2(m.h_tilde - omega * IDENTITY)
    r_shift = inverse2(h_tilde(p.with_(epsilon=p.epsilon + d_eps)) - omega * IDENTITY)
    return -1j * d_eps * m.s @ adjoint(m.b) @ r_shift @ V @ r @ m.b


def transfer_k_closed_form(p: SystemParams, omega: float) -> np.ndarray:
    g, e, rho, tau = p.gamma, p.epsilon, p.rho, p.tau
    e1, e2 = p.e1, p.e2
    om_p, om_m = omega_eigenvalues(p)
    den = (omega - om_p) * (omega - om_m)
    scale = (abs(omega) + g + abs(e)) ** 2
    if den == 0 or abs(den) <= 1e-14 * scale:
        raise SingularDenominator(
            f"omega={omega} sits on a real eigenfrequency (|den|={abs(den):.3e})", abs(den)
        )
    k_ll = -1j * g * (e * (1 + rho**2 * e2 * e2) + 2 * rho * e2 * omega) / den + rho * e2
    k_lr = -1j * g * tau * e1 * (omega + 0.5j * g + e * rho * e2) / den + tau * e1
    k_rr = -1j * g * e * tau**2 * e2 / den - rho
    return cmat(k_ll, k_lr, k_lr, k_rr)

"""Quantum Fisher information for coherent and NOON probes.

Generator route: the output state is ``U(K)`` applied to the probe, with
``K^H dK/deps = i A``, so the QFI is four times the variance of the
second-quantised ``A``. Fidelity route: exact overlaps of the output states
at ``eps`` and ``eps + d``, converted to a Bures distance and extrapolated to
``d -> 0``. The two routes share nothing beyond ``transfer_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gwsm import gwsm_a
from .optimize import optimize_spectrum, oqfi_from_optimum
from .resonator import SystemParams, transfer_k, transfer_k_increment
from .states import (
    COHERENT,
    ModeState,
    NoonSpec,
    apply_matrix_field,
    inner,
    optimal_coherent_probe,
    optimal_noon_probe,
)

DEFAULT_STEPS = (1e-3, 5e-4, 2.5e-4)


@dataclass(frozen=True)
class QfiResult:
    value: float
    method: str  # "generator" | "fidelity_limit"
    probe: object
    omega_points: tuple = ()
    epsilon_at: float = 0.0
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "probe": self.probe.to_dict() if self.probe is not None else None,
            "omega_points": list(self.omega_points),
            "epsilon_at": self.epsilon_at,
            **self.extras,
        }


def richardson_zero(steps, values) -> float:
    """Polynomial (Lagrange) extrapolation of ``values(h)`` to ``h = 0``."""
    steps = [float(h) for h in steps]
    total = 0.0
    for i, (hi, qi) in enumerate(zip(steps, values)):
        w = 1.0
        for j, hj in enumerate(steps):
            if j != i:
                w *= hj / (hj - hi)
        total += w * qi
    return total


def _a_field(p):
    return lambda w: gwsm_a(p, w)


def _k_field(p):
    return lambda w: transfer_k(p, w)


def coherent_qfi(p: SystemParams, beta: ModeState) -> QfiResult:
    """``4 <beta, A^2 beta> = 4 |A beta|^2``."""
    if beta.kind != COHERENT:
        raise ValueError("coherent_qfi needs a coherent-amplitude probe")
    a_beta = apply_matrix_field(_a_field(p), beta)
    value = 4.0 * a_beta.norm2()
    return QfiResult(value, "generator", beta, tuple(beta.frequencies), p.epsilon)


def coherent_fidelity(p: SystemParams, beta: ModeState, d_eps: float) -> float:
    """Fidelity of the output coherent states at ``eps`` and ``eps + d_eps``."""
    return math.exp(_coherent_log_fidelity(p, beta, d_eps))


def _coherent_log_fidelity(p, beta, d_eps):
    # |<b1|b2>|^2 = exp(-|b1 - b2|^2); the difference avoids cancelling
    # 2 Re<b1, b2> against |b1|^2 + |b2|^2
    if d_eps == 0:
        return 0.0
    diff = apply_matrix_field(lambda w: transfer_k_increment(p, d_eps, w), beta)
    return -diff.norm2()


def coherent_qfi_fidelity_oracle(
    p: SystemParams, beta: ModeState, steps=DEFAULT_STEPS
) -> QfiResult:
    if beta.kind != COHERENT:
        raise ValueError("coherent oracle needs a coherent-amplitude probe")
    qs = []
    for h in steps:
        log_f = _coherent_log_fidelity(p, beta, h)
        one_minus_sqrt_f = -math.expm1(0.5 * log_f)
        qs.append(4.0 * 2.0 * one_minus_sqrt_f / (h * h))
    value = richardson_zero(steps, qs)
    return QfiResult(value, "fidelity_limit", beta, tuple(beta.frequencies), p.epsilon,
                     {"samples": qs, "steps": list(steps)})


def _pow(z: complex, k: int) -> complex:
    return 1.0 + 0j if k == 0 else z**k


def noon_moments(p: SystemParams, spec: NoonSpec) -> tuple[float, float]:
    """``(<A_tot>, <A_tot^2>)`` in ``(psi1^N + psi2^N)/sqrt(2)``."""
    n = spec.n_photons
    modes = spec.modes
    a_modes = [apply_matrix_field(_a_field(p), psi) for psi in modes]
    mean = 0j
    second = 0j
    for i in range(2):
        for j in range(2):
            s = inner(modes[i], modes[j])
            a = inner(modes[i], a_modes[j])
            b = inner(a_modes[i], a_modes[j])
            mean += n * a * _pow(s, n - 1)
            second += n * b * _pow(s, n - 1)
            if n >= 2:
                second += n * (n - 1) * a * a * _pow(s, n - 2)
    return 0.5 * mean.real, 0.5 * second.real


def noon_qfi(p: SystemParams, spec: NoonSpec) -> QfiResult:
    mean, second = noon_moments(p, spec)
    value = max(0.0, 4.0 * (second - mean * mean))
    freqs = tuple(spec.psi1.frequencies + spec.psi2.frequencies)
    return QfiResult(value, "generator", spec, freqs, p.epsilon)


def _noon_overlap_excess(p: SystemParams, spec: NoonSpec, d_eps: float) -> complex:
    """``<Psi_eps | Psi_{eps + d_eps}> - 1``, evaluated without cancellation.

    Single-particle overlaps are split as
    ``<K psi_i, K' psi_j> = delta_ij + <K psi_i, (K' - K) psi_j>``, using
    unitarity of ``K`` and orthonormality of the modes (checked by
    :class:`NoonSpec`); the increment is the exact resolvent difference.
    Powers are expanded binomially so the leading 1 never enters a
    subtraction.
    """
    n = spec.n_photons
    if d_eps == 0:
        return 0j
    out = [apply_matrix_field(_k_field(p), psi) for psi in spec.modes]
    shift = [apply_matrix_field(lambda w: transfer_k_increment(p, d_eps, w), psi)
             for psi in spec.modes]
    total = 0j
    for i in range(2):
        for j in range(2):
            e = inner(out[i], shift[j])
            if i == j:
                # (1 + e)**n - 1
                total += sum(math.comb(n, k) * e**k for k in range(1, n + 1))
            else:
                total += _pow(e, n)
    return 0.5 * total


def noon_overlap_oracle(p: SystemParams, spec: NoonSpec, d_eps: float) -> complex:
    """``<Psi_eps | Psi_{eps + d_eps}> = (1/2) sum_nm <K psi_n, K' psi_m>**N``."""
    return 1.0 + _noon_overlap_excess(p, spec, d_eps)


def noon_qfi_fidelity_oracle(p: SystemParams, spec: NoonSpec, steps=DEFAULT_STEPS) -> QfiResult:
    qs = []
    for h in steps:
        e = _noon_overlap_excess(p, spec, h)
        mag = abs(1.0 + e)
        # Bures d^2 = 2 (1 - |overlap|); 1 - |1 + e| = -(2 Re e + |e|^2) / (1 + |1 + e|)
        one_minus = -(2.0 * e.real + abs(e) ** 2) / (1.0 + mag)
        qs.append(4.0 * 2.0 * one_minus / (h * h))
    value = richardson_zero(steps, qs)
    freqs = tuple(spec.psi1.frequencies + spec.psi2.frequencies)
    return QfiResult(value, "fidelity_limit", spec, freqs, p.epsilon,
                     {"samples": qs, "steps": list(steps)})


def oqfi_value(p: SystemParams, state_kind: str, photons: float, epsilon: float | None = None,
               **opt_kwargs) -> QfiResult:
    """Frequency-optimised QFI at ``epsilon`` (default: ``p.epsilon``)."""
    if epsilon is not None:
        p = p.with_(epsilon=epsilon)
    opt = optimize_spectrum(p, **opt_kwargs)
    value = oqfi_from_optimum(opt, state_kind, photons)
    if state_kind == "coherent":
        probe = optimal_coherent_probe(p, photons, opt)
        points = tuple(probe.frequencies)
    else:
        probe = optimal_noon_probe(p, int(photons), opt)
        points = (opt.omega_min, opt.omega_max)
    extras = {"lambda_max": opt.lambda_max, "lambda_min": opt.lambda_min,
              "omega_max": opt.omega_max, "omega_min": opt.omega_min,
              "converged": opt.converged, "near_singular": opt.near_singular}
    return QfiResult(value, "generator", probe, points, p.epsilon, extras)

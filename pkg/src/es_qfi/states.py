"""Probe states as finite combs of monochromatic port components.

Components at distinct frequencies are orthogonal (delta normalisation), so
every inner product reduces to a sum over shared frequencies of ordinary
2-vector inner products. Squared norms are photon numbers for coherent
amplitudes and probabilities for single-photon mode functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gwsm import gwsm_spectrum
from .optimize import FrequencyOptimum, optimize_spectrum
from .resonator import SystemParams

COHERENT = "coherent_amplitude"
SINGLE_PHOTON = "single_photon_mode"
KINDS = (COHERENT, SINGLE_PHOTON)

MERGE_TOL = 1e-12  # in units of gamma; callers pass gamma explicitly if != 1
NORM_TOL = 1e-12


@dataclass(frozen=True)
class ModeComponent:
    omega: float
    port: tuple  # (amp_l, amp_r), complex

    def __post_init__(self):
        port = tuple(complex(z) for z in self.port)
        if len(port) != 2:
            raise ValueError("port vector must have two entries")
        if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in port):
            raise ValueError("port vector must be finite")
        if not math.isfinite(self.omega):
            raise ValueError("omega must be finite")
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "port", port)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.port, dtype=complex)


@dataclass(frozen=True)
class ModeState:
    components: tuple
    kind: str = COHERENT
    merge_tol: float = MERGE_TOL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}")
        merged: list[ModeComponent] = []
        for c in self.components:
            if not isinstance(c, ModeComponent):
                c = ModeComponent(*c)
            for i, m in enumerate(merged):
                if abs(m.omega - c.omega) <= self.merge_tol:
                    merged[i] = ModeComponent(m.omega, tuple(m.vector + c.vector))
                    break
            else:
                merged.append(c)
        object.__setattr__(self, "components", tuple(merged))

    @classmethod
    def monochromatic(cls, omega: float, port, kind: str = COHERENT) -> "ModeState":
        return cls((ModeComponent(omega, tuple(port)),), kind)

    @property
    def frequencies(self) -> list[float]:
        return [c.omega for c in self.components]

    def norm2(self) -> float:
        return float(sum(np.vdot(c.vector, c.vector).real for c in self.components))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm2() - 1.0) <= tol

    def scaled(self, factor: complex) -> "ModeState":
        return ModeState(
            tuple(ModeComponent(c.omega, tuple(factor * c.vector)) for c in self.components),
            self.kind, self.merge_tol,
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "components": [
                {"omega": c.omega,
                 "port": [c.port[0].real, c.port[0].imag, c.port[1].real, c.port[1].imag]}
                for c in self.components
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModeState":
        comps = []
        for c in d["components"]:
            re_l, im_l, re_r, im_r = c["port"]
            comps.append(ModeComponent(c["omega"], (complex(re_l, im_l), complex(re_r, im_r))))
        return cls(tuple(comps), d.get("kind", COHERENT))


def inner(a: ModeState, b: ModeState) -> complex:
    """``<a, b>``, antilinear in ``a``."""
    tol = max(a.merge_tol, b.merge_tol)
    total = 0j
    for ca in a.components:
        for cb in b.components:
            if abs(ca.omega - cb.omega) <= tol:
                total += complex(np.vdot(ca.vector, cb.vector))
    return total


def apply_matrix_field(m_of_omega, s: ModeState) -> ModeState:
    """Multiply each component by the 2x2 matrix ``m_of_omega(omega)``."""
    return ModeState(
        tuple(ModeComponent(c.omega, tuple(m_of_omega(c.omega) @ c.vector)) for c in s.components),
        s.kind, s.merge_tol,
    )


@dataclass(frozen=True)
class NoonSpec:
    psi1: ModeState
    psi2: ModeState
    n_photons: int

    def __post_init__(self):
        if int(self.n_photons) != self.n_photons or self.n_photons < 1:
            raise ValueError(f"n_photons must be a positive integer, got {self.n_photons}")
        object.__setattr__(self, "n_photons", int(self.n_photons))
        for name in ("psi1", "psi2"):
            psi = getattr(self, name)
            if psi.kind != SINGLE_PHOTON:
                raise ValueError(f"{name} must be a single-photon mode function")
            if not psi.is_normalized():
                raise ValueError(f"{name} is not normalised (|psi|^2 = {psi.norm2()!r})")
        overlap = abs(inner(self.psi1, self.psi2))
        if overlap > NORM_TOL:
            raise ValueError(f"NOON modes are not orthogonal (|<psi1, psi2>| = {overlap:.3e})")

    @property
    def modes(self) -> tuple[ModeState, ModeState]:
        return self.psi1, self.psi2

    def to_dict(self) -> dict:
        return {"kind": "noon", "n_photons": self.n_photons,
                "psi1": self.psi1.to_dict(), "psi2": self.psi2.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "NoonSpec":
        return cls(ModeState.from_dict(d["psi1"]), ModeState.from_dict(d["psi2"]), d["n_photons"])


def optimal_coherent_probe(
    p: SystemParams, photon_number: float, opt: FrequencyOptimum | None = None
) -> ModeState:
    """Single-frequency coherent probe along the eigenvector of ``lambda_abs``."""
    if photon_number < 0:
        raise ValueError("photon number must be non-negative")
    if photon_number == 0:
        return ModeState((), COHERENT)
    opt = optimize_spectrum(p) if opt is None else opt
    if abs(opt.lambda_max) >= abs(opt.lambda_min):
        omega = opt.omega_max
        v = gwsm_spectrum(p, omega).v_plus
    else:
        omega = opt.omega_min
        v = gwsm_spectrum(p, omega).v_minus
    return ModeState.monochromatic(omega, math.sqrt(photon_number) * v, COHERENT)


def optimal_noon_probe(
    p: SystemParams, n_photons: int, opt: FrequencyOptimum | None = None
) -> NoonSpec:
    """``psi1`` on the ``lambda_min`` eigenmode, ``psi2`` on ``lambda_max``."""
    opt = optimize_spectrum(p) if opt is None else opt
    w_min, w_max = opt.omega_min, opt.omega_max
    if abs(w_min - w_max) <= MERGE_TOL * p.gamma:
        # same frequency: orthogonal eigenvectors of one Hermitian matrix
        spec = gwsm_spectrum(p, w_max)
        v1, v2 = spec.v_minus, spec.v_plus
        w_min = w_max
    else:
        v1 = gwsm_spectrum(p, w_min).v_minus
        v2 = gwsm_spectrum(p, w_max).v_plus
    return NoonSpec(
        ModeState.monochromatic(w_min, v1, SINGLE_PHOTON),
        ModeState.monochromatic(w_max, v2, SINGLE_PHOTON),
        n_photons,
    )

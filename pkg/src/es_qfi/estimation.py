"""Measurement models, their Fisher information and Monte Carlo harnesses.

Balanced homodyne (coherent probes) is modelled as a normal difference
signal; N-photon counting (NOON probes at full retroreflection) as a
two-outcome law ``P1 = cos^2(N theta)``. Both simulations use the local
linearised estimator around the nominal ``epsilon`` and report the mean
squared error against the Cramer-Rao bound ``1 / (m I)``.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import UndefinedPhase, ZeroSensitivity
from .gwsm import gwsm_a
from .optimize import optimize_spectrum, worker_count
from .qfi import coherent_qfi, noon_qfi
from .resonator import V, SystemParams, build_model, resolvent, transfer_k
from .states import COHERENT, ModeState, NoonSpec, apply_matrix_field, inner, optimal_noon_probe
from .smallcomplex import adjoint

LO_RATIO_WARN = 100.0
CHUNK = 8192
SENSITIVITY_TOL = 1e-12


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class TrialReport:
    scheme: str
    m_trials: int
    epsilon_true: float
    epsilon_nominal: float
    mse: float
    crb: float
    ratio: float
    sigma_stat: float
    classical_fi: float
    qfi: float
    mean_estimate: float
    rng_seed: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TrialReport":
        return cls(**d)

    def append_jsonl(self, path) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")


def _chunk_sizes(m: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(m, chunk)
    return [chunk] * full + ([rest] if rest else [])


def _run_chunks(fn, m: int, seed: int, payload, workers: int | None):
    """Evaluate ``fn(payload, n, seed_seq)`` per fixed-size chunk.

    Substreams depend only on ``seed`` and the chunk index, and partial sums
    are combined in chunk order, so the result ignores the worker count.
    """
    sizes = _chunk_sizes(m)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(payload, n, s) for n, s in zip(sizes, seqs)]
    nw = worker_count(workers)
    if nw > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=nw) as ex:
            parts = list(ex.map(fn, jobs))
    else:
        parts = [fn(j) for j in jobs]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    return s1, s2


def _report(scheme, m, eps_true, eps_nom, s1, s2, fi, qfi, sigma_rel, seed):
    mean_sq = s2 / m
    mse = mean_sq / m  # of the m-trial averaged estimator
    crb = 1.0 / (m * fi)
    return TrialReport(
        scheme=scheme, m_trials=m, epsilon_true=eps_true, epsilon_nominal=eps_nom,
        mse=mse, crb=crb, ratio=mse / crb, sigma_stat=sigma_rel,
        classical_fi=fi, qfi=qfi, mean_estimate=eps_true + s1 / m, rng_seed=int(seed),
    )


# --------------------------------------------------------------------------
# homodyne


@dataclass(frozen=True)
class HomodyneConfig:
    params: SystemParams
    probe: ModeState
    lo: ModeState
    epsilon_nominal: float | None = None

    def __post_init__(self):
        if self.probe.kind != COHERENT or self.lo.kind != COHERENT:
            raise ValueError("homodyne probe and local oscillator must be coherent amplitudes")
        if self.epsilon_nominal is None:
            object.__setattr__(self, "epsilon_nominal", self.params.epsilon)
        else:
            object.__setattr__(self, "params", self.params.with_(epsilon=self.epsilon_nominal))
        nb, nl = self.probe.norm2(), self.lo.norm2()
        if nb > 0 and nl > 0 and nl / nb < LO_RATIO_WARN:
            warnings.warn(
                f"local oscillator only {nl / nb:.3g}x stronger than the probe; "
                "the normal approximation may be poor",
                stacklevel=2,
            )

    @property
    def variance(self) -> float:
        return self.lo.norm2() + self.probe.norm2()


def homodyne_mean(cfg: HomodyneConfig, epsilon: float) -> float:
    """``mu = 2 Im <alpha, K_eps beta>``."""
    p = cfg.params.with_(epsilon=epsilon)
    out = apply_matrix_field(lambda w: transfer_k(p, w), cfg.probe)
    return 2.0 * inner(cfg.lo, out).imag


def homodyne_slope(cfg: HomodyneConfig) -> float:
    """``d mu / d eps = 2 Re <K^H alpha, A beta>`` at the nominal point."""
    p = cfg.params
    k_adj_alpha = apply_matrix_field(lambda w: adjoint(transfer_k(p, w)), cfg.lo)
    a_beta = apply_matrix_field(lambda w: gwsm_a(p, w), cfg.probe)
    return 2.0 * inner(k_adj_alpha, a_beta).real


def homodyne_fisher(cfg: HomodyneConfig) -> float:
    return homodyne_slope(cfg) ** 2 / cfg.variance


def homodyne_optimal_lo(p: SystemParams, beta_abs: ModeState, n_lo: float) -> ModeState:
    """``alpha = sqrt(n_lo) K beta / |beta|``."""
    if n_lo < 0:
        raise ValueError("n_lo must be non-negative")
    nb = beta_abs.norm2()
    if n_lo == 0 or nb == 0:
        return ModeState((), COHERENT)
    out = apply_matrix_field(lambda w: transfer_k(p, w), beta_abs)
    return out.scaled(math.sqrt(n_lo / nb))


def _homodyne_chunk(job):
    (mu_true, mu_nom, slope, sigma, eps_true, eps_nom), n, seq = job
    rng = np.random.default_rng(seq)
    x = rng.normal(mu_true, sigma, size=n)
    err = eps_nom + (x - mu_nom) / slope - eps_true
    return math.fsum(err), math.fsum(err * err)


def homodyne_simulate(cfg: HomodyneConfig, epsilon_true: float, m_trials: int, seed: int,
                      workers: int | None = None) -> TrialReport:
    if m_trials < 1:
        raise ValueError("m_trials must be positive")
    slope = homodyne_slope(cfg)
    sigma = math.sqrt(cfg.variance)
    if abs(slope) < SENSITIVITY_TOL * max(1.0, sigma):
        raise ZeroSensitivity(f"homodyne signal slope {slope:.3e} at the nominal point")
    payload = (homodyne_mean(cfg, epsilon_true), homodyne_mean(cfg, cfg.epsilon_nominal),
               slope, sigma, epsilon_true, cfg.epsilon_nominal)
    s1, s2 = _run_chunks(_homodyne_chunk, m_trials, seed, payload, workers)
    fi = slope * slope / cfg.variance
    qfi = coherent_qfi(cfg.params, cfg.probe).value
    # squared normal deviates: relative standard error sqrt(2/m)
    return _report("homodyne", m_trials, epsilon_true, cfg.epsilon_nominal, s1, s2, fi, qfi,
                   math.sqrt(2.0 / m_trials), seed)


# --------------------------------------------------------------------------
# NOON counting


def _check_counting_regime(p: SystemParams) -> None:
    if p.rho != 1.0 or abs(p.e2 - 1j) > 1e-12:
        raise ValueError("N-photon counting model needs rho = 1 and exp(2i phi) = i")


def _theta_z(p: SystemParams, omega: float) -> complex:
    zeta = complex(omega, -0.5 * p.gamma)
    return zeta * zeta - p.epsilon * (p.epsilon + p.gamma)


def noon_theta(p: SystemParams, omega: float) -> float:
    """``theta = 2 arg[(omega - i gamma/2)^2 - eps (eps + gamma)]``.

    In this regime ``K = diag(K_ll, -1)`` with ``K_ll = exp(i (theta + pi/2))``.
    """
    _check_counting_regime(p)
    z = _theta_z(p, omega)
    if z == 0:
        raise UndefinedPhase(f"phase undefined at omega={omega}, epsilon={p.epsilon}")
    return 2.0 * cmath.phase(z)


def noon_theta_slope(p: SystemParams, omega: float) -> float:
    """``d theta / d eps = 2 Im(z' / z)`` with ``z' = -(2 eps + gamma)``."""
    _check_counting_regime(p)
    z = _theta_z(p, omega)
    if z == 0:
        raise UndefinedPhase(f"phase undefined at omega={omega}, epsilon={p.epsilon}")
    return 2.0 * (-(2.0 * p.epsilon + p.gamma) / z).imag


@dataclass(frozen=True)
class NoonCountingConfig:
    params: SystemParams
    spec: NoonSpec
    omega_plus: float
    epsilon_nominal: float | None = None

    def __post_init__(self):
        _check_counting_regime(self.params)
        if self.epsilon_nominal is None:
            object.__setattr__(self, "epsilon_nominal", self.params.epsilon)
        else:
            object.__setattr__(self, "params", self.params.with_(epsilon=self.epsilon_nominal))

    @property
    def n_photons(self) -> int:
        return self.spec.n_photons


def noon_counting_config(p: SystemParams, n_photons: int) -> NoonCountingConfig:
    """Optimal counting configuration: NOON on the lambda_min/lambda_max
    eigenmodes, phase read out at the lambda_max frequency."""
    opt = optimize_spectrum(p)
    spec = optimal_noon_probe(p, n_photons, opt)
    return NoonCountingConfig(p, spec, opt.omega_max)


def noon_counting_probabilities(cfg: NoonCountingConfig, epsilon: float) -> tuple[float, float]:
    theta = noon_theta(cfg.params.with_(epsilon=epsilon), cfg.omega_plus)
    c = math.cos(cfg.n_photons * theta)
    p1 = c * c
    return p1, 1.0 - p1


def noon_counting_fisher(cfg: NoonCountingConfig, epsilon: float | None = None) -> float:
    """``4 N^2 (d theta / d eps)^2``."""
    eps = cfg.epsilon_nominal if epsilon is None else epsilon
    slope = noon_theta_slope(cfg.params.with_(epsilon=eps), cfg.omega_plus)
    return 4.0 * cfg.n_photons**2 * slope * slope


def _noon_chunk(job):
    (p_true, p_nom, dp, eps_true, eps_nom), n, seq = job
    rng = np.random.default_rng(seq)
    hits = rng.random(n) < p_true
    err = eps_nom + (hits.astype(float) - p_nom) / dp - eps_true
    return math.fsum(err), math.fsum(err * err)


def noon_simulate(cfg: NoonCountingConfig, epsilon_true: float, m_trials: int, seed: int,
                  workers: int | None = None) -> TrialReport:
    if m_trials < 1:
        raise ValueError("m_trials must be positive")
    n = cfg.n_photons
    eps_nom = cfg.epsilon_nominal
    theta = noon_theta(cfg.params, cfg.omega_plus)
    slope = noon_theta_slope(cfg.params, cfg.omega_plus)
    dp = -n * math.sin(2.0 * n * theta) * slope
    if abs(dp) < SENSITIVITY_TOL:
        raise ZeroSensitivity(
            f"dP1/deps = {dp:.3e}: the counting signal is stationary at the nominal point"
        )
    p_nom = noon_counting_probabilities(cfg, eps_nom)[0]
    p_true = noon_counting_probabilities(cfg, epsilon_true)[0]
    s1, s2 = _run_chunks(_noon_chunk, m_trials, seed, (p_true, p_nom, dp, epsilon_true, eps_nom),
                         workers)
    fi = dp * dp / (p_nom * (1.0 - p_nom))
    q = 1.0 - p_nom
    # relative standard error of the mean squared Bernoulli residual
    var_y = p_nom * q * (q**3 + p_nom**3 - p_nom * q)
    sigma_rel = math.sqrt(max(var_y, 0.0) / m_trials) / (p_nom * q)
    qfi = noon_qfi(cfg.params, cfg.spec).value
    return _report("noon", m_trials, epsilon_true, eps_nom, s1, s2, fi, qfi, sigma_rel, seed)


# --------------------------------------------------------------------------
# signal-to-noise identity


def transfer_k_derivative(p: SystemParams, omega: float) -> np.ndarray:
    """``dK/deps = -i S B^H R V R B``."""
    m = build_model(p)
    r = resolvent(p, omega)
    return -1j * m.s @ adjoint(m.b) @ r @ V @ r @ m.b


def snr_lau_clerk(p: SystemParams, epsilon: float, beta_abs: ModeState) -> float:
    """Linear-response signal-to-noise ``4 eps^2 |dK/deps beta|^2`` at ``p``."""
    d_beta = apply_matrix_field(lambda w: transfer_k_derivative(p, w), beta_abs)
    return 4.0 * epsilon * epsilon * d_beta.norm2()

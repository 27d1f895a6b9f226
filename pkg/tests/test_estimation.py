import math
import warnings

import numpy as np
import pytest

from es_qfi.errors import UndefinedPhase, ZeroSensitivity
from es_qfi.estimation import (
    HomodyneConfig,
    TrialReport,
    homodyne_fisher,
    homodyne_optimal_lo,
    homodyne_simulate,
    noon_counting_config,
    noon_counting_fisher,
    noon_counting_probabilities,
    noon_simulate,
    noon_theta,
    noon_theta_slope,
    snr_lau_clerk,
)
from es_qfi.gwsm import gwsm_a
from es_qfi.qfi import coherent_qfi
from es_qfi.resonator import SystemParams, transfer_k
from es_qfi.states import ModeState, inner, optimal_coherent_probe

QUARTER = SystemParams(rho=1, phi=math.pi / 4)
FULL = SystemParams(rho=1, phi=0)


def _homodyne(p=FULL, nbar=2.0, n_lo=1e6):
    beta = optimal_coherent_probe(p, nbar)
    return HomodyneConfig(p, beta, homodyne_optimal_lo(p, beta, n_lo))


def test_optimal_lo_properties():
    beta = optimal_coherent_probe(FULL, 2)
    lo = homodyne_optimal_lo(FULL, beta, 1e6)
    assert lo.norm2() == pytest.approx(1e6, rel=1e-12)
    k_adj = ModeState.monochromatic(
        lo.components[0].omega,
        np.conj(transfer_k(FULL, lo.components[0].omega)).T @ lo.components[0].vector)
    assert abs(inner(k_adj, beta).real) == pytest.approx(math.sqrt(1e6 * 2), rel=1e-12)
    assert homodyne_optimal_lo(FULL, beta, 0).components == ()


@pytest.mark.parametrize("n_lo", [1e2, 1e4, 1e6])
def test_homodyne_fisher_finite_lo(n_lo):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cfg = _homodyne(n_lo=n_lo)
    assert homodyne_fisher(cfg) == pytest.approx(512 * n_lo / (n_lo + 2), rel=1e-12)


def test_homodyne_fisher_monotone_in_lo():
    vals = [homodyne_fisher(_homodyne(n_lo=n)) for n in (1e3, 1e4, 1e5, 1e6)]
    assert all(a < b < 512 for a, b in zip(vals, vals[1:]))


def test_homodyne_quadrature_orthogonal_lo_is_blind():
    cfg = _homodyne()
    blind = HomodyneConfig(FULL, cfg.probe, cfg.lo.scaled(1j))
    assert homodyne_fisher(blind) == pytest.approx(0, abs=1e-9)
    with pytest.raises(ZeroSensitivity):
        homodyne_simulate(blind, 0.0, 100, seed=1)


def test_weak_lo_warns():
    beta = optimal_coherent_probe(FULL, 2)
    with pytest.warns(UserWarning):
        HomodyneConfig(FULL, beta, homodyne_optimal_lo(FULL, beta, 20))


def test_classical_below_quantum(rng):
    for _ in range(50):
        p = SystemParams(rng.uniform(0, 1), rng.uniform(0, 6.3), rng.uniform(-1, 1))
        beta = ModeState.monochromatic(rng.uniform(-3, 3), rng.normal(size=2) + 1j * rng.normal(size=2))
        lo = ModeState.monochromatic(beta.components[0].omega,
                                     300 * (rng.normal(size=2) + 1j * rng.normal(size=2)))
        cfg = HomodyneConfig(p, beta, lo)
        assert homodyne_fisher(cfg) <= coherent_qfi(p, beta).value * (1 + 1e-12)


def test_homodyne_slope_matches_finite_difference():
    from es_qfi.estimation import homodyne_mean, homodyne_slope

    p = SystemParams(rho=0.6, phi=0.4, epsilon=0.1)
    beta = ModeState.monochromatic(0.3, (1, 0.5j))
    cfg = HomodyneConfig(p, beta, ModeState.monochromatic(0.3, (400, 300j)))
    h = 1e-6
    fd = (homodyne_mean(cfg, 0.1 + h) - homodyne_mean(cfg, 0.1 - h)) / (2 * h)
    assert homodyne_slope(cfg) == pytest.approx(fd, rel=1e-7)


def test_homodyne_simulation_reproducible_and_scaling():
    cfg = _homodyne()
    a = homodyne_simulate(cfg, 0.0, 20000, seed=7)
    assert a == homodyne_simulate(cfg, 0.0, 20000, seed=7)
    assert a == homodyne_simulate(cfg, 0.0, 20000, seed=7, workers=3)
    assert a != homodyne_simulate(cfg, 0.0, 20000, seed=8)
    b = homodyne_simulate(cfg, 0.0, 40000, seed=7)
    assert b.mse / a.mse == pytest.approx(0.5, rel=0.1)
    assert abs(a.ratio - 1) < 5 * a.sigma_stat


def test_report_json_round_trip(tmp_path):
    rep = homodyne_simulate(_homodyne(), 0.0, 1000, seed=3)
    assert TrialReport.from_dict(rep.to_dict()) == rep
    path = tmp_path / "runs.jsonl"
    rep.append_jsonl(path)
    rep.append_jsonl(path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2 and lines[0] == lines[1] == rep.to_json()


def test_theta_matches_transfer_matrix(rng):
    for _ in range(200):
        p = QUARTER.with_(epsilon=rng.uniform(-1, 1))
        w = rng.uniform(-3, 3)
        k = transfer_k(p, w)
        assert abs(k[0, 1]) < 1e-12 and k[1, 1] == pytest.approx(-1, abs=1e-12)
        theta = noon_theta(p, w)
        assert abs(k[0, 0] - np.exp(1j * (theta + math.pi / 2))) < 1e-10


def test_theta_antisymmetry_and_slope():
    p = QUARTER.with_(epsilon=0.2)
    for w in (0.1, 0.5, 2.0):
        chi = noon_theta(p, w) / 2
        chi_m = noon_theta(p, -w) / 2
        assert math.sin(chi + chi_m) == pytest.approx(0, abs=1e-12)
    # d theta / d eps equals A_ll at the same frequency
    for eps, w in ((0.0, 1 / math.sqrt(12)), (0.0, -1 / math.sqrt(12)), (0.3, 0.7)):
        q = QUARTER.with_(epsilon=eps)
        assert noon_theta_slope(q, w) == pytest.approx(gwsm_a(q, w)[0, 0].real, rel=1e-12)
    assert noon_theta_slope(QUARTER, 1 / math.sqrt(12)) == pytest.approx(-math.sqrt(27), rel=1e-12)


def test_theta_near_resonance_phase():
    w, eps = 1e-4, 0.1
    k_ll = transfer_k(QUARTER.with_(epsilon=eps), w)[0, 0]
    expected = math.pi / 2 + 2 * w / (eps + 0.5) ** 2
    assert np.angle(k_ll) == pytest.approx(expected, abs=1e-7)


def test_theta_regime_and_undefined():
    with pytest.raises(ValueError):
        noon_theta(SystemParams(rho=0.5, phi=math.pi / 4), 0.0)
    with pytest.raises(UndefinedPhase):
        noon_theta(QUARTER.with_(epsilon=-0.5), 0.0)


def test_counting_probabilities():
    cfg = noon_counting_config(QUARTER, 2)
    p1, p2 = noon_counting_probabilities(cfg, 0.0)
    assert p1 + p2 == 1.0
    # omega_plus is resolved to ~1e-8 on the flat maximum
    assert p1 == pytest.approx(0.25, abs=1e-7)
    h = 1e-6
    fd = (noon_counting_probabilities(cfg, h)[0] - noon_counting_probabilities(cfg, -h)[0]) / (2 * h)
    theta = noon_theta(QUARTER, cfg.omega_plus)
    analytic = 2 * abs(math.sin(4 * theta)) * abs(noon_theta_slope(QUARTER, cfg.omega_plus))
    assert abs(fd) == pytest.approx(analytic, rel=1e-6)
    fisher = fd**2 / (p1 * p2)
    assert fisher == pytest.approx(noon_counting_fisher(cfg), rel=1e-6)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counting_fisher_saturates(n):
    cfg = noon_counting_config(QUARTER, n)
    assert noon_counting_fisher(cfg) == pytest.approx(108 * n * n, rel=1e-10)
    a_ll = gwsm_a(QUARTER, cfg.omega_plus)[0, 0].real
    assert noon_counting_fisher(cfg) == pytest.approx(4 * n * n * a_ll**2, rel=1e-12)


def test_noon_simulation():
    cfg = noon_counting_config(QUARTER, 2)
    a = noon_simulate(cfg, 0.0, 30000, seed=11)
    assert a == noon_simulate(cfg, 0.0, 30000, seed=11, workers=2)
    assert abs(a.ratio - 1) < 5 * a.sigma_stat
    assert a.qfi == pytest.approx(432, rel=1e-9)


def test_noon_simulation_stationary_point():
    # one photon at the resonance: theta = 2 pi, sin(2 N theta) = 0
    from es_qfi.estimation import NoonCountingConfig

    cfg = noon_counting_config(QUARTER, 1)
    stuck = NoonCountingConfig(QUARTER, cfg.spec, 0.0)
    with pytest.raises(ZeroSensitivity):
        noon_simulate(stuck, 0.0, 100, seed=0)


def test_snr_identity(rng):
    beta = optimal_coherent_probe(FULL, 1)
    assert snr_lau_clerk(FULL, 1e-3, beta) == pytest.approx(256e-6, rel=1e-12)
    assert snr_lau_clerk(FULL, 0.0, beta) == 0.0
    for _ in range(20):
        p = SystemParams(rng.uniform(0, 1), rng.uniform(0, 6.3))
        b = optimal_coherent_probe(p, rng.uniform(0.5, 3))
        ratio = snr_lau_clerk(p, 1e-3, b) / (1e-6 * coherent_qfi(p, b).value)
        assert ratio == pytest.approx(1, abs=1e-10)

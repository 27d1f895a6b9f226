import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import params
from es_qfi.resonator import SystemParams, transfer_k
from es_qfi.gwsm import gwsm_a
from es_qfi.states import (
    COHERENT,
    SINGLE_PHOTON,
    ModeComponent,
    ModeState,
    NoonSpec,
    apply_matrix_field,
    inner,
    optimal_coherent_probe,
    optimal_noon_probe,
)

amp = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def coherent_states(draw, max_components=3):
    n = draw(st.integers(1, max_components))
    comps = tuple(
        ModeComponent(draw(st.floats(-4, 4)), (draw(amp), draw(amp))) for _ in range(n)
    )
    return ModeState(comps, COHERENT)


def test_inner_basics():
    beta = ModeState.monochromatic(0.0, (math.sqrt(2), 0))
    assert inner(beta, beta) == pytest.approx(2)
    other = ModeState.monochromatic(1.0, (1, 0))
    assert inner(beta, other) == 0
    psi = ModeState.monochromatic(0.3, np.array([1, 1j]) / math.sqrt(2), SINGLE_PHOTON)
    assert inner(psi, psi) == pytest.approx(1)


def test_inner_is_sesquilinear():
    a = ModeState.monochromatic(0.0, (1j, 0))
    b = ModeState.monochromatic(0.0, (1, 0))
    assert inner(a, b) == pytest.approx(-1j)
    assert inner(a.scaled(2j), b) == pytest.approx(np.conj(2j) * inner(a, b))


def test_merge_near_duplicate_frequencies():
    s = ModeState(((0.0, (1, 0)), (5e-13, (0, 1)), (1.0, (1, 1))))
    assert len(s.components) == 2
    assert s.components[0].port == (1 + 0j, 1 + 0j)


def test_invalid_components():
    with pytest.raises(ValueError):
        ModeComponent(0.0, (1, 2, 3))
    with pytest.raises(ValueError):
        ModeComponent(0.0, (float("nan"), 0))
    with pytest.raises(ValueError):
        ModeState((), "squeezed")


def test_noon_spec_validation():
    e_l = ModeState.monochromatic(0.0, (1, 0), SINGLE_PHOTON)
    e_r = ModeState.monochromatic(0.0, (0, 1), SINGLE_PHOTON)
    NoonSpec(e_l, e_r, 3)
    with pytest.raises(ValueError):
        NoonSpec(e_l, e_l, 2)
    with pytest.raises(ValueError):
        NoonSpec(e_l, e_r, 0)
    with pytest.raises(ValueError):
        NoonSpec(e_l.scaled(2), e_r, 1)
    with pytest.raises(ValueError):
        NoonSpec(ModeState.monochromatic(0.0, (1, 0)), e_r, 1)


@given(coherent_states(), params())
@settings(max_examples=100)
def test_transfer_preserves_photon_number(beta, p):
    out = apply_matrix_field(lambda w: transfer_k(p, w * p.gamma), beta)
    assert out.norm2() == pytest.approx(beta.norm2(), rel=1e-12, abs=1e-12)
    assert out.frequencies == beta.frequencies


def test_apply_identity():
    beta = ModeState(((0.1, (1, 2j)), (0.5, (3, 0))))
    assert apply_matrix_field(lambda w: np.eye(2), beta) == beta


def test_quadratic_form_by_composition():
    p = SystemParams(rho=0.4, phi=0.9, epsilon=0.1)
    beta = ModeState(((0.1, (1, 2j)), (0.5, (3, -1))))
    a_beta = apply_matrix_field(lambda w: gwsm_a(p, w), beta)
    a2_beta = apply_matrix_field(lambda w: gwsm_a(p, w), a_beta)
    direct = sum(np.vdot(c.vector, gwsm_a(p, c.omega) @ gwsm_a(p, c.omega) @ c.vector)
                 for c in beta.components)
    assert inner(beta, a2_beta) == pytest.approx(direct, rel=1e-12)


def test_optimal_coherent_probe():
    dp = optimal_coherent_probe(SystemParams(rho=0), 2)
    assert dp.frequencies == [pytest.approx(0, abs=1e-9)]
    assert dp.norm2() == pytest.approx(2)
    full = optimal_coherent_probe(SystemParams(rho=1, phi=0), 1)
    assert full.frequencies == [pytest.approx(0, abs=1e-9)]
    assert np.allclose(full.components[0].vector, [1, 0], atol=1e-12)
    assert optimal_coherent_probe(SystemParams(), 0).components == ()


def test_optimal_noon_probe_full_reflection():
    spec = optimal_noon_probe(SystemParams(rho=1, phi=math.pi / 4), 2)
    w1, w2 = spec.psi1.frequencies[0], spec.psi2.frequencies[0]
    assert abs(w1) == pytest.approx(1 / math.sqrt(12), abs=1e-6)
    assert w1 == pytest.approx(-w2, abs=1e-9)


def test_optimal_noon_probe_dp_same_frequency():
    spec = optimal_noon_probe(SystemParams(rho=0), 1)
    assert spec.psi1.frequencies == spec.psi2.frequencies
    s = 1 / math.sqrt(2)
    v1, v2 = spec.psi1.components[0].vector, spec.psi2.components[0].vector
    # symmetric and antisymmetric port combinations
    assert abs(abs(np.vdot(v1, [s, s])) - 1) < 1e-9 or abs(abs(np.vdot(v1, [s, -s])) - 1) < 1e-9
    assert abs(np.vdot(v1, v2)) < 1e-12


def test_probes_bit_reproducible():
    p = SystemParams(rho=0.6, phi=0.7, epsilon=0.05)
    assert optimal_coherent_probe(p, 2) == optimal_coherent_probe(p, 2)
    assert optimal_noon_probe(p, 3) == optimal_noon_probe(p, 3)


@given(params(gamma=1.0))
@settings(max_examples=30, deadline=None)
def test_noon_probe_orthogonal(p):
    spec = optimal_noon_probe(p, 2)
    assert abs(inner(spec.psi1, spec.psi2)) <= 1e-12


def test_json_round_trip():
    spec = optimal_noon_probe(SystemParams(rho=0.3, phi=0.2), 3)
    assert NoonSpec.from_dict(spec.to_dict()) == spec
    beta = ModeState(((0.1, (1, 2j)), (0.5, (3, -1))))
    assert ModeState.from_dict(beta.to_dict()) == beta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from es_qfi.errors import NotHermitian, SingularMatrix
from es_qfi.smallcomplex import (
    E_L,
    E_R,
    IDENTITY,
    adjoint,
    cmat,
    det2,
    eig_herm2,
    inverse2,
    is_hermitian,
    is_unitary,
)

finite = st.floats(-10, 10)


@st.composite
def hermitian(draw):
    p, q, br, bi = (draw(finite) for _ in range(4))
    return cmat(p, complex(br, bi), complex(br, -bi), q)


def test_eig_diagonal():
    lm, lp, vm, vp = eig_herm2(cmat(-4, 0, 0, 4))
    assert (lm, lp) == (-4, 4)
    # the eigenvector of -4 is e_l, that of +4 is e_r
    assert np.allclose(vm, E_L) and np.allclose(vp, E_R)


def test_eig_swap():
    lm, lp, vm, vp = eig_herm2(cmat(0, 1, 1, 0))
    assert lm == pytest.approx(-1) and lp == pytest.approx(1)
    s = 1 / np.sqrt(2)
    assert np.allclose(vp, [s, s])
    assert np.allclose(vm, [s, -s])


def test_eig_degenerate_returns_canonical_basis():
    lm, lp, vm, vp = eig_herm2(3.0 * IDENTITY)
    assert lm == lp == 3.0
    assert np.array_equal(vm, E_L) and np.array_equal(vp, E_R)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_herm2(cmat(0, 1, 0, 0))


@given(hermitian())
@settings(max_examples=300)
def test_eig_properties(a):
    lm, lp, vm, vp = eig_herm2(a)
    assert lm <= lp
    scale = max(1.0, np.abs(a).max())
    assert np.linalg.norm(a @ vp - lp * vp) < 1e-12 * scale
    assert np.linalg.norm(a @ vm - lm * vm) < 1e-12 * scale
    for v in (vm, vp):
        assert abs(np.linalg.norm(v) - 1) < 1e-14
        # largest component real positive; near-ties go to the l port
        k = 0 if abs(v[0]) >= abs(v[1]) * (1 - 1e-12) else 1
        assert v[k].imag == pytest.approx(0, abs=1e-15) and v[k].real > 0
    assert abs(np.vdot(vm, vp)) < 1e-12
    ref = np.linalg.eigvalsh(a)
    assert np.allclose([lm, lp], ref, atol=1e-12 * scale)


def test_eig_deterministic():
    a = cmat(0.3, 1 + 2j, 1 - 2j, -0.7)
    first = eig_herm2(a)
    second = eig_herm2(a.copy())
    for x, y in zip(first, second):
        assert np.array_equal(x, y)


def test_inverse_known():
    a = cmat(1, 2, 3, 4)
    assert np.allclose(inverse2(a), [[-2, 1], [1.5, -0.5]])


def test_inverse_singular():
    with pytest.raises(SingularMatrix) as info:
        inverse2(cmat(1, 2, 2, 4))
    assert info.value.magnitude == 0.0


def test_inverse_random(rng):
    worst = 0.0
    for _ in range(2000):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(det2(a)) < 1e-3:
            continue
        worst = max(worst, np.linalg.norm(a @ inverse2(a) - IDENTITY) / np.linalg.cond(a))
    assert worst < 1e-14


def test_predicates():
    u = cmat(0, 1j, 1j, 0)
    assert is_unitary(u)
    assert not is_unitary(2 * u)
    assert is_hermitian(adjoint(u) @ u)

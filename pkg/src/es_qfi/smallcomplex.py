"""Exact-shape complex linear algebra for 2-vectors and 2x2 matrices.

Matrices are ``numpy`` arrays of shape ``(2, 2)`` and dtype ``complex128``;
vectors have shape ``(2,)``. Index 0 is the left (``l``) port, index 1 the
right (``r``) port.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NotHermitian, SingularMatrix

SINGULAR_TOL = 1e-14
HERMITIAN_TOL = 1e-10
DEGENERATE_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
E_L = np.array([1.0, 0.0], dtype=complex)
E_R = np.array([0.0, 1.0], dtype=complex)
SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def cmat(a, b, c, d) -> np.ndarray:
    """Build ``[[a, b], [c, d]]``."""
    return np.array([[a, b], [c, d]], dtype=complex)


def cvec(l, r) -> np.ndarray:
    return np.array([l, r], dtype=complex)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def det2(a: np.ndarray) -> complex:
    return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return frob(a - adjoint(a)) <= tol * max(1.0, frob(a))


def is_unitary(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return frob(adjoint(a) @ a - IDENTITY) <= tol


def _phase_fix(v: np.ndarray) -> np.ndarray:
    # largest-magnitude component made real positive; ties go to the l port
    mags = np.abs(v)
    k = 0 if mags[0] >= mags[1] * (1.0 - 1e-12) else 1
    return v * (abs(v[k]) / v[k])


def eig_herm2(a: np.ndarray, tol: float = HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian 2x2 matrix.

    Returns ``(lam_minus, lam_plus, v_minus, v_plus)`` with
    ``lam_minus <= lam_plus``. Eigenvectors are unit-norm with their
    largest component real and positive. For degenerate input the canonical
    basis ``(e_l, e_r)`` is returned.
    """
    if not is_hermitian(a, tol):
        raise NotHermitian(f"matrix is not Hermitian: |a - a^H| = {frob(a - adjoint(a)):.3e}")
    p = a[0, 0].real
    q = a[1, 1].real
    b = complex(0.5 * (a[0, 1] + a[1, 0].conjugate()))
    t = 0.5 * (p + q)
    z = 0.5 * (p - q)
    r = math.hypot(z, abs(b))
    scale = max(abs(p), abs(q), abs(b))
    if r <= DEGENERATE_TOL * scale or r == 0.0:
        return t, t, E_L.copy(), E_R.copy()
    # eigenvectors from the rescaled matrix: tiny entries would underflow in the norm
    zs, bs, rs = z / scale, b / scale, r / scale
    if z >= 0:
        v_plus = np.array([zs + rs, bs.conjugate()], dtype=complex)
        v_minus = np.array([bs, -(zs + rs)], dtype=complex)
    else:
        v_plus = np.array([bs, rs - zs], dtype=complex)
        v_minus = np.array([zs - rs, bs.conjugate()], dtype=complex)
    v_plus = _phase_fix(v_plus / np.linalg.norm(v_plus))
    v_minus = _phase_fix(v_minus / np.linalg.norm(v_minus))
    return t - r, t + r, v_minus, v_plus


def inverse2(a: np.ndarray, singular_tol: float = SINGULAR_TOL) -> np.ndarray:
    """Adjugate inverse; raises :class:`SingularMatrix` when ``|det|`` is
    below ``singular_tol * |a|_F**2``."""
    det = det2(a)
    norm2 = frob(a) ** 2
    if abs(det) <= singular_tol * norm2 or det == 0:
        raise SingularMatrix(f"singular 2x2 matrix, |det| = {abs(det):.3e}", abs(det))
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=complex) / det

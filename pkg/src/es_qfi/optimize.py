"""Frequency optimisation of the GWSM spectrum and parameter grids.

The spectrum ``lambda_pm(omega)`` decays like ``1/omega**2``, so its extrema
sit inside a window of a few ``gamma``. :func:`optimize_spectrum` scans a
dense grid, then polishes every bracketed extremum by golden-section search.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import PoleError
from .gwsm import NEAR_SINGULAR, POLE, pole_denominator, scalar_spectrum, spectrum_values
from .resonator import SystemParams, omega_eigenvalues

DEFAULT_WINDOW = (-10.0, 10.0)
DEFAULT_GRID_N = 2048
DEFAULT_TOL = 1e-10
TIE_RTOL = 1e-10

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FrequencyOptimum:
    lambda_max: float
    omega_max: float
    lambda_min: float
    omega_min: float
    lambda_abs: float
    converged: bool
    near_singular: bool = False


def golden_section_max(f, a: float, b: float, tol: float, seed=None):
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    ``seed`` is an already-evaluated ``(x, fx)`` pair inside the bracket; the
    returned point is never worse than it.
    """
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best = seed if seed is not None else (c, fc)
    for x, fx in ((c, fc), (d, fd)):
        if fx > best[1]:
            best = (x, fx)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
            if fd > best[1]:
                best = (d, fd)
    return best


def _scan_grid(p: SystemParams, window, grid_n: int) -> np.ndarray:
    lo, hi = window[0] * p.gamma, window[1] * p.gamma
    grid = np.linspace(lo, hi, grid_n)
    # resonances of H_tilde can be narrower than the grid spacing
    extra = [w.real for w in omega_eigenvalues(p) if lo < w.real < hi]
    if extra:
        grid = np.unique(np.concatenate([grid, extra]))
    return grid


def _best_extremum(values: np.ndarray, grid: np.ndarray, f, tol: float):
    """Refine the grid maximum of ``values`` (``f`` evaluates the same curve).

    Returns ``(x, fx, interior)``.
    """
    finite = np.isfinite(values)
    masked = np.where(finite, values, -np.inf)
    best = masked.max()
    n = len(grid)
    # local maxima within a relative tie band of the best sample
    band = best - TIE_RTOL * max(abs(best), 1e-300) - 1e-300
    cand = [
        i for i in np.flatnonzero(masked >= band)
        if (i == 0 or masked[i] >= masked[i - 1]) and (i == n - 1 or masked[i] >= masked[i + 1])
    ]
    results = []
    for i in cand:
        if i == 0 or i == n - 1:
            results.append((float(grid[i]), float(masked[i]), False))
            continue
        x, fx = golden_section_max(f, float(grid[i - 1]), float(grid[i + 1]), tol,
                                   seed=(float(grid[i]), float(masked[i])))
        results.append((x, fx, True))
    top = max(r[1] for r in results)
    ties = [r for r in results if r[1] >= top - TIE_RTOL * abs(top)]
    # equal extrema at +-omega: report the positive frequency
    return max(ties, key=lambda r: r[0])


def optimize_spectrum(
    p: SystemParams,
    window: tuple[float, float] = DEFAULT_WINDOW,
    grid_n: int = DEFAULT_GRID_N,
    tol: float = DEFAULT_TOL,
) -> FrequencyOptimum:
    """Locate ``max lambda_plus`` and ``min lambda_minus`` over frequency.

    ``window`` is in units of ``gamma``.
    """
    if grid_n < 64:
        raise ValueError("grid_n must be at least 64")
    if not window[1] > window[0]:
        raise ValueError("empty frequency window")
    grid = _scan_grid(p, window, grid_n)
    den = np.abs(pole_denominator(p, grid)) ** 2
    singular = den <= POLE * p.gamma**4
    with np.errstate(divide="ignore", invalid="ignore"):
        lm, lp = spectrum_values(p, grid)
    lm = np.where(singular, np.nan, lm)
    lp = np.where(singular, np.nan, lp)
    near = bool(np.any(den < NEAR_SINGULAR * p.gamma**4))

    def f_plus(w):
        try:
            return scalar_spectrum(p, w)[1]
        except PoleError:
            return -math.inf

    def f_minus(w):
        try:
            return -scalar_spectrum(p, w)[0]
        except PoleError:
            return -math.inf

    step_tol = tol * p.gamma
    w_max, l_max, ok_max = _best_extremum(lp, grid, f_plus, step_tol)
    w_min, neg_l_min, ok_min = _best_extremum(-lm, grid, f_minus, step_tol)
    l_min = -neg_l_min
    return FrequencyOptimum(
        lambda_max=l_max,
        omega_max=w_max,
        lambda_min=l_min,
        omega_min=w_min,
        lambda_abs=max(abs(l_min), abs(l_max)),
        converged=ok_max and ok_min,
        near_singular=near,
    )


def oqfi_from_optimum(opt: FrequencyOptimum, state_kind: str, photons: float) -> float:
    """Frequency-optimised QFI: ``4 lambda_abs**2 nbar`` (coherent) or
    ``N**2 (lambda_max - lambda_min)**2`` (NOON)."""
    if state_kind == "coherent":
        return 4.0 * opt.lambda_abs**2 * photons
    if state_kind == "noon":
        return photons**2 * (opt.lambda_max - opt.lambda_min) ** 2
    raise ValueError(f"unknown state kind {state_kind!r}")


# --------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"axis {self.name!r} needs at least one point")
        if self.count > 1 and not self.hi >= self.lo:
            raise ValueError(f"axis {self.name!r}: hi < lo")

    @property
    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([float(self.lo)])
        return np.linspace(self.lo, self.hi, self.count)

    @classmethod
    def parse(cls, name: str, text: str) -> "Axis":
        """``"lo:hi:count"`` or a single number."""
        parts = text.split(":")
        if len(parts) == 1:
            v = float(parts[0])
            return cls(name, v, v, 1)
        if len(parts) != 3:
            raise ValueError(f"axis spec must be lo:hi:count, got {text!r}")
        return cls(name, float(parts[0]), float(parts[1]), int(parts[2]))


@dataclass
class SweepGrid:
    axes: tuple
    values: np.ndarray
    flags: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(a.count for a in self.axes)
        if self.values.shape != shape or self.flags.shape != shape:
            raise ValueError(f"grid shape {self.values.shape} does not match axes {shape}")

    def argmax(self):
        return np.unravel_index(np.nanargmax(self.values), self.values.shape)

    def __eq__(self, other):
        if not isinstance(other, SweepGrid):
            return NotImplemented
        return (
            tuple(self.axes) == tuple(other.axes)
            and np.array_equal(self.values, other.values, equal_nan=True)
            and np.array_equal(self.flags, other.flags)
            and self.meta == other.meta
        )


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("ES_QFI_THREADS")
    return max(1, int(env)) if env else 1


def _sweep_row(args):
    rho, phis, epsilon, gamma, kind, photons, window, grid_n = args
    vals, flags = [], []
    for phi in phis:
        p = SystemParams(rho=rho, phi=phi, epsilon=epsilon, gamma=gamma)
        opt = optimize_spectrum(p, window=window, grid_n=grid_n)
        vals.append(oqfi_from_optimum(opt, kind, photons))
        flags.append(opt.near_singular or not opt.converged)
    return vals, flags


def _map_rows(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def sweep_oqfi(
    state_kind: str,
    rho_axis: Axis,
    phi_axis: Axis,
    epsilon: float = 0.0,
    photons: float = 2,
    gamma: float = 1.0,
    window=DEFAULT_WINDOW,
    grid_n: int = DEFAULT_GRID_N,
    workers: int | None = None,
) -> SweepGrid:
    """o-QFI over a (rho, phi) grid; rows are rho, columns phi."""
    oqfi_from_optimum(FrequencyOptimum(0, 0, 0, 0, 0, True), state_kind, photons)  # validate kind
    phis = [float(x) for x in phi_axis.values]
    jobs = [(float(r), phis, epsilon, gamma, state_kind, photons, tuple(window), grid_n)
            for r in rho_axis.values]
    rows = _map_rows(_sweep_row, jobs, worker_count(workers))
    values = np.array([r[0] for r in rows], dtype=float).reshape(rho_axis.count, phi_axis.count)
    flags = np.array([r[1] for r in rows], dtype=bool).reshape(values.shape)
    meta = {"quantity": "oqfi", "state": state_kind, "photons": photons,
            "epsilon": epsilon, "gamma": gamma}
    return SweepGrid((rho_axis, phi_axis), values, flags, meta)


def landscape_all(
    phi: float,
    omega_axis: Axis,
    epsilon_axis: Axis,
    rho: float = 1.0,
    gamma: float = 1.0,
) -> SweepGrid:
    """``A_ll(omega, epsilon)``; rows are epsilon, columns omega.

    Cells within the pole guard are flagged; cells exactly on a pole hold NaN.
    """
    from .gwsm import _entries

    omegas = omega_axis.values * gamma
    values = np.empty((epsilon_axis.count, omega_axis.count))
    flags = np.zeros_like(values, dtype=bool)
    for i, eps in enumerate(epsilon_axis.values):
        p = SystemParams(rho=rho, phi=phi, epsilon=float(eps) * gamma, gamma=gamma)
        den = np.abs(pole_denominator(p, omegas)) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            a_ll = _entries(p, omegas)[0]
        values[i] = np.where(den <= POLE * gamma**4, np.nan, a_ll)
        flags[i] = den < NEAR_SINGULAR * gamma**4
    meta = {"quantity": "A_ll", "rho": rho, "phi": phi, "gamma": gamma}
    return SweepGrid((epsilon_axis, omega_axis), values, flags, meta)


def offsurface_scan(
    p: SystemParams,
    epsilon_axis: Axis,
    state_kind: str = "noon",
    photons: float = 1,
    window=DEFAULT_WINDOW,
    grid_n: int = DEFAULT_GRID_N,
) -> SweepGrid:
    """o-QFI as a function of epsilon at fixed (rho, phi)."""
    vals, flags = [], []
    for eps in epsilon_axis.values:
        q = p.with_(epsilon=float(eps) * p.gamma)
        opt = optimize_spectrum(q, window=window, grid_n=grid_n)
        vals.append(oqfi_from_optimum(opt, state_kind, photons))
        flags.append(opt.near_singular)
    meta = {"quantity": "oqfi", "state": state_kind, "photons": photons,
            "rho": p.rho, "phi": p.phi, "gamma": p.gamma}
    return SweepGrid((epsilon_axis,), np.array(vals), np.array(flags, dtype=bool), meta)


def increases_toward(eps: np.ndarray, values: np.ndarray, target: float) -> bool:
    """True when ``values`` grow strictly as ``eps`` approaches ``target``."""
    order = np.argsort(np.abs(np.asarray(eps) - target))[::-1]
    v = np.asarray(values)[order]
    return bool(np.all(np.diff(v) > 0))

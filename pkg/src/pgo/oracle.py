"""Independent grid-based eigensolvers: the repository's ground-truth generators.

Both solvers discretize R'' + (E - V - l(l+1)/r^2) R = 0 directly and know
nothing about the series machinery: a three-point finite-difference
Hamiltonian with Richardson extrapolation over two resolutions, and Numerov
shooting with log-derivative matching. Every quasi-exact result is validated
against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import GridTooCoarse, NoSignChange

RICHARDSON_TOL = 1e-2  # relative disagreement between resolutions that we accept
SHOOT_XTOL = 1e-10  # bisection width on E


@dataclass(frozen=True)
class GridProblem:
    """Radial problem on a uniform grid [r_min, r_max] with n_points nodes."""

    r_min: float
    r_max: float
    n_points: int
    potential: Callable[[float], float]
    l: int = 0
    boundary: str = "regular"

    def __post_init__(self):
        if self.r_min <= 0:
            raise ValueError("r_min must be positive")
        if self.r_max <= self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.n_points < 200:
            raise ValueError("n_points must be at least 200")
        if self.boundary not in ("regular", "irregular"):
            raise ValueError("boundary must be 'regular' or 'irregular'")
        if self.boundary == "irregular" and self.l != 0:
            raise ValueError("irregular boundary is supported for l = 0 only")

    def grid(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_points)


def default_grid_problem(potential, mu: float, l: int = 0, n_points: int = 2001):
    """Spec defaults: r_min = 1e-4, r_max = 12/sqrt(mu), regular boundary."""
    return GridProblem(1e-4, 12.0 / math.sqrt(mu), n_points, potential, l, "regular")


def _fd_once(p: GridProblem, count: int) -> np.ndarray:
    r = p.grid()
    h = r[1] - r[0]
    inner = r[:-1]  # unknowns live on nodes 0..n-2; Dirichlet wall at r_max
    v = np.array([p.potential(x) for x in inner])
    diag = 2.0 / h**2 + v + p.l * (p.l + 1) / inner**2
    off = -np.ones(len(inner) - 1) / h**2
    # ghost node at r_min - h from the r^(l+1) (regular) or r^0 (irregular)
    # behavior: R_ghost = ratio * R(r_min); folding it in keeps the matrix
    # tridiagonal and removes the O(r_min) wall error of a hard Dirichlet cut
    if p.boundary == "regular":
        ratio = (r[0] - h) / r[0] if p.l == 0 else 0.0
    else:
        ratio = 1.0
    diag[0] -= ratio / h**2
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))[0]


def fd_spectrum(p: GridProblem, count: int, tol: float = RICHARDSON_TOL) -> list[float]:
    """Lowest `count` levels, Richardson-extrapolated over h and h/2."""
    if count < 1:
        raise ValueError("count must be >= 1")
    coarse = _fd_once(p, count)
    fine = _fd_once(replace(p, n_points=2 * p.n_points - 1), count)
    gap = np.max(np.abs(fine - coarse) / np.maximum(1.0, np.abs(fine)))
    if gap > tol:
        raise GridTooCoarse(
            f"resolutions disagree by {gap:.3e} (> {tol:.1e}); refine the grid"
        )
    return [float(x) for x in (4.0 * fine - coarse) / 3.0]


def _numerov_sweep(f: np.ndarray, h: float, y0: float, y1: float) -> np.ndarray:
    """Integrate y'' = f y with the Numerov three-term recursion."""
    n = len(f)
    y = np.empty(n)
    y[0], y[1] = y0, y1
    h2 = h * h
    for i in range(1, n - 1):
        w_prev = (1.0 - h2 / 12.0 * f[i - 1]) * y[i - 1]
        w_curr = (1.0 - h2 / 12.0 * f[i]) * y[i]
        w_next = 2.0 * w_curr - w_prev + h2 * f[i] * y[i]
        y[i + 1] = w_next / (1.0 - h2 / 12.0 * f[i + 1])
        if abs(y[i + 1]) > 1e250:  # rescale to dodge overflow
            y[: i + 2] /= abs(y[i + 1])
    return y


def _match_discriminant(p: GridProblem, E: float, match: int) -> float:
    """Wronskian-like mismatch of outward and inward Numerov solutions."""
    r = p.grid()
    h = r[1] - r[0]
    f = np.array([p.potential(x) for x in r]) + p.l * (p.l + 1) / r**2 - E
    y_out = _numerov_sweep(f, h, r[0] ** (p.l + 1), r[1] ** (p.l + 1))
    y_in = _numerov_sweep(f[::-1], h, 0.0, 1e-12)[::-1]
    # cross-difference at the match index: continuous iff it vanishes
    num = y_out[match + 1] * y_in[match] - y_in[match + 1] * y_out[match]
    scale = (
        abs(y_out[match + 1] * y_in[match]) + abs(y_in[match + 1] * y_out[match])
    )
    return num / scale if scale > 0 else 0.0


def _match_index(p: GridProblem, E: float) -> int:
    """Grid index near the outer classical turning point of E (held fixed)."""
    r = p.grid()
    v = np.array([p.potential(x) for x in r]) + p.l * (p.l + 1) / r**2
    allowed = np.nonzero(v < E)[0]
    if len(allowed) == 0:
        return len(r) // 2
    idx = int(allowed[-1])
    return min(max(idx, 2), len(r) - 3)


def numerov_shoot(p: GridProblem, e_bracket: tuple[float, float]) -> float:
    """Bisect the matching discriminant inside the bracket to 1e-10."""
    lo, hi = e_bracket
    if hi <= lo:
        raise ValueError("bracket must be increasing")
    match = _match_index(p, 0.5 * (lo + hi))
    f_lo = _match_discriminant(p, lo, match)
    f_hi = _match_discriminant(p, hi, match)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise NoSignChange(
            f"discriminant keeps sign on [{lo}, {hi}]: {f_lo:.3e} .. {f_hi:.3e}"
        )
    while hi - lo > SHOOT_XTOL:
        mid = 0.5 * (lo + hi)
        f_mid = _match_discriminant(p, mid, match)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def numerov_wavefunction(p: GridProblem, E: float) -> np.ndarray:
    """Outward Numerov solution at E on the grid (for node-count cross-checks)."""
    r = p.grid()
    h = r[1] - r[0]
    f = np.array([p.potential(x) for x in r]) + p.l * (p.l + 1) / r**2 - E
    return _numerov_sweep(f, h, r[0] ** (p.l + 1), r[1] ** (p.l + 1))

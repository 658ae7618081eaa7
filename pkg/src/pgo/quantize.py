"""Series recurrence, banded quantization matrix and energy extraction.

Substituting R = exp[p] * sum_m a_m r^(2m+tau) into the radial equation
R'' + (E - V_trunc - l(l+1)/r^2) R = 0 and collecting the coefficient of
r^(tau+2n) gives one linear equation per n in the a_m. With the solved exponent
polynomial every coupling beyond offset s+2 cancels, leaving a matrix with one
superdiagonal, a diagonal that carries E with unit weight, and s+1 subdiagonal
bands (the lowest of which is the cancelled coupling, identically zero).

Two row sources exist. Derived mode (default, authoritative) computes each row
by direct series substitution. Paper mode transcribes the printed closed forms
for the diagonal and superdiagonal, which differ from the derived ones away
from n = 0; the discrepancies are reported, never averaged.

Energies: det M(E) = 0. Since M(E) = M(0) + E*I exactly, the levels are the
real eigenvalues of -M(0) (eigen-reformulation); a determinant sign-scan with
bisection verifies them independently.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .ansatz import ExponentPolynomial
from .errors import NotAnEigenvalue
from .potential import TruncatedPotential

logger = logging.getLogger(__name__)

IMAG_TOL = 1e-8  # complex eigenvalues of -M(0) below this are accepted as real
ROOT_XTOL = 1e-10  # bisection width for determinant roots
MATCH_TOL = 1e-8  # eigen vs scan agreement requirement


@dataclass(frozen=True)
class IndicialExponents:
    """Roots of tau(tau-1) = l(l+1), plus the published choice tau = l(l+1)."""

    regular: int
    irregular: int
    paper: int
    paper_is_root: bool


def indicial_exponents(l: int) -> IndicialExponents:
    """Both indicial roots (l+1 and -l) and the validity of tau = l(l+1)."""
    if l < 0:
        raise ValueError("l must be a nonnegative integer")
    paper = l * (l + 1)
    return IndicialExponents(
        regular=l + 1,
        irregular=-l,
        paper=paper,
        paper_is_root=paper * (paper - 1) == l * (l + 1),
    )


@dataclass(frozen=True)
class QuantizationContext:
    """Everything needed to build rows: potential, exponent, l, tau, dimension."""

    pot: TruncatedPotential
    exp_poly: ExponentPolynomial
    l: int
    tau: int
    dim: int
    mode: str = "derived"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.mode not in ("derived", "paper"):
            raise ValueError("mode must be 'derived' or 'paper'")
        if self.tau * (self.tau - 1) != self.l * (self.l + 1):
            raise ValueError(
                f"tau={self.tau} violates the indicial condition for l={self.l}"
            )

    @property
    def s(self) -> int:
        return self.pot.spec.s


@dataclass(frozen=True)
class BandedQuantizationMatrix:
    """Diagonal B_n, superdiagonal C_c (c = column), subdiagonal bands S_j.

    Band j holds (S_j)_c at matrix position [c+1+j, c]; upper bandwidth 1,
    lower bandwidth s+1. Only the diagonal depends on E, with unit weight.
    """

    dim: int
    diagonal: tuple[float, ...]
    superdiagonal: tuple[float, ...]
    sub_bands: tuple[tuple[float, ...], ...]

    def dense(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim))
        np.fill_diagonal(m, self.diagonal)
        for i, v in enumerate(self.superdiagonal):  # entry for column c = i+1
            m[i, i + 1] = v
        for j, band in enumerate(self.sub_bands):
            for c, v in enumerate(band):
                m[c + 1 + j, c] = v
        return m


def _derived_row(n: int, E: float, ctx: QuantizationContext) -> np.ndarray:
    """Row n by direct series substitution: coefficient of r^(tau+2n).

    For each m, the multiplier of a_m collects u'' and the centrifugal term
    (only at m = n+1), 2 p' u' and p'' u (series g and h), p'^2 u (series g^2),
    and (E - V) u; all series come from the series module.
    """
    tau, l, s = ctx.tau, ctx.l, ctx.s
    alpha = ctx.exp_poly.alphas
    g = alpha  # g[i-1] = alpha_{2i}: p' = r * sum g[i-1] (r^2)^(i-1)
    h = tuple((2 * i - 1) * alpha[i - 1] for i in range(1, s + 2))  # p'' entries
    g2 = ctx.exp_poly.prime_square_series().coeffs  # entry q-2 = beta_q
    taylor = ctx.pot.taylor.coeffs
    row = np.zeros(ctx.dim)
    if n + 1 < ctx.dim:
        row[n + 1] = (tau + 2 * (n + 1)) * (tau + 2 * (n + 1) - 1) - l * (l + 1)
    for m in range(0, n + 1):
        d = n - m
        acc = 0.0
        if d < len(g):
            acc += 2 * (2 * m + tau) * g[d] + h[d]
        if 1 <= d <= len(g2):
            acc += g2[d - 1]
        if d < len(taylor):
            acc -= taylor[d]
        if d == 0:
            acc += E
        row[m] = acc
    return row


def derive_recurrence_row(n: int, E: float, ctx: QuantizationContext) -> np.ndarray:
    """Authoritative row of the linear recurrence (direct substitution)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _derived_row(n, E, ctx)


def recurrence_row(n: int, E: float, ctx: QuantizationContext) -> np.ndarray:
    """Paper-mode row: diagonal and superdiagonal exactly as printed, S bands derived.

    Printed forms: B_n = (1+2 tau+2n) alpha_2 + E - lambda and, at column c,
    C_c = (tau+4c)(-1+tau+2c) - l(l+1). Both match the derived row at n = 0 only.
    """
    tau, l = ctx.tau, ctx.l
    row = _derived_row(n, E, ctx)
    row[n] = (1 + 2 * tau + 2 * n) * ctx.exp_poly.alpha(1) + E - ctx.pot.spec.lam
    if n + 1 < ctx.dim:
        c = n + 1
        row[c] = (tau + 4 * c) * (-1 + tau + 2 * c) - l * (l + 1)
    return row


def build_matrix(E: float, ctx: QuantizationContext) -> BandedQuantizationMatrix:
    """Assemble the banded matrix in the layout of the printed determinant."""
    rows = [
        recurrence_row(n, E, ctx) if ctx.mode == "paper" else _derived_row(n, E, ctx)
        for n in range(ctx.dim)
    ]
    s = ctx.s
    diagonal = tuple(rows[n][n] for n in range(ctx.dim))
    superdiagonal = tuple(rows[c - 1][c] for c in range(1, ctx.dim))
    sub_bands = tuple(
        tuple(rows[c + 1 + j][c] for c in range(ctx.dim - 1 - j))
        for j in range(min(s + 1, ctx.dim - 1))
    )
    return BandedQuantizationMatrix(ctx.dim, diagonal, superdiagonal, sub_bands)


def determinant(E: float, ctx: QuantizationContext) -> tuple[float, float]:
    """(sign, log-magnitude) of det M(E) by banded elimination with partial pivoting."""
    m = build_matrix(E, ctx).dense()
    return _banded_det(m, lower_bandwidth=ctx.s + 1, upper_bandwidth=1)


def _banded_det(m: np.ndarray, lower_bandwidth: int, upper_bandwidth: int):
    """Gaussian elimination restricted to the band; returns (sign, log|det|)."""
    a = m.copy()
    n = a.shape[0]
    sign = 1.0
    log_mag = 0.0
    # partial pivoting widens the upper band by at most lower_bandwidth
    ub = upper_bandwidth + lower_bandwidth
    for k in range(n):
        rows = range(k, min(n, k + lower_bandwidth + 1))
        piv = max(rows, key=lambda r: abs(a[r, k]))
        if a[piv, k] == 0.0:
            return 0.0, -math.inf
        if piv != k:
            hi = min(n, k + ub + 1)
            a[[k, piv], k:hi] = a[[piv, k], k:hi]
            sign = -sign
        pivot = a[k, k]
        if pivot < 0:
            sign = -sign
        log_mag += math.log(abs(pivot))
        hi = min(n, k + ub + 1)
        for r in range(k + 1, min(n, k + lower_bandwidth + 1)):
            if a[r, k] != 0.0:
                factor = a[r, k] / pivot
                a[r, k:hi] -= factor * a[k, k:hi]
    return sign, log_mag


@dataclass(frozen=True)
class Spectrum:
    """Sorted real levels with the verification scan's roots and any mismatches."""

    levels: tuple[float, ...]
    context: QuantizationContext
    method: str
    scan_levels: tuple[float, ...] = ()
    mismatches: tuple[float, ...] = ()
    discarded_complex: int = 0

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")


def eigen_levels(ctx: QuantizationContext) -> tuple[list[float], int]:
    """Real eigenvalues of -M(0); complex ones with |imag| >= tolerance are logged."""
    m0 = build_matrix(0.0, ctx).dense()
    ev = np.linalg.eigvals(-m0)
    real = []
    discarded = 0
    for z in ev:
        if abs(z.imag) < IMAG_TOL:
            real.append(float(z.real))
        else:
            discarded += 1
    if discarded:
        logger.info(
            "discarded %d complex eigenvalues of -M(0) (|imag| >= %g)",
            discarded,
            IMAG_TOL,
        )
    return sorted(real), discarded


def scan_levels(
    ctx: QuantizationContext, window: tuple[float, float], step: float
) -> list[float]:
    """Determinant sign-scan over the window plus bisection to 1e-10."""
    if step <= 0:
        raise ValueError("step must be positive")
    lo, hi = window
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise ValueError("scan window must be finite and increasing")
    n = int(math.ceil((hi - lo) / step)) + 1
    grid = [lo + i * step for i in range(n)]
    grid[-1] = min(grid[-1], hi)
    signs = [determinant(e, ctx)[0] for e in grid]
    roots = []
    for i in range(len(grid) - 1):
        s0, s1 = signs[i], signs[i + 1]
        if s0 == 0.0:
            roots.append(grid[i])
            continue
        if s0 * s1 < 0:
            a, b = grid[i], grid[i + 1]
            fa = s0
            while b - a > ROOT_XTOL:
                mid = 0.5 * (a + b)
                fm = determinant(mid, ctx)[0]
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))
    return roots


def find_levels(
    ctx: QuantizationContext,
    window: tuple[float, float] | None = None,
    step: float | None = None,
) -> Spectrum:
    """Levels by eigen-reformulation, verified by the determinant sign-scan.

    Both methods must agree to 1e-8 on every real simple root inside the scan
    window; a root seen by only one method is recorded in `mismatches` (and
    logged), never silently dropped.
    """
    eigen, discarded = eigen_levels(ctx)
    if window is None:
        if eigen:
            span = max(1.0, 0.05 * (max(eigen) - min(eigen)))
            window = (min(eigen) - span, max(eigen) + span)
        else:
            window = (-10.0, 10.0)
    if step is None:
        gaps = [b - a for a, b in zip(eigen, eigen[1:])]
        narrowest = min(gaps) if gaps else (window[1] - window[0])
        step = max(min(narrowest / 4.0, (window[1] - window[0]) / 50.0), 4 * ROOT_XTOL)
    scanned = scan_levels(ctx, window, step)

    # simple roots = eigenvalues isolated from their neighbours
    def is_simple(i):
        e = eigen[i]
        return all(abs(e - eigen[j]) > 1e-6 for j in range(len(eigen)) if j != i)

    mismatches = []
    for i, e in enumerate(eigen):
        if not (window[0] <= e <= window[1]) or not is_simple(i):
            continue
        if not any(abs(e - r) <= MATCH_TOL for r in scanned):
            mismatches.append(e)
    for r in scanned:
        if not any(abs(e - r) <= MATCH_TOL for e in eigen):
            mismatches.append(r)
    if mismatches:
        logger.warning("method mismatch on roots: %s", mismatches)
    merged = sorted(set(eigen) | set(scanned))
    deduped = []
    for e in merged:
        if not deduped or e - deduped[-1] > MATCH_TOL:
            deduped.append(e)
    return Spectrum(
        levels=tuple(deduped),
        context=ctx,
        method="eigen-reformulation",
        scan_levels=tuple(scanned),
        mismatches=tuple(mismatches),
        discarded_complex=discarded,
    )


def assert_eigenvalue(E: float, ctx: QuantizationContext, tol: float = 1e-6) -> None:
    """Raise NotAnEigenvalue unless det M(E) is compatible with a root nearby."""
    sign_lo = determinant(E - tol, ctx)[0]
    sign_hi = determinant(E + tol, ctx)[0]
    if sign_lo * sign_hi > 0:
        # no sign change: fall back on a smallest-singular-value test
        m = build_matrix(E, ctx).dense()
        smin = np.linalg.svd(m, compute_uv=False)[-1]
        scale = np.linalg.norm(m)
        if smin > 1e-8 * max(scale, 1.0):
            raise NotAnEigenvalue(f"E={E} is not a root of the quantization determinant")

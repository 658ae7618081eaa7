"""Eigenfunction construction, normalization and verification.

psi(r) = norm_constant^-1 * (sum_m a_m r^(2m+tau)) * r^-1 * exp[p(r)]

The series coefficients are the null vector of the quantization matrix at an
energy root, computed by banded elimination with one free column (forward
recursion of the recurrence is numerically unstable for alternating bands and
is kept only as a cross-check for small dimensions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

from .ansatz import ExponentPolynomial
from .errors import NonNormalizable, NotAnEigenvalue
from .potential import TruncatedPotential
from .quantize import QuantizationContext, build_matrix, derive_recurrence_row
from .series import series_eval

NULLVEC_TOL = 1e-8  # ||M a|| / ||a|| acceptance for a null vector
QUAD_EPSREL = 1e-11  # adaptive quadrature relative target
NODE_EPS = 1e-6  # left end of the node-counting interval


@dataclass(frozen=True)
class EigenPair:
    """One quantized level with its series coefficients and normalization."""

    energy: float
    a_coeffs: tuple[float, ...]
    tau: int
    exp_poly: ExponentPolynomial
    l: int
    pot: TruncatedPotential
    norm_constant: float = 1.0

    def __post_init__(self):
        if self.norm_constant <= 0:
            raise ValueError("norm_constant must be positive")


def solve_coefficients(E: float, ctx: QuantizationContext) -> tuple[float, ...]:
    """Null vector of M(E) via banded elimination; a_0 fixed positive (a_0 = 1)."""
    m = build_matrix(E, ctx).dense()
    dim = ctx.dim
    if dim == 1:
        if abs(m[0, 0]) > NULLVEC_TOL * max(1.0, abs(E)):
            raise NotAnEigenvalue(f"B_0({E}) = {m[0, 0]:.3e} is not ~0")
        return (1.0,)
    u = m.copy()
    # forward elimination with partial pivoting (row swaps only)
    for k in range(dim - 1):
        piv = k + int(np.argmax(np.abs(u[k:, k])))
        if piv != k:
            u[[k, piv]] = u[[piv, k]]
        if u[k, k] != 0.0:
            factors = u[k + 1 :, k] / u[k, k]
            u[k + 1 :, k:] -= np.outer(factors, u[k, k:])
    k_free = int(np.argmin(np.abs(np.diag(u))))
    a = np.zeros(dim)
    a[k_free] = 1.0
    for i in range(k_free - 1, -1, -1):
        a[i] = -np.dot(u[i, i + 1 :], a[i + 1 :]) / u[i, i]
    resid = np.linalg.norm(m @ a) / np.linalg.norm(a)
    scale = np.linalg.norm(m) / math.sqrt(dim)
    if resid > NULLVEC_TOL * max(scale, 1.0):
        raise NotAnEigenvalue(
            f"E={E}: null-vector residual {resid:.3e} exceeds tolerance "
            f"{NULLVEC_TOL * max(scale, 1.0):.3e}"
        )
    if abs(a[0]) > 1e-12 * np.max(np.abs(a)):
        a = a / a[0]
    elif a[np.argmax(np.abs(a))] < 0:
        a = -a
    return tuple(float(x) for x in a)


def forward_recursion_coefficients(E: float, ctx: QuantizationContext) -> tuple[float, ...]:
    """a_0..a_{dim-1} by forward recursion; unstable, cross-check use only."""
    wide = replace(ctx, dim=ctx.dim + 1)
    a = np.zeros(ctx.dim + 1)
    a[0] = 1.0
    for n in range(ctx.dim - 1):
        row = derive_recurrence_row(n, E, wide)
        a[n + 1] = -np.dot(row[: n + 1], a[: n + 1]) / row[n + 1]
    return tuple(float(x) for x in a[: ctx.dim])


def make_eigenpair(ctx: QuantizationContext, E: float) -> EigenPair:
    """Assemble the eigenpair for a spectrum level (unnormalized)."""
    return EigenPair(
        energy=E,
        a_coeffs=solve_coefficients(E, ctx),
        tau=ctx.tau,
        exp_poly=ctx.exp_poly,
        l=ctx.l,
        pot=ctx.pot,
    )


def _series_part(pair: EigenPair, r):
    """u(r) = sum a_m r^(2m+tau)."""
    rr = np.asarray(r, dtype=float)
    x = rr * rr
    acc = np.zeros_like(x)
    for c in reversed(pair.a_coeffs):
        acc = acc * x + c
    return acc * rr ** pair.tau


def eval_psi(pair: EigenPair, r):
    """psi(r) for r > 0 (scalar or array)."""
    rr = np.asarray(r, dtype=float)
    out = (
        _series_part(pair, rr)
        / rr
        * np.exp(pair.exp_poly.p(rr))
        / pair.norm_constant
    )
    return out if out.ndim else float(out)


def _norm_integrand(pair: EigenPair):
    def f(r):
        u = _series_part(pair, r)
        return (u * math.exp(pair.exp_poly.p(r)) / pair.norm_constant) ** 2

    return f


def _integration_cut(pair: EigenPair) -> tuple[float, list[float], float]:
    """(r_cut, interior split points, peak value) for the norm integrand."""
    f = _norm_integrand(pair)
    # stationary points of the exponent: positive roots of p'(r)/r in x = r^2
    g = list(reversed(pair.exp_poly.alphas))
    roots = np.roots(g) if len(g) > 1 else np.array([])
    splits = sorted(
        float(math.sqrt(z.real))
        for z in roots
        if abs(z.imag) < 1e-12 and z.real > 0
    )
    r_hi = max([2.0] + [2.5 * s for s in splits])
    # expand until the integrand has decayed below 1e-18 of its peak
    for _ in range(200):
        grid = np.linspace(1e-9, r_hi, 800)
        vals = np.array([f(r) for r in grid])
        peak = vals.max()
        tail = peak * 1e-18
        if vals[-1] < tail and np.isfinite(peak):
            below = np.nonzero(vals > tail)[0]
            r_cut = grid[min(below[-1] + 1, len(grid) - 1)]
            return float(r_cut), [s for s in splits if s < r_cut], float(peak)
        r_hi *= 1.5
    raise NonNormalizable("norm integrand does not decay")


def normalize(pair: EigenPair) -> EigenPair:
    """Rescale so the radial norm integral of psi^2 r^2 equals one.

    Adaptive quadrature to relative 1e-10 with splits at the exponent's
    stationary points; the tail beyond r_cut is bounded analytically by the
    local exponential decay rate and checked to be negligible.
    """
    if 2 * pair.tau <= -1:
        raise NonNormalizable(
            f"tau={pair.tau}: |psi|^2 r^2 ~ r^(2 tau) is not integrable at the origin"
        )
    f = _norm_integrand(pair)
    r_cut, splits, _ = _integration_cut(pair)
    total, err = quad(
        f, 0.0, r_cut, points=splits or None, limit=500, epsabs=0.0, epsrel=QUAD_EPSREL
    )
    if not (total > 0 and math.isfinite(total)):
        raise NonNormalizable(f"norm integral evaluated to {total}")
    # tail bound: integrand(r_cut) / |d log integrand / dr|, decay dominated by exp(2p)
    decay = abs(2 * pair.exp_poly.p_prime(r_cut))
    tail_bound = f(r_cut) / decay if decay > 0 else math.inf
    if tail_bound > 1e-12 * total:
        raise NonNormalizable("tail bound beyond r_cut is not negligible")
    return replace(pair, norm_constant=pair.norm_constant * math.sqrt(total))


def count_nodes(pair: EigenPair, r_max: float) -> int:
    """Sign changes of psi on (1e-6, r_max)."""
    grid = np.linspace(NODE_EPS, r_max, 4001)
    vals = eval_psi(pair, grid)
    thresh = 1e-12 * np.max(np.abs(vals))
    count = 0
    last = 0.0
    for v in vals:
        if abs(v) <= thresh:
            continue
        s = math.copysign(1.0, v)
        if last != 0.0 and s != last:
            count += 1
        last = s
    return count


def ode_residual(pair: EigenPair, grid) -> float:
    """Max |psi'' + (2/r) psi' + (E - V_trunc - l(l+1)/r^2) psi| over the grid,
    relative to the grid maximum of |E psi|; derivatives by 5-point differences
    of eval_psi."""
    rs = np.asarray(grid, dtype=float)
    h = 2e-3
    offs = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h
    psi = np.array([[eval_psi(pair, r + o) for o in offs] for r in rs])
    d1 = (psi[:, 0] - 8 * psi[:, 1] + 8 * psi[:, 3] - psi[:, 4]) / (12 * h)
    d2 = (-psi[:, 0] + 16 * psi[:, 1] - 30 * psi[:, 2] + 16 * psi[:, 3] - psi[:, 4]) / (
        12 * h * h
    )
    v = np.array([series_eval(pair.pot.taylor, r) for r in rs])
    centrifugal = pair.l * (pair.l + 1) / rs**2
    resid = d2 + 2.0 / rs * d1 + (pair.energy - v - centrifugal) * psi[:, 2]
    scale = np.max(np.abs(pair.energy * psi[:, 2]))
    return float(np.max(np.abs(resid)) / max(scale, 1e-30))

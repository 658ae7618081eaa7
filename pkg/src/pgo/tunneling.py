"""Barrier transmission for meta-stable states: WKB integral and step-chopped
Gamow factors.

Works in MeV and fm through a UnitSystem; by default the barrier is the exact
(un-truncated) potential, optionally rescaled by a caller-supplied energy
factor. The step scheme partitions the classically forbidden interval into
steps of length L (last step truncated), samples the barrier at step midpoints,
and composes per-step factors

    f_i = 16 (E/V0i) (1 - E/V0i) exp(-2 l_i sqrt((V0i - E)/(hbar^2/2m)))

both as a sum (the published convention) and as a product (sequential-barrier
composition); both are reported side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .errors import NoBarrier, StepTooLarge
from .potential import PotentialSpec, eval_potential, truncated_taylor
from .series import series_eval

TURN_XTOL = 1e-10  # bisection width (fm) for the turning points
ACTION_EPSREL = 1e-10


@dataclass(frozen=True)
class UnitSystem:
    """hbar^2/2m in MeV fm^2; lengths in fm, energies in MeV."""

    hbar2_over_2m: float = 20.735

    def __post_init__(self):
        if self.hbar2_over_2m <= 0:
            raise ValueError("hbar2_over_2m must be positive")


@dataclass(frozen=True)
class TransmissionProfile:
    """Turning points, step decomposition and the transmission coefficients."""

    energy: float
    r1: float
    r2: float
    step_length: float
    steps: tuple[tuple[float, float, float], ...]  # (r_mid, V0i, width)
    barrier_max: float
    barrier_r: float
    t_wkb: float
    t_sum: float
    t_prod: float
    action_sum: float  # sum_i 2 l_i sqrt((V0i - E)/kappa), the step-summed exponent


def potential_callable(
    spec: PotentialSpec, form: str = "exact", scale: float = 1.0
) -> Callable[[float], float]:
    """Barrier V(r) in MeV: scaled exact potential or its truncated Taylor."""
    if form == "exact":
        return lambda r: scale * eval_potential(spec, r)
    if form == "truncated":
        taylor = truncated_taylor(spec).taylor
        return lambda r: scale * series_eval(taylor, r)
    raise ValueError("form must be 'exact' or 'truncated'")


def barrier_maximum(
    v: Callable[[float], float], r_hi: float, n_scan: int = 4000
) -> tuple[float, float]:
    """(r*, V(r*)) of the highest interior maximum on (0, r_hi], by scan + refine."""
    rs = [r_hi * (i + 1) / n_scan for i in range(n_scan)]
    vals = [v(r) for r in rs]
    idx = max(range(1, n_scan - 1), key=lambda i: vals[i])
    lo, hi = rs[idx - 1], rs[idx + 1]
    for _ in range(200):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if v(m1) < v(m2):
            lo = m1
        else:
            hi = m2
        if hi - lo < 1e-13 * max(1.0, hi):
            break
    r_star = 0.5 * (lo + hi)
    return r_star, v(r_star)


def _bisect_crossing(v, E, lo, hi):
    f_lo = v(lo) - E
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        f_mid = v(mid) - E
        if f_mid == 0.0:
            return mid
        if (f_lo < 0) == (f_mid < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo < TURN_XTOL:
            break
    return 0.5 * (lo + hi)


def turning_points(
    spec: PotentialSpec,
    E: float,
    units: UnitSystem,
    form: str = "exact",
    scale: float = 1.0,
    r_hi: float | None = None,
) -> tuple[float, float]:
    """The two roots of V(r) = E bracketing the barrier, to 1e-10 fm."""
    v = potential_callable(spec, form, scale)
    if r_hi is None:
        r_hi = 12.0 / math.sqrt(spec.mu)
    r_star, v_max = barrier_maximum(v, r_hi)
    if E >= v_max:
        raise NoBarrier(
            f"E={E} is at or above the barrier maximum {v_max}: transmission is 1"
        )
    n = 2000
    inner = [r_star * i / n for i in range(1, n + 1)]
    below = [r for r in inner if v(r) < E]
    if not below:
        raise NoBarrier(f"no inner region with V < E={E} found below the barrier")
    r1 = _bisect_crossing(v, E, max(below), r_star)
    outer_lo, outer_hi = r_star, r_hi
    while v(outer_hi) > E:
        outer_hi *= 1.5
        if outer_hi > 1e6:
            raise NoBarrier("potential never falls back below E")
    r2 = _bisect_crossing(v, E, outer_lo, outer_hi)
    return r1, r2


def wkb_transmission(
    spec: PotentialSpec,
    E: float,
    units: UnitSystem,
    form: str = "exact",
    scale: float = 1.0,
) -> float:
    """T = exp(-2 int sqrt((V-E)/(hbar^2/2m)) dr) between the turning points.

    The integrand has inverse-square-root endpoints; substituting r = r1 + t^2
    (resp. r2 - t^2) renders each half smooth before adaptive quadrature.
    """
    v = potential_callable(spec, form, scale)
    try:
        r1, r2 = turning_points(spec, E, units, form, scale)
    except NoBarrier:
        return 1.0
    action = wkb_action(v, E, r1, r2, units)
    return math.exp(-2.0 * action)


def wkb_action(v, E: float, r1: float, r2: float, units: UnitSystem) -> float:
    """int_{r1}^{r2} sqrt((V(r)-E)/(hbar^2/2m)) dr with endpoint substitution."""
    kappa2 = units.hbar2_over_2m
    mid = 0.5 * (r1 + r2)

    def left(t):
        return 2.0 * t * math.sqrt(max(v(r1 + t * t) - E, 0.0) / kappa2)

    def right(t):
        return 2.0 * t * math.sqrt(max(v(r2 - t * t) - E, 0.0) / kappa2)

    s_left = quad(left, 0.0, math.sqrt(mid - r1), limit=200, epsrel=ACTION_EPSREL)[0]
    s_right = quad(right, 0.0, math.sqrt(r2 - mid), limit=200, epsrel=ACTION_EPSREL)[0]
    return s_left + s_right


def gamow_steps(
    spec: PotentialSpec,
    E: float,
    L: float,
    units: UnitSystem,
    form: str = "exact",
    scale: float = 1.0,
) -> TransmissionProfile:
    """Step-chopped transmission profile between the turning points."""
    if L <= 0:
        raise ValueError("step length must be positive")
    v = potential_callable(spec, form, scale)
    r1, r2 = turning_points(spec, E, units, form, scale)
    r_hi = 12.0 / math.sqrt(spec.mu)
    barrier_r, barrier_v = barrier_maximum(v, max(r_hi, r2 * 1.2))
    edges = [r1]
    while edges[-1] + L < r2 - 1e-12:
        edges.append(edges[-1] + L)
    edges.append(r2)
    if len(edges) - 1 < 2:
        raise StepTooLarge(
            f"only {len(edges)-1} step(s) of length {L} fit in [{r1:.4f}, {r2:.4f}]"
        )
    steps = []
    t_sum = 0.0
    t_prod = 1.0
    action_sum = 0.0
    for a, b in zip(edges, edges[1:]):
        r_mid = 0.5 * (a + b)
        v0 = v(r_mid)
        width = b - a
        steps.append((r_mid, v0, width))
        kappa = math.sqrt(max(v0 - E, 0.0) / units.hbar2_over_2m)
        action_sum += 2.0 * width * kappa
        pref = 16.0 * (E / v0) * (1.0 - E / v0) if v0 != 0 else 0.0
        f = pref * math.exp(-2.0 * width * kappa) if pref > 0 else 0.0
        t_sum += f
        t_prod *= f
    t_wkb = math.exp(-2.0 * wkb_action(v, E, r1, r2, units))
    return TransmissionProfile(
        energy=E,
        r1=r1,
        r2=r2,
        step_length=L,
        steps=tuple(steps),
        barrier_max=barrier_v,
        barrier_r=barrier_r,
        t_wkb=t_wkb,
        t_sum=t_sum,
        t_prod=t_prod,
        action_sum=action_sum,
    )

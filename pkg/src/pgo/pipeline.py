"""Shared glue between the config layer and the numerical modules.

Holds the level-acceptance rule used by the spectrum table and the validation
suite: a quasi-exact root is physically comparable with the grid oracle only if
it is real, simple, above the minimum of the truncated potential and below its
barrier top (the outermost interior local maximum). Truncated potentials with a
positive leading tail coefficient are monotone confining and have no barrier;
in that case no level is gated through, and all roots are still reported as
findings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ansatz import ExponentPolynomial, solve_exponent
from .config import RunConfig
from .errors import ConfigError
from .oracle import GridProblem, fd_spectrum
from .potential import PotentialSpec, TruncatedPotential, truncated_taylor
from .quantize import QuantizationContext, Spectrum, find_levels, indicial_exponents
from .series import series_eval


def resolve_tau(l: int, tau_mode: str) -> int:
    roots = indicial_exponents(l)
    if tau_mode == "regular":
        return roots.regular
    if tau_mode == "irregular":
        return roots.irregular
    if tau_mode == "paper":
        if not roots.paper_is_root:
            raise ConfigError(
                "paper tau-mode is only indicially valid for l in {0, 1}",
                field="tau_mode",
            )
        return roots.paper
    raise ConfigError(f"unknown tau_mode '{tau_mode}'", field="tau_mode")


@dataclass(frozen=True)
class Pipeline:
    """Potential, exponent and quantization context resolved from a config."""

    config: RunConfig
    pot: TruncatedPotential
    exp_poly: ExponentPolynomial
    ctx: QuantizationContext

    def spectrum(self) -> Spectrum:
        window = None
        step = self.config.e_step
        if self.config.e_min is not None:
            window = (self.config.e_min, self.config.e_max)
        return find_levels(self.ctx, window=window, step=step)


def build_pipeline(cfg: RunConfig) -> Pipeline:
    """Resolve the full quasi-exact pipeline; raises ComputationError subclasses."""
    pot = truncated_taylor(cfg.potential_spec())
    exp_poly = solve_exponent(pot)
    tau = resolve_tau(cfg.l, cfg.tau_mode)
    ctx = QuantizationContext(pot=pot, exp_poly=exp_poly, l=cfg.l, tau=tau, dim=cfg.dim)
    return Pipeline(config=cfg, pot=pot, exp_poly=exp_poly, ctx=ctx)


def potential_extent(spec: PotentialSpec) -> float:
    """Default outer radius for scans and tables."""
    return 12.0 / math.sqrt(spec.mu)


def barrier_top(pot: TruncatedPotential) -> tuple[float, float] | None:
    """(r_b, V_b) of the outermost interior local maximum of V_trunc, or None."""
    r_hi = potential_extent(pot.spec)
    rs = np.linspace(1e-6, r_hi, 6000)
    vals = np.array([series_eval(pot.taylor, r) for r in rs])
    best = None
    for i in range(1, len(rs) - 1):
        if vals[i] > vals[i - 1] and vals[i] > vals[i + 1]:
            best = i
    if best is None:
        return None
    lo, hi = rs[best - 1], rs[best + 1]
    for _ in range(120):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if series_eval(pot.taylor, m1) < series_eval(pot.taylor, m2):
            lo = m1
        else:
            hi = m2
    r_b = 0.5 * (lo + hi)
    return r_b, series_eval(pot.taylor, r_b)


def potential_minimum(pot: TruncatedPotential) -> float:
    """Minimum of V_trunc on [0, barrier or extent]."""
    top = barrier_top(pot)
    r_hi = top[0] if top is not None else potential_extent(pot.spec)
    rs = np.linspace(0.0, r_hi, 4000)
    return float(min(series_eval(pot.taylor, r) for r in rs))


def accepted_levels(spectrum: Spectrum, pot: TruncatedPotential) -> list[float]:
    """Roots gated by the physical window [min V, barrier top]."""
    top = barrier_top(pot)
    if top is None:
        return []
    v_min = potential_minimum(pot)
    out = []
    levels = spectrum.levels
    for i, e in enumerate(levels):
        simple = all(abs(e - levels[j]) > 1e-6 for j in range(len(levels)) if j != i)
        if simple and v_min <= e <= top[1]:
            out.append(e)
    return out


def oracle_domain(pot: TruncatedPotential, e_top: float) -> tuple[float, float]:
    """FD domain: confined region, clipped before huge polynomial growth.

    For barrier potentials the box ends at the barrier radius; for monotone
    confining ones it ends where V_trunc comfortably exceeds the target energy.
    """
    top = barrier_top(pot)
    if top is not None:
        return 1e-4, top[0]
    r_hi = potential_extent(pot.spec)
    margin = 10.0 + 0.5 * abs(e_top)
    rs = np.linspace(0.05, r_hi, 4000)
    for r in rs:
        if series_eval(pot.taylor, r) >= e_top + margin and r > 0.5:
            # pad past the crossing so the forbidden region can damp the states
            return 1e-4, float(min(1.4 * r + 0.5, r_hi))
    return 1e-4, float(r_hi)


def oracle_levels_for(pot: TruncatedPotential, l: int, count: int,
                      n_points: int = 2001) -> list[float]:
    """FD levels of V_trunc on an adaptively extended confined domain."""
    e_top = 0.0
    r_min, r_max = oracle_domain(pot, e_top)
    for _ in range(12):
        problem = GridProblem(r_min, r_max, n_points,
                              lambda r: series_eval(pot.taylor, r), l, "regular")
        levels = fd_spectrum(problem, count)
        e_top = levels[-1]
        new_min, new_max = oracle_domain(pot, e_top)
        if new_max <= r_max * 1.05:
            return levels
        r_min, r_max = new_min, new_max
    return levels

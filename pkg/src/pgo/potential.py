"""The pseudo-Gaussian potential family.

V(r) = (lambda + sum_{k=1..s} C_k r^(2k)) * exp(-mu r^2),  C_k = (lambda+k) mu^k / k!

Closed-form evaluation is exact (no truncation). The truncated Taylor expansion
through order N is built by the exact Cauchy product of the polynomial prefactor
with the Gaussian series; its entries 2..s vanish identically (the gap property),
so near the origin the potential looks like the harmonic reference lambda + mu r^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .series import (
    EvenSeries,
    exact_cauchy,
    exact_gaussian,
    gaussian_series,
    series_eval,
    series_mul,
)


@dataclass(frozen=True)
class PotentialSpec:
    """Parameter set: depth lambda, width mu > 0, order s >= 1, truncation N."""

    lam: float
    mu: float
    s: int
    n_trunc: int | None = None

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if self.s < 1:
            raise ValueError("s must be a positive integer (the s=0 Gaussian is excluded)")
        default = 2 * self.s + 1
        if self.n_trunc is None:
            object.__setattr__(self, "n_trunc", default)
        else:
            if self.n_trunc < self.s + 1:
                raise ValueError("n_trunc must be at least s+1")
            if self.n_trunc != default:
                warnings.warn(
                    f"n_trunc={self.n_trunc} differs from 2s+1={default}; the exponent "
                    "system only closes at 2s+1",
                    stacklevel=2,
                )


@dataclass(frozen=True)
class TruncatedPotential:
    """A potential spec together with its Taylor series through order n_trunc."""

    spec: PotentialSpec
    taylor: EvenSeries

    def __post_init__(self):
        if len(self.taylor) != self.spec.n_trunc + 1:
            raise ValueError("taylor length must equal n_trunc + 1")


def pgo_polynomial_coefficients(lam: float, mu: float, s: int) -> list[float]:
    """Prefactor coefficients C_1..C_s with C_k = (lam+k) mu^k / k!."""
    if s < 1:
        raise ValueError("s must be >= 1")
    out = []
    fact = 1.0
    for k in range(1, s + 1):
        fact *= k
        out.append((lam + k) * mu**k / fact)
    return out


def eval_potential(spec: PotentialSpec, r: float) -> float:
    """Closed-form value of the potential at radius r (no truncation)."""
    x = r * r
    acc = 0.0
    for c in reversed(pgo_polynomial_coefficients(spec.lam, spec.mu, spec.s)):
        acc = acc * x + c
    return (spec.lam + acc * x) * math.exp(-spec.mu * x)


def truncated_taylor(spec: PotentialSpec) -> TruncatedPotential:
    """Taylor expansion through r^(2 n_trunc) via the exact series product."""
    prefactor = EvenSeries(
        (spec.lam, *pgo_polynomial_coefficients(spec.lam, spec.mu, spec.s))
    )
    gauss = gaussian_series(spec.mu, spec.n_trunc)
    return TruncatedPotential(spec, series_mul(prefactor, gauss, spec.n_trunc))


def harmonic_reference(spec: PotentialSpec) -> EvenSeries:
    """The harmonic comparison potential lambda + mu r^2."""
    return EvenSeries((spec.lam, spec.mu))


def eval_truncated(pot: TruncatedPotential, r: float) -> float:
    """Value of the truncated Taylor polynomial at radius r."""
    return series_eval(pot.taylor, r)


def exact_taylor_coefficients(lam: Fraction, mu: Fraction, s: int, n: int) -> list[Fraction]:
    """Taylor coefficients in exact rational arithmetic (test oracle)."""
    poly = [Fraction(lam)]
    fact = 1
    for k in range(1, s + 1):
        fact *= k
        poly.append((Fraction(lam) + k) * Fraction(mu) ** k / fact)
    return exact_cauchy(poly, exact_gaussian(Fraction(mu), n), n)

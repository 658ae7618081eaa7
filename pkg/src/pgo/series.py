"""Truncated even-power series arithmetic.

An EvenSeries stores the coefficients of sum_k c_k r^(2k) as a dense vector;
entry k multiplies r^(2k). All arithmetic carries an explicit output truncation
order, and results never silently extend it. Odd powers never occur in the
potentials or exponent polynomials handled here.

The same arithmetic is offered on plain coefficient lists of
`fractions.Fraction` (exact_* helpers) so tests can cross-check the float path
against exact rational results; alternating Gaussian series are prone to
cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class EvenSeries:
    """Coefficients of a truncated series in r^2; entry k multiplies r^(2k)."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("EvenSeries needs at least one coefficient")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise ValueError("EvenSeries coefficients must be finite")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> float:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)


def series_add(a: EvenSeries, b: EvenSeries) -> EvenSeries:
    """Entrywise sum; the shorter operand is zero-padded."""
    n = max(len(a), len(b))
    out = [0.0] * n
    for i, c in enumerate(a.coeffs):
        out[i] += c
    for i, c in enumerate(b.coeffs):
        out[i] += c
    return EvenSeries(tuple(out))


def series_mul(a: EvenSeries, b: EvenSeries, out_order: int) -> EvenSeries:
    """Cauchy product truncated at out_order: c_k = sum_{i+j=k} a_i b_j."""
    if out_order < 0:
        raise ValueError("out_order must be >= 0")
    return EvenSeries(tuple(exact_cauchy(a.coeffs, b.coeffs, out_order)))


def gaussian_series(mu: float, out_order: int) -> EvenSeries:
    """Coefficients of exp(-mu r^2): entry k equals (-mu)^k / k!."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    return EvenSeries(tuple(exact_gaussian(mu, out_order)))


def series_eval(a: EvenSeries, r: float) -> float:
    """Horner evaluation in the variable r^2."""
    x = r * r
    acc = 0.0
    for c in reversed(a.coeffs):
        acc = acc * x + c
    return acc


def series_derivative_as_radial(a: EvenSeries) -> tuple[float, ...]:
    """d/dr of sum c_k r^(2k): coefficient of r^(2k-1) is 2k*c_k, k = 1..order."""
    return tuple(2 * k * a.coeffs[k] for k in range(1, len(a)))


def exact_cauchy(a: Sequence, b: Sequence, out_order: int):
    """Cauchy product on plain coefficient lists (float or Fraction entries).

    Float sums go through math.fsum: correctly rounded, hence independent of
    operand order (bitwise-commutative product) and robust against the
    cancellation in alternating Gaussian series.
    """
    out = []
    for k in range(out_order + 1):
        terms = [
            a[i] * b[k - i]
            for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1)
        ]
        if not terms:
            out.append(0.0)
        elif all(isinstance(t, float) for t in terms):
            out.append(math.fsum(terms))
        else:
            acc = terms[0]
            for t in terms[1:]:
                acc += t
            out.append(acc)
    return out


def exact_gaussian(mu, out_order: int):
    """exp(-mu r^2) coefficients on plain numbers; exact when mu is a Fraction."""
    out = [mu * 0 + 1]  # unit of the operand's type
    for k in range(1, out_order + 1):
        out.append(out[-1] * (-mu) / k)
    return out

"""Exponent polynomial of the wave-function ansatz.

The radial solution is written R(r) = exp[p(r)] * sum_n a_n r^(2n+tau) with
p(r) = sum_{n=1..s+1} alpha_{2n} r^(2n) / (2n). The alphas are fixed by matching
the coefficients of p'(r)^2 against the truncated potential tail:

    sum_{i+j=k+1, 1<=i,j<=s+1} alpha_{2i} alpha_{2j} = Chat_k,  k = s+1..2s+1

an upper-triangular cascade: the k = 2s+1 equation gives
alpha_{2(s+1)} = -sqrt(Chat_{2s+1}) (negative branch, so exp[p] decays), and each
following equation is linear in the next unknown with pivot 2 alpha_{2(s+1)}.
This cancels every coupling beyond the matrix band in the series recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TailNotPositive, WrongTruncation
from .potential import TruncatedPotential
from .series import EvenSeries, series_mul


@dataclass(frozen=True)
class ExponentPolynomial:
    """alphas = (alpha_2, alpha_4, ..., alpha_{2(s+1)}); p(r) = sum alpha_{2n} r^(2n)/(2n)."""

    alphas: tuple[float, ...]
    s: int

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if len(self.alphas) != self.s + 1:
            raise ValueError("need exactly s+1 alpha coefficients")

    def alpha(self, i: int) -> float:
        """alpha_{2i} for i = 1..s+1; zero outside that range."""
        if 1 <= i <= self.s + 1:
            return self.alphas[i - 1]
        return 0.0

    def p_coefficients(self) -> tuple[float, ...]:
        """Coefficients of r^(2n) in p(r), n = 1..s+1 (alpha_{2n} / (2n))."""
        return tuple(a / (2 * (i + 1)) for i, a in enumerate(self.alphas))

    def p(self, r):
        x = np.asarray(r, dtype=float) ** 2
        acc = np.zeros_like(x)
        for c in reversed(self.p_coefficients()):
            acc = (acc + c) * x
        return acc if acc.ndim else float(acc)

    def p_prime(self, r):
        """p'(r) = sum alpha_{2n} r^(2n-1)."""
        rr = np.asarray(r, dtype=float)
        x = rr * rr
        acc = np.zeros_like(x)
        for a in reversed(self.alphas):
            acc = acc * x + a
        out = acc * rr
        return out if out.ndim else float(out)

    def p_double_prime(self, r):
        """p''(r) = sum (2n-1) alpha_{2n} r^(2n-2)."""
        x = np.asarray(r, dtype=float) ** 2
        acc = np.zeros_like(x)
        for i in range(self.s + 1, 0, -1):
            acc = acc * x + (2 * i - 1) * self.alpha(i)
        return acc if acc.ndim else float(acc)

    def prime_square_series(self) -> EvenSeries:
        """p'(r)^2 = r^2 * g(r^2)^2 with g entries alpha_{2(i+1)}; returns g^2.

        Entry q-2 of the result is beta_q = sum_{i+j=q} alpha_{2i} alpha_{2j},
        the coefficient of r^(2q-2) in p'(r)^2, q = 2..2s+2.
        """
        g = EvenSeries(self.alphas)
        return series_mul(g, g, 2 * self.s)


def solve_exponent(pot: TruncatedPotential) -> ExponentPolynomial:
    """Solve the tail-matching cascade for the exponent polynomial."""
    s = pot.spec.s
    if pot.spec.n_trunc != 2 * s + 1:
        raise WrongTruncation(
            f"exponent system closes only for n_trunc = 2s+1 = {2*s+1}, "
            f"got {pot.spec.n_trunc}"
        )
    chat = pot.taylor.coeffs
    top = chat[2 * s + 1]
    if top <= 0:
        raise TailNotPositive(
            f"tail coefficient Chat_{2*s+1} = {top:.6e} <= 0: no real decaying "
            "exponent exists at this truncation; change n_trunc or parameters"
        )
    alpha = [0.0] * (s + 2)  # alpha[i] = alpha_{2i}, i = 1..s+1
    alpha[s + 1] = -math.sqrt(top)
    for k in range(2 * s, s, -1):
        i_new = k - s  # pairs with alpha_{2(s+1)} in the i+j = k+1 convolution
        acc = 0.0
        for i in range(i_new + 1, s + 1):
            j = k + 1 - i
            if 1 <= j <= s + 1:
                acc += alpha[i] * alpha[j]
        alpha[i_new] = (chat[k] - acc) / (2 * alpha[s + 1])
    return ExponentPolynomial(tuple(alpha[1:]), s)


def exponent_residual(exp_poly: ExponentPolynomial, pot: TruncatedPotential) -> list[float]:
    """Coefficients of p'^2 + p'' - V_trunc at r^(2k), k = s+1..2s+1.

    p'' only reaches r^(2s), so on these orders the p'^2 convolution alone must
    cancel the potential tail; all entries vanish for a solved exponent.
    """
    s = exp_poly.s
    beta = exp_poly.prime_square_series()
    out = []
    for k in range(s + 1, 2 * s + 2):
        b = beta[k - 1] if k - 1 < len(beta) else 0.0
        v = pot.taylor[k] if k < len(pot.taylor) else 0.0
        out.append(b - v)
    return out

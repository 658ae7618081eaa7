import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from pgo.potential import (
    PotentialSpec,
    TruncatedPotential,
    eval_potential,
    exact_taylor_coefficients,
    harmonic_reference,
    pgo_polynomial_coefficients,
    truncated_taylor,
)
from pgo.series import EvenSeries, series_eval

# independent high-precision values (mpmath, 40 digits)
V_GOLD_R1 = -5.399911390900726749462271
V_GOLD_R07 = -5.501994384397709008257986


def test_polynomial_coefficients_basic():
    assert pgo_polynomial_coefficients(0.0, 1.0, 2) == [1.0, 1.0]
    assert pgo_polynomial_coefficients(-5.6, 0.2, 1)[0] == pytest.approx(-0.92, rel=1e-15)
    assert pgo_polynomial_coefficients(-1.0, 0.5, 1) == [0.0]


def test_eval_potential_at_origin_is_lambda():
    spec = PotentialSpec(-5.6, 0.2, 3)
    assert eval_potential(spec, 0.0) == -5.6


def test_eval_potential_gaussian_falloff():
    spec = PotentialSpec(0.0, 0.2, 1)
    assert abs(eval_potential(spec, 30.0)) < 1e-60


def test_eval_potential_high_precision_golden():
    spec = PotentialSpec(-5.6, 0.2, 3)
    assert eval_potential(spec, 1.0) == pytest.approx(V_GOLD_R1, rel=1e-14)
    assert eval_potential(spec, 0.7) == pytest.approx(V_GOLD_R07, rel=1e-14)


def test_truncated_taylor_en7_exact_fractions():
    # exact-rational oracle for the published N=7 configuration
    chat = exact_taylor_coefficients(Fraction(-28, 5), Fraction(1, 5), 3, 7)
    assert chat == [
        Fraction(-28, 5),
        Fraction(1, 5),
        Fraction(0),
        Fraction(0),
        Fraction(1, 9375),
        Fraction(-37, 1875000),
        Fraction(1, 562500),
        Fraction(-1, 9375000),
    ]
    pot = truncated_taylor(PotentialSpec(-5.6, 0.2, 3))
    # float path: exact up to rounding of the individual products (~eps * lam)
    for got, want in zip(pot.taylor.coeffs, chat):
        assert got == pytest.approx(float(want), rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("lam", [-5.6, 0.0, 3.0])
@pytest.mark.parametrize("mu", [0.2, 1.0])
@pytest.mark.parametrize("s", [1, 2, 3, 4, 5])
def test_gap_property(lam, mu, s):
    pot = truncated_taylor(PotentialSpec(lam, mu, s))
    scale = max(abs(c) for c in pot.taylor.coeffs)
    assert pot.taylor[0] == lam
    assert pot.taylor[1] == pytest.approx(mu, rel=1e-12)
    for k in range(2, s + 1):
        assert abs(pot.taylor[k]) <= 1e-12 * scale


def test_taylor_entry1_is_mu():
    pot = truncated_taylor(PotentialSpec(2.5, 0.7, 2))
    assert pot.taylor[1] == pytest.approx(0.7, rel=1e-14)


def test_pointwise_consistency_on_loglog_grid():
    spec = PotentialSpec(-5.6, 0.2, 3)
    pot = truncated_taylor(spec)
    n = spec.n_trunc
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c_next = truncated_taylor(PotentialSpec(-5.6, 0.2, 3, n + 1)).taylor[n + 1]
    for r in np.logspace(-1.3, 0, 20):
        diff = abs(series_eval(pot.taylor, r) - eval_potential(spec, r))
        assert diff <= 2 * abs(c_next) * r ** (2 * (n + 1)) + 1e-15


def test_harmonic_reference():
    spec = PotentialSpec(-5.6, 0.2, 3)
    ho = harmonic_reference(spec)
    assert ho.coeffs == (-5.6, 0.2)
    assert series_eval(ho, 0.0) == eval_potential(spec, 0.0)
    # difference is O(r^(2s+2)): the ratio to r^8 approaches |Chat_4| = 1/9375
    r = 0.1
    ratio = abs(eval_potential(spec, r) - series_eval(ho, r)) / r**8
    assert ratio == pytest.approx(1.0 / 9375.0, rel=1e-2)


def test_spec_validation():
    with pytest.raises(ValueError):
        PotentialSpec(0.0, -1.0, 1)
    with pytest.raises(ValueError):
        PotentialSpec(0.0, 1.0, 0)
    with pytest.raises(ValueError):
        PotentialSpec(0.0, 1.0, 2, 2)  # n_trunc < s+1
    with pytest.warns(UserWarning):
        PotentialSpec(0.0, 1.0, 1, 5)  # n_trunc != 2s+1 allowed with warning


def test_default_truncation_is_2s_plus_1():
    assert PotentialSpec(0.0, 1.0, 3).n_trunc == 7
    assert PotentialSpec(0.0, 0.2, 5).n_trunc == 11


def test_truncated_potential_length_invariant():
    spec = PotentialSpec(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        TruncatedPotential(spec, EvenSeries((0.0, 1.0)))

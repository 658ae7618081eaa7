import math

import pytest

from pgo.ansatz import ExponentPolynomial, solve_exponent
from pgo.config import RunConfig
from pgo.potential import PotentialSpec, TruncatedPotential, truncated_taylor
from pgo.quantize import QuantizationContext
from pgo.series import EvenSeries


@pytest.fixture
def tame_pot():
    """lam=0, mu=1, s=1: taylor [0, 1, -1, 1/2], positive tail."""
    return truncated_taylor(PotentialSpec(0.0, 1.0, 1))


@pytest.fixture
def tame_ctx(tame_pot):
    return QuantizationContext(
        pot=tame_pot, exp_poly=solve_exponent(tame_pot), l=0, tau=1, dim=3
    )


@pytest.fixture
def well_pot():
    """lam=-4, mu=1, s=2: taylor [-4, 1, 0, 1/6, -1/6, 3/40]."""
    return truncated_taylor(PotentialSpec(-4.0, 1.0, 2))


@pytest.fixture
def flagship_pot():
    """lam=0, mu=0.2, s=5, N=11: the published N=11 configuration."""
    return truncated_taylor(PotentialSpec(0.0, 0.2, 5))


def ho_context(lam=0.0, mu=1.0, dim=6, tau=1, l=0):
    """Harmonic sub-case: V = [lam, mu], p = -sqrt(mu) r^2 / 2 (exactly solvable).

    Levels are lam + sqrt(mu) (2 tau + 4n + 1).
    """
    spec = PotentialSpec(lam, mu, 1, 3)
    pot = TruncatedPotential(spec, EvenSeries((lam, mu, 0.0, 0.0)))
    exp_poly = ExponentPolynomial((-math.sqrt(mu), 0.0), 1)
    return QuantizationContext(pot=pot, exp_poly=exp_poly, l=l, tau=tau, dim=dim)


def ho_level(lam, mu, tau, n):
    return lam + math.sqrt(mu) * (2 * tau + 4 * n + 1)


@pytest.fixture
def en7_config():
    """The published N=7 configuration (exponent system has no real solution)."""
    return RunConfig(lam=-5.6, mu=0.2, s=3)

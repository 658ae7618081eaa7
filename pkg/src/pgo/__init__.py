"""Pseudo-Gaussian oscillator: quasi-exact bound-state spectra, normalized
eigenfunctions and barrier transmission, cross-validated against independent
grid-based eigensolvers."""

__version__ = "0.1.0"

from .ansatz import ExponentPolynomial, exponent_residual, solve_exponent
from .config import RunConfig, load_config
from .errors import (
    ComputationError,
    ConfigError,
    GridTooCoarse,
    MethodMismatch,
    NoBarrier,
    NonNormalizable,
    NoSignChange,
    NotAnEigenvalue,
    PgoError,
    StepTooLarge,
    TailNotPositive,
    WrongTruncation,
)
from .oracle import GridProblem, fd_spectrum, numerov_shoot
from .potential import (
    PotentialSpec,
    TruncatedPotential,
    eval_potential,
    harmonic_reference,
    pgo_polynomial_coefficients,
    truncated_taylor,
)
from .quantize import (
    BandedQuantizationMatrix,
    QuantizationContext,
    Spectrum,
    build_matrix,
    derive_recurrence_row,
    determinant,
    find_levels,
    indicial_exponents,
    recurrence_row,
)
from .series import (
    EvenSeries,
    gaussian_series,
    series_add,
    series_derivative_as_radial,
    series_eval,
    series_mul,
)
from .tunneling import (
    TransmissionProfile,
    UnitSystem,
    gamow_steps,
    turning_points,
    wkb_transmission,
)
from .wavefunction import (
    EigenPair,
    count_nodes,
    eval_psi,
    make_eigenpair,
    normalize,
    ode_residual,
    solve_coefficients,
)

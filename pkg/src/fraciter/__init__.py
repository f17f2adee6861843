"""Continuous iteration of formal power series through Bell and Carleman matrices."""

from .bell import BellMatrix, bell_matrix, bell_power_int, bell_product, series_from_bell
from .carleman import (
    CarlemanMatrix,
    carleman_direct,
    carleman_exp,
    carleman_factored,
    carleman_product,
    embed_bell,
    pascal_matrix,
    shift_matrix,
)
from .errors import (
    BaseOutOfRange,
    BranchViolation,
    DegenerateSpectrum,
    FracIterError,
    IterationFailure,
    NonInvertible,
    NonzeroConstantTerm,
    OrderMismatch,
    ZeroEigenvalue,
)
from .iterate import (
    IterateResult,
    SchroderSolution,
    apply_functional,
    invert_series,
    iterate_series,
    projector_functions,
    schroder_eigenvectors_carleman,
    schroder_solve_bell,
)
from .series import TruncatedSeries, compose, evaluate, multiply, named_series
from .spectral import (
    SpectralDecomposition,
    check_nondegenerate,
    decompose,
    eigenvalues,
    matrix_function,
    matrix_power,
    projectors,
)
from .tetration import (
    ConvergenceReport,
    TetrationQuery,
    bell_number,
    closed_form_N2,
    convergence_sweep,
    dobinski_check,
    exp_iterate,
    stirling2,
    tetrate,
)

__version__ = "0.1.0"

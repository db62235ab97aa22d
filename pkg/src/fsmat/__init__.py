"""Forbidden induced submatrices of simple (0,1)-matrices.

Set-family algebra (traces, shattering, compressions, peeling), simple
matrices and induced containment, contribution counting, exact fs(m, F)
search at small m, and the exponent recurrences behind the fs upper bounds.
"""
__version__ = "0.1.0"

from .contributions import (
    ContributionSet,
    count_contributions,
    count_contributions_oracle,
    pigeonhole_containment_bound,
)
from .errors import BudgetExhausted, ConvergenceError, DomainError, NotSimpleError, ParseError
from .exponents import (
    ExponentState,
    fs_exponent_bound,
    gamma_step_exact,
    gamma_step_k2,
    gamma_step_quadratic,
    iterate_to_limit,
)
from .extremal import ExtremalResult, fs_exact, fs_lower_bound_greedy, fs_naive
from .kernels import BACKEND
from .matrix import Matrix, Pattern, SimpleMatrix, associated_family, concatenate, contains, submatrix
from .setfamily import (
    PeelingTranscript,
    SetFamily,
    Subset,
    compress_element,
    compress_family,
    down_close,
    nested_pair_count,
    shattered_sets,
    support,
    support_cover_peeling,
    trace,
)

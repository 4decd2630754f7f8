"""Average values of products of L-functions of level-one cusp forms,
computed two ways: from Hecke eigenforms, and from a closed form built out
of zeta values and a hypergeometric sum over SL_2(Z) matrices."""

from .errors import (
    AccuracyError,
    DomainError,
    LKernelError,
    OracleFailure,
    PoleError,
    PrecisionError,
    ValidationError,
)
from .kernel import (
    ParamPoint,
    TheoremTerms,
    VerificationReport,
    average_lseries,
    c_k,
    corollary2_residual,
    gamma_k,
    hyper_sum,
    kernel_value,
    mellin_lhs,
    rhs_theorem,
    spectral_lhs,
    validate_params,
    verify_theorem,
)
from .lfunc import lstar, period, petersson_norm
from .modforms import QExpansion, delta, eigenbasis, victor_miller_basis
from .specfun import AccuracyBudget, gamma, hurwitz_zeta, zeta

__version__ = "0.1.0"

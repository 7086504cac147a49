"""Fractional moments and logarithmic expectations from MGFs, applied to
guesswork, estimation error, heavy-tail Renyi entropy and jammed channels."""

from .quadrature import (
    QuadratureConfig,
    QuadratureResult,
    NonFiniteIntegrandError,
    QuadratureNonConvergence,
    integrate_semi_infinite,
    integrate_double,
)
from .frac_moment import (
    MgfSpec,
    MomentRequest,
    alpha_coefficients,
    fractional_moment,
    integer_moment,
    log_expectation,
    z_ln_z_expectation,
)
from .guesswork import GuessProblem, guess_moment_averaged, guess_moment_conditional
from .estimation import (
    BernoulliEstimation,
    chernoff_bound,
    error_moment,
    hoeffding_c,
    mgf_dn,
)
from .cauchy_renyi import CauchyFamily, normalization_cn, renyi_entropy, z_function
from .jamming import (
    BscJamSpec,
    JammedChannelSpec,
    bsc_degradation,
    bsc_mutual_information,
    mutual_information,
)

__version__ = "0.1.0"

__all__ = [
    "QuadratureConfig",
    "QuadratureResult",
    "NonFiniteIntegrandError",
    "QuadratureNonConvergence",
    "integrate_semi_infinite",
    "integrate_double",
    "MgfSpec",
    "MomentRequest",
    "alpha_coefficients",
    "fractional_moment",
    "integer_moment",
    "log_expectation",
    "z_ln_z_expectation",
    "GuessProblem",
    "guess_moment_averaged",
    "guess_moment_conditional",
    "BernoulliEstimation",
    "chernoff_bound",
    "error_moment",
    "hoeffding_c",
    "mgf_dn",
    "CauchyFamily",
    "normalization_cn",
    "renyi_entropy",
    "z_function",
    "BscJamSpec",
    "JammedChannelSpec",
    "bsc_degradation",
    "bsc_mutual_information",
    "mutual_information",
    "__version__",
]

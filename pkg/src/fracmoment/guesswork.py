"""Moments of the number of randomized guesses until success.

Guessing a realization x by i.i.d. draws from a distribution P-tilde makes
the number of guesses G geometric with success probability P-tilde(x).
Conditional moments E{G^rho | x} come in three flavours:

* integer rho: closed form through negative-order polylogarithms,
  1 + ptilde * sum_j C(rho, j) Li_{-j}(1 - ptilde);
* rho in (0, 1): a single integral whose numerator e^-u - e^-2u is exact
  in floating point, so no cancellation guard is needed;
* other rho: the general moment identity with centred coefficients
  a_j = ptilde * Li_{-j}(1 - ptilde).

The P-averaged moment for rho in (0, 1) additionally has a single-integral
form on [0, 1] obtained by substituting z = e^-u; its z -> 1 endpoint
singularity (1-z)^-rho is reflected onto the engine's origin.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .frac_moment import (
    INTEGER_RHO_TOL,
    NEAR_INTEGER_WARN,
    fractional_moment_from_alphas,
)
from .quadrature import (
    ensure_converged,
    integrate_power_endpoint,
    integrate_semi_infinite,
)
from .special import gamma, polylog_neg

__all__ = [
    "GuessProblem",
    "geometric_mgf_neg",
    "geometric_raw_moment",
    "guess_moment_conditional",
    "guess_moment_averaged",
]

# Centred geometric coefficients overflow once ptilde**-j outruns double
# range; the series guard simply gets fewer terms in that regime.
_ALPHA_OVERFLOW = 1e280
_EXTRA_ALPHAS = 60


@dataclass(frozen=True)
class GuessProblem:
    """Source distribution and guessing distribution over a finite alphabet."""

    source_p: tuple
    guess_p: tuple

    def __post_init__(self):
        src = tuple(float(p) for p in self.source_p)
        gss = tuple(float(p) for p in self.guess_p)
        object.__setattr__(self, "source_p", src)
        object.__setattr__(self, "guess_p", gss)
        if len(src) != len(gss) or not src:
            raise ValueError("source and guessing distributions must match in length")
        for name, vec in (("source_p", src), ("guess_p", gss)):
            if min(vec) < 0.0:
                raise ValueError(f"{name} has a negative entry")
            if abs(math.fsum(vec) - 1.0) > 1e-12:
                raise ValueError(f"{name} must sum to 1")
        for p, pt in zip(src, gss):
            if p > 0.0 and pt == 0.0:
                raise ValueError(
                    "guess_p vanishes on a supported symbol; every guessing "
                    "moment is infinite there"
                )

    @property
    def alphabet_size(self):
        return len(self.source_p)


def geometric_mgf_neg(ptilde_x, u):
    """M_G(-u) for the geometric guess count: ptilde / (e^u - (1 - ptilde)).

    Evaluated as ptilde e^-u / (1 - (1-ptilde) e^-u), which neither
    overflows for large u nor loses accuracy near u = 0.
    """
    if not 0.0 < ptilde_x <= 1.0:
        raise ValueError(f"ptilde must lie in (0, 1], got {ptilde_x}")
    eu = np.exp(-np.asarray(u, dtype=float))
    return ptilde_x * eu / (1.0 - (1.0 - ptilde_x) * eu)


def geometric_raw_moment(ptilde_x, order):
    """E{G^order} for integer order >= 0 via the polylogarithm closed form."""
    if order == 0:
        return 1.0
    q = 1.0 - ptilde_x
    return 1.0 + ptilde_x * math.fsum(
        math.comb(order, j) * polylog_neg(j, q) for j in range(1, order + 1)
    )


def _geometric_alphas(ptilde_x, j_max):
    """Centred coefficients a_j = E{(G-1)^j} = ptilde * Li_{-j}(1 - ptilde)."""
    q = 1.0 - ptilde_x
    out = [1.0]
    for j in range(1, j_max + 1):
        a = ptilde_x * polylog_neg(j, q)
        if a > _ALPHA_OVERFLOW:
            break
        out.append(a)
    return out


def _fractional_conditional(ptilde_x, rho, cfg):
    """E{G^rho | x} for rho in (0, 1) through the cancellation-free form."""
    inv_q = 1.0 / (1.0 - ptilde_x)  # ptilde < 1 here

    def integrand(u):
        u = np.asarray(u, dtype=float)
        eu = np.exp(-u)
        numerator = -eu * np.expm1(-u)  # e^-u - e^-2u, exact at small u
        with np.errstate(over="ignore"):
            # u**(rho+1) may overflow far in the tail; 0/inf -> 0 is intended
            return numerator / (u ** (rho + 1.0) * (inv_q - eu))

    result = integrate_semi_infinite(integrand, cfg.with_singularity(rho))
    value = ensure_converged(result, context=f"guess moment rho={rho}")
    return 1.0 + rho / gamma(1.0 - rho) * value


def guess_moment_conditional(ptilde_x, rho, cfg):
    """E{G^rho | x} for any rho > 0 and ptilde_x in (0, 1]."""
    if not 0.0 < ptilde_x <= 1.0:
        raise ValueError(f"ptilde must lie in (0, 1], got {ptilde_x}")
    if rho <= 0.0:
        raise ValueError(f"moment order must be positive, got {rho}")
    if ptilde_x == 1.0:
        return 1.0
    nearest = round(rho)
    if nearest >= 1 and abs(rho - nearest) < INTEGER_RHO_TOL:
        return geometric_raw_moment(ptilde_x, int(nearest))
    if nearest >= 1 and abs(rho - nearest) < NEAR_INTEGER_WARN:
        warnings.warn(
            f"rho={rho} is within {NEAR_INTEGER_WARN} of an integer; the "
            "polylogarithm closed form is better conditioned there",
            stacklevel=2,
        )
    if rho < 1.0:
        return _fractional_conditional(ptilde_x, rho, cfg)
    alphas = _geometric_alphas(ptilde_x, math.floor(rho) + _EXTRA_ALPHAS)
    return fractional_moment_from_alphas(
        lambda u: geometric_mgf_neg(ptilde_x, u), rho, alphas, cfg
    )


def _averaged_z_integral(prob, rho, cfg):
    """E{G^rho} for rho in (0, 1) as one integral over [0, 1].

    After substituting z = e^-u the integrand is singular like (1-z)^-rho
    at z = 1; the reflection x = 1 - z moves that onto the engine's origin.
    """
    pairs = [
        (p, 1.0 - pt) for p, pt in zip(prob.source_p, prob.guess_p) if p > 0.0
    ]
    weights = np.array([p * q for p, q in pairs])
    qs = np.array([q for _, q in pairs])

    def integrand(x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        neg_log_z = -np.log1p(-x)  # -ln(1 - x) = -ln z, exact near x = 0
        mix = (weights[None, :] / (1.0 - (1.0 - x[:, None]) * qs[None, :])).sum(axis=1)
        out = x * neg_log_z ** (-rho - 1.0) * mix
        return float(out[0]) if scalar else out

    result = integrate_power_endpoint(integrand, 1.0, cfg.with_singularity(rho))
    value = ensure_converged(result, context=f"averaged guess moment rho={rho}")
    return 1.0 + rho / gamma(1.0 - rho) * value


def guess_moment_averaged(prob, rho, cfg):
    """E{G^rho} averaged over the source distribution."""
    if rho <= 0.0:
        raise ValueError(f"moment order must be positive, got {rho}")
    nearest = round(rho)
    if nearest >= 1 and abs(rho - nearest) < INTEGER_RHO_TOL:
        return 1.0 + math.fsum(
            p * pt * math.fsum(
                math.comb(int(nearest), j) * polylog_neg(j, 1.0 - pt)
                for j in range(1, int(nearest) + 1)
            )
            for p, pt in zip(prob.source_p, prob.guess_p)
            if p > 0.0 and pt < 1.0
        )
    if rho < 1.0:
        return _averaged_z_integral(prob, rho, cfg)
    return math.fsum(
        p * guess_moment_conditional(pt, rho, cfg)
        for p, pt in zip(prob.source_p, prob.guess_p)
        if p > 0.0
    )

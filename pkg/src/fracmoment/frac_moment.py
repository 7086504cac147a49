"""Moments of arbitrary positive order from the MGF on the negative axis.

The central identity expresses E{X^rho} for non-integer rho > 0 as a
finite combination of the centred coefficients a_j = E{(X-1)^j} plus a
one-dimensional integral of the MGF:

    E{X^rho} = (1/(1+rho)) * sum_{l=0}^{J} a_l / B(l+1, rho+1-l)
             + (rho sin(pi rho) Gamma(rho) / pi)
               * int_0^inf u^-(rho+1)
                 [ sum_{j=0}^{J} ((-1)^j a_j / j!) u^j e^-u - M_X(-u) ] du

with J = floor(rho).  The bracketed integrand vanishes to order J+1 at the
origin, which in floating point means two nearly equal quantities are
subtracted there.  Below a self-tuned crossover the bracket is therefore
evaluated through its series tail -e^-u * sum_{j>J} ((-1)^j a_j / j!) u^j,
which needs centred coefficients beyond order J; callers are expected to
supply as many as they cheaply can (every built-in family has them in
closed form).  With only the minimum J+1 coefficients the direct form is
used everywhere and accuracy degrades for J >= 2.

For rho in (0, 1) the sum collapses and the identity reduces to

    E{X^rho} = 1 + (rho / Gamma(1-rho)) * int_0^inf (e^-u - M_X(-u)) u^-(1+rho) du,

implemented separately as the fast path.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .quadrature import (
    QuadratureConfig,
    ensure_converged,
    integrate_semi_infinite,
)
from .special import beta, gamma

__all__ = [
    "MgfSpec",
    "MomentRequest",
    "alpha_coefficients",
    "fractional_moment",
    "fractional_moment_from_alphas",
    "fractional_moment_from_bracket",
    "integer_moment",
    "log_expectation",
    "z_ln_z_expectation",
    "mgf_constant",
    "mgf_exponential",
    "mgf_discrete",
]

INTEGER_RHO_TOL = 1e-12
NEAR_INTEGER_WARN = 1e-6


@dataclass(frozen=True)
class MgfSpec:
    """A non-negative random variable given by M_X(-u) and raw moments.

    ``raw_moments[l]`` must equal E{X^l}; the list has to cover at least
    floor(rho) for any requested order, and any further entries sharpen
    the small-u evaluation of the moment integrand.
    """

    mgf_neg: object
    raw_moments: tuple
    label: str = ""

    def __post_init__(self):
        moments = tuple(float(m) for m in self.raw_moments)
        object.__setattr__(self, "raw_moments", moments)
        if not moments or abs(moments[0] - 1.0) > 1e-12:
            raise ValueError("raw_moments must start with m_0 = 1")
        m0 = float(self.mgf_neg(0.0))
        if abs(m0 - 1.0) > 1e-14:
            raise ValueError(f"mgf_neg(0) must equal 1, got {m0}")
        for l in range(1, len(moments) - 1):
            # Lyapunov log-convexity, with slack for rounding.
            if moments[l] ** 2 > moments[l - 1] * moments[l + 1] * (1.0 + 1e-9) + 1e-12:
                raise ValueError(
                    f"moment sequence violates log-convexity at order {l}"
                )

    def check_mgf_grid(self, grid=(0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)):
        """Spot-check that M_X(-u) is non-increasing and in (0, 1]."""
        values = [float(self.mgf_neg(u)) for u in grid]
        for u, v in zip(grid, values):
            if not 0.0 < v <= 1.0 + 1e-12:
                raise ValueError(f"mgf_neg({u}) = {v} outside (0, 1]")
        for (u1, v1), (u2, v2) in zip(
            list(zip(grid, values))[:-1], list(zip(grid, values))[1:]
        ):
            if v2 > v1 + 1e-12:
                raise ValueError(f"mgf_neg increases between u={u1} and u={u2}")


@dataclass(frozen=True)
class MomentRequest:
    rho: float
    config: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.rho <= 0.0:
            raise ValueError(f"moment order must be positive, got {self.rho}")


def alpha_coefficients(spec, j_max):
    """Centred coefficients a_j = E{(X-1)^j} for j = 0..j_max.

    Computed from the raw moments through the Beta-function form
    a_j = (1/(j+1)) sum_l (-1)^(j-l) m_l / B(l+1, j-l+1), which is the
    binomial expansion in disguise.
    """
    if j_max >= len(spec.raw_moments):
        raise ValueError(
            f"alpha_coefficients needs raw moments up to order {j_max}, "
            f"missing order {len(spec.raw_moments)}"
        )
    out = [1.0]
    for j in range(1, j_max + 1):
        terms = [
            (-1.0) ** (j - l) * spec.raw_moments[l] / beta(l + 1, j - l + 1)
            for l in range(j + 1)
        ]
        out.append(math.fsum(terms) / (j + 1))
    return out


def integer_moment(spec, rho):
    """E{X^rho} for integer rho >= 1, looked up from the raw moments."""
    rho = int(rho)
    if rho < 1:
        raise ValueError(f"integer moment order must be >= 1, got {rho}")
    if rho >= len(spec.raw_moments):
        raise ValueError(f"raw moment of order {rho} not supplied")
    return spec.raw_moments[rho]


# Above this singularity exponent the power substitution can no longer
# reach the whole singular neighbourhood in double precision (u below
# ~1e-308 still carries mass), so a small analytic head takes over.
_EXTREME_SINGULARITY = 0.95
_ANALYTIC_HEAD_EPS = 1e-6


def _analytic_series_head(rho, J, tail_alphas, eps):
    """Integral over (0, eps] of the series bracket divided by u^(rho+1).

    The bracket there is -e^-u sum_{j>J} ((-1)^j a_j / j!) u^j; with
    eps <= 1e-6 the three-term expansion of e^-u leaves a relative error
    below 1e-19, and each power integrates in closed form.
    """
    total = []
    for offset, a_j in enumerate(tail_alphas):
        j = J + 1 + offset
        c = -((-1.0) ** j) * a_j / math.factorial(j)
        p = j - rho
        total.append(
            c * (eps**p / p - eps ** (p + 1) / (p + 1) + eps ** (p + 2) / (2 * (p + 2)))
        )
    return math.fsum(total)


def _series_crossover(rho, alphas, mgf_noise):
    """Largest u below which the series tail beats direct cancellation.

    Compares the estimated truncation error of the tail series (last term
    times a geometric ramp) against the rounding noise of the direct
    bracket; both are crude but only the ordering matters.
    """
    J = math.floor(rho)
    K = len(alphas) - 1
    if K <= J:
        return 0.0
    fact = [math.factorial(j) for j in range(K + 1)]
    for exponent in range(0, 120):
        u = 2.0**-exponent
        t_last = abs(alphas[K]) * u**K / fact[K]
        t_prev = abs(alphas[K - 1]) * u ** (K - 1) / fact[K - 1] if K - 1 > J else None
        if t_prev is not None and t_prev > 0.0:
            ratio = t_last / t_prev
            if ratio >= 0.9:
                continue
            tail = t_last * max(1.0, ratio / (1.0 - ratio))
        else:
            tail = t_last
        direct_scale = math.fsum(
            abs(alphas[j]) * u**j / fact[j] for j in range(J + 1)
        )
        direct_noise = 8e-16 * (direct_scale + 2.0) + mgf_noise
        if tail <= 0.5 * direct_noise:
            return u
    return 0.0


def _bracket_over_power_integrand(mgf_neg, rho, alphas, u_crossover):
    """Vectorized bracket/u^(rho+1) with the series guard below u_crossover."""
    J = math.floor(rho)
    K = len(alphas) - 1
    fact = [math.factorial(j) for j in range(K + 1)]
    head = [(-1.0) ** j * alphas[j] / fact[j] for j in range(J + 1)]
    # bracket = -e^-u * sum_{j>J} (-1)^j a_j u^j / j!; factor out u^(J+1)
    # so the u^-(rho+1) division never meets a denormal power.
    tail_coeffs = [-((-1.0) ** j) * alphas[j] / fact[j] for j in range(J + 1, K + 1)]
    mgf_state = {"vectorized": True}

    def call_mgf(u):
        if mgf_state["vectorized"]:
            try:
                m = np.asarray(mgf_neg(u), dtype=float)
                if m.shape == u.shape:
                    return m
            except (TypeError, ValueError, IndexError):
                pass
            mgf_state["vectorized"] = False
        return np.array([float(mgf_neg(x)) for x in u], dtype=float)

    def integrand(u):
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        out = np.empty_like(u)
        small = u < u_crossover
        if np.any(small):
            us = u[small]
            poly = np.zeros_like(us)
            for c in reversed(tail_coeffs):
                poly = poly * us + c
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = np.exp(-us) * poly * us ** (J - rho)
            out[small] = np.where(us > 0.0, vals, 0.0)
        big = ~small
        if np.any(big):
            ub = u[big]
            vals = np.empty_like(ub)
            live = ub <= 700.0
            if np.any(live):
                ul = ub[live]
                poly = np.zeros_like(ul)
                for c in reversed(head):
                    poly = poly * ul + c
                bracket = poly * np.exp(-ul) - call_mgf(ul)
                vals[live] = bracket * ul ** (-rho - 1.0)
            if np.any(~live):
                # e^-u underflows; only the MGF term survives.
                uh = ub[~live]
                vals[~live] = -call_mgf(uh) * uh ** (-rho - 1.0)
            out[big] = vals
        return float(out[0]) if scalar else out

    return integrand


def _validated_alphas(rho, alphas):
    J = math.floor(rho)
    if rho <= 0.0:
        raise ValueError(f"moment order must be positive, got {rho}")
    if abs(rho - round(rho)) < INTEGER_RHO_TOL:
        raise ValueError(f"rho={rho} is integer; use the moment lookup instead")
    if len(alphas) <= J:
        raise ValueError(
            f"need centred coefficients up to order {J}, got {len(alphas) - 1}"
        )
    alphas = [float(a) for a in alphas]
    if abs(alphas[0] - 1.0) > 1e-12:
        raise ValueError("alpha_0 must equal 1")
    return J, alphas


def _head_sum(rho, alphas, J):
    return math.fsum(
        alphas[l] / beta(l + 1, rho + 1 - l) for l in range(J + 1)
    ) / (1.0 + rho)


def _prefactor(rho):
    return rho * math.sin(math.pi * rho) * gamma(rho) / math.pi


def _integral_with_guards(mgf_neg, rho, alphas, cfg, mgf_noise):
    """Shared integral of the bracket/u^(rho+1) with series and head guards."""
    J = math.floor(rho)
    u_c = _series_crossover(rho, alphas, mgf_noise)
    eps = 0.0
    analytic = 0.0
    if rho - J > _EXTREME_SINGULARITY and u_c > 0.0:
        eps = min(_ANALYTIC_HEAD_EPS, u_c)
        analytic = _analytic_series_head(rho, J, alphas[J + 1 :], eps)
    integrand = _bracket_over_power_integrand(mgf_neg, rho, alphas, u_c)
    result = integrate_semi_infinite(
        integrand, cfg.with_singularity(rho - J), lower=eps
    )
    value = ensure_converged(result, context=f"fractional moment rho={rho}")
    return analytic + value


def fractional_moment_from_alphas(mgf_neg, rho, alphas, cfg, mgf_noise=0.0):
    """E{X^rho} for non-integer rho > 0 from the MGF and centred coefficients.

    ``alphas`` must cover orders 0..floor(rho); extra orders feed the
    small-u series guard.  ``mgf_noise`` is an absolute noise floor of the
    MGF evaluation (nonzero when the MGF itself comes from quadrature).
    """
    J, alphas = _validated_alphas(rho, alphas)
    value = _integral_with_guards(mgf_neg, rho, alphas, cfg, mgf_noise)
    return math.fsum([_head_sum(rho, alphas, J), _prefactor(rho) * value])


def fractional_moment_from_bracket(bracket, rho, alphas, cfg, tail_alphas=()):
    """E{X^rho} when the caller can evaluate the integrand bracket stably.

    ``bracket(u)`` must return, to full relative precision,

        sum_{j<=J} ((-1)^j a_j / j!) u^j e^-u  -  M_X(-u),

    typically because the cancellation can be removed analytically (for
    example as a single integral of a fixed-sign Taylor remainder).  Only
    the head coefficients 0..J are needed; ``tail_alphas`` (orders J+1 on,
    as far as they exist) enable the analytic origin piece when rho sits
    just below an integer and the power substitution degenerates.
    """
    J, alphas = _validated_alphas(rho, alphas)
    eps = 0.0
    analytic = 0.0
    if rho - J > _EXTREME_SINGULARITY and len(tail_alphas) > 0:
        eps = _ANALYTIC_HEAD_EPS
        analytic = _analytic_series_head(rho, J, tail_alphas, eps)

    def integrand(u):
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        try:
            b = np.asarray(bracket(u), dtype=float)
            if b.shape != u.shape:
                raise TypeError
        except (TypeError, ValueError, IndexError):
            b = np.array([float(bracket(x)) for x in u])
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = np.where(u > 0.0, b * u ** (-rho - 1.0), 0.0)
        return float(out[0]) if scalar else out

    result = integrate_semi_infinite(
        integrand, cfg.with_singularity(rho - J), lower=eps
    )
    value = analytic + ensure_converged(
        result, context=f"fractional moment rho={rho}"
    )
    return math.fsum([_head_sum(rho, alphas, J), _prefactor(rho) * value])


def _moment_order_below_one(mgf_neg, rho, alphas, cfg, mgf_noise=0.0):
    """Fast path for rho in (0, 1): E{X^rho} = 1 + rho/Gamma(1-rho) * integral."""
    value = _integral_with_guards(mgf_neg, rho, alphas, cfg, mgf_noise)
    return 1.0 + rho / gamma(1.0 - rho) * value


def fractional_moment(spec, req):
    """E{X^rho} for any rho > 0.

    Integer orders dispatch to the raw-moment lookup; near-integer orders
    (within 1e-6) are computed but trigger a warning, since the integral
    representation degenerates as rho approaches an integer.
    """
    rho = req.rho
    nearest = round(rho)
    if nearest >= 1 and abs(rho - nearest) < INTEGER_RHO_TOL:
        return integer_moment(spec, nearest)
    if nearest >= 1 and abs(rho - nearest) < NEAR_INTEGER_WARN:
        warnings.warn(
            f"rho={rho} is within {NEAR_INTEGER_WARN} of an integer; the "
            "integral representation is ill-conditioned there, consider the "
            "integer moment instead",
            stacklevel=2,
        )
    alphas = alpha_coefficients(spec, len(spec.raw_moments) - 1)
    if rho < 1.0:
        return _moment_order_below_one(spec.mgf_neg, rho, alphas, req.config)
    return fractional_moment_from_alphas(spec.mgf_neg, rho, alphas, req.config)


def log_expectation(spec, cfg):
    """E{ln X} in nats for strictly positive X:
    int_0^inf (e^-u - M_X(-u)) du / u."""
    mgf_neg = spec.mgf_neg
    mgf_state = {"vectorized": True}

    def integrand(u):
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        if mgf_state["vectorized"]:
            try:
                m = np.asarray(mgf_neg(u), dtype=float)
                if m.shape != u.shape:
                    raise TypeError
            except (TypeError, ValueError, IndexError):
                mgf_state["vectorized"] = False
                m = np.array([float(mgf_neg(x)) for x in u])
        else:
            m = np.array([float(mgf_neg(x)) for x in u])
        out = (np.exp(-u) - m) / u
        return float(out[0]) if scalar else out

    result = integrate_semi_infinite(integrand, cfg.with_singularity(0.0))
    return ensure_converged(result, context="log expectation")


def z_ln_z_expectation(mgf_deriv_neg, mean, cfg):
    """E{Z ln Z} = int_0^inf [M'_Z(0) e^-u - M'_Z(-u)] du / u for positive Z."""
    probe = float(mgf_deriv_neg(0.0))
    if abs(probe - mean) > 1e-10 * max(1.0, abs(mean)):
        raise ValueError(f"mean={mean} does not match M'_Z(0)={probe}")

    def integrand(u):
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        try:
            d = np.asarray(mgf_deriv_neg(u), dtype=float)
            if d.shape != u.shape:
                raise TypeError
        except (TypeError, ValueError, IndexError):
            d = np.array([float(mgf_deriv_neg(x)) for x in u])
        out = (mean * np.exp(-u) - d) / u
        return float(out[0]) if scalar else out

    result = integrate_semi_infinite(integrand, cfg.with_singularity(0.0))
    return ensure_converged(result, context="Z ln Z expectation")


def mgf_constant(c, orders=12):
    """MgfSpec of the degenerate variable X = c >= 0."""
    if c < 0.0:
        raise ValueError("constant must be non-negative")

    def mgf_neg(u):
        return np.exp(-c * np.asarray(u, dtype=float))

    return MgfSpec(mgf_neg, tuple(c**l for l in range(orders + 1)), f"const:{c}")


def mgf_exponential(orders=16):
    """MgfSpec of the unit-rate exponential: M(-u) = 1/(1+u), m_l = l!."""

    def mgf_neg(u):
        return 1.0 / (1.0 + np.asarray(u, dtype=float))

    return MgfSpec(
        mgf_neg, tuple(float(math.factorial(l)) for l in range(orders + 1)), "exp1"
    )


def mgf_discrete(support, probs, orders=12):
    """MgfSpec of a finite discrete non-negative variable."""
    xs = np.asarray(support, dtype=float)
    ps = np.asarray(probs, dtype=float)
    if xs.ndim != 1 or xs.shape != ps.shape:
        raise ValueError("support and probs must be 1-D and of equal length")
    if np.any(xs < 0.0) or np.any(ps < 0.0):
        raise ValueError("support and probs must be non-negative")
    if abs(ps.sum() - 1.0) > 1e-12:
        raise ValueError("probabilities must sum to 1")

    def mgf_neg(u):
        u = np.asarray(u, dtype=float)
        if u.ndim == 0:
            return float(np.exp(-float(u) * xs) @ ps)
        return np.exp(-np.outer(u, xs)) @ ps

    moments = tuple(float(ps @ xs**l) for l in range(orders + 1))
    return MgfSpec(mgf_neg, moments, "discrete")

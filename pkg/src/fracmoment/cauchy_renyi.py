"""Differential Renyi entropy of power-law multivariate heavy-tail densities.

The density family is f(x_1..x_n) = C_n / (1 + sum_i |x_i|^theta)^q with
q * theta > n for normalizability; theta = 2, q = (n+1)/2 recovers the
classical multivariate Cauchy law.  The Laplace-transform kernel

    Z(t) = int e^{-t |x|^theta} dx = 2 Gamma(1/theta) / (theta t^(1/theta))

collapses every n-dimensional integral below to one or two dimensions.

Orders alpha > 1 use

    h_alpha = (alpha/(alpha-1)) ln I1 + ln Gamma(q(alpha-1))/(alpha-1)
              - ln Gamma(q) - (1/(alpha-1)) ln I2,
    I1 = int t^{q-1} e^-t Z^n(t) dt,
    I2 = int int t^{q(alpha-1)-1} u^{q-1} e^-(t+u) Z^n(t+u) du dt.

Orders alpha in (0, 1) hinge on E{W^rho} with W = 1 + sum_i |X_i|^theta
and rho = q(1-alpha).  Integer rho = m expands through binomials,

    E{W^m} = (C_n/Gamma(q)) sum_l C(m,l) (-1)^l
             int t^{q-1} e^-t (d/dt)^l Z^n(t) dt,

where every term is positive because (d/dt)^l Z^n carries sign (-1)^l.
Non-integer rho feeds the general moment identity with centred
coefficients b_j = E{(W-1)^j}, available in closed form from the same
derivative integrals, and with M_W(-u) requiring one inner t-integral per
abscissa.  W has only finitely many moments (orders below q - n/theta),
which caps how many coefficients the small-u series guard receives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frac_moment import INTEGER_RHO_TOL, fractional_moment_from_bracket
from .quadrature import (
    QuadratureConfig,
    ensure_converged,
    integrate_double,
    integrate_semi_infinite,
)
from .special import gamma, log_gamma

__all__ = [
    "CauchyFamily",
    "ZFunction",
    "z_function",
    "normalization_cn",
    "renyi_entropy",
    "renyi_entropy_high",
    "renyi_entropy_low",
]



@dataclass(frozen=True)
class ZFunction:
    """Analytic kernel Z(t) = coefficient * t^(-exponent)."""

    coefficient: float
    exponent: float

    def __call__(self, t):
        return self.coefficient * np.asarray(t, dtype=float) ** (-self.exponent)

    def log(self, t):
        return math.log(self.coefficient) - self.exponent * np.log(
            np.asarray(t, dtype=float)
        )


def z_function(theta_exp):
    """Kernel of the power family: Z(t) = 2 Gamma(1/theta) / (theta t^(1/theta))."""
    if theta_exp <= 0.0:
        raise ValueError(f"theta_exp must be positive, got {theta_exp}")
    inv = 1.0 / theta_exp
    return ZFunction(2.0 * gamma(inv) / theta_exp, inv)


@dataclass(frozen=True)
class CauchyFamily:
    """Power-law heavy-tail family in dimension n with Renyi order alpha."""

    n: int
    theta_exp: float
    q: float
    alpha: float

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"dimension must be a positive integer, got {self.n}")
        if self.theta_exp <= 0.0 or self.q <= 0.0:
            raise ValueError("theta_exp and q must be positive")
        if self.alpha <= 0.0 or self.alpha == 1.0:
            raise ValueError("alpha must be positive and different from 1")
        if self.q * self.theta_exp <= self.n:
            raise ValueError(
                f"non-normalizable parameters: q*theta_exp = "
                f"{self.q * self.theta_exp} must exceed n = {self.n}"
            )

    @property
    def tail_order(self):
        """q - n/theta: moments of 1 + sum |X_i|^theta exist strictly below it."""
        return self.q - self.n / self.theta_exp


def _gamma_by_quadrature(a, cfg):
    """int_0^inf t^(a-1) e^-t dt by the in-package engine (a > 0)."""
    if a <= 0.0:
        raise ValueError(f"gamma integral requires positive argument, got {a}")

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return np.exp((a - 1.0) * np.log(t) - t)

    res = integrate_semi_infinite(integrand, cfg.with_singularity(max(0.0, 1.0 - a)))
    return ensure_converged(res, context=f"gamma integral a={a}")


def _kernel_moment_integral(fam, shift_order, cfg):
    """int t^{q-1} e^-t * (t-derivative order shift) of Z^n, reduced form.

    Z^n(t) = c^n t^(-n e); its l-th derivative is c^n * prod(-(ne+i)) *
    t^(-ne-l), so the integral reduces to a Gamma-type integral with
    argument q - ne - l, evaluated by quadrature.
    """
    z = z_function(fam.theta_exp)
    ne = fam.n * z.exponent
    a = fam.q - ne - shift_order
    rising = math.prod(ne + i for i in range(shift_order))
    log_cn_pow = fam.n * math.log(z.coefficient)
    return math.exp(log_cn_pow) * rising * _gamma_by_quadrature(a, cfg)


def normalization_cn(fam, cfg):
    """Normalizing constant C_n = Gamma(q) / int t^{q-1} e^-t Z^n(t) dt."""
    base = _kernel_moment_integral(fam, 0, cfg)
    return gamma(fam.q) / base


def renyi_entropy_high(fam, cfg, z_fn=None):
    """h_alpha in nats for alpha > 1, via one 1-D and one 2-D integral.

    ``z_fn`` may replace the analytic power kernel by any callable Z(t);
    the high branch needs no derivatives of it.
    """
    a = fam.alpha
    if a <= 1.0:
        raise ValueError(f"high branch requires alpha > 1, got {a}")
    q, n = fam.q, fam.n
    if z_fn is None:
        z = z_function(fam.theta_exp)

        def log_zn(t):
            return n * z.log(t)

        # Z^n contributes t^(-n/theta) at the origin.
        s1 = max(0.0, 1.0 - (q - n / fam.theta_exp))
    else:

        def log_zn(t):
            return n * np.log(np.asarray(z_fn(t), dtype=float))

        s1 = max(0.0, 1.0 - q)

    def i1_integrand(t):
        t = np.asarray(t, dtype=float)
        return np.exp((q - 1.0) * np.log(t) - t + log_zn(t))

    res1 = integrate_semi_infinite(i1_integrand, cfg.with_singularity(s1))
    i1 = ensure_converged(res1, context="kernel integral")

    qa = q * (a - 1.0)

    def i2_integrand(t, u):
        t = np.asarray(t, dtype=float)
        u = np.asarray(u, dtype=float)
        return np.exp((qa - 1.0) * np.log(t) + (q - 1.0) * np.log(u) - t - u
                      + log_zn(t + u))

    cfg_outer = cfg.with_singularity(max(0.0, 1.0 - qa))
    cfg_inner = QuadratureConfig(
        rel_tol=min(cfg.rel_tol, 1e-10),
        abs_tol=min(cfg.abs_tol, 1e-13),
        max_subdivisions=cfg.max_subdivisions,
        split_point=cfg.split_point,
        singularity_exponent=max(0.0, 1.0 - q),
    )
    res2 = integrate_double(i2_integrand, "semi_infinite", cfg_outer, cfg_inner)
    i2 = ensure_converged(res2, context="double kernel integral")

    return (
        a / (a - 1.0) * math.log(i1)
        + log_gamma(qa) / (a - 1.0)
        - log_gamma(q)
        - math.log(i2) / (a - 1.0)
    )


def _low_branch_integer(fam, m, cfg):
    """h_alpha for q(1-alpha) = m, a positive integer."""
    a, q = fam.alpha, fam.q
    c_n = normalization_cn(fam, cfg)
    terms = [
        math.comb(m, l) * _kernel_moment_integral(fam, l, cfg) for l in range(m + 1)
    ]
    s = math.fsum(terms)
    return (
        a / (1.0 - a) * math.log(c_n)
        - log_gamma(q) / (1.0 - a)
        + math.log(s) / (1.0 - a)
    )


def _centred_w_coefficients(fam, j_max, cfg):
    """b_j = E{(W-1)^j} = (C_n/Gamma(q)) * derivative integrals, all positive."""
    c_n = normalization_cn(fam, cfg)
    scale = c_n / gamma(fam.q)
    out = [1.0]
    for j in range(1, j_max + 1):
        out.append(scale * _kernel_moment_integral(fam, j, cfg))
    return out


def _binomial_coefficients(a, j_head):
    """c_j of (1+x)^-a = sum c_j x^j for j = 0..j_head."""
    coefs = [1.0]
    for j in range(j_head):
        coefs.append(coefs[-1] * (-(a + j) / (j + 1.0)))
    return coefs


def _binomial_remainder(x, a, j_head):
    """(1+x)^-a minus its Taylor polynomial through x^j_head, for x >= 0.

    The remainder has the fixed sign (-1)^(j_head+1).  Three regimes keep
    full relative precision: the binomial series from order j_head+1 for
    x <= 0.5, direct subtraction of the short polynomial for moderate x,
    and the dominant-term asymptotic -c_J x^J (1 + (c_{J-1}/c_J)/x) once
    x is large enough that everything else is below rounding.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    coefs = _binomial_coefficients(a, j_head)
    small = x <= 0.5
    huge = x > 1e12
    mid = ~small & ~huge
    if np.any(small):
        xs = x[small]
        coef = coefs[-1] * (-(a + j_head) / (j_head + 1.0))
        term = coef * xs ** (j_head + 1)
        acc = term.copy()
        j = j_head + 1
        while True:
            term = term * (-(a + j) / (j + 1.0)) * xs
            acc += term
            j += 1
            if np.all(np.abs(term) <= 1e-17 * np.abs(acc)) or j > 300:
                break
        out[small] = acc
    if np.any(mid):
        xm = x[mid]
        poly = np.zeros_like(xm)
        for c in reversed(coefs):
            poly = poly * xm + c
        out[mid] = (1.0 + xm) ** (-a) - poly
    if np.any(huge):
        # Callers fuse this regime with their own prefactors in log space
        # (see _low_branch_fractional); standalone evaluation would
        # overflow for j_head >= 2.
        raise ValueError("x too large for standalone remainder evaluation")
    return out


def _low_branch_fractional(fam, rho, cfg):
    """h_alpha for non-integer rho = q(1-alpha) via the moment identity.

    The integrand bracket is a single t-integral of a fixed-sign binomial
    Taylor remainder, so it is accurate in relative terms at every u and
    no coefficient-series guard is required.
    """
    a, q, n = fam.alpha, fam.q, fam.n
    z = z_function(fam.theta_exp)
    ne = n * z.exponent
    c_n = normalization_cn(fam, cfg)
    scale = c_n / gamma(q)
    log_cn_pow = n * math.log(z.coefficient)
    j_head = math.floor(rho)
    # Near t = 0 the remainder kernel grows like (u/t)^j_head, which
    # sharpens the t-singularity accordingly.
    s_inner = max(0.0, 1.0 - (fam.tail_order - j_head))

    def inner_cfg(u):
        # The inner integral scales like u^(j_head+1); its absolute
        # tolerance must shrink along or the outer u^-(rho+1) weight
        # amplifies the inner error floor into the result.
        return QuadratureConfig(
            rel_tol=min(cfg.rel_tol, 1e-11),
            abs_tol=max(1e-280, min(cfg.abs_tol, 1e-14) * min(1.0, u) ** (j_head + 1)),
            max_subdivisions=cfg.max_subdivisions,
            split_point=cfg.split_point,
            singularity_exponent=s_inner,
        )

    coefs = _binomial_coefficients(ne, j_head)
    log_c_head = math.log(abs(coefs[-1]))
    sign_c_head = 1.0 if coefs[-1] > 0 else -1.0

    def bracket(u):
        # e^-u [P(u) - G(u)] = -e^-u scale c^n
        #       int t^{q-1-ne} e^-t binom_remainder(u/t) dt
        if u <= 0.0 or u > 700.0:
            return 0.0
        log_u = math.log(u)

        def integrand(t):
            t = np.maximum(np.asarray(t, dtype=float), 1e-285)
            x = u / t
            out = np.empty_like(t)
            normal = x <= 1e12
            if np.any(normal):
                tn = t[normal]
                base = np.exp((q - 1.0 - ne) * np.log(tn) - tn + log_cn_pow)
                out[normal] = base * _binomial_remainder(x[normal], ne, j_head)
            if np.any(~normal):
                # remainder ~ -c_J x^J (1 + (c_{J-1}/c_J)/x); fused with the
                # t-power in log space so neither factor overflows.
                th = t[~normal]
                log_mag = (
                    (q - 1.0 - ne - j_head) * np.log(th)
                    - th
                    + log_cn_pow
                    + log_c_head
                    + j_head * log_u
                )
                corr = (
                    coefs[-2] / coefs[-1] / x[~normal] if j_head >= 1 else 0.0
                )
                out[~normal] = -sign_c_head * np.exp(log_mag) * (1.0 + corr)
            return out

        res = integrate_semi_infinite(integrand, inner_cfg(u))
        value = ensure_converged(res, context=f"remainder kernel at u={u:.6g}")
        return -math.exp(-u) * scale * value

    betas = _centred_w_coefficients(fam, j_head, cfg)
    # Coefficients past the head exist only below the tail order; they are
    # needed solely when rho sits just under an integer.
    tail_betas = []
    if rho - j_head > 0.9:
        for j in (j_head + 1, j_head + 2):
            if fam.tail_order - j <= 0.05:
                break
            tail_betas.append(scale * _kernel_moment_integral(fam, j, cfg))
    moment = fractional_moment_from_bracket(
        bracket, rho, betas, cfg, tail_alphas=tail_betas
    )
    return -math.log(c_n) + math.log(moment) / (1.0 - a)


def renyi_entropy_low(fam, cfg):
    """h_alpha in nats for alpha in (0, 1).

    Requires alpha * q * theta_exp > n, otherwise the defining integral of
    the entropy diverges and the parameters are rejected.
    """
    a = fam.alpha
    if not 0.0 < a < 1.0:
        raise ValueError(f"low branch requires alpha in (0, 1), got {a}")
    if a * fam.q * fam.theta_exp <= fam.n:
        raise ValueError(
            "divergent entropy integral: alpha*q*theta_exp = "
            f"{a * fam.q * fam.theta_exp} must exceed n = {fam.n}"
        )
    rho = fam.q * (1.0 - a)
    nearest = round(rho)
    if nearest >= 1 and abs(rho - nearest) < INTEGER_RHO_TOL:
        return _low_branch_integer(fam, int(nearest), cfg)
    return _low_branch_fractional(fam, rho, cfg)


def renyi_entropy(fam, cfg):
    """h_alpha dispatching on the order."""
    if fam.alpha > 1.0:
        return renyi_entropy_high(fam, cfg)
    return renyi_entropy_low(fam, cfg)

"""Moments of the empirical-mean estimation error for Bernoulli samples.

With D_n = (mean(X_1..X_n) - theta)^2, the absolute error moment of order
rho is E{D_n^(rho/2)}, so the general moment identity applies with order
rho/2.  The MGF of D_n is expressed through the characteristic function of
one sample via a Gaussian smoothing identity:

    M_Dn(-u) = (1/(2 sqrt(pi u))) *
               int_-inf^inf e^{-i w theta} cf(w/n)^n e^{-w^2/(4u)} dw,

evaluated here over w >= 0 and doubled (the real part is even).  The
integration radius combines the Gaussian envelope with the decay envelope
of |cf|^n; past one period of the characteristic function the envelope
argument no longer applies, so the Gaussian radius alone is used there.

The oscillatory integral is affordable only while the Gaussian radius is
moderate.  Far in the tail (u above ``CF_SWITCH``), where the integrand of
the moment representation still carries mass whenever n*theta is an
integer, M_Dn(-u) is evaluated from the exact two-point-per-atom form
sum_k pmf(k) e^{-u (k/n - theta)^2} instead; both evaluators agree to
quadrature tolerance in the overlap and a unit test pins that down.

``chernoff_bound`` and ``hoeffding_c`` implement the closed-form
concentration companion: E|mean - theta|^rho <= K(rho, theta) n^(-rho/2)
with K = rho Gamma(rho/2) (2 theta (1-theta))^(rho/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .frac_moment import (
    INTEGER_RHO_TOL,
    _moment_order_below_one,
    fractional_moment_from_alphas,
)
from .quadrature import (
    QuadratureConfig,
    ensure_converged,
    integrate_half_line_truncated,
)
from .special import gamma, log_gamma

__all__ = [
    "BernoulliEstimation",
    "bernoulli_cf",
    "mgf_dn",
    "error_moment",
    "chernoff_bound",
    "hoeffding_c",
    "hoeffding_c_symmetrized",
]

# Above this u the characteristic-function quadrature for M_Dn is replaced
# by the exact atom sum; see the module docstring.
CF_SWITCH = 2e4


@dataclass(frozen=True)
class BernoulliEstimation:
    n: int
    theta: float
    rho: float

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if self.rho <= 0.0:
            raise ValueError(f"rho must be positive, got {self.rho}")


def bernoulli_cf(omega, theta):
    """Characteristic function of one Bernoulli(theta) sample: 1 + theta(e^{iw}-1)."""
    return 1.0 + theta * (np.exp(1j * np.asarray(omega)) - 1.0)


@lru_cache(maxsize=64)
def _binomial_pmf(n, theta):
    """Binomial(n, theta) weights via the in-package log-Gamma."""
    k = np.arange(n + 1, dtype=float)
    log_choose = np.array(
        [log_gamma(n + 1.0) - log_gamma(i + 1.0) - log_gamma(n - i + 1.0)
         for i in range(n + 1)]
    )
    with np.errstate(divide="ignore"):
        log_w = log_choose + k * math.log(theta) + (n - k) * math.log(1.0 - theta)
    pmf = np.exp(log_w)
    pmf.setflags(write=False)
    return pmf


def _dn_atoms(n, theta):
    k = np.arange(n + 1, dtype=float)
    d = (k / n - theta) ** 2
    return d, _binomial_pmf(n, theta)


def _mgf_dn_atoms(n, theta, u):
    """Exact M_Dn(-u) from the binomial atoms; valid for every u >= 0."""
    d, pmf = _dn_atoms(n, theta)
    u = np.asarray(u, dtype=float)
    if u.ndim == 0:
        return float(np.exp(-float(u) * d) @ pmf)
    return np.exp(-np.outer(u, d)) @ pmf


def _cf_radius(n, theta, u, tau):
    """Truncation radius for the w-integral at a given u.

    The Gaussian factor dies at 2 sqrt(u ln(1/tau)); within the first
    period of cf(w/n)^n the envelope exp(-n theta(1-theta)(1-cos(w/n)))
    dies at roughly sqrt(2 n ln(1/tau) / (theta(1-theta))).  The envelope
    cut is only applied while it is reached before half a period, where
    the envelope is still decreasing.
    """
    log_inv_tau = math.log(1.0 / tau)
    r_gauss = 2.0 * math.sqrt(u * log_inv_tau) + 30.0
    tv = theta * (1.0 - theta)
    if tv <= 0.0:
        return r_gauss
    r_cf = math.sqrt(2.0 * n * log_inv_tau / tv) + 30.0
    if r_gauss > math.pi * n and r_cf < r_gauss:
        # Gaussian reaches past half a period: later oscillation bumps of
        # cf^n matter and only the Gaussian cut is safe.
        return r_gauss
    return min(r_gauss, r_cf)


def mgf_dn(est, u, cfg):
    """M_Dn(-u) through the characteristic-function integral.

    Intended for moderate u (the integration cost grows like sqrt(u)); the
    error-moment path switches to the exact atom form beyond CF_SWITCH.
    """
    if u <= 0.0:
        raise ValueError(f"u must be positive, got {u}")
    n, theta = est.n, est.theta
    if theta in (0.0, 1.0):
        return 1.0
    tau = cfg.abs_tol / 100.0
    radius = _cf_radius(n, theta, u, tau)

    def integrand(w):
        w = np.asarray(w, dtype=float)
        cf_pow = bernoulli_cf(w / n, theta) ** n
        osc = np.real(np.exp(-1j * w * theta) * cf_pow)
        return osc * np.exp(-(w**2) / (4.0 * u))

    # The Gaussian factor lives on a scale sqrt(u); seed a breakpoint there
    # so narrow spikes at small u cannot hide inside a wide initial panel.
    gauss_scale = 2.0 * math.sqrt(u * math.log(1.0 / tau))
    res = integrate_half_line_truncated(
        integrand, radius, cfg, seed_points=(gauss_scale, 2.0 * gauss_scale)
    )
    value = ensure_converged(res, context=f"M_Dn at u={u:.6g}")
    return value / math.sqrt(math.pi * u)


def _mgf_dn_hybrid(est, cfg_inner):
    """Scalar M_Dn(-u) evaluator: cf quadrature below CF_SWITCH, atoms above."""

    def evaluate(u):
        if u > CF_SWITCH:
            return _mgf_dn_atoms(est.n, est.theta, u)
        return mgf_dn(est, u, cfg_inner)

    return evaluate


def _even_moment(n, theta, k):
    """E{D_n^k} for integer k from the binomial weights (direct formula)."""
    d, pmf = _dn_atoms(n, theta)
    return float(pmf @ d**k)


def _centred_dn_coefficients(n, theta, j_max):
    """a_j = E{(D_n - 1)^j} enumerated exactly; |D_n| <= 1 keeps these tame."""
    d, pmf = _dn_atoms(n, theta)
    return [float(pmf @ (d - 1.0) ** j) for j in range(j_max + 1)]


def _inner_cfg(cfg):
    return QuadratureConfig(
        rel_tol=min(cfg.rel_tol, 1e-10),
        abs_tol=min(cfg.abs_tol, 1e-13),
        max_subdivisions=cfg.max_subdivisions,
        split_point=cfg.split_point,
    )


def error_moment(est, cfg):
    """E|mean(X_1..X_n) - theta|^rho for any rho > 0.

    Even integer orders reduce to exact enumeration of E{D_n^(rho/2)};
    everything else runs through the moment identity of order rho/2 with
    the hybrid MGF evaluator.
    """
    n, theta, rho = est.n, est.theta, est.rho
    if theta in (0.0, 1.0):
        return 0.0
    half = rho / 2.0
    nearest = round(half)
    if nearest >= 1 and abs(half - nearest) < INTEGER_RHO_TOL:
        return _even_moment(n, theta, int(nearest))
    cfg_inner = _inner_cfg(cfg)
    mgf = _mgf_dn_hybrid(est, cfg_inner)
    mgf_noise = 10.0 * cfg_inner.abs_tol
    alphas = _centred_dn_coefficients(n, theta, math.floor(half) + 20)
    if half < 1.0:
        return _moment_order_below_one(mgf, half, alphas, cfg, mgf_noise=mgf_noise)
    return fractional_moment_from_alphas(mgf, half, alphas, cfg, mgf_noise=mgf_noise)


def error_moment_from_cf(cf, theta, n, rho, dn_raw_moments, cfg, mgf_neg_tail=None):
    """Error moment for a general sample law given its characteristic function.

    ``cf(w)`` is the single-sample characteristic function and
    ``dn_raw_moments[l]`` must equal E{D_n^l}.  Preserves the generality of
    the Gaussian-smoothing route for non-Bernoulli laws.  Beyond CF_SWITCH
    the oscillatory integral is unaffordable; ``mgf_neg_tail(u)`` takes
    over there if supplied, otherwise the MGF is extrapolated
    log-linearly from two checkpoints (exact in the limit for decaying
    MGFs, and correctly flat when the squared error has an atom at zero).
    """
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    half = rho / 2.0
    nearest = round(half)
    if nearest >= 1 and abs(half - nearest) < INTEGER_RHO_TOL:
        return float(dn_raw_moments[int(nearest)])
    cfg_inner = _inner_cfg(cfg)
    log_inv_tau = math.log(100.0 / cfg_inner.abs_tol)

    def cf_quadrature(u):
        radius = 2.0 * math.sqrt(u * log_inv_tau) + 30.0
        # The moment integrand divides by u^(1+rho/2), so far in the tail
        # the MGF only needs u-scaled absolute accuracy.
        cfg_u = QuadratureConfig(
            rel_tol=cfg_inner.rel_tol,
            abs_tol=cfg_inner.abs_tol * max(1.0, u),
            max_subdivisions=cfg_inner.max_subdivisions,
            split_point=cfg_inner.split_point,
        )

        def integrand(w):
            w = np.asarray(w, dtype=float)
            osc = np.real(np.exp(-1j * w * theta) * np.asarray(cf(w / n)) ** n)
            return osc * np.exp(-(w**2) / (4.0 * u))

        gauss_scale = 2.0 * math.sqrt(u * log_inv_tau)
        res = integrate_half_line_truncated(
            integrand, radius, cfg_u, seed_points=(gauss_scale, 2.0 * gauss_scale)
        )
        value = ensure_converged(res, context=f"M_Dn at u={u:.6g}")
        return value / math.sqrt(math.pi * u)

    tail_state = {}

    def mgf(u):
        if u <= CF_SWITCH:
            return cf_quadrature(u)
        if mgf_neg_tail is not None:
            return float(mgf_neg_tail(u))
        if not tail_state:
            m_half = cf_quadrature(CF_SWITCH / 2.0)
            m_full = cf_quadrature(CF_SWITCH)
            if m_full <= 0.0 or m_half <= m_full:
                tail_state["rate"] = None
            else:
                tail_state["rate"] = math.log(m_half / m_full) / (CF_SWITCH / 2.0)
                tail_state["anchor"] = m_full
        if tail_state["rate"] is None:
            return 0.0
        return tail_state["anchor"] * math.exp(
            -tail_state["rate"] * (u - CF_SWITCH)
        )

    moments = [float(m) for m in dn_raw_moments]
    alphas = [1.0]
    for j in range(1, len(moments)):
        alphas.append(
            math.fsum(
                (-1.0) ** (j - l) * math.comb(j, l) * moments[l]
                for l in range(j + 1)
            )
        )
    mgf_noise = 10.0 * cfg_inner.abs_tol
    if half < 1.0:
        return _moment_order_below_one(mgf, half, alphas, cfg, mgf_noise=mgf_noise)
    return fractional_moment_from_alphas(mgf, half, alphas, cfg, mgf_noise=mgf_noise)


def chernoff_bound(est):
    """Concentration upper bound K(rho, theta) n^(-rho/2) on the error moment."""
    n, theta, rho = est.n, est.theta, est.rho
    if theta in (0.0, 1.0):
        return 0.0
    k = rho * gamma(rho / 2.0) * (2.0 * theta * (1.0 - theta)) ** (rho / 2.0)
    return k * n ** (-rho / 2.0)


def hoeffding_c(theta):
    """Piecewise sub-Gaussian coefficient C(theta).

    0 at theta = 0, (1-2 theta)/(4 ln((1-theta)/theta)) on (0, 1/2), and
    theta(1-theta)/2 on [1/2, 1].
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    if theta == 0.0:
        return 0.0
    if theta < 0.5:
        return (1.0 - 2.0 * theta) / (4.0 * math.log((1.0 - theta) / theta))
    return 0.5 * theta * (1.0 - theta)


def hoeffding_c_symmetrized(theta):
    """min(C(theta), C(1-theta)) = theta(1-theta)/2, the symmetry-improved value."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    return 0.5 * theta * (1.0 - theta)

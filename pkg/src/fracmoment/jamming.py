"""Mutual information of a memoryless channel with one jammed symbol.

The channel uses the nominal law q(y|x) at every position except one,
chosen uniformly at random, where the jam law r(y|x) applies.  For a
product input all block quantities collapse to single-letter functionals

    f(u) = sum p(x) q(y|x) exp(-u r/q),   g(u) = sum p(x) r(y|x) exp(-u r/q),
    s(u) = sum w(y) exp(-u w/v),          t(u) = sum v(y) exp(-u w/v),

with v, w the output laws under q and r, and the block mutual information
becomes one integral over u plus finite entropy-like sums:

    I_p = int_0^inf [t^{n-1}(u/n) s(u/n) - f^{n-1}(u/n) g(u/n)] du/u
          + sum p r ln q - sum w ln v
          + (n-1) [sum p q ln q - sum v ln v].

The integrand has a removable singularity at the origin (both products
tend to 1 at rate 1); below ``SMALL_U`` the analytic limit replaces the
0/0 form.  The n-th powers are taken in log space so blocks of hundreds
of symbols lose no precision.

``bsc_mutual_information`` is the closed-form specialization to a binary
symmetric nominal channel (crossover delta), binary symmetric jam law
(crossover epsilon) and equiprobable input bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import ensure_converged, integrate_semi_infinite
from .special import binary_divergence, binary_entropy

__all__ = [
    "JammedChannelSpec",
    "BscJamSpec",
    "fg_functions",
    "st_functions",
    "conditional_entropy",
    "output_entropy",
    "mutual_information",
    "bsc_mutual_information",
    "bsc_jamming_free_mi",
    "bsc_degradation",
    "bsc_to_generic",
]

# Below this u the integrands use their analytic u -> 0 limits.
SMALL_U = 1e-6


@dataclass(frozen=True)
class JammedChannelSpec:
    """Finite-alphabet input distribution plus nominal and jam channels."""

    input_dist: tuple
    nominal_channel: tuple
    jam_channel: tuple
    n: int

    def __post_init__(self):
        p = np.asarray(self.input_dist, dtype=float)
        q = np.asarray(self.nominal_channel, dtype=float)
        r = np.asarray(self.jam_channel, dtype=float)
        object.__setattr__(self, "input_dist", tuple(map(float, p)))
        object.__setattr__(
            self, "nominal_channel", tuple(tuple(map(float, row)) for row in q)
        )
        object.__setattr__(
            self, "jam_channel", tuple(tuple(map(float, row)) for row in r)
        )
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"block length must be a positive integer, got {self.n}")
        if p.ndim != 1 or q.ndim != 2 or r.ndim != 2:
            raise ValueError("input_dist must be a vector, channels must be matrices")
        if q.shape != r.shape or q.shape[0] != p.size:
            raise ValueError("channel shapes must agree with the input alphabet")
        if np.any(p < 0.0) or np.any(q < 0.0) or np.any(r < 0.0):
            raise ValueError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("input distribution must sum to 1")
        for name, mat in (("nominal_channel", q), ("jam_channel", r)):
            rows = mat.sum(axis=1)
            if np.any(np.abs(rows - 1.0) > 1e-12):
                raise ValueError(f"rows of {name} must sum to 1")
        bad = (r > 0.0) & (q == 0.0) & (p[:, None] > 0.0)
        if np.any(bad):
            raise ValueError(
                "jam law puts mass where the nominal law has none on a "
                "supported input; likelihood ratios are unbounded"
            )

    def arrays(self):
        return (
            np.asarray(self.input_dist, dtype=float),
            np.asarray(self.nominal_channel, dtype=float),
            np.asarray(self.jam_channel, dtype=float),
        )


@dataclass(frozen=True)
class BscJamSpec:
    """Binary symmetric nominal/jam pair with equiprobable input bits."""

    delta: float
    epsilon: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta}")
        if not self.delta < self.epsilon <= 0.5:
            raise ValueError(
                f"epsilon must lie in (delta, 1/2], got {self.epsilon}"
            )
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"block length must be a positive integer, got {self.n}")


def bsc_to_generic(spec):
    """The JammedChannelSpec equivalent of a binary symmetric pair."""
    d, e = spec.delta, spec.epsilon
    return JammedChannelSpec(
        input_dist=(0.5, 0.5),
        nominal_channel=((1.0 - d, d), (d, 1.0 - d)),
        jam_channel=((1.0 - e, e), (e, 1.0 - e)),
        n=spec.n,
    )


class _Functionals:
    """Precomputed single-letter pieces of a jammed-channel spec."""

    def __init__(self, spec):
        p, q, r = spec.arrays()
        mask = q > 0.0
        weight_x = np.broadcast_to(p[:, None], q.shape)[mask]
        self.pq = (weight_x * q[mask]).ravel()
        self.pr = (weight_x * r[mask]).ravel()
        self.ratio_q = (r[mask] / q[mask]).ravel()
        self.log_q = np.log(q[mask]).ravel()

        v = p @ q
        w = p @ r
        ymask = v > 0.0
        self.v = v[ymask]
        self.w = w[ymask]
        self.ratio_y = self.w / self.v
        self.log_v = np.log(np.where(self.v > 0.0, self.v, 1.0))

        # First-order slopes at u = 0 for the removable-singularity limits.
        self.pr2_over_q = float(self.pq @ self.ratio_q**2)
        self.w2_over_v = float(self.v @ self.ratio_y**2)

    def fg(self, u):
        u = np.asarray(u, dtype=float)
        e = np.exp(-np.multiply.outer(u, self.ratio_q))
        return e @ self.pq, e @ self.pr

    def st(self, u):
        u = np.asarray(u, dtype=float)
        e = np.exp(-np.multiply.outer(u, self.ratio_y))
        return e @ self.v, e @ self.w

    def sum_pr_ln_q(self):
        return float(self.pr @ self.log_q)

    def sum_pq_ln_q(self):
        return float(self.pq @ self.log_q)

    def sum_w_ln_v(self):
        return float(self.w @ self.log_v)

    def sum_v_ln_v(self):
        return float(self.v @ self.log_v)


def fg_functions(spec, u):
    """(f(u), g(u)) for a single abscissa."""
    if u < 0.0:
        raise ValueError(f"u must be non-negative, got {u}")
    fn = _Functionals(spec)
    f, g = fn.fg(float(u))
    return float(f), float(g)


def st_functions(spec, u):
    """(s(u), t(u)) for a single abscissa; note the (s, t) order."""
    if u < 0.0:
        raise ValueError(f"u must be non-negative, got {u}")
    fn = _Functionals(spec)
    t, s = fn.st(float(u))
    return float(s), float(t)


def _powered(base, comp, n):
    """base^(n-1) * comp in log space; stable for blocks of hundreds."""
    if n == 1:
        return np.asarray(comp, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        return np.exp((n - 1.0) * np.log(base) + np.log(comp))


def conditional_entropy(spec, cfg):
    """h(Y^n | X^n) in nats."""
    fn = _Functionals(spec)
    n = spec.n
    # [f^{n-1}(u/n) g(u/n) - e^-u]/u -> (1 - sum p r^2/q)/n as u -> 0
    limit0 = (1.0 - fn.pr2_over_q) / n

    def integrand(u):
        u = np.asarray(u, dtype=float)
        f, g = fn.fg(u / n)
        val = _powered(f, g, n) - np.exp(-u)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(u < SMALL_U, limit0, val / u)
        return out

    res = integrate_semi_infinite(integrand, cfg.with_singularity(0.0))
    integral = ensure_converged(res, context="conditional entropy integral")
    return integral - fn.sum_pr_ln_q() - (n - 1) * fn.sum_pq_ln_q()


def output_entropy(spec, cfg):
    """h(Y^n) in nats."""
    fn = _Functionals(spec)
    n = spec.n
    limit0 = (1.0 - fn.w2_over_v) / n

    def integrand(u):
        u = np.asarray(u, dtype=float)
        t, s = fn.st(u / n)
        val = _powered(t, s, n) - np.exp(-u)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(u < SMALL_U, limit0, val / u)
        return out

    res = integrate_semi_infinite(integrand, cfg.with_singularity(0.0))
    integral = ensure_converged(res, context="output entropy integral")
    return integral - fn.sum_w_ln_v() - (n - 1) * fn.sum_v_ln_v()


def mutual_information(spec, cfg):
    """I(X^n; Y^n) in nats via the combined single integral."""
    fn = _Functionals(spec)
    n = spec.n
    limit0 = (fn.pr2_over_q - fn.w2_over_v) / n

    def integrand(u):
        u = np.asarray(u, dtype=float)
        f, g = fn.fg(u / n)
        t, s = fn.st(u / n)
        val = _powered(t, s, n) - _powered(f, g, n)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(u < SMALL_U, limit0, val / u)
        return out

    res = integrate_semi_infinite(integrand, cfg.with_singularity(0.0))
    integral = ensure_converged(res, context="mutual information integral")
    return (
        integral
        + fn.sum_pr_ln_q()
        - fn.sum_w_ln_v()
        + (n - 1) * (fn.sum_pq_ln_q() - fn.sum_v_ln_v())
    )


def bsc_mutual_information(spec, cfg):
    """I(X^n; Y^n) in nats for the binary symmetric specialization."""
    d, e, n = spec.delta, spec.epsilon, spec.n
    rate_match = (1.0 - e) / ((1.0 - d) * n)
    rate_flip = e / (d * n)
    # slope of the integrand at 0: (sum p r^2/q - 1)/n
    pr2_over_q = (1.0 - e) ** 2 / (1.0 - d) + e**2 / d
    limit0 = (pr2_over_q - 1.0) / n

    def integrand(u):
        u = np.asarray(u, dtype=float)
        e1 = np.exp(-rate_match * u)
        e2 = np.exp(-rate_flip * u)
        f = (1.0 - d) * e1 + d * e2
        g = (1.0 - e) * e1 + e * e2
        with np.errstate(divide="ignore", over="ignore"):
            fpow = np.exp((n - 1.0) * np.log(f) + np.log(g))
        val = np.exp(-u) - fpow
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(u < SMALL_U, limit0, val / u)

    res = integrate_semi_infinite(integrand, cfg.with_singularity(0.0))
    integral = ensure_converged(res, context="jammed BSC integral")
    return (
        n * math.log(2.0)
        - binary_divergence(e, d)
        - binary_entropy(e)
        - (n - 1) * binary_entropy(d)
        + integral
    )


def bsc_jamming_free_mi(spec):
    """I(X^n; Y^n) = n (ln 2 - H_b(delta)) without the jammer."""
    return spec.n * (math.log(2.0) - binary_entropy(spec.delta))


def bsc_degradation(spec, cfg):
    """Loss of mutual information due to the jammed symbol, in nats."""
    return bsc_jamming_free_mi(spec) - bsc_mutual_information(spec, cfg)

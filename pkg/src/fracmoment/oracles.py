"""Brute-force reference implementations for tests and CLI --verify.

Everything in this module is deliberately independent of the formula
paths: direct series and enumerations instead of integral representations,
scipy quadrature instead of the in-package engine, and libm's lgamma
instead of the in-package Lanczos.  Agreement between the two routes is
then evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as scipy_integrate

__all__ = [
    "DiscreteRv",
    "exact_moment",
    "guesswork_series",
    "binomial_error_moment",
    "direct_renyi",
    "direct_renyi_normalization",
    "exhaustive_jammed_mi",
    "monte_carlo_moment",
    "monte_carlo_log_expectation",
]


@dataclass(frozen=True)
class DiscreteRv:
    support: tuple
    probs: tuple

    def __post_init__(self):
        xs = tuple(float(x) for x in self.support)
        ps = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "support", xs)
        object.__setattr__(self, "probs", ps)
        if len(xs) != len(ps) or not xs:
            raise ValueError("support and probs must have equal nonzero length")
        if min(xs) < 0.0 or min(ps) < 0.0:
            raise ValueError("support and probs must be non-negative")
        if abs(math.fsum(ps) - 1.0) > 1e-12:
            raise ValueError("probs must sum to 1")


def exact_moment(rv, rho):
    """E{X^rho} by the defining finite sum."""
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    return math.fsum(p * x**rho for x, p in zip(rv.support, rv.probs))


def guesswork_series(prob, rho, tail_tol=1e-14):
    """E{G^rho} by direct summation of the defining double series.

    Truncates once a geometric bound on the remaining tail falls below
    tail_tol of the accumulated value.  For k beyond rho/ln(1/q) the terms
    k^rho q^(k-1) decay with ratio at most ((k+1)/k)^rho q < 1, which gives
    the bound.
    """
    pairs = [
        (p, pt) for p, pt in zip(prob.source_p, prob.guess_p) if p > 0.0
    ]
    if any(pt <= 0.0 for _, pt in pairs):
        raise ValueError("guess probability must be positive on the support")
    ps = np.array([p for p, _ in pairs])
    pts = np.array([pt for _, pt in pairs])
    qs = 1.0 - pts

    total = 0.0
    block = 512
    k_start = 1
    while True:
        k = np.arange(k_start, k_start + block, dtype=float)
        # sum_x P(x) ptilde(x) k^rho q(x)^(k-1)
        terms = k[:, None] ** rho * qs[None, :] ** (k[:, None] - 1.0)
        total += float((terms @ (ps * pts)).sum())
        k_last = k_start + block - 1
        # per-symbol geometric tail bound from k_last + 1 on
        ratios = ((k_last + 1.0) / k_last) ** rho * qs
        if np.all(ratios < 1.0):
            lead = (k_last + 1.0) ** rho * qs**k_last * ps * pts
            tail = float((lead / (1.0 - ratios)).sum())
            if tail <= tail_tol * max(total, 1.0):
                return total
        k_start += block
        if k_start > 50_000_000:
            raise RuntimeError("guesswork series failed to converge")


def binomial_error_moment(est):
    """E|mean(X_1..X_n) - theta|^rho by full binomial enumeration.

    Weights are assembled in log space (libm lgamma) so that large n never
    overflows.
    """
    n, theta, rho = est.n, est.theta, est.rho
    if theta in (0.0, 1.0):
        return 0.0
    k = np.arange(n + 1, dtype=float)
    log_choose = np.array(
        [
            math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
            for i in range(n + 1)
        ]
    )
    log_w = log_choose + k * math.log(theta) + (n - k) * math.log(1.0 - theta)
    return float(np.exp(log_w) @ np.abs(k / n - theta) ** rho)


def direct_renyi(fam, cfg=None):
    """Entropy of order alpha by direct quadrature of the density power.

    Supported for dimension 1 and 2 only; the point of the formula paths is
    precisely that this route stops scaling.
    """
    if fam.n not in (1, 2):
        raise ValueError("direct quadrature oracle supports n in {1, 2} only")
    c = direct_renyi_normalization(fam)
    a, th, q = fam.alpha, fam.theta_exp, fam.q
    with warnings.catch_warnings():
        # heavy tails make QUADPACK grumble; accuracy is cross-checked
        warnings.simplefilter("ignore", scipy_integrate.IntegrationWarning)
        if fam.n == 1:
            val, _ = scipy_integrate.quad(
                lambda x: (1.0 + x**th) ** (-q * a),
                0.0,
                np.inf,
                epsabs=1e-12,
                epsrel=1e-11,
                limit=400,
            )
            integral = 2.0 * c**a * val
        else:
            val, _ = scipy_integrate.nquad(
                lambda y, x: (1.0 + x**th + y**th) ** (-q * a),
                [[0.0, np.inf], [0.0, np.inf]],
                opts={"epsabs": 1e-11, "epsrel": 1e-10, "limit": 200},
            )
            integral = 4.0 * c**a * val
    return math.log(integral) / (1.0 - a)


def direct_renyi_normalization(fam):
    """Normalizing constant by direct quadrature, independent of the library."""
    th, q = fam.theta_exp, fam.q
    if fam.n == 1:
        val, _ = scipy_integrate.quad(
            lambda x: (1.0 + x**th) ** (-q),
            0.0,
            np.inf,
            epsabs=1e-12,
            epsrel=1e-11,
            limit=400,
        )
        return 1.0 / (2.0 * val)
    val, _ = scipy_integrate.nquad(
        lambda y, x: (1.0 + x**th + y**th) ** (-q),
        [[0.0, np.inf], [0.0, np.inf]],
        opts={"epsabs": 1e-11, "epsrel": 1e-10, "limit": 200},
    )
    return 1.0 / (4.0 * val)


def exhaustive_jammed_mi(spec):
    """I(X^n; Y^n) in nats from the fully enumerated joint law.

    The channel applies the jam law at one uniformly random position and
    the nominal law elsewhere.  Enumeration cost is (|X| |Y|)^n, capped at
    one million entries.
    """
    p_x = np.asarray(spec.input_dist, dtype=float)
    q = np.asarray(spec.nominal_channel, dtype=float)
    r = np.asarray(spec.jam_channel, dtype=float)
    n = spec.n
    nx, ny = q.shape
    if (nx * ny) ** n > 1_000_000:
        raise ValueError("alphabet too large for exhaustive enumeration")

    xs = list(itertools.product(range(nx), repeat=n))
    ys = list(itertools.product(range(ny), repeat=n))
    table = []
    p_y = {}
    for xv in xs:
        px = math.prod(p_x[i] for i in xv)
        if px == 0.0:
            continue
        for yv in ys:
            cond = math.fsum(
                math.prod(q[xv[j], yv[j]] for j in range(n) if j != i)
                * r[xv[i], yv[i]]
                for i in range(n)
            ) / n
            if cond == 0.0:
                continue
            joint = px * cond
            table.append((joint, cond, yv))
            p_y[yv] = p_y.get(yv, 0.0) + joint
    # I = sum joint * ln(cond / p_y), once the output marginal is complete.
    return math.fsum(
        joint * math.log(cond / p_y[yv]) for joint, cond, yv in table
    )


def monte_carlo_moment(sampler, rho, samples, seed):
    """(estimate, standard error) of E{X^rho} by seeded Monte Carlo.

    ``sampler(rng, m)`` must return m non-negative draws.  Sampling is
    chunked with a single generator consumed in fixed order, so results
    are bit-identical across runs for the same seed.
    """
    if samples < 10_000:
        raise ValueError("use at least 10000 samples")
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining > 0:
        m = min(remaining, 100_000)
        vals = np.asarray(sampler(rng, m), dtype=float) ** rho
        total += float(vals.sum())
        total_sq += float((vals**2).sum())
        remaining -= m
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    return mean, math.sqrt(var / samples)


def monte_carlo_log_expectation(sampler, samples, seed):
    """(estimate, standard error) of E{ln X} by seeded Monte Carlo."""
    if samples < 10_000:
        raise ValueError("use at least 10000 samples")
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining > 0:
        m = min(remaining, 100_000)
        vals = np.log(np.asarray(sampler(rng, m), dtype=float))
        total += float(vals.sum())
        total_sq += float((vals**2).sum())
        remaining -= m
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    return mean, math.sqrt(var / samples)

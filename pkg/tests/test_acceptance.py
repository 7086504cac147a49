"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (run with -s to see them inline)."""

import math
import time

import numpy as np

from fracmoment import (
    cauchy_renyi,
    estimation,
    frac_moment,
    guesswork,
    jamming,
    oracles,
)
from fracmoment import special as sp
from fracmoment.quadrature import QuadratureConfig

CFG = QuadratureConfig()


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_criterion_1_bsc_jamming_anchors():
    spec = jamming.BscJamSpec(1e-3, 0.5, 128)
    t0 = time.perf_counter()
    i_q = jamming.bsc_jamming_free_mi(spec)
    t_iq = time.perf_counter() - t0
    t0 = time.perf_counter()
    degradation = jamming.bsc_degradation(spec, CFG)
    t_deg = time.perf_counter() - t0
    _report(
        "criterion 1a: jamming-free block information 87.71 nats",
        abs(i_q - 87.71) <= 0.01 and t_iq < 1.0,
        f"I_q={i_q:.4f}, {t_iq:.3f}s",
    )
    _report(
        "criterion 1b: jamming degradation 2.88 nats",
        abs(degradation - 2.88) <= 0.01 and t_deg < 1.0,
        f"loss={degradation:.4f}, {t_deg:.3f}s",
    )


def test_criterion_2_moment_oracle_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(50):
        k = int(rng.integers(2, 7))
        xs = rng.uniform(0.0, 10.0, k)
        ps = rng.dirichlet(np.ones(k))
        spec = frac_moment.mgf_discrete(xs, ps)
        rv = oracles.DiscreteRv(tuple(xs), tuple(ps))
        for rho in (0.3, 0.7, 1.5, 2.5, 3.7):
            value = frac_moment.fractional_moment(
                spec, frac_moment.MomentRequest(rho, CFG)
            )
            exact = oracles.exact_moment(rv, rho)
            worst = max(worst, abs(value - exact) / abs(exact))
    exp_spec = frac_moment.mgf_exponential()
    worst_exp = max(
        abs(
            frac_moment.fractional_moment(exp_spec, frac_moment.MomentRequest(rho, CFG))
            - sp.gamma(1.0 + rho)
        )
        / sp.gamma(1.0 + rho)
        for rho in (0.5, 1.5, 2.5)
    )
    elapsed = time.perf_counter() - t0
    _report(
        "criterion 2: 250 discrete oracle checks at 1e-7, exponential at 1e-8",
        worst <= 1e-7 and worst_exp <= 1e-8 and elapsed < 10.0,
        f"worst discrete {worst:.2e}, worst exponential {worst_exp:.2e}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_3_log_expectations():
    exp_value = frac_moment.log_expectation(frac_moment.mgf_exponential(), CFG)
    const_value = frac_moment.log_expectation(frac_moment.mgf_constant(2.0), CFG)
    gap_exp = abs(exp_value + sp.CONSTANTS.euler_gamma)
    gap_const = abs(const_value - math.log(2.0))
    _report(
        "criterion 3: logarithmic expectations",
        gap_exp <= 1e-8 and gap_const <= 1e-10,
        f"exponential gap {gap_exp:.2e}, constant gap {gap_const:.2e}",
    )


def test_criterion_4_guesswork_oracle_suite():
    rng = np.random.default_rng(31337)
    worst_frac = 0.0
    worst_int = 0.0
    for _ in range(30):
        k = int(rng.integers(2, 9))
        prob = guesswork.GuessProblem(
            tuple(rng.dirichlet(np.ones(k))), tuple(rng.dirichlet(np.ones(k)))
        )
        for rho in (0.5, 1.3, 2.0, 2.7):
            value = guesswork.guess_moment_averaged(prob, rho, CFG)
            series = oracles.guesswork_series(prob, rho)
            gap = abs(value - series) / abs(series)
            if rho == 2.0:
                worst_int = max(worst_int, gap)
            else:
                worst_frac = max(worst_frac, gap)
    _report(
        "criterion 4: guesswork vs series oracle",
        worst_frac <= 1e-6 and worst_int <= 1e-9,
        f"worst fractional {worst_frac:.2e}, worst closed-form {worst_int:.2e}",
    )


def test_criterion_5_estimation_grid():
    worst = 0.0
    dominated = True
    for n in (1, 5, 20, 100):
        for theta in (0.1, 0.25, 0.5):
            for rho in (0.5, 1.0, 1.5):
                e = estimation.BernoulliEstimation(n, theta, rho)
                value = estimation.error_moment(e, CFG)
                exact = oracles.binomial_error_moment(e)
                worst = max(worst, abs(value - exact))
                dominated &= value <= estimation.chernoff_bound(e) + 1e-15
    ns = [100, 200, 400, 800, 1600]
    values = [
        estimation.error_moment(estimation.BernoulliEstimation(n, 0.25, 1.0), CFG)
        for n in ns
    ]
    slope = float(np.polyfit(np.log(ns), np.log(values), 1)[0])
    _report(
        "criterion 5: estimation grid, bound dominance, scaling slope",
        worst <= 1e-5 and dominated and abs(slope + 0.5) <= 0.05,
        f"worst abs {worst:.2e}, dominated {dominated}, slope {slope:.4f}",
    )


def test_criterion_6_renyi_entropy():
    h2 = cauchy_renyi.renyi_entropy(cauchy_renyi.CauchyFamily(1, 2.0, 1.0, 2.0), CFG)
    h3 = cauchy_renyi.renyi_entropy(cauchy_renyi.CauchyFamily(1, 2.0, 1.0, 3.0), CFG)
    gap2 = abs(h2 - math.log(2.0 * math.pi))
    gap3 = abs(h3 - 0.5 * math.log(8.0 * math.pi**2 / 3.0))
    families = [
        cauchy_renyi.CauchyFamily(1, 2.0, 1.0, 2.0),      # high branch
        cauchy_renyi.CauchyFamily(1, 2.0, 2.0, 0.5),      # low, integer order
        cauchy_renyi.CauchyFamily(1, 2.0, 2.0, 0.75),     # low, fractional
        cauchy_renyi.CauchyFamily(2, 2.0, 1.5, 2.0),      # high, dimension 2
        cauchy_renyi.CauchyFamily(2, 2.0, 3.0, 0.75),     # low, dimension 2
        cauchy_renyi.CauchyFamily(2, 2.0, 4.0, 0.5),      # low int, dimension 2
    ]
    worst = max(
        abs(cauchy_renyi.renyi_entropy(f, CFG) - oracles.direct_renyi(f))
        for f in families
    )
    target = math.log(4.0 * math.pi)
    below = cauchy_renyi.renyi_entropy(cauchy_renyi.CauchyFamily(1, 2.0, 1.0, 0.99), CFG)
    above = cauchy_renyi.renyi_entropy(cauchy_renyi.CauchyFamily(1, 2.0, 1.0, 1.01), CFG)
    bracket_ok = (
        abs(below - target) / target <= 0.02 and abs(above - target) / target <= 0.02
    )
    _report(
        "criterion 6: heavy-tail Renyi entropies",
        gap2 <= 1e-6 and gap3 <= 1e-6 and worst <= 1e-5 and bracket_ok,
        f"h2 gap {gap2:.2e}, h3 gap {gap3:.2e}, worst oracle gap {worst:.2e}, "
        f"Shannon bracket [{below:.4f}, {above:.4f}] around {target:.4f}",
    )


def test_criterion_7_jamming_oracle_and_shape():
    rng = np.random.default_rng(2718)
    worst_exhaustive = 0.0
    for _ in range(8):
        n = int(rng.integers(1, 4))
        p = rng.dirichlet((2.0, 2.0))
        q = np.stack([rng.dirichlet((4.0, 2.0)), rng.dirichlet((2.0, 4.0))])
        r = np.stack([rng.dirichlet((3.0, 3.0)), rng.dirichlet((3.0, 3.0))])
        q = 0.9 * q + 0.05
        r = 0.9 * r + 0.05
        q /= q.sum(axis=1, keepdims=True)
        r /= r.sum(axis=1, keepdims=True)
        spec = jamming.JammedChannelSpec(
            tuple(p), tuple(map(tuple, q)), tuple(map(tuple, r)), n
        )
        gap = abs(
            jamming.mutual_information(spec, CFG) - oracles.exhaustive_jammed_mi(spec)
        )
        worst_exhaustive = max(worst_exhaustive, gap)

    tight = QuadratureConfig(rel_tol=1e-12, abs_tol=1e-13)
    worst_specialized = 0.0
    ordered = True
    for delta in (0.01, 0.05):
        for epsilon in (0.1, 0.3, 0.5):
            for n in (4, 32):
                spec = jamming.BscJamSpec(delta, epsilon, n)
                direct = jamming.bsc_mutual_information(spec, tight)
                generic = jamming.mutual_information(jamming.bsc_to_generic(spec), tight)
                worst_specialized = max(worst_specialized, abs(direct - generic))
                ordered &= direct <= jamming.bsc_jamming_free_mi(spec) + 1e-10
    degradations = [
        jamming.bsc_degradation(jamming.BscJamSpec(0.01, float(e), 16), CFG)
        for e in np.linspace(0.05, 0.5, 10)
    ]
    monotone = all(a <= b + 1e-10 for a, b in zip(degradations, degradations[1:]))
    _report(
        "criterion 7: jamming oracle agreement and curve shape",
        worst_exhaustive <= 1e-7
        and worst_specialized <= 1e-8
        and ordered
        and monotone,
        f"exhaustive {worst_exhaustive:.2e}, specialization {worst_specialized:.2e}, "
        f"ordered {ordered}, monotone {monotone}",
    )


def test_criterion_8_special_function_identities():
    rng = np.random.default_rng(5150)
    worst_recursion = max(
        abs(sp.gamma(x + 1.0) - x * sp.gamma(x)) / sp.gamma(x + 1.0)
        for x in rng.uniform(0.1, 80.0, 1000)
    )
    worst_reflection = max(
        abs(sp.gamma(x) * sp.gamma(1.0 - x) - math.pi / math.sin(math.pi * x))
        / (math.pi / abs(math.sin(math.pi * x)))
        for x in rng.uniform(0.01, 0.99, 200)
    )
    worst_beta = 0.0
    for _ in range(200):
        u, v = rng.uniform(0.1, 40.0, 2)
        lhs = sp.beta(u, v) * sp.gamma(u + v)
        worst_beta = max(worst_beta, abs(lhs - sp.gamma(u) * sp.gamma(v)) / lhs)
    worst_polylog = 0.0
    for j in range(9):
        for x in (0.1, 0.5, 0.9):
            acc, k = 0.0, 1
            while True:
                term = k**j * x**k
                acc += term
                if term < 1e-16 * max(acc, 1.0):
                    break
                k += 1
            worst_polylog = max(
                worst_polylog, abs(sp.polylog_neg(j, x) - acc) / acc
            )
    _report(
        "criterion 8: special-function identity suite",
        worst_recursion <= 1e-12
        and worst_reflection <= 1e-12
        and worst_beta <= 1e-12
        and worst_polylog <= 1e-10,
        f"recursion {worst_recursion:.2e}, reflection {worst_reflection:.2e}, "
        f"beta {worst_beta:.2e}, polylog {worst_polylog:.2e}",
    )

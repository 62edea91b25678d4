"""Fluctuation normalization, Monte Carlo experiments, and test statistics.

A count N in a fixed interval of an n-point ensemble at inverse temperature
beta has variance growing like log(n), and after centering and scaling

    sqrt(pi^2 * beta / log n) * (N - E N)

converges to a centered Gaussian whose variance is 2 for a circular arc
(both endpoints fluctuate) and 1 for the one-sided Jacobi count; dividing a
single-arc statistic by sqrt(2) makes it standard.  Centers are the exact
leading terms n*|arc|/(2*pi) and n*theta/pi.

Two scale conventions are exposed: "theorem" is the factor above; "section4"
is the phase-scale factor sqrt(beta/(4*log n)) applied to the same centered
count (the two differ by exactly 2*pi).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .ensembles import EnsembleSpec, count_trials
from .errors import NumericalError, ParameterError

__all__ = [
    "FluctuationSample",
    "ExperimentReport",
    "normalize_circular",
    "normalize_jacobi",
    "run_fluctuation_experiment",
    "summarize",
    "ks_statistic",
    "kolmogorov_pvalue",
    "standard_normal_cdf",
]

_PI = math.pi
_TWO_PI = 2.0 * math.pi
_NORMALIZATIONS = ("theorem", "section4")


def _scale_factor(n, beta, normalization):
    if n < 2:
        raise ParameterError(f"normalization requires n >= 2, got {n}")
    if not beta > 0.0:
        raise ParameterError(f"beta must be positive, got {beta}")
    log_n = math.log(n)
    if normalization == "theorem":
        return math.sqrt(_PI * _PI * beta / log_n)
    if normalization == "section4":
        return math.sqrt(beta / (4.0 * log_n))
    raise ParameterError(
        f"normalization must be one of {_NORMALIZATIONS}, got {normalization!r}"
    )


def normalize_circular(count, n, beta, theta_lo, theta_hi, normalization="theorem"):
    """Centered, scaled arc count; vectorized over count."""
    if not theta_lo < theta_hi:
        raise ParameterError("need theta_lo < theta_hi")
    center = n * (theta_hi - theta_lo) / _TWO_PI
    factor = _scale_factor(n, beta, normalization)
    out = factor * (np.asarray(count, dtype=np.float64) - center)
    return float(out) if out.ndim == 0 else out


def normalize_jacobi(count, n, beta, theta, normalization="theorem"):
    """Centered, scaled count of Jacobi points above 2*cos(theta)."""
    if not 0.0 < theta < _PI:
        raise ParameterError(f"theta must lie in (0, pi), got {theta}")
    center = n * theta / _PI
    factor = _scale_factor(n, beta, normalization)
    out = factor * (np.asarray(count, dtype=np.float64) - center)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FluctuationSample:
    """Matrix of normalized counts from repeated draws.

    values[t, j] is the normalized count of trial t in interval j; counts
    holds the raw integers.  intervals lists (theta_lo, theta_hi) arc pairs
    for circular runs and (theta,) thresholds for Jacobi runs.
    """

    values: np.ndarray
    counts: np.ndarray
    spec: EnsembleSpec
    thetas: np.ndarray
    intervals: tuple
    normalization: str
    seed: int
    trials: int


@dataclass(frozen=True)
class ExperimentReport:
    """Per-interval summary statistics of a fluctuation sample."""

    mean: np.ndarray
    covariance: np.ndarray
    ks_distance: np.ndarray
    ks_pvalue: np.ndarray
    skewness: np.ndarray
    excess_kurtosis: np.ndarray
    trials: int
    n: int
    beta: float


def run_fluctuation_experiment(spec, thetas, trials, seed,
                               normalization="theorem", workers=1):
    """Draw `trials` independent configurations and normalize their counts.

    Trial t uses the seed stream mix64(seed, t); output is independent of
    the worker count.
    """
    counts = count_trials(spec, thetas, trials, seed, workers=workers)
    th = np.asarray(thetas, dtype=np.float64)
    if spec.kind == "circular":
        intervals = tuple(
            (float(th[j]), float(th[j + 1])) for j in range(th.shape[0] - 1)
        )
        cols = [
            normalize_circular(counts[:, j], spec.n, spec.beta, lo, hi, normalization)
            for j, (lo, hi) in enumerate(intervals)
        ]
    else:
        intervals = tuple((float(t),) for t in th)
        cols = [
            normalize_jacobi(counts[:, j], spec.n, spec.beta, t, normalization)
            for j, (t,) in enumerate(intervals)
        ]
    values = np.column_stack(cols)
    return FluctuationSample(
        values=values,
        counts=counts,
        spec=spec,
        thetas=th,
        intervals=intervals,
        normalization=normalization,
        seed=int(seed),
        trials=int(trials),
    )


def standard_normal_cdf(x):
    return ndtr(x)


def kolmogorov_pvalue(x, terms=100):
    """Tail Q(x) of the Kolmogorov distribution, clipped to [0, 1].

    For x >= 1 the alternating series 2 * sum (-1)^(j-1) exp(-2 j^2 x^2)
    converges in a few terms; below 1 it needs O(1/x) terms, so the dual
    theta series 1 - (sqrt(2 pi)/x) * sum exp(-(2j-1)^2 pi^2/(8 x^2)) is
    used there instead.
    """
    if x <= 0.0:
        return 1.0
    j = np.arange(1, terms + 1)
    if x >= 1.0:
        total = 2.0 * np.sum((-1.0) ** (j - 1) * np.exp(-2.0 * j * j * x * x))
    else:
        odd = 2.0 * j - 1.0
        cdf = math.sqrt(2.0 * _PI) / x * np.sum(
            np.exp(-odd * odd * _PI * _PI / (8.0 * x * x))
        )
        total = 1.0 - cdf
    return float(min(1.0, max(0.0, total)))


def ks_statistic(values, cdf):
    """Kolmogorov-Smirnov distance to cdf and its asymptotic p-value.

    d = sup_x |ECDF(x) - cdf(x)| over the sample points (both one-sided
    gaps), p = Q(sqrt(m) * d).  Requires at least 8 values.
    """
    x = np.sort(np.asarray(values, dtype=np.float64))
    m = x.shape[0]
    if m < 8:
        raise ParameterError(f"Kolmogorov-Smirnov needs at least 8 values, got {m}")
    f = np.asarray(cdf(x), dtype=np.float64)
    grid = np.arange(1, m + 1) / m
    d = float(max(np.max(grid - f), np.max(f - (grid - 1.0 / m))))
    return d, kolmogorov_pvalue(math.sqrt(m) * d)


def summarize(sample):
    """Mean, covariance, moments, and per-interval KS tests against N(0,1)."""
    values = sample.values
    trials = values.shape[0]
    if trials < 8:
        raise ParameterError(f"summary requires at least 8 trials, got {trials}")
    mean = values.mean(axis=0)
    centered = values - mean
    m2 = np.mean(centered**2, axis=0)
    if np.any(m2 == 0.0):
        raise NumericalError("a normalized-count column is constant; nothing to summarize")
    covariance = centered.T @ centered / (trials - 1)
    skewness = np.mean(centered**3, axis=0) / m2**1.5
    excess_kurtosis = np.mean(centered**4, axis=0) / m2**2 - 3.0
    ks_d = np.empty(values.shape[1])
    ks_p = np.empty(values.shape[1])
    for j in range(values.shape[1]):
        ks_d[j], ks_p[j] = ks_statistic(values[:, j], standard_normal_cdf)
    return ExperimentReport(
        mean=mean,
        covariance=covariance,
        ks_distance=ks_d,
        ks_pvalue=ks_p,
        skewness=skewness,
        excess_kurtosis=excess_kurtosis,
        trials=trials,
        n=sample.spec.n,
        beta=sample.spec.beta,
    )

"""Normalization, KS machinery, and fluctuation experiment plumbing.

The KS tail series and distance are checked against scipy's independent
implementations; the normalizations against their literal formulas and the
exact 2*pi ratio between the two conventions.
"""

import math

import numpy as np
import pytest
from scipy.special import kolmogorov
from scipy.stats import kstest

from beta_ensembles.ensembles import EnsembleSpec
from beta_ensembles.errors import NumericalError, ParameterError
from beta_ensembles.seeding import trial_rng
from beta_ensembles.statistics import (
    FluctuationSample,
    kolmogorov_pvalue,
    ks_statistic,
    normalize_circular,
    normalize_jacobi,
    run_fluctuation_experiment,
    standard_normal_cdf,
    summarize,
)

_PI = math.pi


def test_kolmogorov_tail_matches_scipy():
    xs = np.linspace(0.01, 3.0, 61)
    ours = np.array([kolmogorov_pvalue(x) for x in xs])
    assert ours == pytest.approx(kolmogorov(xs), abs=1e-12)
    assert kolmogorov_pvalue(0.0) == 1.0
    assert kolmogorov_pvalue(-1.0) == 1.0


def test_ks_statistic_matches_scipy():
    rng = trial_rng(60, 0)
    x = rng.normal(size=500)
    d, p = ks_statistic(x, standard_normal_cdf)
    ref = kstest(x, "norm")
    assert d == pytest.approx(ref.statistic, abs=1e-13)
    assert p == pytest.approx(kolmogorov(math.sqrt(500) * d), abs=1e-12)


def test_ks_statistic_calibration():
    # Under the null the p-values are asymptotically uniform; with 300
    # independent samples the 5% rejection count lands near 15.
    rejections = 0
    for i in range(300):
        x = trial_rng(61, i).normal(size=200)
        _, p = ks_statistic(x, standard_normal_cdf)
        rejections += p < 0.05
    assert 4 <= rejections <= 30
    # and a shifted alternative is rejected outright
    y = trial_rng(61, 1000).normal(size=200) + 0.5
    _, p_bad = ks_statistic(y, standard_normal_cdf)
    assert p_bad < 1e-6


def test_ks_statistic_needs_enough_values():
    with pytest.raises(ParameterError):
        ks_statistic(np.zeros(7), standard_normal_cdf)


def test_normalization_formulas():
    n, beta = 4096, 1.7
    factor = math.sqrt(_PI * _PI * beta / math.log(n))
    lo, hi = -0.8, 1.1
    count = 700
    expect = factor * (count - n * (hi - lo) / (2 * _PI))
    assert normalize_circular(count, n, beta, lo, hi) == pytest.approx(expect)
    # section4 scaling is exactly 2*pi smaller
    ratio = normalize_circular(count, n, beta, lo, hi) / normalize_circular(
        count, n, beta, lo, hi, normalization="section4"
    )
    assert ratio == pytest.approx(2 * _PI)
    theta = 2.2
    expect_j = factor * (count - n * theta / _PI)
    assert normalize_jacobi(count, n, beta, theta) == pytest.approx(expect_j)
    with pytest.raises(ParameterError):
        normalize_circular(count, n, beta, 1.1, -0.8)
    with pytest.raises(ParameterError):
        normalize_jacobi(count, n, beta, 3.5)
    with pytest.raises(ParameterError):
        normalize_circular(count, 1, beta, lo, hi)
    with pytest.raises(ParameterError):
        normalize_circular(count, n, beta, lo, hi, normalization="other")


def test_run_fluctuation_experiment_layout():
    spec = EnsembleSpec(kind="circular", n=128, beta=2.0)
    sample = run_fluctuation_experiment(spec, (-1.0, 0.5, 2.0), trials=32, seed=5)
    assert sample.values.shape == (32, 2)
    assert sample.counts.shape == (32, 2)
    assert sample.intervals == ((-1.0, 0.5), (0.5, 2.0))
    assert sample.normalization == "theorem"
    # worker count must not leak into the values
    again = run_fluctuation_experiment(spec, (-1.0, 0.5, 2.0), trials=32, seed=5,
                                       workers=3)
    assert np.array_equal(sample.values, again.values)
    specj = EnsembleSpec(kind="jacobi", n=64, beta=1.0, a=1.0, b=1.0)
    samplej = run_fluctuation_experiment(specj, (0.7, 2.1), trials=16, seed=6)
    assert samplej.values.shape == (16, 2)
    assert samplej.intervals == ((0.7,), (2.1,))


def test_summarize_report():
    spec = EnsembleSpec(kind="circular", n=512, beta=2.0)
    sample = run_fluctuation_experiment(spec, (-2.0, 1.0), trials=400, seed=7)
    report = summarize(sample)
    assert report.mean.shape == (1,)
    assert report.covariance.shape == (1, 1)
    assert report.covariance[0, 0] == pytest.approx(
        np.var(sample.values[:, 0], ddof=1)
    )
    assert 0.0 <= report.ks_pvalue[0] <= 1.0
    assert report.trials == 400 and report.n == 512 and report.beta == 2.0


def test_summarize_rejects_degenerate_input():
    spec = EnsembleSpec(kind="circular", n=16, beta=2.0)
    values = np.zeros((40, 1))
    counts = np.zeros((40, 1), dtype=np.int64)
    sample = FluctuationSample(
        values=values, counts=counts, spec=spec, thetas=np.array([-1.0, 1.0]),
        intervals=((-1.0, 1.0),), normalization="theorem", seed=0, trials=40,
    )
    with pytest.raises(NumericalError):
        summarize(sample)
    small = run_fluctuation_experiment(spec, (-1.0, 1.0), trials=4, seed=8)
    with pytest.raises(ParameterError):
        summarize(small)

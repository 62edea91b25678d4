"""Empirical checks of the martingale-CLT machinery behind the fluctuation law.

The centered count is, up to bounded terms, the martingale
S(n, theta) = sum_{k<n} kick_lin(psi_k(theta), alpha_k) whose CLT needs three
hypotheses, each of which gets an observable statistic here:

  stability:  (1/log n) * sum_k E[kick_lin(psi_k(t1)) kick_lin(psi_k(t2)) | past]
              -> 4/beta when t1 = t2, -> 0 otherwise.  The conditional
              expectations are exact: for circular paths the summand is
              eps_k * cos(psi_k(t1) - psi_k(t2)) with eps_k = 4/(beta(k+1)+2);
              for Jacobi paths it is
              eps_k * (cos(psi_k(t1)-psi_k(t2)) - cos(psi_k(t1)+psi_k(t2)))
              with eps_k = 8 s t/((s+t)^2 (s+t+1)) from the k-th shape pair.

  moment:     (1/log^2 n) * sum_k E[kick_lin^4 | past] -> 0.  Circular fourth
              moments are 48/((nu+1)(nu+3)), a deterministic sum; Jacobi ones
              are 16 sin^4(psi_k) times the central fourth moment of the
              coefficient law.

  approx:     the replacement error sum_k (kick - kick_lin)(psi_k, alpha_k)
              is o(sqrt(log n)); reported as |sum|^2/log n (squared
              convention, circular default) or |sum|/sqrt(log n) (jacobi
              default).

Also here: the deterministic bound on oscillatory sums
|sum eps_k e^{i X_k}| <= (2 max|eps| + ||d eps||_1 + ||eps Y||_1)/|1 - e^{i delta}|
for X_{k+1} = X_k + delta + Y_k, and the n = 2 circular normalization
identity (1/pi) * int_0^pi (2 sin(g/2))^beta dg = Gamma(beta+1)/Gamma(beta/2+1)^2.
"""

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _backend
from .ensembles import (
    circular_coefficients,
    jacobi_coefficients,
    jacobi_shape_parameters,
)
from .errors import NumericalError, ParameterError
from .prufer import (
    VerblunskyPath,
    phase_increment,
    phase_increment_linear,
    phase_increment_linear_centered,
)
from .seeding import trial_rng

__all__ = [
    "HypothesisTrace",
    "SumBoundResult",
    "PartitionCheck",
    "circular_weights",
    "circular_fourth_moments",
    "jacobi_weights",
    "jacobi_coefficient_means",
    "jacobi_central_fourth_moments",
    "martingale_sum",
    "stability_statistic",
    "fourth_moment_statistic",
    "linearization_gap_statistic",
    "oscillatory_sum_bound",
    "partition_function_check",
    "hypothesis_traces",
]

_PI = math.pi

SumBoundResult = namedtuple("SumBoundResult", ["lhs", "rhs", "ok"])
PartitionCheck = namedtuple("PartitionCheck", ["quadrature", "closed_form"])


def circular_weights(beta, k):
    """Conditional covariance scale 4/(beta*(k+1)+2) of the circular kick."""
    return 4.0 / (beta * (np.asarray(k, dtype=np.float64) + 1.0) + 2.0)


def circular_fourth_moments(beta, k):
    """E[kick_lin^4] = 48/((nu+1)(nu+3)) with nu = beta*(k+1)+1."""
    nu = beta * (np.asarray(k, dtype=np.float64) + 1.0) + 1.0
    return 48.0 / ((nu + 1.0) * (nu + 3.0))


def _jacobi_raw_moments(beta, a, b, k):
    s, t = jacobi_shape_parameters(beta, a, b, k)
    u = s + t
    d = t - s
    m1 = d / u
    m2 = (d * d + u) / (u * (u + 1.0))
    m3 = d * (d * d + 3.0 * u + 2.0) / (u * (u + 1.0) * (u + 2.0))
    m4 = (d * d * (d * d + 6.0 * u + 8.0) + 3.0 * u * u + 6.0 * u) / (
        u * (u + 1.0) * (u + 2.0) * (u + 3.0)
    )
    var = 4.0 * s * t / (u * u * (u + 1.0))
    return m1, m2, m3, m4, var


def jacobi_weights(beta, a, b, k):
    """Covariance scale 8st/((s+t)^2(s+t+1)) = 2*Var of the k-th coefficient."""
    s, t = jacobi_shape_parameters(beta, a, b, k)
    u = s + t
    return 8.0 * s * t / (u * u * (u + 1.0))


def jacobi_coefficient_means(beta, a, b, k):
    """E alpha_k = (t_k - s_k)/(t_k + s_k)."""
    s, t = jacobi_shape_parameters(beta, a, b, k)
    return (t - s) / (t + s)


def jacobi_central_fourth_moments(beta, a, b, k):
    """E (alpha_k - E alpha_k)^4 via the raw-moment formulas."""
    m1, m2, m3, m4, _ = _jacobi_raw_moments(beta, a, b, k)
    return m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1**4


def _require_params(path, kind):
    if path.beta is None:
        raise ParameterError("path lacks ensemble metadata (beta); redraw it via the ensemble samplers")
    if kind == "jacobi" and (path.a is None or path.b is None):
        raise ParameterError("jacobi diagnostics need the weight parameters a, b on the path")


def _check_kind(kind):
    if kind not in ("circular", "jacobi"):
        raise ParameterError(f"kind must be circular or jacobi, got {kind!r}")


def martingale_sum(traj, path, kind):
    """Partial sums S(m) = sum_{k<m} kick_lin(psi_k, alpha_k), m = 1..K.

    Needs a full-history trajectory; K is the number of coefficients covered
    by it.  E S(m) = 0 and increments are conditionally uncorrelated.
    """
    _check_kind(kind)
    if not traj.full_history:
        raise ParameterError("martingale sums need a trajectory with keep_history=True")
    K = min(traj.psi.shape[0] - 1, len(path))
    if K < 1:
        raise ParameterError("trajectory too short for any martingale increment")
    psi = traj.psi[:K]
    alphas = path.alphas[:K]
    if kind == "circular":
        terms = phase_increment_linear(psi, alphas)
    else:
        _require_params(path, kind)
        means = jacobi_coefficient_means(path.beta, path.a, path.b, np.arange(K))
        terms = phase_increment_linear_centered(psi, alphas, means)
    return np.cumsum(terms)


def _history_rows(path, thetas, n_terms):
    if n_terms < 2:
        raise ParameterError(f"need at least 2 summands, got {n_terms}")
    if len(path) < n_terms - 1:
        raise ParameterError(
            f"path has {len(path)} coefficients, need {n_terms - 1} for {n_terms} summands"
        )
    return _backend.history(thetas, path.alphas[: n_terms - 1])


def stability_statistic(path, theta1, theta2, n_terms, kind):
    """(1/log n) * sum of exact conditional kick covariances at two angles."""
    _check_kind(kind)
    _require_params(path, kind)
    hist = _history_rows(path, [theta1, theta2], n_terms)
    k = np.arange(n_terms)
    if kind == "circular":
        eps = circular_weights(path.beta, k)
        structure = np.cos(hist[:, 0] - hist[:, 1])
    else:
        eps = jacobi_weights(path.beta, path.a, path.b, k)
        structure = np.cos(hist[:, 0] - hist[:, 1]) - np.cos(hist[:, 0] + hist[:, 1])
    return float(np.sum(eps * structure) / math.log(n_terms))


def fourth_moment_statistic(path, theta, n_terms, kind):
    """(1/log^2 n) * sum of exact conditional fourth moments of the kick."""
    _check_kind(kind)
    _require_params(path, kind)
    k = np.arange(n_terms)
    log_n = math.log(n_terms)
    if kind == "circular":
        # The circular fourth moments do not depend on the trajectory.
        if n_terms < 2:
            raise ParameterError(f"need at least 2 summands, got {n_terms}")
        total = np.sum(circular_fourth_moments(path.beta, k))
    else:
        hist = _history_rows(path, [theta], n_terms)
        m4c = jacobi_central_fourth_moments(path.beta, path.a, path.b, k)
        total = np.sum(16.0 * m4c * np.sin(hist[:, 0]) ** 4)
    return float(total / (log_n * log_n))


def linearization_gap_statistic(path, theta, n_terms, kind, squared=None):
    """Size of sum_k (kick - kick_lin)(psi_k, alpha_k) after CLT scaling.

    squared=True reports |sum|^2/log n (circular default), squared=False
    reports |sum|/sqrt(log n) (jacobi default).
    """
    _check_kind(kind)
    if n_terms < 2:
        raise ParameterError(f"need at least 2 summands, got {n_terms}")
    if len(path) < n_terms:
        raise ParameterError(
            f"path has {len(path)} coefficients, need {n_terms} for the gap sum"
        )
    if squared is None:
        squared = kind == "circular"
    psi = _backend.history([theta], path.alphas[:n_terms])[:-1, 0]
    alphas = path.alphas[:n_terms]
    exact = phase_increment(psi, alphas)
    if kind == "circular":
        lin = phase_increment_linear(psi, alphas)
    else:
        _require_params(path, kind)
        means = jacobi_coefficient_means(path.beta, path.a, path.b, np.arange(n_terms))
        lin = phase_increment_linear_centered(psi, alphas, means)
    gap = abs(float(np.sum(exact - lin)))
    log_n = math.log(n_terms)
    return gap * gap / log_n if squared else gap / math.sqrt(log_n)


def oscillatory_sum_bound(epsilons, x0, delta, ys):
    """Deterministic bound on |sum_k eps_k e^{i X_k}|, X_{k+1} = X_k + delta + Y_k.

    Returns (lhs, rhs, ok) where
    rhs = (2*max|eps| + sum|eps_k - eps_{k-1}| + sum|eps_k Y_k|)/|1 - e^{i delta}|.
    The bound holds for every input; ok reports it up to roundoff slack.
    """
    eps = np.asarray(epsilons, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if eps.ndim != 1 or eps.shape[0] < 1:
        raise ParameterError("epsilons must be a nonempty one-dimensional sequence")
    if y.shape != eps.shape:
        raise ParameterError("ys must match epsilons in length")
    if not 0.0 < delta < 2.0 * _PI:
        raise ParameterError(f"delta must lie in (0, 2*pi), got {delta}")
    k = np.arange(eps.shape[0])
    x = x0 + k * delta + np.concatenate([[0.0], np.cumsum(y[:-1])])
    lhs = abs(np.sum(eps * np.exp(1j * x)))
    denom = abs(1.0 - np.exp(1j * delta))
    rhs = (
        2.0 * np.max(np.abs(eps))
        + np.sum(np.abs(np.diff(eps)))
        + np.sum(np.abs(eps * y))
    ) / denom
    return SumBoundResult(float(lhs), float(rhs), bool(lhs <= rhs * (1.0 + 1e-12) + 1e-12))


def partition_function_check(beta):
    """Both routes to the n = 2 circular normalization constant.

    quadrature: (1/pi) * int_0^pi (2 sin(g/2))^beta dg,
    closed_form: Gamma(beta+1)/Gamma(beta/2+1)^2.
    """
    if not beta > 0.0:
        raise ParameterError(f"beta must be positive, got {beta}")
    result = quad(
        lambda g: (2.0 * math.sin(0.5 * g)) ** beta,
        0.0,
        _PI,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=400,
        full_output=1,
    )
    if len(result) > 3:
        raise NumericalError(f"two-point quadrature did not converge: {result[3]}")
    value, abserr = result[0], result[1]
    if abserr > 1e-8 * max(1.0, abs(value)):
        raise NumericalError(f"two-point quadrature error too large: {abserr}")
    closed = math.exp(math.lgamma(beta + 1.0) - 2.0 * math.lgamma(beta / 2.0 + 1.0))
    return PartitionCheck(quadrature=value / _PI, closed_form=closed)


@dataclass(frozen=True)
class HypothesisTrace:
    """Mean of one hypothesis statistic across an n-grid, with its target."""

    label: str
    n_values: np.ndarray
    values: np.ndarray
    target: float


def _diagnostic_path(kind, beta, a, b, n_terms, rng):
    if kind == "circular":
        alphas = circular_coefficients(n_terms, beta, rng)
        return VerblunskyPath(alphas=alphas, eta=0.0, kind="circular", beta=beta)
    alphas = jacobi_coefficients(n_terms, beta, a, b, rng)
    return VerblunskyPath(alphas=alphas, kind="jacobi", beta=beta, a=a, b=b)


def hypothesis_traces(kind, beta, n_grid, trials, seed, a=None, b=None,
                      theta_pair=None):
    """Monte Carlo means of the four hypothesis statistics along an n-grid.

    theta_pair gives the two evaluation angles (diagonal uses the first);
    defaults are generic interior angles per ensemble.
    """
    _check_kind(kind)
    if kind == "jacobi" and (a is None or b is None):
        raise ParameterError("jacobi traces need weight parameters a and b")
    if theta_pair is None:
        theta_pair = (0.7, 2.3) if kind == "jacobi" else (-1.9, 0.7)
    t1, t2 = float(theta_pair[0]), float(theta_pair[1])
    grid = np.asarray(n_grid, dtype=np.int64)
    if grid.ndim != 1 or grid.shape[0] < 1 or np.any(grid < 2):
        raise ParameterError("n grid must be a nonempty sequence of integers >= 2")
    if trials < 1:
        raise ParameterError(f"trials must be positive, got {trials}")
    diag = np.empty(grid.shape[0])
    offdiag = np.empty(grid.shape[0])
    moment = np.empty(grid.shape[0])
    gap = np.empty(grid.shape[0])
    for i, n_terms in enumerate(grid):
        n_terms = int(n_terms)
        acc = np.zeros(4)
        for t in range(trials):
            rng = trial_rng(seed, i * trials + t)
            path = _diagnostic_path(kind, beta, a, b, n_terms, rng)
            acc[0] += stability_statistic(path, t1, t1, n_terms, kind)
            acc[1] += abs(stability_statistic(path, t1, t2, n_terms, kind))
            acc[2] += fourth_moment_statistic(path, t1, n_terms, kind)
            acc[3] += linearization_gap_statistic(path, t1, n_terms, kind)
        diag[i], offdiag[i], moment[i], gap[i] = acc / trials
    return [
        HypothesisTrace("stability_diagonal", grid, diag, 4.0 / beta),
        HypothesisTrace("stability_offdiagonal_abs", grid, offdiag, 0.0),
        HypothesisTrace("fourth_moment", grid, moment, 0.0),
        HypothesisTrace("linearization_gap", grid, gap, 0.0),
    ]

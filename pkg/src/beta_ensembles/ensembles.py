"""Ensemble coefficient laws, point sampling, and O(n) interval counts.

Circular ensemble on n points at inverse temperature beta > 0: independent
coefficients alpha_k ~ disk law with nu = beta*(k+1) + 1 for k = 0..n-2 plus
an independent uniform rotation eta; the points are the n solutions of
psi_{n-1}(theta) = -eta mod 2*pi.

Jacobi ensemble on n points in (-2, 2) with weight parameters a, b > 0:
independent real coefficients alpha_k ~ B(s_k, t_k) on (-1,1) for
k = 0..2n-2, where

    k even:  s_k = k*beta/4 + a,          t_k = k*beta/4 + b
    k odd:   s_k = (k-1)*beta/4 + a + b,  t_k = (k+1)*beta/4,

and the points are 2*cos(theta_j) for the n solutions theta_j in (0, pi) of
psi_{2n-1}(theta) = pi mod 2*pi.

Counting needs no roots at all: the number of points in an arc (lo, hi] is
floor((psi(hi)+eta)/2pi) - floor((psi(lo)+eta)/2pi), two phase evaluations,
O(n) total.  The Monte Carlo engine processes trials in fixed-size blocks
whose layout depends only on the path length, never on the worker count, so
a run's output is byte-identical for any --parallel setting.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ParameterError
from .prufer import VerblunskyPath
from .seeding import trial_rng
from .szego import find_points

__all__ = [
    "EnsembleSpec",
    "PointSample",
    "CountStatistic",
    "jacobi_shape_parameters",
    "circular_coefficients",
    "jacobi_coefficients",
    "draw_circular_path",
    "draw_jacobi_path",
    "draw_path",
    "sample_points",
    "count_in_arc",
    "count_jacobi",
    "count_trials",
]

_PI = math.pi
_TWO_PI = 2.0 * math.pi

# Trials per engine block; capped so a block never exceeds ~2^22 coefficient
# values.  Depends only on the path length: block layout is part of the
# reproducibility contract.
_BLOCK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class EnsembleSpec:
    """Which ensemble to sample: kind, point count, beta, Jacobi weights."""

    kind: str
    n: int
    beta: float
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in ("circular", "jacobi"):
            raise ParameterError(f"kind must be circular or jacobi, got {self.kind!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        if not self.beta > 0.0:
            raise ParameterError(f"beta must be positive, got {self.beta}")
        if self.kind == "jacobi":
            if self.a is None or self.b is None or self.a <= 0.0 or self.b <= 0.0:
                raise ParameterError("jacobi ensembles require weights a > 0 and b > 0")
        elif self.a is not None or self.b is not None:
            raise ParameterError("weights a, b apply only to jacobi ensembles")


@dataclass(frozen=True)
class PointSample:
    """One realization: ascending point locations plus the generating spec."""

    points: np.ndarray
    spec: EnsembleSpec


@dataclass(frozen=True)
class CountStatistic:
    """Number of points in one interval."""

    count: int
    interval: tuple


def jacobi_shape_parameters(beta, a, b, k):
    """Shape pair (s_k, t_k) of the k-th Jacobi coefficient law."""
    kk = np.asarray(k, dtype=np.float64)
    even = np.asarray(k) % 2 == 0
    s = np.where(even, kk * beta / 4.0 + a, (kk - 1.0) * beta / 4.0 + a + b)
    t = np.where(even, kk * beta / 4.0 + b, (kk + 1.0) * beta / 4.0)
    return s, t


def circular_coefficients(m, beta, rng):
    """m independent disk-law coefficients, nu_k = beta*(k+1) + 1.

    Vectorized draw order (all angles, then all radial uniforms) is fixed;
    it is part of the reproducibility contract.
    """
    nu = beta * (np.arange(m) + 1.0) + 1.0
    phi = _TWO_PI * rng.random(m)
    v = 1.0 - rng.random(m)
    r = np.sqrt(1.0 - v ** (2.0 / (nu - 1.0)))
    return r * np.cos(phi) + 1j * r * np.sin(phi)


def jacobi_coefficients(m, beta, a, b, rng):
    """m independent symmetric-Beta coefficients following the k-parity table."""
    s, t = jacobi_shape_parameters(beta, a, b, np.arange(m))
    return 2.0 * rng.beta(t, s, size=m) - 1.0


def draw_circular_path(n, beta, rng):
    """Coefficients alpha_0..alpha_{n-2} plus uniform eta for n circular points."""
    spec = EnsembleSpec(kind="circular", n=int(n), beta=float(beta))
    alphas = circular_coefficients(spec.n - 1, spec.beta, rng)
    eta = _TWO_PI * rng.random()
    return VerblunskyPath(alphas=alphas, eta=float(eta), kind="circular", beta=spec.beta)


def draw_jacobi_path(n, beta, a, b, rng):
    """Coefficients alpha_0..alpha_{2n-2} for n Jacobi points."""
    spec = EnsembleSpec(kind="jacobi", n=int(n), beta=float(beta), a=float(a), b=float(b))
    alphas = jacobi_coefficients(2 * spec.n - 1, spec.beta, spec.a, spec.b, rng)
    return VerblunskyPath(alphas=alphas, kind="jacobi", beta=spec.beta, a=spec.a, b=spec.b)


def draw_path(spec, rng):
    if spec.kind == "circular":
        return draw_circular_path(spec.n, spec.beta, rng)
    return draw_jacobi_path(spec.n, spec.beta, spec.a, spec.b, rng)


def sample_points(spec, rng=None, path=None):
    """One point configuration, via root-finding on the phase.

    Pass either an rng to draw a fresh path or an explicit path (useful for
    injecting degenerate coefficient sequences).  Circular points are the n
    angles in (-pi, pi) solving psi_{n-1} = -eta; Jacobi points are
    2*cos(theta) for the n solutions of psi_{2n-1} = pi with theta in (0, pi).
    """
    if (rng is None) == (path is None):
        raise ParameterError("provide exactly one of rng or path")
    if path is None:
        path = draw_path(spec, rng)
    if path.kind != spec.kind:
        raise ParameterError(f"path kind {path.kind!r} does not match spec {spec.kind!r}")
    if spec.kind == "circular":
        if len(path) < spec.n - 1:
            raise ParameterError(f"need {spec.n - 1} coefficients, path has {len(path)}")
        if path.eta is None:
            raise ParameterError("circular sampling requires the path rotation eta")
        target = path.eta % _TWO_PI
        points = find_points(path, target, spec.n - 1)
        return PointSample(points=points, spec=spec)
    if len(path) < 2 * spec.n - 1:
        raise ParameterError(f"need {2 * spec.n - 1} coefficients, path has {len(path)}")
    thetas = find_points(path, _PI, 2 * spec.n - 1)
    pos = thetas[thetas > 0.0]
    if pos.shape[0] != spec.n:
        raise ParameterError(
            f"expected {spec.n} solutions in (0, pi), found {pos.shape[0]}"
        )
    return PointSample(points=2.0 * np.cos(pos[::-1]), spec=spec)


def count_in_arc(path, n, theta_lo, theta_hi):
    """Circular points of an n-point ensemble in the arc (theta_lo, theta_hi].

    Two phase evaluations; never locates individual points.
    """
    if not -_PI < theta_lo < theta_hi < _PI:
        raise ParameterError(
            f"need -pi < theta_lo < theta_hi < pi, got ({theta_lo}, {theta_hi})"
        )
    if path.eta is None:
        raise ParameterError("circular counting requires the path rotation eta")
    if len(path) < n - 1:
        raise ParameterError(f"need {n - 1} coefficients for n={n}, path has {len(path)}")
    psi = _backend.terminal([theta_lo, theta_hi], path.alphas[: n - 1])
    count = math.floor((psi[1] + path.eta) / _TWO_PI) - math.floor(
        (psi[0] + path.eta) / _TWO_PI
    )
    return CountStatistic(count=int(count), interval=(float(theta_lo), float(theta_hi)))


def count_jacobi(path, n, theta):
    """Jacobi points of an n-point ensemble in [2*cos(theta), 2).

    Equals floor((psi_{2n-1}(theta) + pi)/(2*pi)); one phase evaluation.
    """
    if not 0.0 < theta < _PI:
        raise ParameterError(f"theta must lie in (0, pi), got {theta}")
    m = 2 * n - 1
    if len(path) < m:
        raise ParameterError(f"need {m} coefficients for n={n}, path has {len(path)}")
    psi = _backend.terminal([theta], path.alphas[:m])
    count = math.floor((psi[0] + _PI) / _TWO_PI)
    return CountStatistic(count=int(count), interval=(2.0 * math.cos(theta), 2.0))


def _block_size(m):
    return max(1, min(128, _BLOCK_ELEMENTS // max(m, 1)))


def _count_span(args):
    """Counts for a contiguous span of trials, processed block by block."""
    spec, thetas, seed, t0, t1, bs = args
    th = np.asarray(thetas, dtype=np.float64)
    parts = []
    for b0 in range(t0, t1, bs):
        b1 = min(b0 + bs, t1)
        if spec.kind == "circular":
            m = spec.n - 1
            alphas = np.empty((b1 - b0, m), dtype=np.complex128)
            etas = np.empty(b1 - b0)
            for i, trial in enumerate(range(b0, b1)):
                rng = trial_rng(seed, trial)
                alphas[i] = circular_coefficients(m, spec.beta, rng)
                etas[i] = _TWO_PI * rng.random()
            psi = _backend.terminal_batch(th, alphas)
            floors = np.floor((psi + etas[:, None]) / _TWO_PI)
            parts.append((floors[:, 1:] - floors[:, :-1]).astype(np.int64))
        else:
            m = 2 * spec.n - 1
            alphas = np.empty((b1 - b0, m), dtype=np.float64)
            for i, trial in enumerate(range(b0, b1)):
                rng = trial_rng(seed, trial)
                alphas[i] = jacobi_coefficients(m, spec.beta, spec.a, spec.b, rng)
            psi = _backend.terminal_batch(th, alphas)
            parts.append(np.floor((psi + _PI) / _TWO_PI).astype(np.int64))
    return np.vstack(parts)


def _validate_grid(spec, thetas):
    th = np.asarray(thetas, dtype=np.float64)
    if th.ndim != 1 or th.shape[0] < 1:
        raise ParameterError("thetas must be a one-dimensional, nonempty sequence")
    if np.any(np.diff(th) <= 0.0):
        raise ParameterError("thetas must be strictly increasing")
    if spec.kind == "circular":
        if th.shape[0] < 2:
            raise ParameterError("circular counting needs at least two arc endpoints")
        if th[0] <= -_PI or th[-1] >= _PI:
            raise ParameterError("circular arc endpoints must lie in (-pi, pi)")
    elif th[0] <= 0.0 or th[-1] >= _PI:
        raise ParameterError("jacobi thresholds must lie in (0, pi)")
    return th


def count_trials(spec, thetas, trials, seed, workers=1):
    """Per-trial interval counts for a Monte Carlo run.

    Circular: thetas are G sorted arc endpoints, returns counts in the G-1
    adjacent arcs, shape (trials, G-1).  Jacobi: thetas are G thresholds,
    returns counts of points above 2*cos(theta), shape (trials, G).  Output
    is a deterministic function of (spec, thetas, trials, seed) alone.
    """
    th = _validate_grid(spec, thetas)
    if int(trials) != trials or trials < 1:
        raise ParameterError(f"trials must be a positive integer, got {trials}")
    trials = int(trials)
    workers = max(1, int(workers))
    m = spec.n - 1 if spec.kind == "circular" else 2 * spec.n - 1
    bs = _block_size(max(m, 1))
    if workers == 1:
        return _count_span((spec, th, seed, 0, trials, bs))
    # Split on block boundaries so every block is assembled with the same
    # shape regardless of worker count.
    n_blocks = (trials + bs - 1) // bs
    per = (n_blocks + workers - 1) // workers
    spans = []
    for w in range(0, n_blocks, per):
        t0 = w * bs
        t1 = min((w + per) * bs, trials)
        spans.append((spec, th, seed, t0, t1, bs))
    with ProcessPoolExecutor(max_workers=min(workers, len(spans))) as pool:
        parts = list(pool.map(_count_span, spans))
    return np.vstack(parts)

"""Coefficient laws and their closed-form moments.

Two distributions drive everything here.  The disk law with parameter nu > 1
has density ((nu-1)/(2*pi)) * (1-|z|^2)^((nu-3)/2) on the open unit disk; its
radial part is sampled by inverse CDF (1-|z|^2 = V^(2/(nu-1)) with V uniform
on (0,1]) and its angle is uniform.  The symmetric Beta law B(s,t) on (-1,1)
has density proportional to (1-x)^(s-1) * (1+x)^(t-1) and is the affine image
x = 2g-1 of g ~ Beta(t,s); note the swapped shape order, the weight (1+x)^(t-1)
maps to g^(t-1).

Moment formulas:

    disk law:   E|z|^2 = 2/(nu+1),   E|z|^4 = 8/((nu+1)(nu+3)),
                E|z|^(2L) = L! / prod_{i<L} ((nu+1)/2 + i)
    B(s,t):     E X   = (t-s)/(t+s)
                E X^2 = ((t-s)^2 + (t+s)) / ((t+s)(t+s+1))
                E X^3 = (t-s)((t-s)^2 + 3(t+s) + 2)
                        / ((s+t)(1+s+t)(s+t+2))
                E X^4 = ((t-s)^2((t-s)^2 + 6(s+t) + 8) + 3(t+s)^2 + 6(t+s))
                        / ((s+t)(1+s+t)(s+t+2)(s+t+3))
                Var X = 4st / ((t+s)^2 (t+s+1))

and the logarithmic moment

    E{-X^2 log(1-X^2)} = Q * (2*psi(s+t) - psi(t) - psi(s) - 2 log 2) + 4R,
    Q = ((s-t)^2 + s + t) / ((s+t)(1+s+t)),
    R = ((s+t)(s-t)^2 + t^2 + s^2) / ((s+t)^2 (1+s+t)^2),

which decays like (s+t)^-2 along s = t -> infinity.
"""

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = [
    "ThetaParam",
    "SymBetaParam",
    "SymBetaMoments",
    "sample_theta",
    "sample_sym_beta",
    "theta_moments",
    "theta_abs_moment",
    "sym_beta_moments",
    "digamma",
    "expected_neg_x2log",
]

TWO_PI = 2.0 * math.pi
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ThetaParam:
    """Parameter of the disk law; requires nu > 1."""

    nu: float

    def __post_init__(self):
        if not self.nu > 1.0:
            raise ParameterError(f"disk law requires nu > 1, got {self.nu}")


@dataclass(frozen=True)
class SymBetaParam:
    """Shape parameters of the symmetric Beta law on (-1,1); s, t > 0."""

    s: float
    t: float

    def __post_init__(self):
        if not (self.s > 0.0 and self.t > 0.0):
            raise ParameterError(
                f"symmetric Beta law requires s, t > 0, got s={self.s}, t={self.t}"
            )


SymBetaMoments = namedtuple("SymBetaMoments", ["m1", "m2", "m3", "m4", "var"])


def sample_theta(param, rng, size=None):
    """Draw from the disk law.

    The angle is uniform on [0, 2*pi); the radius uses the inverse CDF of
    1-|z|^2, namely V^(2/(nu-1)) with V = 1 - U in (0,1].  Draw order (angles
    first, then radii) is fixed: it is part of the reproducibility contract.
    Returns a complex scalar for size=None, else a complex128 array.
    """
    n = 1 if size is None else int(size)
    phi = TWO_PI * rng.random(n)
    v = 1.0 - rng.random(n)
    r = np.sqrt(1.0 - v ** (2.0 / (param.nu - 1.0)))
    z = r * np.cos(phi) + 1j * r * np.sin(phi)
    return complex(z[0]) if size is None else z


def sample_sym_beta(param, rng, size=None):
    """Draw from B(s,t) on (-1,1) as 2g - 1 with g ~ Beta(t, s)."""
    return 2.0 * rng.beta(param.t, param.s, size=size) - 1.0


def theta_moments(param):
    """(E|z|^2, E|z|^4) of the disk law."""
    nu = param.nu
    return 2.0 / (nu + 1.0), 8.0 / ((nu + 1.0) * (nu + 3.0))


def theta_abs_moment(param, ell):
    """E|z|^(2*ell) = ell! / prod_{i<ell} ((nu+1)/2 + i)."""
    if ell < 0 or ell != int(ell):
        raise ParameterError(f"moment order must be a nonnegative integer, got {ell}")
    half = (param.nu + 1.0) / 2.0
    out = 1.0
    for i in range(int(ell)):
        out *= (i + 1.0) / (half + i)
    return out


def sym_beta_moments(param):
    """First four raw moments and the variance of B(s,t)."""
    s, t = param.s, param.t
    u = s + t
    d = t - s
    m1 = d / u
    m2 = (d * d + u) / (u * (u + 1.0))
    m3 = d * (d * d + 3.0 * u + 2.0) / (u * (u + 1.0) * (u + 2.0))
    m4 = (d * d * (d * d + 6.0 * u + 8.0) + 3.0 * u * u + 6.0 * u) / (
        u * (u + 1.0) * (u + 2.0) * (u + 3.0)
    )
    var = 4.0 * s * t / (u * u * (u + 1.0))
    return SymBetaMoments(m1, m2, m3, m4, var)


# Bernoulli-number coefficients B_2n/(2n) for the asymptotic tail of psi.
_PSI_TAIL = (
    1.0 / 12.0,
    1.0 / 120.0,
    1.0 / 252.0,
    1.0 / 240.0,
    1.0 / 132.0,
    691.0 / 32760.0,
)


def digamma(x):
    """Digamma for x > 0, scalar or array, to ~1e-13 absolute.

    Upward recurrence psi(x) = psi(x+1) - 1/x lifts the argument to >= 10,
    then the asymptotic series log x - 1/(2x) - sum B_2n/(2n x^2n) applies;
    at x = 10 the first dropped term is below 1e-15.
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ParameterError("digamma requires finite x > 0")
    w = np.atleast_1d(arr).copy()
    acc = np.zeros_like(w)
    small = w < 10.0
    while np.any(small):
        acc[small] -= 1.0 / w[small]
        w[small] += 1.0
        small = w < 10.0
    z = 1.0 / (w * w)
    tail = np.zeros_like(w)
    for c in reversed(_PSI_TAIL):
        tail = z * (c - tail)
    out = acc + np.log(w) - 0.5 / w - tail
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def expected_neg_x2log(param):
    """E{-X^2 log(1-X^2)} for X ~ B(s,t), in closed form via digamma."""
    s, t = param.s, param.t
    u = s + t
    d = s - t
    q = (d * d + u) / (u * (u + 1.0))
    bracket = 2.0 * digamma(u) - digamma(t) - digamma(s) - 2.0 * _LN2
    r = (u * d * d + s * s + t * t) / (u * u * (u + 1.0) ** 2)
    return q * bracket + 4.0 * r

"""Orthogonal-polynomial recurrence and point location on the circle.

The monic recurrence driven by Verblunsky coefficients is

    Phi_{k+1}(z) = z*Phi_k(z) - conj(alpha_k)*Phi*_k(z),
    Phi*_{k+1}(z) = Phi*_k(z) - alpha_k*z*Phi_k(z),

from Phi_0 = Phi*_0 = 1.  The quotient B_k(z) = z*Phi_k(z)/Phi*_k(z) is a
Blaschke product of degree k+1; on |z| = 1 it is unimodular and equals
exp(i*psi_k(theta)) for the phase recursion in ``prufer``, which is the
identity the cross-oracle tests pin down.  Points of the ensembles are the
solutions of B_degree(e^{i theta}) = e^{-i target}, located here by a
monotone grid bracket plus bisection on psi.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import BracketFailure, NumericalError, ParameterError

__all__ = ["PolyPair", "eval_polys", "blaschke", "blaschke_trajectory", "find_points"]

_PI = math.pi
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PolyPair:
    """Values (Phi_k(z), Phi*_k(z)) of the degree-k recurrence pair."""

    phi: complex
    phi_star: complex
    degree: int


def _recurrence(alphas, z, k, renormalize):
    """k steps of the recurrence at z (scalar or array).

    With renormalize, both values are rescaled by |Phi*| whenever the moduli
    drift apart by more than 1e-6 relative; on the unit circle |Phi| = |Phi*|
    holds exactly, only the ratio matters there, and the rescale blocks
    overflow for long paths.
    """
    zz = np.asarray(z, dtype=np.complex128)
    phi = np.ones_like(zz)
    star = np.ones_like(zz)
    for j in range(k):
        a = alphas[j]
        phi, star = zz * phi - np.conj(a) * star, star - a * zz * phi
        if renormalize:
            scale = np.abs(star)
            if np.any(scale < 1e-300):
                raise NumericalError(f"|Phi*| underflowed at recurrence step {j + 1}")
            drift = np.abs(np.abs(phi) / scale - 1.0)
            if np.any(drift > 1e-6):
                phi = phi / scale
                star = star / scale
    return phi, star


def eval_polys(path, z, k):
    """Raw recurrence values at a point z after k steps."""
    if k < 0 or k > len(path):
        raise ParameterError(f"need 0 <= k <= {len(path)} coefficients, got k={k}")
    phi, star = _recurrence(path.alphas, complex(z), k, renormalize=False)
    return PolyPair(phi=complex(phi), phi_star=complex(star), degree=k)


def blaschke(path, z, k):
    """B_k(z) = z*Phi_k(z)/Phi*_k(z) for |z| = 1 (within 1e-12).

    Accepts a scalar or an array of unimodular points; the internal
    recurrence renormalizes to keep long products finite.
    """
    if k < 0 or k > len(path):
        raise ParameterError(f"need 0 <= k <= {len(path)} coefficients, got k={k}")
    zz = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(np.abs(zz) - 1.0) > 1e-12):
        raise ParameterError("blaschke is defined on the unit circle; require |z| = 1")
    phi, star = _recurrence(path.alphas, zz, k, renormalize=True)
    out = zz * phi / star
    return complex(out) if out.ndim == 0 else out


def blaschke_trajectory(path, z, k_max):
    """B_k(z) for every k = 0..k_max at unimodular points z.

    One recurrence sweep, so the cost is O(k_max * len(z)); the row for k
    is exp(i*psi_k(theta)) when z = exp(i*theta), which is the identity the
    cross-oracle checks exercise.
    """
    if k_max < 0 or k_max > len(path):
        raise ParameterError(f"need 0 <= k_max <= {len(path)}, got {k_max}")
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(np.abs(np.abs(zz) - 1.0) > 1e-12):
        raise ParameterError("blaschke is defined on the unit circle; require |z| = 1")
    out = np.empty((k_max + 1, zz.shape[0]), dtype=np.complex128)
    out[0] = zz
    phi = np.ones_like(zz)
    star = np.ones_like(zz)
    for j in range(k_max):
        a = path.alphas[j]
        phi, star = zz * phi - np.conj(a) * star, star - a * zz * phi
        scale = np.abs(star)
        if np.any(scale < 1e-300):
            raise NumericalError(f"|Phi*| underflowed at recurrence step {j + 1}")
        drift = np.abs(np.abs(phi) / scale - 1.0)
        if np.any(drift > 1e-6):
            phi = phi / scale
            star = star / scale
        out[j + 1] = zz * phi / star
    return out


def find_points(path, target_phase, degree_index):
    """All theta in (-pi, pi) with psi_degree(theta) = -target_phase mod 2*pi.

    psi_degree increases by exactly 2*pi*(degree_index+1) over [-pi, pi], so
    there are degree_index+1 solutions; a grid of 4*(degree_index+1) cells
    brackets each one (psi is monotone) and bisection to 1e-12 polishes.
    Raises BracketFailure if the bracket count disagrees, which happens only
    for degenerate targets sitting on the domain boundary.
    """
    if not 0.0 <= target_phase < _TWO_PI:
        raise ParameterError(f"target phase must lie in [0, 2*pi), got {target_phase}")
    deg = int(degree_index)
    if deg < 0 or deg > len(path):
        raise ParameterError(
            f"degree index must be in [0, {len(path)}], got {degree_index}"
        )
    alphas = path.alphas[:deg]
    grid = np.linspace(-_PI, _PI, 4 * (deg + 1) + 1)
    psi = _backend.terminal(grid, alphas)
    c = -target_phase
    m_lo = math.floor((psi[0] - c) / _TWO_PI) + 1
    m_hi = math.floor((psi[-1] - c) / _TWO_PI)
    levels = c + _TWO_PI * np.arange(m_lo, m_hi + 1)
    if levels.shape[0] != deg + 1:
        raise BracketFailure(
            f"expected {deg + 1} phase crossings in (-pi, pi], bracketed "
            f"{levels.shape[0]}; the target phase is degenerate for this path"
        )
    idx = np.searchsorted(psi, levels)
    roots = _backend.bisect_targets(grid[idx - 1], grid[idx], levels, alphas)
    return roots

"""Phase recursion driven by Verblunsky coefficients.

For a coefficient sequence alpha_0, alpha_1, ... in the open unit disk the
unwrapped phase of the associated Blaschke quotient on the unit circle obeys

    psi_0(theta) = theta,
    psi_{k+1}(theta) = psi_k(theta) + theta + kick(psi_k(theta), alpha_k),

where kick(psi, alpha) = -2 Im log(1 - alpha*exp(i*psi)) on the principal
branch (well defined because Re(1 - alpha*e^{i psi}) > 0).  Each psi_k is
strictly increasing in theta and increases by 2*pi*(k+1) over one revolution,
which is what makes point counting a matter of reading off floor values.

Two linearizations of the kick are used by the martingale diagnostics:
the leading term 2 Im(e^{i psi} alpha) of its coefficient expansion, and the
mean-centered variant 2 (alpha - E alpha) sin(psi) for real coefficients.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ParameterError

__all__ = [
    "VerblunskyPath",
    "PhaseTrajectory",
    "phase_increment",
    "phase_increment_linear",
    "phase_increment_linear_centered",
    "evolve_phase",
]

_PI = math.pi


@dataclass
class VerblunskyPath:
    """A finite Verblunsky coefficient sequence plus ensemble metadata.

    alphas is complex128 for circular paths and float64 for Jacobi paths.
    eta is the boundary rotation for circular paths (target phase -eta);
    Jacobi paths leave it None and always target phase pi.  beta/a/b record
    the ensemble parameters when the path was drawn from one, so diagnostics
    can reconstruct per-coefficient laws; hand-built paths may omit them.
    """

    alphas: np.ndarray
    eta: float | None = None
    kind: str = "circular"
    beta: float | None = None
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in ("circular", "jacobi"):
            raise ParameterError(f"kind must be circular or jacobi, got {self.kind!r}")
        if self.kind == "jacobi":
            raw = np.asarray(self.alphas)
            if np.iscomplexobj(raw):
                raise ParameterError("jacobi coefficients must be real")
            arr = np.ascontiguousarray(raw, dtype=np.float64)
            if self.eta is not None:
                raise ParameterError("jacobi paths have a fixed target phase; eta must be None")
        else:
            arr = np.ascontiguousarray(np.asarray(self.alphas), dtype=np.complex128)
        if arr.ndim != 1:
            raise ParameterError(f"alphas must be one-dimensional, got shape {arr.shape}")
        if arr.size and (not np.all(np.isfinite(arr.view(np.float64)))
                         or np.max(np.abs(arr)) >= 1.0):
            raise ParameterError("coefficients must be finite with modulus < 1")
        self.alphas = arr

    def __len__(self):
        return self.alphas.shape[0]


@dataclass
class PhaseTrajectory:
    """Phases of one path at one angle.

    With full_history, psi[k] = psi_k(theta) for k = 0..m (so psi[0] = theta);
    otherwise psi holds only the terminal value.
    """

    theta: float
    psi: np.ndarray = field(repr=False)
    full_history: bool = True

    @property
    def terminal(self):
        return float(self.psi[-1])


def _increment_arrays(psi, alpha):
    p = np.asarray(psi, dtype=np.float64)
    a = np.asarray(alpha)
    if np.any(np.abs(a) >= 1.0):
        raise ParameterError("phase increment requires |alpha| < 1")
    return p, a


def phase_increment(psi, alpha):
    """Exact kick -2 Im log(1 - alpha*e^{i psi}); lies in (-pi, pi).

    Broadcasts over array arguments; scalar in, scalar out.
    """
    p, a = _increment_arrays(psi, alpha)
    w = 1.0 - a * np.exp(1j * p)
    out = -2.0 * np.arctan2(w.imag, w.real)
    return float(out) if out.ndim == 0 else out


def phase_increment_linear(psi, alpha):
    """Leading-order kick 2 Im(e^{i psi} alpha)."""
    p = np.asarray(psi, dtype=np.float64)
    a = np.asarray(alpha)
    out = 2.0 * (a.real * np.sin(p) + a.imag * np.cos(p))
    return float(out) if out.ndim == 0 else out


def phase_increment_linear_centered(psi, alpha, alpha_mean):
    """Mean-centered linear kick 2 (alpha - E alpha) sin(psi), real coefficients."""
    p = np.asarray(psi, dtype=np.float64)
    a = np.asarray(alpha, dtype=np.float64)
    out = 2.0 * (a - alpha_mean) * np.sin(p)
    return float(out) if out.ndim == 0 else out


def evolve_phase(theta, path, keep_history=False):
    """Run the recursion through every coefficient of the path at one angle.

    theta must lie in the open interval (-pi, pi).  With keep_history the
    whole trajectory (length m+1) is stored; otherwise only the terminal
    phase is kept and memory stays O(1) in the path length.
    """
    if not -_PI < theta < _PI:
        raise ParameterError(f"theta must lie in (-pi, pi), got {theta}")
    if keep_history:
        psi = _backend.history([theta], path.alphas)[:, 0]
    else:
        psi = _backend.terminal([theta], path.alphas)
    return PhaseTrajectory(theta=float(theta), psi=psi, full_history=keep_history)

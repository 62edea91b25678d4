"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension was built;
otherwise the pure-NumPy twin takes over with identical semantics.  Set
BETA_ENSEMBLE_BACKEND=numpy (or =cython) to force a choice; "cython" raises
if the extension is missing rather than silently degrading.
"""

import os

import numpy as np

from .errors import ParameterError

_FORCED = os.environ.get("BETA_ENSEMBLE_BACKEND", "auto").strip().lower()

if _FORCED in ("auto", "cython", ""):
    try:
        from . import _phase_cy as _impl
        BACKEND = "cython"
    except ImportError:
        if _FORCED == "cython":
            raise ImportError(
                "BETA_ENSEMBLE_BACKEND=cython but the compiled kernels are "
                "not built; reinstall the package or drop the override"
            )
        from . import _phase_np as _impl
        BACKEND = "numpy"
elif _FORCED == "numpy":
    from . import _phase_np as _impl
    BACKEND = "numpy"
else:
    raise ParameterError(
        f"BETA_ENSEMBLE_BACKEND must be auto, cython, or numpy, got {_FORCED!r}"
    )


def backend_name():
    """Name of the active kernel backend: 'cython' or 'numpy'."""
    return BACKEND


def _as_thetas(thetas):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(thetas, dtype=np.float64)))


def _as_coeffs(alphas):
    a = np.asarray(alphas)
    if np.iscomplexobj(a):
        return np.ascontiguousarray(a, dtype=np.complex128)
    return np.ascontiguousarray(a, dtype=np.float64)


def terminal(thetas, alphas):
    return _impl.terminal(_as_thetas(thetas), _as_coeffs(alphas))


def terminal_batch(thetas, alphas):
    return _impl.terminal_batch(_as_thetas(thetas), _as_coeffs(alphas))


def history(thetas, alphas):
    return _impl.history(_as_thetas(thetas), _as_coeffs(alphas))


def bisect_targets(lo, hi, targets, alphas, tol=1e-12, max_iter=100):
    return _impl.bisect_targets(
        _as_thetas(lo), _as_thetas(hi), _as_thetas(targets),
        _as_coeffs(alphas), float(tol), int(max_iter),
    )

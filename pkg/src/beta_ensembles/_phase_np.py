"""Pure-NumPy phase-recursion kernels.

Reference implementation for the compiled twin ``_phase_cy``.  One step of
the recursion rotates the phase by the grid angle plus the kick from one
reflection coefficient:

    psi <- psi + theta - 2*atan2(Im w, Re w),    w = 1 - alpha*exp(i*psi).

Re w > 0 whenever |alpha| < 1, so atan2 lands on the principal branch and
each kick lies strictly inside (-pi, pi).  No reduction mod 2*pi is ever
applied; the phases are the unwrapped ones whose integer 2*pi crossings
count points.

All functions accept float64 coefficient arrays (real coefficients) or
complex128 arrays; thetas are float64.  Vectorization is over the angle
axis (and the batch axis for ``terminal_batch``), the coefficient loop is
sequential by nature.
"""

import numpy as np

__all__ = ["terminal", "terminal_batch", "history", "bisect_targets"]


def _parts(alphas):
    if np.iscomplexobj(alphas):
        return np.ascontiguousarray(alphas.real), np.ascontiguousarray(alphas.imag)
    return np.ascontiguousarray(alphas, dtype=np.float64), None


def terminal(thetas, alphas):
    """Terminal phase psi_m(theta_j) for one path; returns shape (J,)."""
    th = np.asarray(thetas, dtype=np.float64)
    psi = th.copy()
    ar, ai = _parts(alphas)
    for k in range(ar.shape[0]):
        c = np.cos(psi)
        s = np.sin(psi)
        if ai is None:
            wr = 1.0 - ar[k] * c
            wi = -ar[k] * s
        else:
            wr = 1.0 - (ar[k] * c - ai[k] * s)
            wi = -(ar[k] * s + ai[k] * c)
        psi += th - 2.0 * np.arctan2(wi, wr)
    return psi


def terminal_batch(thetas, alphas):
    """Terminal phases for a batch of paths; alphas (B, m) -> psi (B, J)."""
    th = np.asarray(thetas, dtype=np.float64)
    B = alphas.shape[0]
    psi = np.broadcast_to(th, (B, th.shape[0])).copy()
    ar, ai = _parts(alphas)
    for k in range(ar.shape[1]):
        c = np.cos(psi)
        s = np.sin(psi)
        if ai is None:
            a = ar[:, k, None]
            wr = 1.0 - a * c
            wi = -a * s
        else:
            are = ar[:, k, None]
            aim = ai[:, k, None]
            wr = 1.0 - (are * c - aim * s)
            wi = -(are * s + aim * c)
        psi += th - 2.0 * np.arctan2(wi, wr)
    return psi


def history(thetas, alphas):
    """Full trajectory psi_k(theta_j) for k = 0..m; returns shape (m+1, J)."""
    th = np.asarray(thetas, dtype=np.float64)
    ar, ai = _parts(alphas)
    m = ar.shape[0]
    out = np.empty((m + 1, th.shape[0]), dtype=np.float64)
    out[0] = th
    psi = th.copy()
    for k in range(m):
        c = np.cos(psi)
        s = np.sin(psi)
        if ai is None:
            wr = 1.0 - ar[k] * c
            wi = -ar[k] * s
        else:
            wr = 1.0 - (ar[k] * c - ai[k] * s)
            wi = -(ar[k] * s + ai[k] * c)
        psi += th - 2.0 * np.arctan2(wi, wr)
        out[k + 1] = psi
    return out


def bisect_targets(lo, hi, targets, alphas, tol, max_iter):
    """Bisect theta -> psi_m(theta) to the target levels on given brackets.

    Assumes psi is increasing in theta with psi(lo_r) < target_r <= psi(hi_r)
    for every row r.  Returns the bracket midpoints once every bracket is
    narrower than tol.
    """
    lo = np.asarray(lo, dtype=np.float64).copy()
    hi = np.asarray(hi, dtype=np.float64).copy()
    targets = np.asarray(targets, dtype=np.float64)
    for _ in range(max_iter):
        if np.max(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        below = terminal(mid, alphas) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)

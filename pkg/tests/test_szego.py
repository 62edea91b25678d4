"""Polynomial recurrence, Blaschke quotient, and point location.

The key identity: on the unit circle the quotient z*phi_k/phi*_k is the
unimodular function e^{i psi_k}, tying the polynomial route to the phase
recursion.  Point location is cross-checked against dense evaluation.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beta_ensembles.ensembles import (
    circular_coefficients,
    draw_circular_path,
    jacobi_coefficients,
)
from beta_ensembles.errors import ParameterError
from beta_ensembles.prufer import VerblunskyPath, evolve_phase
from beta_ensembles.seeding import trial_rng
from beta_ensembles.szego import (
    blaschke,
    blaschke_trajectory,
    eval_polys,
    find_points,
)

_TWO_PI = 2.0 * math.pi


def _circ_path(m, seed, beta=2.0):
    return VerblunskyPath(
        alphas=circular_coefficients(m, beta, trial_rng(seed, 0)),
        eta=0.0,
        kind="circular",
        beta=beta,
    )


def test_polys_match_direct_recurrence():
    path = _circ_path(12, 31)
    z = 0.3 - 0.8j
    pair = eval_polys(path, z, 12)
    phi, star = 1.0 + 0j, 1.0 + 0j
    for a in path.alphas:
        phi, star = z * phi - np.conj(a) * star, star - a * z * phi
    assert pair.phi == pytest.approx(phi, rel=1e-12)
    assert pair.phi_star == pytest.approx(star, rel=1e-12)
    assert pair.degree == 12


def test_polys_at_origin():
    path = _circ_path(5, 32)
    for k in range(1, 6):
        pair = eval_polys(path, 0.0 + 0.0j, k)
        assert pair.phi_star == pytest.approx(1.0 + 0.0j, abs=1e-15)
        assert pair.phi == pytest.approx(-np.conj(path.alphas[k - 1]), abs=1e-15)


def test_equal_moduli_on_circle():
    path = _circ_path(40, 33)
    for theta in (-2.0, 0.1, 1.2):
        pair = eval_polys(path, complex(np.exp(1j * theta)), 40)
        assert abs(pair.phi) == pytest.approx(abs(pair.phi_star), rel=1e-12)


@given(st.floats(-math.pi, math.pi, exclude_min=True))
def test_blaschke_unimodular(theta):
    path = _circ_path(25, 34)
    value = blaschke(path, complex(np.exp(1j * theta)), 25)
    assert abs(value) == pytest.approx(1.0, abs=1e-11)


def test_blaschke_equals_phase_exponential():
    for seed, m in ((35, 30), (36, 120)):
        path = _circ_path(m, seed, beta=1.0)
        thetas = np.linspace(-3.0, 3.0, 25)
        for theta in thetas:
            b = blaschke(path, complex(np.exp(1j * theta)), m)
            psi = evolve_phase(float(theta), path).terminal
            assert b == pytest.approx(np.exp(1j * psi), abs=1e-10)


def test_blaschke_trajectory_consistent():
    path = _circ_path(20, 37)
    z = np.exp(1j * np.array([-2.2, 0.4, 2.9]))
    traj = blaschke_trajectory(path, z, 20)
    assert traj.shape == (21, 3)
    assert traj[0] == pytest.approx(z)
    for k in (1, 7, 20):
        row = np.array([blaschke(path, complex(w), k) for w in z])
        assert traj[k] == pytest.approx(row, abs=1e-12)


def test_blaschke_real_jacobi_path():
    alphas = jacobi_coefficients(30, 2.0, 1.0, 1.5, trial_rng(38, 0))
    path = VerblunskyPath(alphas=alphas, kind="jacobi", beta=2.0, a=1.0, b=1.5)
    theta = 1.234
    b = blaschke(path, complex(np.exp(1j * theta)), 30)
    psi = evolve_phase(theta, path).terminal
    assert b == pytest.approx(np.exp(1j * psi), abs=1e-11)


def _phase_slope(path, theta):
    """d psi_m / d theta via slope_{k+1} = 1 + slope_k (1-|a|^2)/|1-a e^{i psi}|^2."""
    traj = evolve_phase(theta, path, keep_history=True)
    slope = 1.0
    for a, psi in zip(path.alphas, traj.psi[:-1]):
        w = 1.0 - a * np.exp(1j * psi)
        slope = 1.0 + slope * (1.0 - abs(a) ** 2) / abs(w) ** 2
    return slope


def test_phase_slope_identity():
    path = _circ_path(18, 44)
    h = 1e-7
    for theta in (-1.1, 0.25, 2.6):
        fd = (
            evolve_phase(theta + h, path).terminal
            - evolve_phase(theta - h, path).terminal
        ) / (2 * h)
        assert _phase_slope(path, theta) == pytest.approx(fd, rel=1e-4)


def test_find_points_solves_phase_equation():
    for i in range(25):
        rng = trial_rng(39, i)
        n = int(rng.integers(2, 40))
        beta = float(rng.uniform(0.4, 4.0))
        path = draw_circular_path(n, beta, rng)
        target = path.eta % _TWO_PI
        pts = find_points(path, target, n - 1)
        assert pts.shape == (n,)
        assert np.all(np.diff(pts) > 0)
        assert np.all((pts > -math.pi) & (pts <= math.pi))
        for theta in pts:
            psi = evolve_phase(float(theta), path).terminal
            # backward error: theta is within the bisection width of a true
            # root, so the phase residual is at most the local slope times it
            residual = abs(math.remainder(psi + target, _TWO_PI))
            assert residual <= _phase_slope(path, float(theta)) * 5e-12 + 1e-11


def test_find_points_separates_all_roots():
    # The located roots bracket exactly one phase level each: consecutive
    # roots differ and dense evaluation finds no extra crossing.
    path = _circ_path(14, 40)
    pts = find_points(path, 1.0, 14)
    dense = np.linspace(-math.pi, math.pi, 20001)[1:]
    psi = np.array([evolve_phase(float(t), path).terminal for t in dense[::40]])
    crossings = np.sum(np.diff(np.floor((psi - 1.0) / _TWO_PI)) != 0)
    assert pts.shape == (15,)
    assert crossings in (14, 15)  # grid may or may not straddle the last level


def test_find_points_validation():
    path = _circ_path(6, 41)
    with pytest.raises(ParameterError):
        find_points(path, -0.1, 6)
    with pytest.raises(ParameterError):
        find_points(path, _TWO_PI, 6)
    with pytest.raises(ParameterError):
        find_points(path, 0.5, 7)


def test_eval_polys_validation():
    path = _circ_path(4, 42)
    with pytest.raises(ParameterError):
        eval_polys(path, 0.5 + 0j, 5)
    with pytest.raises(ParameterError):
        blaschke(path, 0.5 + 0j, 4)  # off the unit circle

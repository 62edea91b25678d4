"""Phase recursion invariants.

The recursion is checked against an independent scalar implementation built
on cmath.log (principal branch), and its structural properties - kick range,
strict monotonicity in theta, total winding - are property-tested.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beta_ensembles.ensembles import circular_coefficients, jacobi_coefficients
from beta_ensembles.errors import ParameterError
from beta_ensembles.prufer import (
    VerblunskyPath,
    evolve_phase,
    phase_increment,
    phase_increment_linear,
    phase_increment_linear_centered,
)
from beta_ensembles.seeding import trial_rng

_coeff = st.complex_numbers(max_magnitude=0.95, allow_infinity=False, allow_nan=False)


def _reference_evolution(theta, alphas):
    """Scalar recursion via cmath; the ground truth for every kernel."""
    psi = theta
    out = [psi]
    for a in alphas:
        psi += theta - 2.0 * cmath.log(1.0 - a * cmath.exp(1j * psi)).imag
        out.append(psi)
    return np.array(out)


@given(_coeff, st.floats(-50.0, 50.0))
def test_increment_is_principal_branch(alpha, psi):
    kick = phase_increment(psi, alpha)
    assert -math.pi < kick < math.pi
    assert kick == pytest.approx(
        -2.0 * cmath.log(1.0 - alpha * cmath.exp(1j * psi)).imag, abs=1e-12
    )


@given(_coeff, st.floats(-20.0, 20.0))
def test_linearization_error_is_quadratic(alpha, psi):
    gap = phase_increment(psi, alpha) - phase_increment_linear(psi, alpha)
    bound = 2.0 * abs(alpha) ** 2 / (1.0 - abs(alpha)) + 1e-12
    assert abs(gap) <= bound


def test_linear_increment_formula():
    psi = np.linspace(-7.0, 7.0, 23)
    a = 0.3 - 0.4j
    expect = 2.0 * (a * np.exp(1j * psi)).imag
    assert phase_increment_linear(psi, np.full(23, a)) == pytest.approx(expect)
    x = np.full(23, -0.25)
    centered = phase_increment_linear_centered(psi, x, np.full(23, 0.1))
    assert centered == pytest.approx(2.0 * (-0.25 - 0.1) * np.sin(psi))


def test_evolution_matches_reference():
    rng = trial_rng(21, 0)
    for alphas in (
        circular_coefficients(60, 1.7, rng),
        jacobi_coefficients(60, 2.0, 0.8, 1.4, rng).astype(np.complex128),
    ):
        path = VerblunskyPath(alphas=alphas, eta=0.0, kind="circular", beta=1.7)
        for theta in (-2.9, -0.3, 1.0, 3.0):
            traj = evolve_phase(theta, path, keep_history=True)
            assert traj.psi == pytest.approx(_reference_evolution(theta, alphas), abs=1e-9)
            assert traj.terminal == pytest.approx(traj.psi[-1])
            lean = evolve_phase(theta, path)
            assert lean.terminal == pytest.approx(traj.terminal, abs=1e-9)
            assert not lean.full_history


@given(st.integers(0, 20), st.data())
def test_monotone_in_theta(m, data):
    alphas = np.array(
        data.draw(st.lists(_coeff.map(lambda z: 0.6 * z), min_size=m, max_size=m)),
        dtype=np.complex128,
    )
    path = VerblunskyPath(alphas=alphas, eta=0.0, kind="circular", beta=1.0)
    thetas = np.linspace(-3.1, 3.1, 41)
    terminals = [evolve_phase(t, path).terminal for t in thetas]
    assert np.all(np.diff(terminals) > 0)


@given(st.integers(0, 20), st.data())
def test_total_winding(m, data):
    # e^{i psi_m} winds m+1 times around the circle as theta does once.
    alphas = np.array(
        data.draw(st.lists(_coeff.map(lambda z: 0.5 * z), min_size=m, max_size=m)),
        dtype=np.complex128,
    )
    path = VerblunskyPath(alphas=alphas, eta=0.0, kind="circular", beta=1.0)
    eps = 1e-6
    spread = (
        evolve_phase(math.pi - eps, path).terminal
        - evolve_phase(-math.pi + eps, path).terminal
    )
    assert spread == pytest.approx(2.0 * math.pi * (m + 1), abs=1e-3 * (m + 1))


def test_path_validation():
    good = np.array([0.1 + 0.2j, -0.3j])
    VerblunskyPath(alphas=good, eta=1.0, kind="circular", beta=2.0)
    with pytest.raises(ParameterError):
        VerblunskyPath(alphas=np.array([1.0 + 0j]), eta=0.0, kind="circular", beta=2.0)
    with pytest.raises(ParameterError):
        VerblunskyPath(alphas=np.array([0.1, np.nan]), kind="jacobi", beta=2.0, a=1.0, b=1.0)
    with pytest.raises(ParameterError):
        VerblunskyPath(alphas=good, kind="jacobi", beta=2.0, a=1.0, b=1.0)
    with pytest.raises(ParameterError):
        VerblunskyPath(alphas=good, eta=0.0, kind="elliptic", beta=2.0)
    with pytest.raises(ParameterError):
        evolve_phase(
            math.pi,
            VerblunskyPath(alphas=good, eta=0.0, kind="circular", beta=2.0),
        )


def test_zero_path_is_pure_rotation():
    path = VerblunskyPath(
        alphas=np.zeros(7, dtype=np.complex128), eta=0.0, kind="circular", beta=2.0
    )
    traj = evolve_phase(0.4, path, keep_history=True)
    assert traj.psi == pytest.approx(0.4 * np.arange(1, 9))

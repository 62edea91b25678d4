"""End-to-end acceptance suite: one test per external guarantee.

Each test delegates to the corresponding check in beta_ensembles.acceptance
(the same code the `verify` CLI subcommand runs) and prints its one-line
verdict, so `pytest -v -s tests/test_acceptance.py` doubles as the
acceptance report.  Seeds and tolerances live with the checks.
"""

import pytest

from beta_ensembles import acceptance

_BY_NAME = {name: fn for name, fn, _ in acceptance.CHECKS}


def _run(name):
    passed, detail = _BY_NAME[name]()
    print(f"\n{'PASS' if passed else 'FAIL'} {name}: {detail}")
    assert passed, f"{name}: {detail}"


def test_registry_is_complete():
    assert list(_BY_NAME) == [
        "moment_identities",
        "log_moment_formula",
        "phase_blaschke_identity",
        "counting_equivalence",
        "partition_function",
        "two_point_gap_law",
        "variance_growth",
        "gaussian_shape",
        "covariance_structure",
        "martingale_hypotheses",
        "sum_inequality",
        "reproducibility",
    ]


def test_coefficient_moment_identities():
    _run("moment_identities")


def test_log_moment_closed_form():
    _run("log_moment_formula")


def test_phase_equals_blaschke_quotient():
    _run("phase_blaschke_identity")


def test_counting_equals_brute_force():
    _run("counting_equivalence")


def test_two_point_partition_function():
    _run("partition_function")


def test_two_point_gap_law():
    _run("two_point_gap_law")


def test_count_variance_grows_logarithmically():
    _run("variance_growth")


def test_normalized_counts_are_gaussian():
    _run("gaussian_shape")


def test_count_covariance_structure():
    _run("covariance_structure")


def test_martingale_clt_hypotheses():
    _run("martingale_hypotheses")


def test_oscillatory_sum_inequality():
    _run("sum_inequality")


def test_byte_identical_across_workers():
    _run("reproducibility")

"""End-to-end verification suite.

Each check pins one externally stated guarantee of the package: exact moment
identities of the coefficient laws, agreement of independent computational
routes (phase recursion vs polynomial recurrence, counting vs root-finding,
quadrature vs closed forms), distributional laws at small n, the log-variance
growth and Gaussian shape of count fluctuations, the martingale-CLT
hypothesis statistics, the deterministic oscillatory-sum bound, and
byte-exact reproducibility across worker counts.

Checks run from the ``verify`` CLI subcommand and from the pytest acceptance
module, one pass/fail line each.  All seeds are fixed; every Monte Carlo
tolerance is stated next to its assert.
"""

import json
import math
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.stats import chi2 as chi2_dist

from . import _backend, diagnostics
from .distributions import (
    SymBetaParam,
    ThetaParam,
    expected_neg_x2log,
    sample_sym_beta,
    sample_theta,
    sym_beta_moments,
    theta_moments,
)
from .ensembles import (
    EnsembleSpec,
    circular_coefficients,
    count_in_arc,
    count_jacobi,
    count_trials,
    draw_circular_path,
    draw_jacobi_path,
    jacobi_coefficients,
    sample_points,
)
from .prufer import VerblunskyPath
from .seeding import trial_rng
from .statistics import normalize_circular, normalize_jacobi
from .szego import blaschke_trajectory, find_points

__all__ = ["CheckResult", "CHECKS", "check_names", "run_checks"]

_PI = math.pi
_TWO_PI = 2.0 * math.pi

# Scaled-value ceiling for the (s+t)^-2 decay of E{-X^2 log(1-X^2)} along
# s = t; the exact scaled values rise from 2.61 toward 3 as s grows, and the
# ceiling was calibrated once against the quadrature oracle.
_NEG_X2LOG_DECAY_CEILING = 3.2


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _neg_x2log_quadrature(s, t):
    """Adaptive-quadrature oracle for E{-X^2 log(1-X^2)} under B(s,t).

    Substituting x = 1-u^2 and x = v^2-1 concentrates the endpoint weight
    into u^(2s-1), v^(2t-1) factors that QUADPACK extrapolates cleanly.
    """

    def right(u):
        x = 1.0 - u * u
        return -(x * x) * math.log1p(-x * x) * u ** (2.0 * s - 1.0) * (2.0 - u * u) ** (
            t - 1.0
        ) * 2.0

    def left(v):
        x = v * v - 1.0
        return -(x * x) * math.log1p(-x * x) * v ** (2.0 * t - 1.0) * (2.0 - v * v) ** (
            s - 1.0
        ) * 2.0

    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=300)
    total = quad(right, 0.0, 1.0, **opts)[0] + quad(left, 0.0, 1.0, **opts)[0]
    log_norm = (s + t - 1.0) * math.log(2.0) + (
        math.lgamma(s) + math.lgamma(t) - math.lgamma(s + t)
    )
    return total / math.exp(log_norm)


def check_moment_identities():
    """Sampled moments of both coefficient laws match closed forms (4 SE, 1e6 draws)."""
    bad = []
    worst = 0.0
    for i, nu in enumerate((2.0, 5.0, 10.0, 50.0)):
        z = sample_theta(ThetaParam(nu), trial_rng(101, i), size=1_000_000)
        r2 = np.abs(z) ** 2
        m2, m4 = theta_moments(ThetaParam(nu))
        for series, exact, label in ((r2, m2, "m2"), (r2 * r2, m4, "m4")):
            se = series.std(ddof=1) / math.sqrt(series.shape[0])
            dev = abs(series.mean() - exact) / se
            worst = max(worst, dev)
            if dev > 4.0:
                bad.append(f"disk nu={nu} {label} off by {dev:.1f} SE")
    grid = (0.5, 1.0, 2.0, 5.0, 10.0)
    idx = 0
    for s in grid:
        for t in grid:
            p = SymBetaParam(s, t)
            x = sample_sym_beta(p, trial_rng(102, idx), size=1_000_000)
            idx += 1
            mom = sym_beta_moments(p)
            for power, exact, label in (
                (x, mom.m1, "m1"),
                (x**2, mom.m2, "m2"),
                (x**3, mom.m3, "m3"),
                (x**4, mom.m4, "m4"),
            ):
                se = power.std(ddof=1) / math.sqrt(power.shape[0])
                dev = abs(power.mean() - exact) / se
                worst = max(worst, dev)
                if dev > 4.0:
                    bad.append(f"B({s},{t}) {label} off by {dev:.1f} SE")
    detail = f"29 laws x moments, worst deviation {worst:.2f} SE (limit 4)"
    if bad:
        detail += "; FAILED: " + "; ".join(bad)
    return not bad, detail


def check_log_moment_formula():
    """Closed form of E{-X^2 log(1-X^2)} matches quadrature to 1e-8 relative."""
    worst = 0.0
    for s in (1.0, 2.0, 5.0, 10.0, 20.0):
        for t in (1.0, 2.0, 5.0, 10.0, 20.0):
            closed = expected_neg_x2log(SymBetaParam(s, t))
            oracle = _neg_x2log_quadrature(s, t)
            worst = max(worst, abs(closed - oracle) / abs(oracle))
    decay_ok = True
    worst_scaled = 0.0
    for s in (5.0, 10.0, 20.0, 40.0):
        scaled = expected_neg_x2log(SymBetaParam(s, s)) * (2.0 * s) ** 2
        worst_scaled = max(worst_scaled, scaled)
        decay_ok = decay_ok and scaled <= _NEG_X2LOG_DECAY_CEILING
    detail = (
        f"5x5 grid worst rel err {worst:.2e} (limit 1e-8); "
        f"(s+t)^2-scaled value along s=t peaks at {worst_scaled:.3f} "
        f"(ceiling {_NEG_X2LOG_DECAY_CEILING})"
    )
    return worst < 1e-8 and decay_ok, detail


def check_phase_blaschke_identity():
    """Phase recursion and polynomial recurrence agree: |B_k - e^{i psi_k}| < 1e-9."""
    grid = np.linspace(-_PI, _PI, 258)[1:-1]
    z = np.exp(1j * grid)
    worst = 0.0
    circ_betas = (0.5, 1.0, 2.0, 4.0)
    jac_params = ((1.0, 1.0, 1.0), (2.0, 1.0, 2.0), (4.0, 0.5, 1.5), (0.5, 2.0, 1.0))
    for i in range(100):
        rng = trial_rng(103, i)
        if i % 2 == 0:
            path = draw_circular_path(201, circ_betas[(i // 2) % 4], rng)
            k_max = 200
        else:
            beta, a, b = jac_params[(i // 2) % 4]
            path = draw_jacobi_path(101, beta, a, b, rng)
            k_max = 200
        traj = blaschke_trajectory(path, z, k_max)
        psi = _backend.history(grid, path.alphas[:k_max])
        worst = max(worst, float(np.max(np.abs(traj - np.exp(1j * psi)))))
    detail = f"100 paths, k <= 200, 256 angles: max |B_k - e^(i psi_k)| = {worst:.2e} (limit 1e-9)"
    return worst < 1e-9, detail


def check_counting_equivalence():
    """Floor-formula counts equal brute-force point counts exactly."""
    mismatches = 0
    checked = 0
    for i in range(500):
        rng = trial_rng(104, i)
        n = int(rng.integers(1, 101))
        beta = float(rng.uniform(0.3, 4.0))
        path = draw_circular_path(n, beta, rng)
        pts = find_points(path, path.eta % _TWO_PI, n - 1)
        for lo, hi in rng.uniform(-_PI, _PI, size=(20, 2)):
            lo, hi = (lo, hi) if lo < hi else (hi, lo)
            if hi - lo < 1e-9:
                continue
            brute = int(np.count_nonzero((pts > lo) & (pts <= hi)))
            checked += 1
            if count_in_arc(path, n, lo, hi).count != brute:
                mismatches += 1
    for i in range(500):
        rng = trial_rng(105, i)
        n = int(rng.integers(1, 51))
        beta = float(rng.uniform(0.3, 4.0))
        a, b = (float(v) for v in rng.uniform(0.3, 3.0, size=2))
        path = draw_jacobi_path(n, beta, a, b, rng)
        spec = EnsembleSpec(kind="jacobi", n=n, beta=beta, a=a, b=b)
        pts = sample_points(spec, path=path).points
        for theta in rng.uniform(0.01, _PI - 0.01, size=20):
            brute = int(np.count_nonzero(pts >= 2.0 * math.cos(theta)))
            checked += 1
            if count_jacobi(path, n, float(theta)).count != brute:
                mismatches += 1
    detail = f"{checked} interval counts on 1000 paths, {mismatches} mismatches (exact equality required)"
    return mismatches == 0, detail


def check_partition_function():
    """n=2 circular normalization: quadrature equals Gamma ratio to 1e-8."""
    worst = 0.0
    for beta in (0.5, 1.0, 2.0, 4.0):
        res = diagnostics.partition_function_check(beta)
        worst = max(worst, abs(res.quadrature - res.closed_form) / res.closed_form)
    detail = f"beta in {{0.5,1,2,4}}: worst rel err {worst:.2e} (limit 1e-8)"
    return worst < 1e-8, detail


def check_two_point_gap_law():
    """Sampled n=2 angular gaps follow density prop to (2 sin(g/2))^beta."""
    edges = np.linspace(0.0, _PI, 41)
    results = []
    ok = True
    for bi, beta in enumerate((1.0, 2.0, 4.0)):
        spec = EnsembleSpec(kind="circular", n=2, beta=beta)
        trials = 100_000
        gaps = np.empty(trials)
        for t in range(trials):
            path = draw_circular_path(2, beta, trial_rng(106 + bi, t))
            pts = sample_points(spec, path=path).points
            d = pts[1] - pts[0]
            gaps[t] = min(d, _TWO_PI - d)
        weights = np.array(
            [
                quad(lambda g: (2.0 * math.sin(0.5 * g)) ** beta, lo, hi,
                     epsabs=1e-12, epsrel=1e-12)[0]
                for lo, hi in zip(edges[:-1], edges[1:])
            ]
        )
        probs = weights / weights.sum()
        observed, _ = np.histogram(gaps, bins=edges)
        expected = trials * probs
        stat = float(np.sum((observed - expected) ** 2 / expected))
        pvalue = float(chi2_dist.sf(stat, edges.shape[0] - 2))
        results.append(f"beta={beta:g} p={pvalue:.3f}")
        ok = ok and pvalue > 0.001
    detail = "chi-square vs exact gap law, 1e5 samples, 40 bins: " + ", ".join(results)
    return ok, detail


def check_variance_growth():
    """Arc-count variance grows like (2/(pi^2 beta)) log n (slope within 15%)."""
    n_grid = (256, 1024, 4096, 16384)
    arc = (-_PI / 4.0, _PI / 4.0)
    results = []
    ok = True
    for bi, beta in enumerate((1.0, 2.0)):
        variances = []
        for ni, n in enumerate(n_grid):
            spec = EnsembleSpec(kind="circular", n=n, beta=beta)
            counts = count_trials(spec, arc, trials=8000, seed=110 + 10 * bi + ni)
            variances.append(float(np.var(counts[:, 0], ddof=1)))
        x = np.log(np.asarray(n_grid, dtype=np.float64))
        slope = float(np.polyfit(x, np.asarray(variances), 1)[0])
        target = 2.0 / (_PI * _PI * beta)
        rel = abs(slope - target) / target
        results.append(f"beta={beta:g} slope={slope:.4f} target={target:.4f} ({rel * 100:.1f}%)")
        ok = ok and rel < 0.15
    detail = "Var(count) vs log n over n=2^8..2^14, 8000 trials: " + ", ".join(results)
    return ok, detail


def check_gaussian_shape():
    """Normalized counts look standard normal (mean, skewness, excess kurtosis)."""
    results = []
    ok = True
    spec_c = EnsembleSpec(kind="circular", n=16384, beta=2.0)
    counts = count_trials(spec_c, (-1.0, 1.4), trials=4000, seed=130)
    values = normalize_circular(counts[:, 0], spec_c.n, spec_c.beta, -1.0, 1.4) / math.sqrt(2.0)
    spec_j = EnsembleSpec(kind="jacobi", n=16384, beta=2.0, a=0.5, b=0.5)
    counts_j = count_trials(spec_j, (1.9,), trials=4000, seed=131)
    values_j = normalize_jacobi(counts_j[:, 0], spec_j.n, spec_j.beta, 1.9)
    for label, v in (("circular", values), ("jacobi", values_j)):
        mean = float(v.mean())
        c = v - mean
        m2 = float(np.mean(c**2))
        skew = float(np.mean(c**3) / m2**1.5)
        kurt = float(np.mean(c**4) / m2**2 - 3.0)
        good = abs(mean) < 0.1 and abs(skew) < 0.2 and -0.5 < kurt < 0.5
        ok = ok and good
        results.append(
            f"{label}: mean={mean:+.3f} (|.|<0.1) skew={skew:+.3f} (|.|<0.2) "
            f"exkurt={kurt:+.3f} (in (-0.5,0.5))"
        )
    detail = "n=2^14, beta=2, 4000 trials: " + "; ".join(results)
    return ok, detail


def check_covariance_structure():
    """Adjacent equal arcs anticorrelate beyond -1/2; distant Jacobi counts decorrelate."""
    spec_c = EnsembleSpec(kind="circular", n=8192, beta=1.0)
    counts = count_trials(spec_c, (-2.9, -0.05, 2.8), trials=4000, seed=140)
    x = counts[:, 0].astype(np.float64)
    y = counts[:, 1].astype(np.float64)
    rho_c = float(np.corrcoef(x, y)[0, 1])
    spec_j = EnsembleSpec(kind="jacobi", n=8192, beta=2.0, a=0.5, b=0.5)
    counts_j = count_trials(spec_j, (1.0, 2.2), trials=4000, seed=141)
    rho_j = float(np.corrcoef(counts_j[:, 0].astype(np.float64),
                              counts_j[:, 1].astype(np.float64))[0, 1])
    ok = -1.0 < rho_c < -0.5 and abs(rho_j) < 0.15
    detail = (
        f"circular adjacent arcs (length 2.85) corr={rho_c:.3f} (in (-1,-0.5)); "
        f"jacobi counts at theta=1.0, 2.2 corr={rho_j:+.3f} (|.|<0.15)"
    )
    return ok, detail


def check_martingale_hypotheses():
    """Stability, fourth-moment, and linearization statistics hit their CLT targets."""
    beta = 4.0
    results = []
    ok = True

    # Circular, beta=4: weights 1/(k+1.5).
    n_big = 16384
    path0 = VerblunskyPath(
        alphas=np.zeros(n_big - 1, dtype=np.complex128), eta=0.0, beta=beta
    )
    diag = diagnostics.stability_statistic(path0, 0.7, 0.7, n_big, "circular")
    rel = abs(diag - 1.0)
    ok = ok and rel <= 0.10
    results.append(f"circ diag={diag:.4f} (within 10% of 4/beta=1)")

    off_acc = 0.0
    for t in range(200):
        rng = trial_rng(150, t)
        path = draw_circular_path(n_big, beta, rng)
        off_acc += abs(
            diagnostics.stability_statistic(path, -1.9, 0.7, n_big, "circular")
        )
    off_mean = off_acc / 200.0
    ok = ok and off_mean < 0.15
    results.append(f"circ offdiag mean|.|={off_mean:.4f} (<0.15)")

    mom = diagnostics.fourth_moment_statistic(path0, 0.7, n_big, "circular")
    ok = ok and mom < 0.05
    results.append(f"circ moment={mom:.4f} (<0.05)")

    gap_acc = 0.0
    for t in range(1000):
        rng = trial_rng(151, t)
        path = VerblunskyPath(
            alphas=circular_coefficients(4096, beta, rng), eta=0.0, beta=beta
        )
        gap_acc += diagnostics.linearization_gap_statistic(path, 0.7, 4096, "circular")
    gap_mean = gap_acc / 1000.0
    ok = ok and gap_mean < 0.1
    results.append(f"circ gap mean={gap_mean:.4f} (<0.1)")

    # Jacobi, beta=4, a=b=1.
    a = b = 1.0
    diag_acc = 0.0
    off_j = 0.0
    for t in range(50):
        rng = trial_rng(152, t)
        path = VerblunskyPath(
            alphas=jacobi_coefficients(n_big - 1, beta, a, b, rng),
            kind="jacobi", beta=beta, a=a, b=b,
        )
        diag_acc += diagnostics.stability_statistic(path, 1.3, 1.3, n_big, "jacobi")
        off_j += abs(diagnostics.stability_statistic(path, 0.9, 2.1, n_big, "jacobi"))
    diag_j = diag_acc / 50.0
    off_j /= 50.0
    ok = ok and abs(diag_j - 1.0) <= 0.15 and off_j < 0.2
    results.append(f"jac diag={diag_j:.4f} (within 15% of 1)")
    results.append(f"jac offdiag mean|.|={off_j:.4f} (<0.2)")

    mom_acc = 0.0
    gap_j = 0.0
    for t in range(1000):
        rng = trial_rng(153, t)
        path = VerblunskyPath(
            alphas=jacobi_coefficients(4096, beta, a, b, rng),
            kind="jacobi", beta=beta, a=a, b=b,
        )
        mom_acc += diagnostics.fourth_moment_statistic(path, 1.3, 4096, "jacobi")
        gap_j += diagnostics.linearization_gap_statistic(path, 1.3, 4096, "jacobi")
    mom_j = mom_acc / 1000.0
    gap_j /= 1000.0
    ok = ok and mom_j < 0.1 and gap_j < 0.3
    results.append(f"jac moment mean={mom_j:.4f} (<0.1)")
    results.append(f"jac gap mean={gap_j:.4f} (<0.3)")

    return ok, "; ".join(results)


def check_sum_inequality():
    """The oscillatory-sum bound holds on 10^4 randomized instances."""
    violations = 0
    worst_ratio = 0.0
    for i in range(10_000):
        rng = trial_rng(160, i)
        m = int(rng.integers(1, 401))
        style = i % 3
        if style == 0:
            eps = 4.0 / (rng.uniform(0.3, 4.0) * (np.arange(m) + 1.0) + 2.0)
        elif style == 1:
            eps = rng.normal(0.0, 1.0, m)
        else:
            eps = np.cumsum(rng.normal(0.0, 0.3, m))
        ys = rng.normal(0.0, 0.5, m) / np.sqrt(np.arange(m) + 1.0)
        delta = float(rng.uniform(0.05, _TWO_PI - 0.05))
        x0 = float(rng.uniform(-10.0, 10.0))
        res = diagnostics.oscillatory_sum_bound(eps, x0, delta, ys)
        if not res.ok:
            violations += 1
        if res.rhs > 0:
            worst_ratio = max(worst_ratio, res.lhs / res.rhs)
    detail = f"10^4 random instances: {violations} violations, max lhs/rhs = {worst_ratio:.3f}"
    return violations == 0, detail


def check_reproducibility():
    """CLI output is byte-identical for --parallel 1, 2, 8."""
    from . import cli

    ok = True
    notes = []
    with tempfile.TemporaryDirectory() as tmp:
        for label, args in (
            (
                "circular",
                ["fluctuations", "--ensemble", "circular", "--n", "512", "--beta", "2",
                 "--thetas", "0.0,1.5708", "--trials", "512", "--seed", "7"],
            ),
            (
                "jacobi",
                ["fluctuations", "--ensemble", "jacobi", "--n", "256", "--beta", "2",
                 "--a", "1", "--b", "2", "--thetas", "0.9,2.1", "--trials", "512",
                 "--seed", "7"],
            ),
        ):
            blobs = []
            reports = []
            for w in (1, 2, 8):
                csv_path = os.path.join(tmp, f"{label}_{w}.csv")
                json_path = os.path.join(tmp, f"{label}_{w}.json")
                rc = cli.main(args + ["--parallel", str(w), "--out", csv_path])
                rc |= cli.main(
                    args + ["--parallel", str(w), "--out", json_path, "--format", "json"]
                )
                if rc != 0:
                    return False, f"{label}: CLI exited with {rc}"
                with open(csv_path, "rb") as fh:
                    blobs.append(fh.read())
                with open(json_path) as fh:
                    doc = json.load(fh)
                doc["provenance"].pop("timestamp")
                reports.append(doc)
            csv_ok = blobs[0] == blobs[1] == blobs[2]
            json_ok = reports[0] == reports[1] == reports[2]
            ok = ok and csv_ok and json_ok
            notes.append(
                f"{label}: csv {'identical' if csv_ok else 'DIFFERS'}, "
                f"json {'identical' if json_ok else 'DIFFERS'} across workers 1/2/8"
            )
    return ok, "; ".join(notes)


CHECKS = (
    ("moment_identities", check_moment_identities, True),
    ("log_moment_formula", check_log_moment_formula, True),
    ("phase_blaschke_identity", check_phase_blaschke_identity, True),
    ("counting_equivalence", check_counting_equivalence, True),
    ("partition_function", check_partition_function, True),
    ("two_point_gap_law", check_two_point_gap_law, True),
    ("variance_growth", check_variance_growth, False),
    ("gaussian_shape", check_gaussian_shape, False),
    ("covariance_structure", check_covariance_structure, False),
    ("martingale_hypotheses", check_martingale_hypotheses, False),
    ("sum_inequality", check_sum_inequality, True),
    ("reproducibility", check_reproducibility, True),
)


def check_names():
    return [name for name, _, _ in CHECKS]


def run_checks(names=None, quick=False, log=None):
    """Run the requested checks (all by default); returns CheckResult list."""
    wanted = set(names) if names else None
    results = []
    for name, fn, in_quick in CHECKS:
        if wanted is not None and name not in wanted:
            continue
        if wanted is None and quick and not in_quick:
            continue
        start = time.perf_counter()
        passed, detail = fn()
        elapsed = time.perf_counter() - start
        results.append(CheckResult(name=name, passed=passed, detail=detail, seconds=elapsed))
        if log is not None:
            status = "PASS" if passed else "FAIL"
            log(f"{status} {name} [{elapsed:.1f}s] {detail}")
    return results

"""Throughput comparison of the compiled and numpy phase-recursion kernels.

Reports millions of recursion steps per second for the batched terminal-phase
kernel (the counting workhorse) and the full-history kernel (diagnostics),
at several path lengths, for whichever backends import cleanly.

Run:  python benchmarks/bench_backends.py [--repeat 5]
"""

import argparse
import importlib
import time

import numpy as np

from beta_ensembles.ensembles import EnsembleSpec, circular_coefficients, count_trials
from beta_ensembles.seeding import trial_rng


def _load_backends():
    backends = {}
    for name, module in (
        ("numpy", "beta_ensembles._phase_np"),
        ("cython", "beta_ensembles._phase_cy"),
    ):
        try:
            backends[name] = importlib.import_module(module)
        except ImportError:
            print(f"{name} backend unavailable, skipping")
    return backends


def _bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repeats, best is kept")
    args = parser.parse_args()

    backends = _load_backends()
    rng = trial_rng(0, 0)
    thetas = np.linspace(-3.0, 3.0, 5)

    print(f"{'kernel':<16}{'m':>8}{'batch':>8}" +
          "".join(f"{name + ' Msteps/s':>20}" for name in backends))
    for m, batch in ((256, 512), (4096, 64), (65536, 8)):
        alphas = np.stack([circular_coefficients(m, 2.0, trial_rng(1, i))
                           for i in range(batch)])
        steps = m * batch * thetas.shape[0]
        row = f"{'terminal_batch':<16}{m:>8}{batch:>8}"
        for name, mod in backends.items():
            best = _bench(lambda: mod.terminal_batch(thetas, alphas), args.repeat)
            row += f"{steps / best / 1e6:>20.1f}"
        print(row)
    for m in (256, 4096, 65536):
        alphas = circular_coefficients(m, 2.0, rng)
        grid = np.linspace(-3.0, 3.0, 64)
        steps = m * grid.shape[0]
        row = f"{'history':<16}{m:>8}{'':>8}"
        for name, mod in backends.items():
            best = _bench(lambda: mod.history(grid, alphas), args.repeat)
            row += f"{steps / best / 1e6:>20.1f}"
        print(row)

    # End-to-end: counting through whatever backend won the import race.
    spec = EnsembleSpec(kind="circular", n=4096, beta=2.0)
    best = _bench(lambda: count_trials(spec, (-1.0, 1.0), trials=64, seed=3), args.repeat)
    print(f"\ncount_trials n=4096, 64 trials: {best:.3f}s "
          f"({64 * 4095 / best / 1e6:.1f} Msteps/s)")


if __name__ == "__main__":
    main()

"""Timing comparison of the compiled and pure kernel backends.

Run: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from gklab.backend import get_backend
from gklab.distribution import CenteredSummandLaw
from gklab.spectrum import OmegaVector, SigmaSequence


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_enumeration(impl, n_emit=200_000):
    omega = OmegaVector.from_spec(SigmaSequence.constant(1.0), 8)
    step = np.ascontiguousarray(omega.log_omegas_abs)
    root = omega.largest_log_eigenvalue_abs()

    def run():
        impl.enumerate_products(step, root, n_emit, -1.0, 10**7, False)

    return _time(run)


def bench_convolution(impl, d=60, bin_width=1e-3):
    omega = OmegaVector.from_spec(SigmaSequence.power(0.6, 1.0), d)
    n_bins = 120_000
    mass = np.zeros(n_bins)
    lc = np.full(n_bins, -np.inf)
    mass[0] = 1.0
    lc[0] = 0.0
    laws = []
    for j in range(d):
        law = CenteredSummandLaw.from_omega(float(omega.omegas[j]), 1e-16)
        pos = omega.log_one_minus_abs[j] + law.lattice_step * np.arange(len(law.probs))
        laws.append((np.floor(pos / bin_width).astype(np.int64),
                     np.ascontiguousarray(law.probs)))

    def run():
        m, c = mass.copy(), lc.copy()
        hi = 1
        for shifts, probs in laws:
            m, c, _, _ = impl.convolve_lattice(m, c, shifts, probs, hi)
            hi = min(n_bins, hi + int(shifts[-1]) + 1)

    return _time(run)


def main():
    impls = {}
    for name in ("pure", "compiled"):
        try:
            impls[name] = get_backend(name)
        except (ImportError, ValueError):
            print(f"{name}: unavailable")
    results = {}
    for name, impl in impls.items():
        t_enum = bench_enumeration(impl)
        t_conv = bench_convolution(impl)
        results[name] = (t_enum, t_conv)
        print(f"{name:>9}: enumeration {t_enum * 1e3:8.1f} ms   "
              f"convolution {t_conv * 1e3:8.1f} ms")
    if len(results) == 2:
        pe, pc = results["pure"]
        ce, cc = results["compiled"]
        print(f"speedup (pure/compiled): enumeration {pe / ce:.1f}x, "
              f"convolution {pc / cc:.1f}x")


if __name__ == "__main__":
    main()

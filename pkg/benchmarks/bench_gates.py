"""Benchmark the two gate-application backends against each other.

Times the pure-numpy kernels against the numba-jitted ones on the two
workloads that dominate simulation cost: a dense single-qubit gate swept
across every wire, and a controlled phase swept across every adjacent
pair (the QFT pattern). Run with:

    python3 benchmarks/bench_gates.py --widths 10 14 18 20 --repeats 5

The library itself picks the jitted backend automatically; set
QGANSIM_NO_NUMBA=1 to force the numpy one at import time.
"""

import argparse
import time

import numpy as np

from qgansim import _kernels


def dispatch_args(num_qubits, targets, controls):
    # mirrors the op lowering in statevec: qubit 0 is the most
    # significant bit, targets[0] the gate's own most significant bit
    k = len(targets)
    tshifts = [num_qubits - 1 - q for q in targets]
    offsets = np.zeros(2**k, dtype=np.int64)
    for g in range(2**k):
        off = 0
        for bit in range(k):
            if (g >> (k - 1 - bit)) & 1:
                off |= 1 << tshifts[bit]
        offsets[g] = off
    cmask = 0
    for c in controls:
        cmask |= 1 << (num_qubits - 1 - c)
    return np.array(sorted(tshifts), dtype=np.int64), offsets, cmask


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def random_su2(rng):
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return np.ascontiguousarray(q)


def dense_sweep(apply_dense, amps, n, mats):
    for q in range(n):
        tshifts, offsets, cmask = dispatch_args(n, [q], [])
        apply_dense(amps, mats[q], tshifts, offsets, cmask)


def cphase_sweep(apply_diag, amps, n, diag):
    for q in range(n - 1):
        tshifts, offsets, cmask = dispatch_args(n, [q + 1], [q])
        apply_diag(amps, diag, tshifts, offsets, cmask)


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--widths", type=int, nargs="+", default=[10, 12, 14, 16, 18, 20])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not _kernels.HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    diag = np.array([1.0, np.exp(0.3j * np.pi)], dtype=np.complex128)

    # trigger jit compilation outside the timed region
    warm = random_state(rng, 2)
    dense_sweep(_kernels.nb_apply_dense, warm, 2, [random_su2(rng)] * 2)
    cphase_sweep(_kernels.nb_apply_diag, warm, 2, diag)

    print(f"selected backend: {_kernels.BACKEND} (QGANSIM_NO_NUMBA toggles)")
    print(f"{'qubits':>6}  {'workload':<14} {'numpy ms':>9} {'numba ms':>9} {'speedup':>8}")
    for n in args.widths:
        mats = [random_su2(rng) for _ in range(n)]
        base = random_state(rng, n)
        for name, np_fn, nb_fn in (
            (
                "dense 1q sweep",
                lambda a: dense_sweep(_kernels.np_apply_dense, a, n, mats),
                lambda a: dense_sweep(_kernels.nb_apply_dense, a, n, mats),
            ),
            (
                "cphase sweep",
                lambda a: cphase_sweep(_kernels.np_apply_diag, a, n, diag),
                lambda a: cphase_sweep(_kernels.nb_apply_diag, a, n, diag),
            ),
        ):
            t_np = best_of(lambda: np_fn(base.copy()), args.repeats)
            t_nb = best_of(lambda: nb_fn(base.copy()), args.repeats)
            print(
                f"{n:>6}  {name:<14} {t_np * 1e3:>9.3f} {t_nb * 1e3:>9.3f}"
                f" {t_np / t_nb:>7.2f}x"
            )


if __name__ == "__main__":
    main()

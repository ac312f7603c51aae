"""Compare the Cython kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--qubits 18] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from qspectral._kernels import BACKENDS
from qspectral.lattice import GridSpec, make_field
from qspectral.quantum_solver import solve_quantum


def cases(nq: int, rng):
    amps = rng.standard_normal(1 << nq) + 1j * rng.standard_normal(1 << nq)
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    p = np.diag([1, np.exp(0.3j)]).astype(np.complex128)
    mats = np.tile(h, (1 << (nq - 1), 1, 1))
    rows = rng.standard_normal((1 << (nq - 8), 256)) + 0j
    return {
        "apply_1q": lambda be: be.apply_1q(amps, nq, nq // 2, h),
        "apply_c1q": lambda be: be.apply_c1q(amps, nq, 0, nq - 1, p),
        "apply_swap": lambda be: be.apply_swap(amps, nq, 1, nq - 2),
        "apply_mux": lambda be: be.apply_mux(amps, nq, 0, mats),
        "fft_rows(256)": lambda be: be.fft_rows(rows),
    }


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--qubits", type=int, default=18)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    names = sorted(BACKENDS)
    print(f"{'kernel':<16}" + "".join(f"{n:>12}" for n in names) + (f"{'speedup':>10}" if len(names) > 1 else ""))
    for label, fn in cases(args.qubits, rng).items():
        best = {n: min(timeit.repeat(lambda: fn(BACKENDS[n]), number=1, repeat=args.repeat)) for n in names}
        line = f"{label:<16}" + "".join(f"{best[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) > 1:
            line += f"{best['python'] / best['cython']:>9.1f}x"
        print(line)
    # end to end: one 2-D elliptic solve on a 64x64 grid
    g = GridSpec(2, 6)
    f = make_field(g, "cos2pix_sinm4piy")
    for n in names:
        t = min(timeit.repeat(lambda: solve_quantum("elliptic", {"A": np.eye(2)}, f, backend=BACKENDS[n]),
                              number=1, repeat=3))
        print(f"solve_quantum 64x64 [{n}]: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()

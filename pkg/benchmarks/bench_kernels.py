"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

import numpy as np

from bsfe import kernels
from bsfe.cbqs_fe import CbqsParams, program_circuit
from bsfe.garble import _fresh_labels
from bsfe.algebra import default_modulus

KEY = (123, 456)


def cases(impl):
    C = program_circuit(CbqsParams())
    ops, a, b = C.arrays
    g = np.random.default_rng(0)
    labels = _fresh_labels(C.n_wires, 8, g)
    tables = impl.garble_tables(ops, a, b, C.n_inputs, labels.copy(), 8, 32, *KEY)
    const = np.zeros((C.n_gates, 2), dtype=np.uint64)
    active0 = np.zeros((C.n_wires, 2), dtype=np.uint64)
    active0[: C.n_inputs] = labels[: C.n_inputs, 0]

    def garble():
        impl.garble_tables(ops, a, b, C.n_inputs, labels.copy(), 8, 32, *KEY)

    def evaluate():
        impl.eval_garbled(ops, a, b, C.n_inputs, tables, const, active0.copy(), 8, 32, *KEY)

    T, m, ell = 857, 256, 8
    x = g.integers(0, 2, (T, m), dtype=np.uint8)
    mask = g.integers(0, 2, (T, m), dtype=np.uint8).astype(bool)
    seeds = g.integers(0, 2, (T, m + ell - 1), dtype=np.uint8)

    def toeplitz():
        impl.toeplitz_rows(x, mask, seeds, ell)

    rng = random.Random(1)
    mod = default_modulus(16)
    pairs = [(rng.getrandbits(16), rng.getrandbits(16)) for _ in range(2000)]

    def gf_mul():
        for u, v in pairs:
            impl.gf_mul_small(u, v, mod, 16)

    return {
        f"garble_tables ({C.n_gates} gates)": garble,
        f"eval_garbled ({C.n_gates} gates)": evaluate,
        f"toeplitz_rows ({T}x{m}, l={ell})": toeplitz,
        "gf_mul_small (2000 x GF(2^16))": gf_mul,
    }


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    py, c = kernels.python_backend(), kernels.compiled_backend()
    if c is None:
        print("compiled extension not built; run: python3 setup.py build_ext --inplace")
        return
    py_cases, c_cases = cases(py), cases(c)
    print(f"{'kernel':40} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for name in py_cases:
        tp = best(py_cases[name], max(1, args.repeat // 2))
        tc = best(c_cases[name], args.repeat)
        print(f"{name:40} {tp * 1e3:10.2f} {tc * 1e3:12.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()

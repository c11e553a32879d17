"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--qubits 20] [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from qoshor import kernels


def cases(n_qubits):
    s = 1 / math.sqrt(2)
    hi, lo = n_qubits - 1, 0
    return {
        "hadamard (low bit)": lambda k, a: k.apply_1q(a, lo, s, s, s, -s),
        "hadamard (high bit)": lambda k, a: k.apply_1q(a, hi, s, s, s, -s),
        "controlled phase": lambda k, a: k.apply_cphase(a, hi, lo, 1j),
        "cnot": lambda k, a: k.apply_cnot(a, hi, lo),
        "register marginal": lambda k, a: k.register_probabilities(a, 4, 6),
    }


def aq_product(k, a, width=12):
    bits = range(a.size.bit_length() - 1 - width, a.size.bit_length() - 1)
    bits = list(bits)
    s = 1 / math.sqrt(2)
    for j in range(width - 1, -1, -1):
        for m in range(width - 1, j, -1):
            k.apply_cphase(a, bits[j], bits[m], complex(np.exp(1j * math.pi / 2 ** (m - j))))
        k.apply_1q(a, bits[j], s, s, s, -s)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--qubits", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--gcd-grid", type=int, default=2000)
    args = parser.parse_args()

    names = sorted(kernels.BACKENDS)
    print(f"backends: {names} (active: {kernels.BACKEND}); {args.qubits} qubits, best of {args.repeat}")
    rng = np.random.default_rng(0)
    base = rng.normal(size=1 << args.qubits) + 1j * rng.normal(size=1 << args.qubits)
    base /= np.linalg.norm(base)

    jobs = dict(cases(args.qubits))
    jobs["A_q on 12-qubit register"] = aq_product
    print(f"{'kernel':28}" + "".join(f"{n:>14}" for n in names) + "   speedup")
    for label, fn in jobs.items():
        times = {}
        for name in names:
            k = kernels.get_backend(name)
            buf = base.copy()
            times[name] = min(timeit.repeat(lambda: fn(k, buf), number=1, repeat=args.repeat))
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:28}" + "".join(f"{times[n] * 1e3:12.2f}ms" for n in names) + f"   {speed:6.1f}x")

    times = {}
    for name in names:
        k = kernels.get_backend(name)
        times[name] = min(timeit.repeat(lambda: k.gcd_trace_lengths(args.gcd_grid, args.gcd_grid),
                                        number=1, repeat=max(1, args.repeat // 2)))
    speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
    label = f"euclid rows {args.gcd_grid}^2"
    print(f"{label:28}" + "".join(f"{times[n] * 1e3:12.2f}ms" for n in names) + f"   {speed:6.1f}x")


if __name__ == "__main__":
    main()

"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3]

Times the adaptive Taylor integrator behind the ODE oracle and the fused
moment reduction used for every statistics series, and checks that both
backends return the same numbers.
"""
import argparse
import time

import numpy as np

from dickestat import _kernels_py, build_effective_hamiltonian, dicke_state

try:
    from dickestat import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def taylor_case(two_j, two_m, delta, tau, tol):
    h = build_effective_hamiltonian(dicke_state(two_j, two_m, delta))
    diag, off = np.ascontiguousarray(h.diag), np.ascontiguousarray(h.offdiag)
    psi0 = np.zeros(h.dimension, dtype=complex)
    psi0[0] = 1.0
    label = f"taylor d={h.dimension} tau={tau} tol={tol:g}"
    return label, lambda mod: mod.taylor_propagate(diag, off, psi0, tau, tol, 12, 10**7)


def moments_case(rows, d, seed=0):
    p = np.random.default_rng(seed).random((rows, d))
    p /= p.sum(axis=1, keepdims=True)
    return f"moments {rows}x{d}", lambda mod: mod.distribution_moments(p)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    cases = [
        taylor_case(200, 0, 10.0, 1.0, 1e-10),
        taylor_case(998, 0, 0.0, 1.0, 1e-10),
        taylor_case(40, 10, 5.0, 20.0, 1e-12),
        moments_case(1000, 5001),
        moments_case(20000, 11),
    ]
    backends = [("python", _kernels_py)] + ([("cython", _compiled)] if _compiled else [])
    print(f"{'case':38s} " + " ".join(f"{name:>10s}" for name, _ in backends) + "   speedup  max|diff|")
    for label, fn in cases:
        timings, outputs = [], []
        for _, mod in backends:
            t, out = best_of(lambda: fn(mod), args.repeat)
            timings.append(t)
            outputs.append(out[0])
        speed = f"{timings[0] / timings[1]:8.1f}x" if len(timings) > 1 else "       -"
        diff = (
            f"{np.max(np.abs(np.asarray(outputs[0]) - np.asarray(outputs[1]))):.1e}"
            if len(outputs) > 1 else "-"
        )
        print(f"{label:38s} " + " ".join(f"{t * 1e3:8.2f}ms" for t in timings) + f"  {speed}  {diff}")
    if _compiled is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()

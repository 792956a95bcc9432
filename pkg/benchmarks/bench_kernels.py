"""Time the compiled and pure-Python kernels on the same inputs.

Run ``python3 benchmarks/bench_kernels.py``; prints one line per kernel and size.
"""
import time

import numpy as np

from gonbound import corpus, experiments, kernels
from gonbound.spectral import laplacian


def best_of(fn, repeat=3):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    for n in (50, 100, 200):
        g = experiments.gen_random_regular(n, 3, seed=1)
        rng = np.random.default_rng(n)
        chips = rng.integers(-3, 6, size=n).astype(np.int64)
        yield f"regular3 n={n}", g, chips
    g = corpus.petersen()
    yield "petersen", g, np.arange(g.n, dtype=np.int64) % 3


def main():
    backends = sorted(kernels.BACKENDS)
    print(f"backends: {', '.join(backends)}")
    for name, g, chips in cases():
        indptr, indices = g.csr
        lap = laplacian(g)
        for kernel in ("dhar_burn", "reduce_divisor", "jacobi_eigh"):
            row = []
            for b in backends:
                mod = kernels.get_backend(b)
                if kernel == "dhar_burn":
                    fn = lambda: mod.dhar_burn(indptr, indices, np.abs(chips), 0)
                elif kernel == "reduce_divisor":
                    fn = lambda: mod.reduce_divisor(indptr, indices, np.abs(chips), 0, 10**7)
                else:
                    if g.n > 100 and b == "python":
                        row.append(f"{b}=skipped")
                        continue
                    fn = lambda: mod.jacobi_eigh(lap.copy(), 1e-14, 100)
                row.append(f"{b}={best_of(fn) * 1e3:9.3f} ms")
            print(f"{name:<18} {kernel:<15} " + "  ".join(row))


if __name__ == "__main__":
    main()

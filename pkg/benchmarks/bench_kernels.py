"""Compare the numba kernels with their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each row times one kernel on one generated fractal; numba compilation is
excluded by a warm-up call. Both paths must return identical results.
"""
import argparse
import time

import numpy as np

from vicsek import kernels
from vicsek.fractal import generate, star_seed


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def cases():
    for s, t in ((3, 3), (4, 3), (3, 4)):
        g = generate(star_seed(s), s, t).graph
        ip, ix = g.csr
        yield f"distance_sum n={g.n}", lambda u, ip=ip, ix=ix: kernels.distance_sum(ip, ix, use_numba=u)
    for s, t, walks in ((2, 2, 20_000), (3, 2, 20_000), (4, 2, 5_000)):
        g = generate(star_seed(s), s, t).graph
        ip, ix = g.csr
        rng = np.random.default_rng(0)
        src = rng.integers(0, g.n, walks)
        dst = (src + 1 + rng.integers(0, g.n - 1, walks)) % g.n
        yield (f"walk_lengths n={g.n} walks={walks}",
               lambda u, ip=ip, ix=ix, a=src, b=dst: kernels.walk_lengths(ip, ix, a, b, 7, use_numba=u))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<36}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for name, fn in cases():
        fn(True)
        t_nb, a = best_of(lambda: fn(True), args.repeat)
        t_np, b = best_of(lambda: fn(False), args.repeat)
        if not np.array_equal(a, b):
            raise SystemExit(f"{name}: numba and numpy results differ")
        print(f"{name:<36}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()

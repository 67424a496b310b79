"""Compare the numba kernels with their numpy twins.

Both backends are timed in the same process by calling the ``*_nb`` and
``*_np`` functions directly, after one warm-up call so compilation is not
counted. Each row also reports the max absolute difference between backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from bindep import kernels


def _best(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(rng):
    n = 200_000
    h, k = rng.uniform(-3, 3, (2, n))
    r = rng.uniform(-0.99, 0.99, n)
    yield "bvn_upper (2e5 points)", kernels.bvn_upper_nb, kernels.bvn_upper_np, (h, k, r)

    w = rng.integers(0, 2, (20_000, 3)).astype(float)
    wc = w - w.mean(axis=0)
    wts = 1 - np.arange(1, 9) / 9.0
    yield "hac_lag_sum (n=2e4, m=8)", kernels.hac_lag_sum_nb, kernels.hac_lag_sum_np, (wc, wts)

    u = rng.random(1_000_000)
    cum = np.array([0.2, 0.5, 0.7])
    yield "draw_cells (1e6 uniforms)", kernels.draw_cells_nb, kernels.draw_cells_np, (u, cum)

    z = rng.standard_normal((100_000, 3))
    b = rng.standard_normal((4, 3))
    yield "cole_limit_draws (1e5)", kernels.cole_limit_draws_nb, kernels.cole_limit_draws_np, (z, b, 1.3, -0.7, False)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<28}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}{'max |diff|':>12}")
    for name, f_nb, f_np, fargs in cases(rng):
        t_nb, o_nb = _best(f_nb, fargs, args.repeat)
        t_np, o_np = _best(f_np, fargs, args.repeat)
        diff = float(np.max(np.abs(np.asarray(o_nb, float) - np.asarray(o_np, float))))
        print(f"{name:<28}{t_nb * 1e3:>10.2f}{t_np * 1e3:>10.2f}{t_np / t_nb:>8.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()

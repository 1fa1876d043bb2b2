"""Compare the compiled and pure-Python kernels, and time full plans.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--plans 50]
"""

import argparse
import time

import numpy as np

from sphere_crs import kernels
from sphere_crs.planner import PlanQuery, plan
from sphere_crs.so3 import rotation_axis


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def chain_case():
    r = 1 / np.sqrt(10)
    kinds = ["R+", "L-", "L+", "R-"]
    axes = np.array([rotation_axis(k, r) for k in kinds])
    return (axes, np.zeros(4), np.ones(4, dtype=np.uint8),
            rotation_axis("L+", r), rotation_axis("R+", r))


def bench_kernels(repeat):
    axes, angles, var, x, y = chain_case()
    thetas = np.linspace(0.0, 1.68, 4097)
    vals = kernels.chain_eval(axes, angles, var, x, y, thetas, backend="python")
    c0 = float(np.median(vals))
    i = int(np.nonzero(np.diff(np.sign(vals - c0)))[0][0])
    lo, hi = thetas[i], thetas[i + 1]
    cases = {
        "chain_eval (4097 points)":
            lambda b: kernels.chain_eval(axes, angles, var, x, y, thetas, backend=b),
        "chain_bisect (to 1e-12)":
            lambda b: kernels.chain_bisect(axes, angles, var, x, y, c0, lo, hi, backend=b),
        "rk4_rotation (1e4 steps)":
            lambda b: kernels.rk4_rotation(np.eye(3), 1.0, 3.0, 1.0, 1e-4, backend=b),
    }
    backends = ["python"]
    try:
        kernels.get_backend("cython")
        backends.append("cython")
    except ImportError:
        pass
    print(f"{'kernel':<28}" + "".join(f"{b:>12}" for b in backends)
          + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases.items():
        t = {b: best_of(lambda: fn(b), repeat) for b in backends}
        row = f"{name:<28}" + "".join(f"{t[b] * 1e3:>10.3f}ms" for b in backends)
        if "cython" in t:
            row += f"  {t['python'] / t['cython']:>8.1f}x"
        print(row)
    if "cython" not in backends:
        print("compiled extension not built; only the pure-Python kernels were timed")


def bench_plans(n):
    rng = np.random.default_rng(0)
    targets = []
    for _ in range(n):
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        w, a, b, c = q
        targets.append(np.array([
            [1 - 2 * (b * b + c * c), 2 * (a * b - w * c), 2 * (a * c + w * b)],
            [2 * (a * b + w * c), 1 - 2 * (a * a + c * c), 2 * (b * c - w * a)],
            [2 * (a * c - w * b), 2 * (b * c + w * a), 1 - 2 * (a * a + b * b)],
        ]))
    plan(PlanQuery(targets[0], 3.0))  # warm the per-U_max caches
    t0 = time.perf_counter()
    for r in targets:
        plan(PlanQuery(r, 3.0))
    dt = time.perf_counter() - t0
    print(f"plan: {n} random targets at U_max = 3 in {dt:.2f} s "
          f"({dt / n * 1e3:.1f} ms per plan, active backend {kernels.BACKEND})")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--plans", type=int, default=50)
    args = p.parse_args()
    bench_kernels(args.repeat)
    bench_plans(args.plans)


if __name__ == "__main__":
    main()

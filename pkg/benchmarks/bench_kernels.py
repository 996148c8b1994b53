"""Compare the compiled and numpy counting kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the two kernels on random data of growing size, then a full
leave-one-out run on a synthetic mixed table with each backend forced.
"""

import argparse
import timeit

import numpy as np

from capos import Schema, kernels, loocv, parse_dataset


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def synthetic_table(n, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 4))
    cat = rng.choice(["a", "b", "c"], size=(n, 6))
    y = ((x[:, 0] + (cat[:, 0] == "a")) > 0.5).astype(int)
    lines = ["x0,x1,x2,x3,c0,c1,c2,c3,c4,c5,y"]
    for xs, cs, d in zip(x.round(3).tolist(), cat.tolist(), y):
        lines.append(",".join([*map(str, xs), *cs, str(d)]))
    return parse_dataset("\n".join(lines) + "\n", Schema(decision="y", positive_label="1"))


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    rng = np.random.default_rng(0)

    print(f"{'kernel':<18} {'size':>12}" + "".join(f" {b:>10}" for b in backends) + "  speedup")
    for n, k in [(100, 10), (1000, 50), (10000, 100)]:
        inc = rng.integers(0, 2, (n, k), dtype=np.uint8)
        dec = rng.integers(0, 2, n, dtype=np.uint8)
        rows = np.arange(0, n, 2)
        cols = np.arange(k)
        t = [best_of(lambda b=b: kernels.cell_counts(inc, dec, rows, cols, backend=b), args.repeat)
             for b in backends]
        speed = f"  {t[0] / t[-1]:6.1f}x" if len(t) > 1 else ""
        print(f"{'cell_counts':<18} {f'{n}x{k}':>12}" + "".join(f" {v * 1e3:8.3f}ms" for v in t) + speed)

    for n in [100, 1000, 100000]:
        values = rng.normal(size=n).round(3)
        dec = rng.integers(0, 2, n, dtype=np.uint8)
        t = [best_of(lambda b=b: kernels.threshold_counts(values, dec, backend=b), args.repeat)
             for b in backends]
        speed = f"  {t[0] / t[-1]:6.1f}x" if len(t) > 1 else ""
        print(f"{'threshold_counts':<18} {n:>12}" + "".join(f" {v * 1e3:8.3f}ms" for v in t) + speed)

    raw = synthetic_table(300)
    t = []
    for b in backends:
        kernels._impl = kernels._pick(b)
        t.append(best_of(lambda: loocv(raw), max(1, args.repeat // 2)))
    speed = f"  {t[0] / t[-1]:6.1f}x" if len(t) > 1 else ""
    print(f"{'loocv (300 rows)':<18} {'':>12}" + "".join(f" {v:9.3f}s" for v in t) + speed)


if __name__ == "__main__":
    main()

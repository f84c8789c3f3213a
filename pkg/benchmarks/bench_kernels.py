"""Compare the compiled kernels with the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--n 512] [--rows 64] [--repeat 5]

Each kernel runs on identical random input under both backends; the table
reports the best wall time of ``--repeat`` runs and the largest deviation
between the two results.
"""
import argparse
import timeit

import numpy as np

from cwtinv import _kernels_py

try:
    from cwtinv import _kernels as _compiled
except ImportError:
    _compiled = None


def cases(n, rows, rng):
    f = rng.normal(size=n) + 1j * rng.normal(size=n)
    lags = rng.normal(size=(rows, n)) + 1j * rng.normal(size=(rows, n))
    coeffs = rng.uniform(0.1, 1.0, size=rows)
    return {
        "correlate_rows": lambda m: m.correlate_rows(f, lags, 0.1),
        "compensated_row_sum": lambda m: m.compensated_row_sum(lags, coeffs),
        "central_diff_rows": lambda m: m.central_diff_rows(lags, 0.1),
    }


def best_time(func, repeat):
    return min(timeit.repeat(func, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=512, help="samples per row")
    parser.add_argument("--rows", type=int, default=64, help="number of scale rows")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _compiled is None:
        print("compiled extension not built; timing the numpy fallback only")
    rng = np.random.default_rng(args.seed)
    print(f"N={args.n} rows={args.rows} repeat={args.repeat}")
    print(f"{'kernel':<22}{'numpy [s]':>12}{'cython [s]':>12}{'speedup':>10}{'max |diff|':>12}")
    for name, call in cases(args.n, args.rows, rng).items():
        t_py = best_time(lambda: call(_kernels_py), args.repeat)
        if _compiled is None:
            print(f"{name:<22}{t_py:>12.4g}{'-':>12}{'-':>10}{'-':>12}")
            continue
        t_c = best_time(lambda: call(_compiled), args.repeat)
        diff = float(np.max(np.abs(call(_compiled) - call(_kernels_py))))
        print(f"{name:<22}{t_py:>12.4g}{t_c:>12.4g}{t_py / t_c:>10.1f}{diff:>12.2g}")


if __name__ == "__main__":
    main()

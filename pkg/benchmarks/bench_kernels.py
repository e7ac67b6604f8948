"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from shadowperc import _backend


def cases(g):
    row = g.standard_normal(100_000)
    grid = g.standard_normal((256, 512))
    alpha_row = g.standard_normal(100_000)
    mask = (g.random((512, 512)) < 0.5).astype(np.uint8)
    return {
        "suffix_max_slope n=1e5": lambda k: k.suffix_max_slope(row),
        "truncated_max_slope 256x256 L=256": lambda k: k.truncated_max_slope(grid, 256, 256),
        "next_smaller_or_equal n=1e5": lambda k: k.next_smaller_or_equal(alpha_row),
        "label_components 512x512 orth": lambda k: k.label_components(mask, False),
        "label_components 512x512 star": lambda k: k.label_components(mask, True),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = _backend.available()
    if "cython" not in impls:
        print("compiled kernels not built; only the fallback is timed")
    g = np.random.default_rng(0)
    print(f"{'kernel':40s}" + "".join(f"{name:>12s}" for name in impls) + "     speedup")
    for label, fn in cases(g).items():
        times = {name: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
                 for name, k in impls.items()}
        line = f"{label:40s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times.values())
        if len(times) == 2:
            line += f"  {times['python'] / times['cython']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()

"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--quick]

Both backends get the same inputs; results are checked for equality before
any timing is reported.
"""
from __future__ import annotations

import argparse
import random
import timeit
from itertools import combinations

from fsmat import _pykernels, kernels


def workloads(quick: bool):
    rng = random.Random(0)
    m = 12
    fam = sorted(rng.sample(range(1 << m), 600))
    subsets = [rng.getrandbits(m) for _ in range(200)]
    mat_m = 6
    cols = rng.sample(range(1 << mat_m), 64)
    pats = [[rng.getrandbits(3) for _ in range(3)] for _ in range(20)]
    rows3 = list(combinations(range(mat_m), 3))
    fs_m = 3 if quick else 4
    return {
        "trace_size x200": lambda K: [K.trace_size(fam, s) for s in subsets],
        "shattered_masks k=3": lambda K: K.shattered_masks(fam, m, 3),
        "down_close_masks": lambda K: K.down_close_masks(fam, m),
        "contains_cols x20": lambda K: [K.contains_cols(cols, mat_m, p, 3) for p in pats],
        "contribution_windows k=3": lambda K: K.contribution_windows(cols, mat_m, 3, rows3),
        f"fs_subtree m={fs_m} [01/10]": lambda K: K.fs_subtree(fs_m, [1, 2], 2, [], 0, 10**9),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller search instance")
    args = ap.parse_args()

    if kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; run `python setup.py build_ext --inplace`")
    backends = {"python": _pykernels, "cython": kernels.compiled}

    print(f"{'kernel':<30} {'python s':>10} {'cython s':>10} {'speedup':>9}")
    for name, job in workloads(args.quick).items():
        outputs = {b: job(mod) for b, mod in backends.items()}
        if outputs["python"] != outputs["cython"]:
            raise SystemExit(f"{name}: backends disagree")
        t = {b: min(timeit.repeat(lambda: job(mod), number=1, repeat=args.repeat))
             for b, mod in backends.items()}
        print(f"{name:<30} {t['python']:>10.4f} {t['cython']:>10.4f} {t['python'] / t['cython']:>8.1f}x")


if __name__ == "__main__":
    main()

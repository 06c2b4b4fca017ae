"""Compare the compiled unshuffle kernel with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--max-weight 12] [--repeat 5]

Both backends are run on the same inputs (every canonical word of the 1|2
space up to the given weight, every admissible first-block content) and the
results are checked to agree before timings are printed.
"""

import argparse
import sys
import timeit

from linfty import kernels
from linfty._unshuffle_py import signed_unshuffle_count as py_count
from linfty.graded import SPACE_1_2, canonical_word, symmetric_basis


def workload(max_weight):
    odd = SPACE_1_2.odd_flags
    jobs = []
    for n in range(1, max_weight + 1):
        for mono in symmetric_basis(SPACE_1_2, n):
            word = canonical_word(mono)
            for k in range(1, n + 1):
                for content in symmetric_basis(SPACE_1_2, k):
                    if all(c <= e for c, e in zip(content, mono)):
                        jobs.append((word, odd, k, content))
    return jobs


def run(fn, jobs):
    return [fn(*job) for job in jobs]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--max-weight", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    jobs = workload(args.max_weight)
    backends = {"python": py_count}
    if kernels.BACKEND == "cython":
        backends["cython"] = kernels.signed_unshuffle_count
    else:
        print("compiled kernel not built; timing the fallback only", file=sys.stderr)

    reference = run(py_count, jobs)
    for name, fn in backends.items():
        if run(fn, jobs) != reference:
            print(f"{name} disagrees with the fallback", file=sys.stderr)
            return 1

    print(f"{len(jobs)} kernel calls, weights 1..{args.max_weight}")
    best = {}
    for name, fn in backends.items():
        best[name] = min(timeit.repeat(lambda: run(fn, jobs), number=1, repeat=args.repeat))
        print(f"{name:>8}: {best[name] * 1e3:9.2f} ms")
    if len(best) == 2:
        print(f"speedup: {best['python'] / best['cython']:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

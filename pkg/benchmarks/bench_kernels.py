"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import random
import timeit

from twistkit import _kernels_py

try:
    from twistkit import _kernels as _compiled
except ImportError:
    _compiled = None


def cases(rng):
    small = [rng.randint(-9, 9) for _ in range(24)]
    big = [rng.randint(-10 ** 6, 10 ** 6) for _ in range(400)]
    modulus_tail = [(e, rng.randint(-3, 3)) for e in range(32)]
    dividend = [rng.randint(-50, 50) for _ in range(300)]
    return {
        "dense_mul small (24x24)": lambda k: k.dense_mul(small, small),
        "dense_mul big (400x400)": lambda k: k.dense_mul(big, big),
        "dense_divmod_monic (300 / 32)": lambda k: k.dense_divmod_monic(dividend, modulus_tail, 32),
        "binary_necklaces(16)": lambda k: k.binary_necklaces(16),
        "canonical_rotation x1000": lambda k: [k.canonical_rotation(c, 20) for c in range(1000)],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    impls = [("python", _kernels_py)] + ([("cython", _compiled)] if _compiled else [])
    print(f"{'kernel':34s}" + "".join(f"{name:>12s}" for name, _ in impls))
    for label, fn in cases(random.Random(args.seed)).items():
        results = [fn(mod) for _, mod in impls]
        assert all(r == results[0] for r in results), f"backends disagree on {label}"
        row = []
        for _, mod in impls:
            best = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            row.append(f"{best * 1e3:10.3f}ms")
        print(f"{label:34s}" + "".join(f"{c:>12s}" for c in row))
    if _compiled is None:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()

"""Times the compiled kernels against the pure-numpy fallback.

Run: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import string
import time

import numpy as np

from matchdex import _pure
from matchdex._kernels import HAVE_NATIVE
from matchdex._pure import CHI2_STEP

if HAVE_NATIVE:
    from matchdex import _native


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not HAVE_NATIVE:
        print("compiled extension not available; nothing to compare")
        return

    rng = np.random.default_rng(0)
    pyrng = random.Random(0)

    frame = rng.integers(0, 255, (360, 640)).astype(np.float32)
    stack = rng.integers(0, 255, (200, 360, 640)).astype(np.uint8)
    mag = rng.uniform(0, 40, (72, 128)).astype(np.float32)
    ang = rng.uniform(0, np.pi * 0.999, (72, 128)).astype(np.float32)
    x = rng.uniform(0, 1, (256, 4320))
    w = rng.normal(0, 1, 4320 * 7)
    alphabet = string.ascii_uppercase + string.digits + " "
    pairs = [
        (
            "".join(pyrng.choices(alphabet, k=24)),
            "".join(pyrng.choices(alphabet, k=24)),
        )
        for _ in range(2000)
    ]

    cases = [
        (
            "sobel_magnitude 640x360",
            lambda: _native.sobel_magnitude(frame),
            lambda: _pure.sobel_magnitude(frame),
        ),
        (
            "correlation_summed 200x360x640",
            lambda: _native.correlation_summed(stack),
            lambda: _pure.correlation_summed(stack),
        ),
        (
            "hog_cell_histograms 128x72",
            lambda: _native.hog_cell_histograms(mag, ang, 8, 9),
            lambda: _pure.hog_cell_histograms(mag, ang, 8, 9),
        ),
        (
            "chi2_map 256x4320 order 3",
            lambda: _native.chi2_map(x, 3, CHI2_STEP[3]),
            lambda: _pure.chi2_map(x, 3),
        ),
        (
            "chi2_map_margins 256x4320",
            lambda: _native.chi2_map_margins(x, 3, CHI2_STEP[3], w, 0.0),
            lambda: _pure.chi2_map_margins(x, 3, w, 0.0),
        ),
        (
            "levenshtein 2000 pairs len 24",
            lambda: [_native.levenshtein(a, b) for a, b in pairs],
            lambda: [_pure.levenshtein(a, b) for a, b in pairs],
        ),
    ]

    print(f"{'kernel':38} {'native':>10} {'pure':>10} {'speedup':>9}")
    for name, fn_native, fn_pure in cases:
        tn = timeit(fn_native, args.repeat)
        tp = timeit(fn_pure, args.repeat)
        print(f"{name:38} {tn * 1e3:9.1f}ms {tp * 1e3:9.1f}ms {tp / tn:8.1f}x")


if __name__ == "__main__":
    main()

"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--skip-slow]
"""

import argparse
import time
from pathlib import Path

import numpy as np

from masseylift import kernel
from masseylift.magnus import compose_canonical, magnus_image, pair_indices, triple_indices
from masseylift.massey import massey_check
from masseylift.unipotent import separating_rep
from masseylift.words import PresentationSpec, load_presentation, parse_word

PRES = Path(__file__).resolve().parent.parent / "presentations"


def long_word():
    rng = np.random.default_rng(0)
    d = 6
    c = {t: int(rng.integers(1, 5)) for t in triple_indices(d)}
    b = {t: int(rng.integers(1, 5)) for t in pair_indices(d)}
    return compose_canonical(5, d, b=b, c=c)


def cases(skip_slow):
    ex1 = load_presentation(PRES / "ex1.pres")
    cyclic3 = load_presentation(PRES / "cyclic3.pres")
    cyclic5 = load_presentation(PRES / "cyclic5.pres")
    free = PresentationSpec(2, 3, ())
    target = parse_word("[[[x1,x2],x3],x1]", 3)
    w = long_word()
    out = [
        (f"magnus image, {len(w)} runs", lambda: magnus_image(w, 5)),
        ("ex1.pres triple, 1024 reps", lambda: massey_check(ex1, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0),
                                                                 (0, 0, 1, 0, 0)])),
        ("3-fold, <x1 | x1^3>", lambda: massey_check(cyclic3, [(1,)] * 3)),
        ("separating search, 2^18", lambda: separating_rep(free, target, 3)),
    ]
    if not skip_slow:
        out.append(("5-fold, <x1 | x1^5>", lambda: massey_check(cyclic5, [(1,)] * 5)))
    return out


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--skip-slow", action="store_true", help="leave out the 5-fold case")
    args = parser.parse_args()

    backends = sorted(kernel.BACKENDS, reverse=True)
    if "compiled" not in backends:
        print("compiled extension not built; timing the fallback only")
    previous = kernel.BACKEND
    rows = []
    for name, fn in cases(args.skip_slow):
        timings = {}
        for backend in backends:
            kernel.use_backend(backend)
            timings[backend] = best_of(fn, args.repeat)
        rows.append((name, timings))
    kernel.use_backend(previous)

    header = f"{'case':32s}" + "".join(f"{b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for name, timings in rows:
        line = f"{name:32s}" + "".join(f"{timings[b]:11.4f}s" for b in backends)
        if len(backends) == 2:
            line += f"{timings['python'] / timings['compiled']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()

"""Compare the compiled and pure-Python kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--words N]

Part 1 times the raw kernels on identical random inputs.  Part 2 times an
end-to-end synthesis workload in a subprocess per backend, selected with
DUNITARY_PURE, so the comparison includes all the object overhead around
the kernels.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from dunitary import _kernels_py as py

try:
    from dunitary import _kernels as cy
except ImportError:
    cy = None

WORKLOAD = """
import random, time
from dunitary.cli import random_word
from dunitary.synth import synthesize
from dunitary.words import evaluate
rng = random.Random(5)
words = [random_word(rng.randint(20, 80), rng.randrange(10**6), 4) for _ in range({n})]
t = time.perf_counter()
for w in words:
    synthesize(evaluate(w, 4), check=False)
print(time.perf_counter() - t)
"""


def kernel_table(repeat: int) -> list[tuple[str, float, float]]:
    rng = random.Random(1)
    quads = [tuple(rng.randint(-5000, 5000) for _ in range(4)) for _ in range(2000)]
    evens = [py.mul_delta_pow(q, 3) for q in quads]
    cases = {
        "mul": lambda m: [m.mul(a, b) for a, b in zip(quads, reversed(quads))],
        "add": lambda m: [m.add(a, b) for a, b in zip(quads, reversed(quads))],
        "omega_pow": lambda m: [m.omega_pow(a, 3) for a in quads],
        "div_delta": lambda m: [m.div_delta(a) for a in evens],
        "reduce": lambda m: [m.reduce(a, 6) for a in evens],
        "mul_delta_pow": lambda m: [m.mul_delta_pow(a, 5) for a in quads],
    }
    rows = []
    for name, fn in cases.items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=repeat))
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=repeat)) if cy else float("nan")
        rows.append((name, t_py, t_cy))
    return rows


def workload(pure: bool, n: int) -> float:
    env = dict(os.environ, DUNITARY_PURE="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", WORKLOAD.format(n=n)], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--words", type=int, default=200)
    args = ap.parse_args()

    if cy is None:
        print("compiled kernels not built; only the Python column is meaningful")
    print(f"{'kernel':<15}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, t_py, t_cy in kernel_table(args.repeat):
        print(f"{name:<15}{t_py * 1e3:>12.2f}{t_cy * 1e3:>12.2f}{t_py / t_cy:>10.2f}")

    t_py = workload(True, args.words)
    t_cy = workload(False, args.words) if cy else float("nan")
    print(f"\nsynthesis of {args.words} words: python {t_py:.2f}s, cython {t_cy:.2f}s, "
          f"speedup {t_py / t_cy:.2f}x")


if __name__ == "__main__":
    main()

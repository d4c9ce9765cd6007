"""Compare the compiled kernel backend against the pure-Python fallback.

Times the three hot paths (easing weights, trajectory sampling, frame
checksums) over identical workloads and prints per-call costs plus the
speedup ratio. Run from the repo root:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from mojikit import _kernels as pure

try:
    from mojikit import _speedups as compiled
except ImportError:
    compiled = None


def _workloads(seed: int = 99):
    rng = random.Random(seed)
    us = [rng.random() for _ in range(200_000)]
    glides = [
        (rng.uniform(-90, 90), rng.uniform(-90, 90), rng.uniform(0, 900),
         rng.uniform(1, 2400))
        for _ in range(200_000)
    ]
    batch_times = [float(t) for t in range(0, 2400, 20)]
    payloads = [bytes(rng.randrange(256) for _ in range(rng.randint(8, 24)))
                for _ in range(100_000)]
    return us, glides, batch_times, payloads


def _time(fn, repeat: int) -> float:
    """Best-of-N wall time in seconds."""
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(mod, us, glides, batch_times, payloads, repeat):
    def run_ease():
        f = mod.ease_weight
        for u in us:
            f(u)

    def run_sample():
        f = mod.sample_angle
        for a, b, t, m in glides:
            f(a, b, t, m)

    def run_path():
        f = mod.sample_path
        for a, b, _, m in glides[:2000]:
            f(a, b, m, batch_times)

    def run_checksum():
        f = mod.xor_checksum
        for p in payloads:
            f(p)

    return {
        "ease_weight x200k": _time(run_ease, repeat),
        "sample_angle x200k": _time(run_sample, repeat),
        "sample_path 2k x120pts": _time(run_path, repeat),
        "xor_checksum x100k": _time(run_checksum, repeat),
    }


def check_parity(us, glides, payloads) -> float:
    """Largest absolute disagreement between the two backends; must be 0."""
    worst = 0.0
    for u in us[:5000]:
        worst = max(worst, abs(pure.ease_weight(u) - compiled.ease_weight(u)))
    for a, b, t, m in glides[:5000]:
        worst = max(worst, abs(pure.sample_angle(a, b, t, m)
                               - compiled.sample_angle(a, b, t, m)))
    for p in payloads[:2000]:
        if pure.xor_checksum(p) != compiled.xor_checksum(p):
            return float("inf")
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="best-of-N timing repeats (default 3)")
    args = parser.parse_args(argv)

    us, glides, batch_times, payloads = _workloads()

    if compiled is None:
        print("compiled backend not built; timing pure backend only")
        for name, secs in bench_backend(pure, us, glides, batch_times,
                                        payloads, args.repeat).items():
            print(f"  {name:<24} {secs * 1e3:8.1f} ms")
        return 1

    worst = check_parity(us, glides, payloads)
    print(f"backend parity: worst disagreement {worst:g} (must be 0)")
    if worst != 0.0:
        print("backends disagree; timings would be meaningless", file=sys.stderr)
        return 2

    results = {}
    for label, mod in (("pure", pure), ("compiled", compiled)):
        results[label] = bench_backend(mod, us, glides, batch_times,
                                       payloads, args.repeat)

    print(f"{'workload':<24} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    ratios = []
    for name in results["pure"]:
        p = results["pure"][name]
        c = results["compiled"][name]
        ratios.append(p / c)
        print(f"{name:<24} {p * 1e3:8.1f} ms {c * 1e3:8.1f} ms {p / c:8.1f}x")
    print(f"{'geometric mean':<24} {'':>10} {'':>10} "
          f"{statistics.geometric_mean(ratios):8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

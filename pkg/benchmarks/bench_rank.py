"""Compare the compiled and pure-Python rank kernels.

Integer workloads are bar-complex differentials (small entries, so the int64
path rarely overflows); random sparse matrices exercise the mod-p kernels,
since fraction-free integer elimination on them outgrows 64 bits at once.

Run: ``python benchmarks/bench_rank.py [--repeat N] [--quick]``.
"""
import argparse
import random
import time

from opforge import _accel, _fallback
from opforge.barkoszul import bar_complex
from opforge.exactla import _integer_rows
from opforge.operads import builtin_operad

P = 32003


def bar_workloads(quick):
    cases = (("com", None, 6), ("pois", 2, 5)) if quick else (("com", None, 6), ("com", None, 7), ("pois", 2, 5), ("pois", 3, 5))
    for name, n, k in cases:
        bc = bar_complex(builtin_operad(name, n), k)
        for j, d in sorted(bc.complex.differentials.items()):
            if d.rows * d.cols >= 100_000:
                t = d.cols > d.rows
                yield f"B({name}{n or ''})({k}) d_{j} {d.rows}x{d.cols}", _integer_rows(d, t), d.rows if t else d.cols


def random_workloads(quick):
    rng = random.Random(0)
    for size in (500,) if quick else (500, 1500):
        rows = []
        for _ in range(size):
            cols = sorted(rng.sample(range(size), 5))
            rows.append((cols, [rng.randrange(1, P) for _ in cols]))
        yield f"random {size}x{size} mod {P}", rows, size


def best(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return out, min(times)


def row(label, r, t_py, t_c):
    if t_c is None:
        print(f"{label:46} {r:>6} {t_py:>9.4f}s {'-':>10} {'-':>8}", flush=True)
    else:
        print(f"{label:46} {r:>6} {t_py:>9.4f}s {t_c:>9.4f}s {t_py / t_c:>7.1f}x", flush=True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    if not _accel.COMPILED:
        print("compiled kernels unavailable; timing the pure-Python path only")
    print(f"{'workload':46} {'rank':>6} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for label, rows, width in bar_workloads(args.quick):
        r_py, t_py = best(lambda: _fallback.rank_int(rows, width), args.repeat)
        t_c = None
        if _accel.COMPILED:
            try:
                r_c, t_c = best(lambda: _accel.rank_int64(rows, width), args.repeat)
                assert r_c == r_py, label
            except OverflowError:
                label += " (int64 overflow)"
        row(label + " ZZ", r_py, t_py, t_c)
    for label, rows, width in random_workloads(args.quick):
        r_py, t_py = best(lambda: _fallback.rank_modp(rows, width, P), args.repeat)
        t_c = None
        if _accel.COMPILED:
            r_c, t_c = best(lambda: _accel.rank_modp(rows, width, P), args.repeat)
            assert r_c == r_py, label
        row(label, r_py, t_py, t_c)


if __name__ == "__main__":
    main()

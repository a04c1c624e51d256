"""Compare the compiled and pure-Python search kernels on the hot loops.

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from surface_census import kernels
from surface_census.groups import PSL2, PGL2, SplitMetacyclic, construct, minimal_generating_tuple
from surface_census.signatures import Signature

CASES = [
    ("tuples (2,3,7) -> PSL2(13)", PSL2(13), (2, 3, 7)),
    ("tuples (2,3,8) -> PGL2(7)", PGL2(7), (2, 3, 8)),
    ("tuples (2,5,10) -> MC(41,10)", SplitMetacyclic(41, 10), (2, 5, 10)),
]


def _tuples(backend, G, periods):
    classes = [G.elements_of_order(m) for m in periods[:-1]]
    return backend.enumerate_tuples(G.table, G.inv, G.orders, classes, periods[-1])


def _automorphisms(backend, G):
    gens = minimal_generating_tuple(G)
    cands = [G.elements_of_order(int(G.orders[g])).tolist() for g in gens]
    found = 0
    for a in cands[0]:
        for b in cands[1]:
            if backend.extend_hom(G.table, G.table, gens, (a, b)) is not None:
                found += 1
    return found


def _time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.append(("cython", kernels.compiled_backend))
    else:
        print("compiled backend unavailable; timing the fallback only")

    work = []
    for name, desc, periods in CASES:
        G = construct(desc)
        work.append((name, lambda b, G=G, periods=periods: _tuples(b, G, periods), lambda r: len(r)))
    G13 = construct(PSL2(13))
    work.append(("automorphisms PSL2(13)", lambda b: _automorphisms(b, G13), lambda r: r))
    work.append(("element orders PSL2(13)", lambda b: b.element_orders(G13.table), lambda r: int(np.sum(r))))

    print(f"{'kernel':34} " + " ".join(f"{n:>10}" for n, _ in backends) + "    speedup   result")
    for name, fn, summary in work:
        times, results = [], []
        for _, backend in backends:
            t, r = _time(lambda: fn(backend), args.repeat)
            times.append(t)
            results.append(summary(r))
        if len(set(results)) != 1:
            raise SystemExit(f"{name}: backends disagree: {results}")
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else "       -"
        print(f"{name:34} " + " ".join(f"{t:9.4f}s" for t in times) + f"  {speed}   {results[0]}")


if __name__ == "__main__":
    main()

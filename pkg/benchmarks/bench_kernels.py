"""Compare the compiled and pure-Python collectors on the catalog groups.

    python benchmarks/bench_kernels.py [--pairs 20000] [--repeat 3]
"""

import argparse
import random
import time

from nilcert import _kernel, catalog
from nilcert.pcgroup import PcGroup


def _group(name, backend):
    G = catalog.group(name)
    return PcGroup(G.prime, G.names, dict(enumerate(G.powers)), G.commutators,
                   name=name, backend=backend)


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench(name, backend, pairs, repeat):
    G = _group(name, backend)
    rng = random.Random(1)
    work = []
    for _ in range(pairs):
        x, y = rng.randrange(G.order), rng.randrange(G.order)
        work.append((G.decode(x), G._letters(G.decode(y))))
    packed = G._packed

    def products():
        for exps, letters in work:
            backend.collect(packed, exps, letters)

    def table():
        backend.mul_gen_table(packed, G.order)

    return _best(products, repeat), _best(table, repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--groups", nargs="*", default=catalog.names())
    args = ap.parse_args()

    backends = _kernel.available_backends()
    if _kernel.compiled_backend is None:
        print("compiled kernel not built; only the Python fallback is timed")
    header = f"{'group':8} {'order':>6} " + " ".join(
        f"{b.BACKEND + ' mul':>14} {b.BACKEND + ' table':>14}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>8}"
    print(header)
    for name in args.groups:
        order = catalog.group(name).order
        times = [bench(name, b, args.pairs, args.repeat) for b in backends]
        row = f"{name:8} {order:>6} " + " ".join(f"{m:14.4f} {t:14.4f}" for m, t in times)
        if len(times) == 2:
            row += f" {times[1][0] / times[0][0]:8.1f}x"
        print(row)


if __name__ == "__main__":
    main()

"""Compare the compiled and pure-Python term kernels.

Run with ``python benchmarks/bench_kernel.py [--repeat N]``.
"""

from __future__ import annotations

import argparse
import random
import timeit

from wallskein import kernel
from wallskein.cluster import mutate_seed, seed_from_triangulation
from wallskein.qtorus import TorusElem, divide_exact
from wallskein.surface import annulus_mw, polygon
from wallskein.walls import principal_wall


def _random_elem(lattice, rng, terms=12, span=3):
    out = TorusElem(lattice)
    for _ in range(terms):
        lam = [rng.randint(-span, span) for _ in range(lattice.rank)]
        out = out + TorusElem.basis(lattice, lam, rng.choice([-2, -1, 1, 2, 3]))
    return out


def workloads():
    rng = random.Random(7)
    t = polygon(7)
    lattice = seed_from_triangulation(t).lattice
    pairs = [(_random_elem(lattice, rng), _random_elem(lattice, rng)) for _ in range(20)]
    products = [(a * b, b) for a, b in pairs]
    ann = annulus_mw()
    seed = seed_from_triangulation(ann, principal_wall(ann))

    def multiply():
        for a, b in pairs:
            a * b

    def divide():
        for p, b in products:
            divide_exact(p, b)

    def mutate():
        s = seed
        for k in ("1", "2", "3", "4", "2", "1", "3"):
            s = mutate_seed(s, k)

    return {"multiply": multiply, "divide": divide, "mutate-annulus": mutate}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jobs = workloads()
    backends = sorted(kernel.BACKENDS)
    if "cython" not in backends:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'workload':<16}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in jobs.items():
        times = {}
        for b in backends:
            kernel.use_backend(b)
            times[b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        row = f"{name:<16}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()

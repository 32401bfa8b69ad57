"""Compare the compiled and pure-Python kernels on random digraphs.

Usage::

    python benchmarks/bench_kernels.py --vertices 2000 --density 0.01 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qflag._kernels import available_backends
from qflag.digraph import Digraph
from qflag.flagcomplex import DEFAULT_CEILING


def random_digraph(n: int, density: float, seed: int) -> Digraph:
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    return Digraph(n, np.argwhere(mask))


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--vertices", type=int, default=2000)
    p.add_argument("--density", type=float, default=0.01)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    g = random_digraph(args.vertices, args.density, args.seed)
    backends = available_backends()
    print(f"digraph: {g.num_vertices} vertices, {g.num_edges} edges; backends: {', '.join(backends)}")

    ref = backends["python"].enumerate_flag(g.indptr, g.indices, g.num_vertices, None, DEFAULT_CEILING)
    counts = [len(a) for a in ref]
    print(f"simplex counts: {counts}")
    # codimension-one face positions per dimension
    pos = {d: np.array([[c for c in range(d + 1) if c != i] for i in range(d + 1)], dtype=np.int32) for d in range(1, len(ref))}
    rng = np.random.default_rng(args.seed)
    mat = (rng.random((400, 600)) < 0.05).astype(np.uint8)

    rows = []
    for name, mod in backends.items():
        t_enum = best_of(lambda: mod.enumerate_flag(g.indptr, g.indices, g.num_vertices, None, DEFAULT_CEILING), args.repeat)
        t_look = best_of(lambda: [mod.lookup_subfaces(ref[d], pos[d], ref[d - 1]) for d in pos], args.repeat)
        t_rank = best_of(lambda: mod.gf2_rank(mat), args.repeat)
        rows.append((name, t_enum, t_look, t_rank))

    print(f"{'backend':<10}{'enumerate':>12}{'lookup':>12}{'gf2_rank':>12}")
    for name, *ts in rows:
        print(f"{name:<10}" + "".join(f"{t:>11.4f}s" for t in ts))
    if len(rows) > 1:
        base = rows[0]
        for name, *ts in rows[1:]:
            print(f"speedup {name} vs {base[0]}: " + ", ".join(f"{b / t:.1f}x" for b, t in zip(base[1:], ts)))


if __name__ == "__main__":
    main()

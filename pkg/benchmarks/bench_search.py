"""Compare the compiled and pure-Python search kernels on fixed instances.

Usage: python benchmarks/bench_search.py [--repeat N] [--json]
"""

import argparse
import json
import random
import statistics
import time

from bitile import patterns, solve_factor, max_h_tiling
from bitile.constructions import extremal_construction
from bitile.experiments import build_chain, thin
from bitile.graph import HostGraph
from bitile.solver import BACKENDS


def random_host(rng, n, p):
    return HostGraph.from_edges(n, n, [(x, y) for x in range(n) for y in range(n) if rng.random() < p])


def instances():
    cat = patterns.catalog()
    rng = random.Random(7)
    H = cat["K1,2+K2"]
    witness = extremal_construction(H, 8).host
    chain = build_chain(thin(witness, 0.3, random.Random("bench:thin")), random.Random("bench:lift"))
    yield "factor K1,2+K2 lifted d=5 (n=20)", "factor", chain[5], H
    hard = build_chain(thin(witness, 0.3, random.Random("0:20:thin:1")), random.Random("0:20:lift:2"))
    yield "factor K1,2+K2 no factor d=4 (n=20)", "factor", hard[4], H
    yield "factor K2,2 random p=0.5 (n=12)", "factor", random_host(rng, 12, 0.5), cat["K2,2"]
    star_rng = random.Random(20)
    p = star_rng.choice((0.2, 0.3, 0.4))
    yield f"max K1,3 random p={p} (n=10)", "max", random_host(star_rng, 10, p), cat["K1,3"]
    yield "max C6 random p=0.5 (n=9)", "max", random_host(rng, 9, 0.5), cat["C6"]


def time_one(mode, G, H, backend):
    start = time.perf_counter()
    if mode == "factor":
        result = solve_factor(G, H, backend=backend)
        value = result.decision
    else:
        result = max_h_tiling(G, H, backend=backend)
        value = result.copies
    return time.perf_counter() - start, value, result.nodes


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    backends = sorted(BACKENDS)
    rows = []
    for label, mode, G, H in instances():
        row = {"instance": label}
        for backend in backends:
            runs = [time_one(mode, G, H, backend) for _ in range(args.repeat)]
            row[backend] = statistics.median(r[0] for r in runs)
            row["value"], row["nodes"] = runs[0][1], runs[0][2]
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    if args.json:
        print(json.dumps({"backends": backends, "rows": rows}, indent=2))
        return
    print(f"{'instance':36} {'nodes':>8} " + " ".join(f"{b:>10}" for b in backends) + "  speedup")
    for row in rows:
        times = " ".join(f"{row[b]:10.4f}" for b in backends)
        speed = f"{row['speedup']:7.1f}x" if "speedup" in row else "      -"
        print(f"{row['instance']:36} {row['nodes']:8d} {times}  {speed}")


if __name__ == "__main__":
    main()

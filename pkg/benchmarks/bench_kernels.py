"""Time the brute-force ILP oracle with the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit
from fractions import Fraction

from wsnbundle.model import RequirementSet, validate_topology
from wsnbundle.optimizer import brute, build_constraints

CASES = {
    "reference tree, 4 nodes, chi<=15": ([(1, 0), (2, 1), (3, 1), (4, 2)], 8, 15),
    "chain of 5, chi<=12": ([(1, 0), (2, 1), (3, 2), (4, 3), (5, 4)], 20, 12),
    "star of 6, chi<=8": ([(k, 0) for k in range(1, 7)], 5, 8),
}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if brute.BACKEND == "cython" else [])
    print(f"{'case':38} {'points':>9} " + " ".join(f"{b:>10}" for b in backends) + "  speedup")
    for name, (edges, d_s, chi) in CASES.items():
        topo = validate_topology(edges)
        cs = build_constraints(topo, RequirementSet(d_s * 10**6, Fraction(1, 100), 1, chi, 10**6))
        times = {}
        for b in backends:
            times[b] = min(timeit.repeat(lambda: brute.brute_force_solve(cs, backend=b),
                                         number=1, repeat=args.repeat))
        speed = f"{times['python'] / times['cython']:7.1f}x" if "cython" in times else "      -"
        cols = " ".join(f"{times[b] * 1e3:8.1f}ms" for b in backends)
        print(f"{name:38} {brute.box_size(cs):>9} {cols}  {speed}")


if __name__ == "__main__":
    main()

"""Compare the compiled and pure-Python sign-coherence kernels.

Runs both backends over every tree up to ``--max-vertices`` vertices (one
per isomorphism class), checks that they return identical tallies and
prints the best-of-``--repeat`` wall time for each.

    python benchmarks/bench_kernels.py --max-vertices 5
"""

from __future__ import annotations

import argparse
import json
import time

from dendrohom import kernels
from dendrohom.signs import _kernel_input
from dendrohom.verify import tree_family


def _time(fn, inputs, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = [fn(ch, fa) for ch, fa in inputs]
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vertices", type=int, default=5)
    ap.add_argument("--max-arity", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    args = ap.parse_args(argv)

    trees = tree_family(args.max_vertices, args.max_arity)
    inputs = [_kernel_input(t) for t in trees]
    orders = sum(kernels.coherence_counts_py(ch, [])[0] for ch, _ in inputs)
    py_t, py_out = _time(kernels.coherence_counts_py, inputs, args.repeat)
    result = {
        "trees": len(trees),
        "planar_orders": orders,
        "python_seconds": round(py_t, 3),
        "compiled_available": kernels.compiled_available(),
    }
    if kernels.compiled_available():
        from dendrohom._kernels import coherence_counts as compiled

        c_t, c_out = _time(compiled, inputs, args.repeat)
        if c_out != py_out:
            raise SystemExit("backends disagree")
        result["compiled_seconds"] = round(c_t, 3)
        result["speedup"] = round(py_t / c_t, 1)
    if args.json:
        print(json.dumps(result, indent=2, sort_keys=True))
    else:
        for k, v in result.items():
            print(f"{k:>20}: {v}")


if __name__ == "__main__":
    main()

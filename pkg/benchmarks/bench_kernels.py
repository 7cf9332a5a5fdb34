"""Time the compiled and pure-Python closure kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload is run on both backends; the results are checked for equality
before the timings are reported.
"""

from __future__ import annotations

import argparse
import statistics
import time

from clonekit import _pykernels
from clonekit.catalog import catalog_entry
from clonekit.core import all_cells, cells_of_rank
from clonekit.galois import invariant_closure
from clonekit.verify import sample_qsets

try:
    from clonekit import _ckernels
except ImportError:
    _ckernels = None


def _projection_traces(m, cells):
    return [tuple(c[i] for c in cells) for i in range(m)]


def closure_workloads():
    uv = catalog_entry("3/uv").gens
    ell = catalog_entry("3/L3").gens
    cons2 = catalog_entry("3/cons2").gens
    klein = catalog_entry("4/klein").gens
    low3 = tuple(cells_of_rank(3, 3, below=3))
    yield "uv ternary slice (27 cells)", uv, _projection_traces(3, all_cells(3, 3))
    yield "minority family, rank<3 cells", ell, _projection_traces(3, low3)
    yield "binary conservative, 2 cells", cons2, _projection_traces(2, [(0, 1), (1, 2)])
    yield "Klein binary slice (16 cells)", klein, _projection_traces(2, all_cells(2, 4))


def escape_workloads():
    uv = catalog_entry("3/uv").gens
    rows = [invariant_closure(uv, H).rows for H in sample_qsets(3, 3, 200, seed=1, gens=uv)]
    yield "uv, 200 invariant sets over A^3", uv, rows


def _time(fn, repeat):
    runs = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        runs.append(time.perf_counter() - start)
    return statistics.median(runs), result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'workload':40} " + " ".join(f"{name:>12}" for name, _ in backends) + ("     speedup" if _ckernels else ""))

    def report(label, times):
        cells = " ".join(f"{t * 1000:10.2f}ms" for t in times)
        speed = f"  {times[0] / times[1]:9.1f}x" if len(times) == 2 else ""
        print(f"{label:40} {cells}{speed}")

    for label, gens, init in closure_workloads():
        times, results = [], []
        for _, mod in backends:
            t, res = _time(lambda mod=mod: mod.close_traces(gens.k, init, gens.kernel_spec, 10**7), args.repeat)
            times.append(t)
            results.append(sorted(res))
        assert all(r == results[0] for r in results), label
        report(f"{label} [{len(results[0])}]", times)

    for label, gens, sets in escape_workloads():
        times, results = [], []
        for _, mod in backends:
            t, res = _time(lambda mod=mod: [mod.first_escape(gens.k, rows, gens.kernel_spec) for rows in sets], args.repeat)
            times.append(t)
            results.append(res)
        assert all(r == results[0] for r in results), label
        report(label, times)


if __name__ == "__main__":
    main()

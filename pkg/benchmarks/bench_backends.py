"""Benchmark the numba kernels against their plain-Python/numpy twins.

Runs each kernel on representative workloads and prints a timing table.
The JIT path is warmed before timing so compilation is not billed to the
kernel.  Usage: python benchmarks/bench_backends.py
"""

import time

import numpy as np

import meandim as md
from meandim.kernels import HAVE_NUMBA, _ba_numpy, _backtrack_count_py
from meandim.subshift import _placement_csr, _placement_groups


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_backtracking():
    # three-dot parity system on a 7x7 box: 2^13 admissible patterns
    sft = md.three_dot()
    pts = md.LatticeSet.from_rect(md.IntRect(0, 6, 0, 6)).points
    groups = _placement_groups(sft, pts)
    csr = _placement_csr(groups)
    args = (len(pts), 2, *csr, -1)

    rows = []
    t_py, c_py = timeit(lambda: _backtrack_count_py(*args), repeat=1)
    rows.append(("backtrack_count", "python", t_py, c_py))
    if HAVE_NUMBA:
        from meandim.kernels import _backtrack_count_nb
        _backtrack_count_nb(*args)  # warm the JIT
        t_nb, c_nb = timeit(lambda: _backtrack_count_nb(*args))
        assert c_nb == c_py
        rows.append(("backtrack_count", "numba", t_nb, c_nb))
    return rows


def bench_blahut_arimoto_large():
    # one big problem: numpy's BLAS-backed matvecs are hard to beat here
    rng = np.random.default_rng(31337)
    p = rng.random(256)
    p /= p.sum()
    rho = rng.random((256, 256)) * 2.0
    args = (p, rho, 2.0, 1e-9, 5000)

    rows = []
    t_np, out_np = timeit(lambda: _ba_numpy(*args))
    rows.append(("ba_solve/256x256", "numpy", t_np, round(out_np[0], 6)))
    if HAVE_NUMBA:
        from meandim.kernels import _ba_loops_nb
        _ba_loops_nb(*args)  # warm the JIT
        t_nb, out_nb = timeit(lambda: _ba_loops_nb(*args))
        assert abs(out_nb[0] - out_np[0]) < 1e-8
        rows.append(("ba_solve/256x256", "numba", t_nb, round(out_nb[0], 6)))
    return rows


def bench_blahut_arimoto_sweep():
    # many small problems (a slope sweep over a binary source): per-call
    # overhead dominates and the fused loops win by orders of magnitude
    p = np.array([0.35, 0.65])
    rho = np.array([[0.0, 1.0], [1.0, 0.0]])
    slopes = np.linspace(0.2, 8.0, 400)

    def sweep(fn):
        acc = 0.0
        for beta in slopes:
            acc += fn(p, rho, float(beta), 1e-11, 20000)[0]
        return round(acc, 6)

    rows = []
    t_np, out_np = timeit(lambda: sweep(_ba_numpy), repeat=1)
    rows.append(("ba_solve/2x2 sweep", "numpy", t_np, out_np))
    if HAVE_NUMBA:
        from meandim.kernels import _ba_loops_nb
        _ba_loops_nb(p, rho, 1.0, 1e-11, 20000)  # warm the JIT
        t_nb, out_nb = timeit(lambda: sweep(_ba_loops_nb))
        assert abs(out_nb - out_np) < 1e-6
        rows.append(("ba_solve/2x2 sweep", "numba", t_nb, out_nb))
    return rows


def main():
    print(f"numba available: {HAVE_NUMBA}")
    rows = (bench_backtracking() + bench_blahut_arimoto_large()
            + bench_blahut_arimoto_sweep())
    print(f"{'kernel':<20} {'path':<8} {'seconds':>10}   result")
    for kernel, path, secs, result in rows:
        print(f"{kernel:<20} {path:<8} {secs:>10.4f}   {result}")
    by_kernel = {}
    for kernel, path, secs, _ in rows:
        by_kernel.setdefault(kernel, {})[path] = secs
    for kernel, paths in by_kernel.items():
        if len(paths) == 2:
            slow = max(paths.values())
            fast = min(paths.values())
            print(f"{kernel}: speedup x{slow / fast:.1f}")


if __name__ == "__main__":
    main()

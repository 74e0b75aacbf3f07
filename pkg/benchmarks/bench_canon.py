"""Compare the compiled and pure-Python canonical labeling kernels.

Runs both kernels on every basis graph of a window, checks that they agree,
and reports per-graph timings.  The lru cache in front of the kernels is
bypassed so each call does the full search.

    python3 benchmarks/bench_canon.py --m 2 --n 5 --max-v 4 --max-h 4
"""

import argparse
import time

from hgc import _canon_py
from hgc.basis import Window, enumerate_window
from hgc.graphcore import Flavor, Parameters, _flat

try:
    from hgc import _canon as _canon_ext
except ImportError:
    _canon_ext = None


def time_kernel(kernel, inputs, n_odd, m_odd, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = [kernel.canon_label(V, ranks, edges, n_odd, m_odd) for V, ranks, edges in inputs]
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--max-v", type=int, default=4)
    ap.add_argument("--max-h", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    p = Parameters(args.m, args.n)
    w = Window(args.max_v, args.max_h, Flavor.A, p)
    graphs = [g for s in enumerate_window(w).values() for g in s.graphs]
    inputs = [_flat(g) for g in graphs]
    print(f"window {w.describe()}: {len(inputs)} graphs")

    t_py, out_py = time_kernel(_canon_py, inputs, p.n_odd, p.m_odd, args.repeat)
    print(f"python  {t_py:8.3f} s  ({1e6 * t_py / len(inputs):8.1f} us/graph)")
    if _canon_ext is None:
        print("compiled kernel not built; nothing to compare")
        return
    t_c, out_c = time_kernel(_canon_ext, inputs, p.n_odd, p.m_odd, args.repeat)
    print(f"cython  {t_c:8.3f} s  ({1e6 * t_c / len(inputs):8.1f} us/graph)")
    mismatches = sum(a != b for a, b in zip(out_py, out_c))
    print(f"speedup {t_py / t_c:6.1f}x   mismatches {mismatches}")

    # the largest graphs dominate: report them separately
    size = max(V + len(r) for V, r, _ in inputs)
    big = [x for x in inputs if x[0] + len(x[1]) == size]
    tb_py, _ = time_kernel(_canon_py, big, p.n_odd, p.m_odd, args.repeat)
    tb_c, _ = time_kernel(_canon_ext, big, p.n_odd, p.m_odd, args.repeat)
    print(f"largest graphs ({size} nodes, {len(big)} of them): "
          f"python {1e6 * tb_py / len(big):.1f} us, cython {1e6 * tb_c / len(big):.1f} us, "
          f"speedup {tb_py / tb_c:.1f}x")


if __name__ == "__main__":
    main()

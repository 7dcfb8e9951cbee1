"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--order 200] [--repeat 3]

Each kernel is timed on the same inputs with both backends, and the outputs
are compared so a speedup never hides a wrong answer. The end-to-end rows
time one catalog identity at a time in a fresh interpreter per backend.
Compiled kernels work in int64; past about q^400 some four-index sums have
coefficients beyond that range and the call falls back to Python integers,
so at ``--order 500`` those rows show no speedup.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

from qstairs import kernels
from qstairs.qproducts import expand_product
from qstairs.catalog import load_catalog


def _best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(order: int, repeat: int) -> list[tuple[str, float, float | None]]:
    spec = load_catalog()["A9-1"].product
    coeffs = expand_product(spec, order).coefficients(0, order)
    small = [(-1) ** i * (i % 7) for i in range(order + 1)]
    rows = []
    cases = {
        "convolve": lambda k: k.convolve(small, small, order),
        "inverse_euler bound 1": lambda k: k.inverse_euler(coeffs, 1),
    }
    for name, call in cases.items():
        py = _best(lambda: call(kernels.python), repeat)
        c = None
        if kernels.compiled is not None:
            if list(call(kernels.compiled)) != list(call(kernels.python)):
                raise AssertionError(f"{name}: backends disagree")
            c = _best(lambda: call(kernels.compiled), repeat)
        rows.append((name, py, c))
    return rows


_END_TO_END = (
    "import time; from qstairs.catalog import load_catalog; "
    "from qstairs.multisum import evaluate; s = load_catalog()[{id!r}].sum; "
    "t = time.perf_counter(); evaluate(s, {order}); print(time.perf_counter() - t)"
)


def bench_identity(id_: str, order: int) -> tuple[float, float | None]:
    def run(pure: bool) -> float:
        env = dict(os.environ)
        if pure:
            env["QSTAIRS_PURE_PYTHON"] = "1"
        else:
            env.pop("QSTAIRS_PURE_PYTHON", None)
        out = subprocess.run([sys.executable, "-c", _END_TO_END.format(id=id_, order=order)],
                             env=env, capture_output=True, text=True, check=True)
        return float(out.stdout)

    return run(True), (run(False) if kernels.compiled is not None else None)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--ids", default="A9-1,KR-I6-alt,new-8a")
    args = ap.parse_args()

    print(f"backend in use: {kernels.BACKEND}; order {args.order}")
    print(f"{'kernel':<22}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    rows = bench_kernels(args.order, args.repeat)
    rows += [(f"evaluate {i}", *bench_identity(i, args.order)) for i in args.ids.split(",")]
    for name, py, c in rows:
        if c is None:
            print(f"{name:<22}{py:>10.4f}{'-':>10}{'-':>9}")
        else:
            print(f"{name:<22}{py:>10.4f}{c:>10.4f}{py / c:>8.1f}x")


if __name__ == "__main__":
    main()

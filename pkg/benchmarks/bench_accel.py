#!/usr/bin/env python3
"""Compare the numba-compiled kernels against the pure fallback.

Times three hot paths in both acceleration modes:

* coset enumeration of a mid-size string group and of a cap-bounded
  divergent star diagram;
* group closure (element enumeration) of a wreath-product automorphism
  group on 128 points;
* row-index churn (the hash table behind element lookup).

Run:  python benchmarks/bench_accel.py
"""

import time

import numpy as np

from polycomplex import accel, catalog
from polycomplex.accel import RowIndex
from polycomplex.errors import CapExceeded
from polycomplex.permgroup import automorphism_group
from polycomplex.power import symmetric_group, wreath_group
from polycomplex.twisting import (
    build_diagram_d,
    presentation_from_diagram,
    string_presentation,
    todd_coxeter,
)


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return time.perf_counter() - t0, out


def bench_coset_finite():
    ct = todd_coxeter(string_presentation((3, 3, 5)))
    assert ct.n_cosets == 14400
    return ct.table


def bench_coset_divergent():
    pres = presentation_from_diagram(build_diagram_d((3,), catalog.build("fano")))
    try:
        todd_coxeter(pres, cap=120_000)
    except CapExceeded:
        return "cap"
    raise AssertionError("the seven-leg star group closed unexpectedly")


def bench_closure():
    fano = catalog.build("fano")
    grp = wreath_group(symmetric_group(2), fano,
                       automorphism_group(fano, on="vertices"))
    grp.enumerate()
    assert grp.order == 21504
    return grp.element_matrix


def bench_rowindex():
    rng = np.random.RandomState(42)
    rows = rng.randint(0, 999, size=(200_000, 16)).astype(np.int32)
    idx = RowIndex(16, expect=1024)
    ids = idx.add(rows)
    idx.lookup(rows)
    return int(ids.max())


BENCHES = [
    ("todd-coxeter [3,3,5] (14400 cosets)", bench_coset_finite),
    ("todd-coxeter 7-leg star to 120k-coset cap", bench_coset_divergent),
    ("closure of Aut(2^fano) (21504 elements, degree 128)", bench_closure),
    ("row index: 200k adds + lookups, width 16", bench_rowindex),
]


def main():
    results = {}
    for mode in ("numba", "numpy"):
        try:
            accel.set_mode(mode)
        except ImportError:
            print(f"-- {mode}: unavailable, skipped")
            continue
        print(f"== mode: {mode} ==")
        for label, fn in BENCHES:
            # one warmup in numba mode so JIT compilation is not billed
            if mode == "numba":
                fn()
            dt, out = timed(fn)
            results.setdefault(label, {})[mode] = (dt, out)
            print(f"  {label:55s} {dt:8.3f}s")
    print()
    for label, per_mode in results.items():
        if len(per_mode) == 2:
            a, b = per_mode["numba"], per_mode["numpy"]
            if isinstance(a[1], np.ndarray):
                same = np.array_equal(a[1], b[1])
            else:
                same = a[1] == b[1]
            speed = b[0] / a[0] if a[0] > 0 else float("inf")
            print(f"{label}: numba {speed:5.1f}x faster, outputs identical: {same}")


if __name__ == "__main__":
    main()

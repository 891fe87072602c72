"""Acceleration dispatch: numba-compiled kernels with a plain fallback.

The mode is chosen once at import from the POLYCOMPLEX_ACCEL environment
variable: ``numba`` (require numba, fail loudly if missing), ``numpy``
(pure numpy/Python fallback), or ``auto`` (default: numba when importable).
Tests and benchmarks can switch at runtime with :func:`set_mode`.

Both modes compute identical results: the coset-table kernel runs the same
code object either compiled or interpreted, and the two RowIndex
implementations share one contract (dense ids in first-insertion order).
"""

from __future__ import annotations

import os

import numpy as np

from . import kernels

_VALID_MODES = ("numba", "numpy")

_mode: str | None = None
_compiled: dict[str, object] = {}


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _initial_mode() -> str:
    raw = os.environ.get("POLYCOMPLEX_ACCEL", "auto").strip().lower()
    if raw == "auto":
        return "numba" if _numba_available() else "numpy"
    if raw not in _VALID_MODES:
        raise ValueError(
            f"POLYCOMPLEX_ACCEL must be one of auto/numba/numpy, got {raw!r}")
    if raw == "numba" and not _numba_available():
        raise ImportError("POLYCOMPLEX_ACCEL=numba but numba is not importable")
    return raw


def mode() -> str:
    global _mode
    if _mode is None:
        _mode = _initial_mode()
    return _mode


def set_mode(new_mode: str) -> None:
    """Force the acceleration mode (used by tests and the benchmark)."""
    global _mode
    if new_mode not in _VALID_MODES:
        raise ValueError(f"unknown acceleration mode {new_mode!r}")
    if new_mode == "numba" and not _numba_available():
        raise ImportError("numba is not importable")
    _mode = new_mode


def _get_compiled(name: str):
    fn = _compiled.get(name)
    if fn is None:
        from numba import njit

        fn = njit(cache=True)(getattr(kernels, name))
        _compiled[name] = fn
    return fn


def hlt_fill(table, p, rel_flat, rel_off, sub_flat, sub_off, queue):
    if mode() == "numba":
        impl = _get_compiled("hlt_fill")
    else:
        impl = kernels.hlt_fill
    return impl(table, p, rel_flat, rel_off, sub_flat, sub_off, queue)


class RowIndex:
    """Deterministic map from integer rows to dense ids (insertion order).

    Rows are fixed-width int32 vectors; id ``i`` is the i-th distinct row
    ever added.  Used to index permutations by their image vectors, cosets
    by representatives, and power-complex faces by anchors.
    """

    def __init__(self, width: int, expect: int = 256):
        self.width = int(width)
        self._n = 0
        cap = 16
        while cap < 2 * expect:
            cap *= 2
        self._store = np.empty((max(expect, 16), self.width), dtype=np.int32)
        if mode() == "numba":
            self._slots = np.full(cap, -1, dtype=np.int64)
            self._dict = None
        else:
            self._slots = None
            self._dict = {}

    def __len__(self) -> int:
        return self._n

    @property
    def matrix(self) -> np.ndarray:
        """View of all stored rows, in id order."""
        return self._store[: self._n]

    def row(self, i: int) -> np.ndarray:
        return self._store[i]

    def _grow_for(self, incoming: int) -> None:
        need = self._n + incoming
        if need > self._store.shape[0]:
            new_rows = max(need, 2 * self._store.shape[0])
            store = np.empty((new_rows, self.width), dtype=np.int32)
            store[: self._n] = self._store[: self._n]
            self._store = store
        if self._slots is not None and 3 * need >= 2 * self._slots.shape[0]:
            cap = self._slots.shape[0]
            while 3 * need >= 2 * cap:
                cap *= 2
            self._slots = np.full(cap, -1, dtype=np.int64)
            if self._n:
                if mode() == "numba":
                    _get_compiled("rows_rehash")(self._slots, self._store, self._n)
                else:
                    kernels.rows_rehash(self._slots, self._store, self._n)

    def add(self, rows: np.ndarray) -> np.ndarray:
        """Insert rows, returning their ids; repeats get the existing id."""
        rows = np.ascontiguousarray(rows, dtype=np.int32)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        m = rows.shape[0]
        if m == 0:
            return np.empty(0, dtype=np.int64)
        self._grow_for(m)
        if self._dict is None:
            out = np.empty(m, dtype=np.int64)
            impl = _get_compiled("rows_add") if mode() == "numba" else kernels.rows_add
            self._n = impl(self._slots, self._store, self._n, rows, out)
            return out
        out = np.empty(m, dtype=np.int64)
        d = self._dict
        for r in range(m):
            key = rows[r].tobytes()
            idx = d.get(key)
            if idx is None:
                idx = self._n
                d[key] = idx
                self._store[idx] = rows[r]
                self._n += 1
            out[r] = idx
        return out

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Ids of rows, -1 where a row was never added."""
        rows = np.ascontiguousarray(rows, dtype=np.int32)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        m = rows.shape[0]
        out = np.empty(m, dtype=np.int64)
        if m == 0:
            return out
        if self._dict is None:
            impl = (_get_compiled("rows_lookup")
                    if mode() == "numba" else kernels.rows_lookup)
            impl(self._slots, self._store, rows, out)
            return out
        d = self._dict
        for r in range(m):
            out[r] = d.get(rows[r].tobytes(), -1)
        return out

    def __contains__(self, row) -> bool:
        return int(self.lookup(np.asarray(row, dtype=np.int32))[0]) >= 0

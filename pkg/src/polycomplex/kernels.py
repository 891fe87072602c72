"""Hot numeric kernels, written in a numba-compilable style.

Every function here is plain Python over preallocated numpy arrays with
scalar inner loops.  ``accel`` compiles them with ``numba.njit`` when the
accelerated mode is active; in numpy mode the coset-table kernel runs as
ordinary Python (same code object, so both modes produce identical tables),
and the row-index kernels are replaced by a dict-based implementation with
the same contract.

Conventions for the coset-table kernel:

* all generators are involutions, so a generator is its own inverse and the
  table has one column per generator;
* ``table`` is int32 of shape (cap, ngens), -1 meaning undefined;
* ``p`` is the union-find parent array over cosets; a coset is live iff
  ``p[c] == c``; merges always keep the smaller index, so coset 0 survives;
* relators and subgroup generator words are passed flattened with offset
  arrays, generator letters as column indices.

The fill strategy scans every relator at every live coset in ascending
order, defining new cosets as needed, then tops up any undefined entries of
the row.  Coset numbering is therefore by first appearance and the whole
procedure is deterministic.
"""

from __future__ import annotations

import numpy as np

FNV_OFFSET = np.uint64(1469598103934665603)
FNV_PRIME = np.uint64(1099511628211)

# Status codes returned by hlt_fill.
FILL_COMPLETE = 0
FILL_CAP = 1


def hlt_fill(table, p, rel_flat, rel_off, sub_flat, sub_off, queue):
    """Run the coset enumeration until the table is complete or cap is hit.

    Returns ``(status, n_defined)`` where ``n_defined`` counts every coset
    ever defined (live and dead).  ``queue`` is an int32 scratch array with
    at least ``cap`` entries used by coincidence processing.
    """
    cap = table.shape[0]
    ngens = table.shape[1]
    n = 1  # coset 0 = the subgroup itself
    p[0] = 0

    n_sub = sub_off.shape[0] - 1
    n_rel = rel_off.shape[0] - 1

    # phase 0: subgroup generator words scanned at coset 0
    # phase 1: all relators at every live coset, ascending
    phase = 0
    widx = 0
    alpha = 0
    while True:
        if phase == 0:
            if widx >= n_sub:
                phase = 1
                alpha = 0
                widx = 0
                continue
            lo = sub_off[widx]
            hi = sub_off[widx + 1]
            word = sub_flat
            scan_alpha = 0
            widx += 1
        else:
            if alpha >= n:
                break
            if p[alpha] != alpha:
                alpha += 1
                widx = 0
                continue
            if widx >= n_rel:
                # top up the row so every live row ends complete
                for g in range(ngens):
                    if table[alpha, g] == -1:
                        if n >= cap:
                            return FILL_CAP, n
                        beta = n
                        p[beta] = beta
                        table[alpha, g] = beta
                        table[beta, g] = alpha
                        n += 1
                alpha += 1
                widx = 0
                continue
            lo = rel_off[widx]
            hi = rel_off[widx + 1]
            word = rel_flat
            scan_alpha = alpha
            widx += 1

        # ---- scan word[lo:hi] at coset scan_alpha, filling gaps ----
        need_coin = False
        ca = 0
        cb = 0
        f = scan_alpha
        i = lo
        b = scan_alpha
        j = hi - 1
        while True:
            while i <= j and table[f, word[i]] != -1:
                f = table[f, word[i]]
                i += 1
            if i > j:
                if f != b:
                    need_coin = True
                    ca = f
                    cb = b
                break
            while j >= i and table[b, word[j]] != -1:
                b = table[b, word[j]]
                j -= 1
            if j < i:
                need_coin = True
                ca = f
                cb = b
                break
            if j == i:
                # deduction closing the gap
                table[f, word[i]] = b
                table[b, word[i]] = f
                break
            # define a new coset to make progress
            if n >= cap:
                return FILL_CAP, n
            beta = n
            p[beta] = beta
            table[f, word[i]] = beta
            table[beta, word[i]] = f
            n += 1

        if need_coin:
            # ---- coincidence processing with min-representative merges ----
            qhead = 0
            qtail = 0
            x = ca
            while p[x] != x:
                x = p[x]
            y = cb
            while p[y] != y:
                y = p[y]
            if x != y:
                if x < y:
                    p[y] = x
                    queue[qtail] = y
                else:
                    p[x] = y
                    queue[qtail] = x
                qtail += 1
            while qhead < qtail:
                gamma = queue[qhead]
                qhead += 1
                for g in range(ngens):
                    delta = table[gamma, g]
                    if delta == -1:
                        continue
                    table[delta, g] = -1
                    mu = gamma
                    while p[mu] != mu:
                        mu = p[mu]
                    nu = delta
                    while p[nu] != nu:
                        nu = p[nu]
                    if table[mu, g] != -1:
                        # transferred edge collides: rep targets coincide
                        x = nu
                        y = table[mu, g]
                        while p[x] != x:
                            x = p[x]
                        while p[y] != y:
                            y = p[y]
                        if x != y:
                            if x < y:
                                p[y] = x
                                queue[qtail] = y
                            else:
                                p[x] = y
                                queue[qtail] = x
                            qtail += 1
                    elif table[nu, g] != -1:
                        x = mu
                        y = table[nu, g]
                        while p[x] != x:
                            x = p[x]
                        while p[y] != y:
                            y = p[y]
                        if x != y:
                            if x < y:
                                p[y] = x
                                queue[qtail] = y
                            else:
                                p[x] = y
                                queue[qtail] = x
                            qtail += 1
                    else:
                        table[mu, g] = nu
                        table[nu, g] = mu

    return FILL_COMPLETE, n


def rows_add(slots, store, n_store, rows, out_ids):
    """Insert rows into the open-addressing index, assigning dense ids.

    ``slots`` holds row indices (-1 empty) and must stay under 2/3 load;
    the caller guarantees capacity.  Returns the new store count.
    """
    mask = slots.shape[0] - 1
    w = rows.shape[1]
    m = rows.shape[0]
    for r in range(m):
        h = FNV_OFFSET
        for c in range(w):
            h = (h ^ np.uint64(rows[r, c] + 1)) * FNV_PRIME
        i = np.int64(h & np.uint64(mask))
        while True:
            s = slots[i]
            if s == -1:
                for c in range(w):
                    store[n_store, c] = rows[r, c]
                slots[i] = n_store
                out_ids[r] = n_store
                n_store += 1
                break
            eq = True
            for c in range(w):
                if store[s, c] != rows[r, c]:
                    eq = False
                    break
            if eq:
                out_ids[r] = s
                break
            i = (i + 1) & mask
    return n_store


def rows_lookup(slots, store, rows, out_ids):
    """Look up rows in the index; out_ids gets -1 for absent rows."""
    mask = slots.shape[0] - 1
    w = rows.shape[1]
    m = rows.shape[0]
    for r in range(m):
        h = FNV_OFFSET
        for c in range(w):
            h = (h ^ np.uint64(rows[r, c] + 1)) * FNV_PRIME
        i = np.int64(h & np.uint64(mask))
        out_ids[r] = -1
        while True:
            s = slots[i]
            if s == -1:
                break
            eq = True
            for c in range(w):
                if store[s, c] != rows[r, c]:
                    eq = False
                    break
            if eq:
                out_ids[r] = s
                break
            i = (i + 1) & mask


def rows_rehash(slots, store, n_store):
    """Rebuild the slot table for the first n_store rows of the store."""
    mask = slots.shape[0] - 1
    w = store.shape[1]
    for s in range(n_store):
        h = FNV_OFFSET
        for c in range(w):
            h = (h ^ np.uint64(store[s, c] + 1)) * FNV_PRIME
        i = np.int64(h & np.uint64(mask))
        while slots[i] != -1:
            i = (i + 1) & mask
        slots[i] = s

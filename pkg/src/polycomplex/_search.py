"""Backtracking bijection search with invariant refinement.

This is the engine behind isomorphism testing and automorphism-group
discovery.  Points are vertices when both complexes are vertex-describable
(faces are then recovered from vertex sets), otherwise proper faces.

Invariants used for pruning:

* a pair profile P[a,b]: for vertices, the vector over ranks of how many
  proper faces contain both a and b; for faces, (rank a, rank b, a<=b, b<=a);
* point colors, refined twice by the sorted multiset of (P[a,b], color b).

A candidate matrix C[x,y] ("x may map to y") is narrowed by one vectorized
consistency pass per assignment; rows that collapse to a single candidate
are assigned immediately.  Every completed assignment is verified against
the actual face structure before being reported, so the profile pruning
only has to be sound, never sharp.

All orderings are deterministic: decision points take the unassigned point
with the fewest candidates (lowest index on ties) and candidates are tried
in ascending order.
"""

from __future__ import annotations

import numpy as np

from . import config
from .complexes import IncidenceComplex, f_vector
from .errors import SearchBudgetExceeded


def _shared_row_ids(rows1: np.ndarray, rows2: np.ndarray):
    """Dense ids for the rows of two stacked matrices, shared id space."""
    both = np.concatenate([rows1, rows2], axis=0)
    _, inverse = np.unique(both, axis=0, return_inverse=True)
    inverse = inverse.astype(np.int64)
    return inverse[: rows1.shape[0]], inverse[rows1.shape[0]:]


def _vertex_pair_profile(cx: IncidenceComplex) -> np.ndarray:
    """(n, n, k) counts of proper rank-r faces containing both vertices."""
    n = cx.n_vertices
    k = cx.rank
    prof = np.zeros((n, n, k), dtype=np.int32)
    vs = cx.vertex_sets
    for f in range(cx.n_faces):
        r = cx.face_rank(f)
        if r < 0 or r >= k:
            continue
        idx = np.fromiter(vs[f], dtype=np.int64, count=len(vs[f]))
        prof[idx[:, None], idx[None, :], r] += 1
    return prof


def _face_pair_profile(cx: IncidenceComplex, points: np.ndarray) -> np.ndarray:
    """(m, m) encoded (rank a, rank b, a<=b, b<=a) over proper faces."""
    m = points.shape[0]
    up = cx._ensure_up_bits()
    k2 = cx.rank + 2
    ranks = cx._ranks[points].astype(np.int64) + 1
    code = ranks[:, None] * k2 + ranks[None, :]
    leq = np.zeros((m, m), dtype=np.int64)
    for i, a in enumerate(points):
        row = up[a]
        bits = (row[points >> 6] >> (points & 63).astype(np.uint64)) & np.uint64(1)
        leq[i] = bits.astype(np.int64)
    return (code * 2 + leq) * 2 + leq.T


def _refine_colors(P1, P2, col1, col2, rounds=2):
    """Refine point colors by sorted rows of (pair id, neighbor color)."""
    for _ in range(rounds):
        width = 1 + max(int(col1.max(initial=0)), int(col2.max(initial=0)))
        code1 = np.sort(P1 * width + col1[None, :], axis=1)
        code2 = np.sort(P2 * width + col2[None, :], axis=1)
        r1, r2 = _shared_row_ids(code1, code2)
        width2 = 1 + max(int(r1.max(initial=0)), int(r2.max(initial=0)))
        col1, col2 = _shared_row_ids(
            (col1 * width2 + r1)[:, None], (col2 * width2 + r2)[:, None])
    return col1, col2


class _SearchFrame:
    __slots__ = ("cand", "assign", "n_assigned", "choice_row", "choices", "next_choice")

    def __init__(self, cand, assign, n_assigned):
        self.cand = cand
        self.assign = assign
        self.n_assigned = n_assigned
        self.choice_row = -1
        self.choices = None
        self.next_choice = 0


def _apply_pin(cand, assign, u, w, P1, P2) -> bool:
    """Assign u -> w and narrow the candidate matrix; False on wipeout."""
    assign[u] = w
    cand[u, :] = False
    cand[:, w] = False
    cand &= (P1[:, u][:, None] == P2[:, w][None, :])
    cand &= (P1[u, :][:, None] == P2[w, :][None, :])
    unassigned = assign < 0
    if unassigned.any():
        if not cand[unassigned].any(axis=1).all():
            return False
        used = np.zeros(cand.shape[1], dtype=bool)
        used[assign[assign >= 0]] = True
        if not (cand.any(axis=0) | used).all():
            return False
    return True


def _propagate(cand, assign, P1, P2) -> bool:
    """Pin every row that has a unique candidate until stable."""
    while True:
        unassigned = np.nonzero(assign < 0)[0]
        if unassigned.size == 0:
            return True
        counts = cand[unassigned].sum(axis=1)
        if np.any(counts == 0):
            return False
        forced = unassigned[counts == 1]
        if forced.size == 0:
            return True
        u = int(forced[0])
        w = int(np.nonzero(cand[u])[0][0])
        if not _apply_pin(cand, assign, u, w, P1, P2):
            return False


def search_first(P1, P2, col1, col2, pins, node_budget, verify):
    """First complete assignment consistent with the pins, or None.

    ``verify`` is called with the full point map and must confirm it
    against the real structure; rejected leaves resume the search.
    Raises SearchBudgetExceeded when the node budget runs out.
    """
    n1 = col1.shape[0]
    n2 = col2.shape[0]
    if n1 != n2:
        return None
    cand = col1[:, None] == col2[None, :]
    assign = np.full(n1, -1, dtype=np.int64)
    for u, w in pins:
        if not cand[u, w] or not _apply_pin(cand, assign, int(u), int(w), P1, P2):
            return None
    if not _propagate(cand, assign, P1, P2):
        return None

    nodes = 0
    stack = [_SearchFrame(cand, assign, int((assign >= 0).sum()))]
    while stack:
        frame = stack[-1]
        if frame.n_assigned == n1:
            result = frame.assign.copy()
            stack.pop()
            if verify(result):
                return result
            continue
        if frame.choice_row < 0:
            unassigned = np.nonzero(frame.assign < 0)[0]
            counts = frame.cand[unassigned].sum(axis=1)
            pos = int(np.argmin(counts))
            frame.choice_row = int(unassigned[pos])
            frame.choices = np.nonzero(frame.cand[frame.choice_row])[0]
            frame.next_choice = 0
        if frame.next_choice >= len(frame.choices):
            stack.pop()
            continue
        w = int(frame.choices[frame.next_choice])
        frame.next_choice += 1
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(
                f"bijection search exceeded {node_budget} nodes")
        cand2 = frame.cand.copy()
        assign2 = frame.assign.copy()
        if not _apply_pin(cand2, assign2, frame.choice_row, w, P1, P2):
            continue
        if not _propagate(cand2, assign2, P1, P2):
            continue
        stack.append(_SearchFrame(cand2, assign2, int((assign2 >= 0).sum())))
    return None


# -- complex-level drivers ----------------------------------------------------


def _vertex_invariants(c1, c2):
    prof1 = _vertex_pair_profile(c1)
    prof2 = _vertex_pair_profile(c2)
    n1, n2, k = prof1.shape[0], prof2.shape[0], c1.rank
    P1, P2 = _shared_row_ids(prof1.reshape(n1 * n1, k),
                             prof2.reshape(n2 * n2, k))
    P1 = P1.reshape(n1, n1)
    P2 = P2.reshape(n2, n2)
    col1, col2 = _shared_row_ids(np.diagonal(P1)[:, None],
                                 np.diagonal(P2)[:, None])
    col1, col2 = _refine_colors(P1, P2, col1, col2)
    return P1, P2, col1, col2


def _face_points(cx):
    return np.array(
        [f for f in range(cx.n_faces) if 0 <= cx.face_rank(f) < cx.rank],
        dtype=np.int64)


def _face_invariants(c1, c2, pts1, pts2):
    P1 = _face_pair_profile(c1, pts1)
    P2 = _face_pair_profile(c2, pts2)
    deg1 = np.array([[c1.face_rank(int(f)), len(c1.lowers(int(f))),
                      len(c1.uppers(int(f)))] for f in pts1], dtype=np.int64)
    deg2 = np.array([[c2.face_rank(int(f)), len(c2.lowers(int(f))),
                      len(c2.uppers(int(f)))] for f in pts2], dtype=np.int64)
    col1, col2 = _shared_row_ids(deg1, deg2)
    col1, col2 = _refine_colors(P1, P2, col1, col2)
    return P1, P2, col1, col2


def _rank_vset_table(cx):
    vs = cx.vertex_sets
    table = {}
    for f in range(cx.n_faces):
        r = cx.face_rank(f)
        if 0 <= r < cx.rank:
            table[(r, vs[f])] = f
    return table


def _make_vertex_verifier(c1, c2):
    # face vertex sets must map to face vertex sets AND the induced face
    # map must preserve covers: in a general complex the order is not
    # vertex-set inclusion, so the family check alone is not enough
    table2 = _rank_vset_table(c2)
    vs1 = c1.vertex_sets
    cover_set2 = {(int(a), int(b)) for a, b in c2.covers}

    def verify(pi) -> bool:
        fmap = np.full(c1.n_faces, -1, dtype=np.int64)
        fmap[c1.least_id] = c2.least_id
        fmap[c1.greatest_id] = c2.greatest_id
        for f in range(c1.n_faces):
            r = c1.face_rank(f)
            if not 0 <= r < c1.rank:
                continue
            image = tuple(sorted(int(pi[v]) for v in vs1[f]))
            g = table2.get((r, image))
            if g is None:
                return False
            fmap[f] = g
        for a, b in c1.covers:
            if (int(fmap[a]), int(fmap[b])) not in cover_set2:
                return False
        return True

    return verify


def _make_face_verifier(c1, c2, pts1, pts2):
    pos1 = {int(f): i for i, f in enumerate(pts1)}
    cover_set2 = {(int(a), int(b)) for a, b in c2.covers}

    def face_image(pi, f):
        r = c1.face_rank(f)
        if r == -1:
            return c2.least_id
        if r == c1.rank:
            return c2.greatest_id
        return int(pts2[pi[pos1[f]]])

    def verify(pi) -> bool:
        for a, b in c1.covers:
            if (face_image(pi, int(a)), face_image(pi, int(b))) not in cover_set2:
                return False
        return True

    return verify


def face_map_from_vertex_map(c1, c2, pi) -> np.ndarray:
    """Face bijection induced by a vertex bijection (both sides
    vertex-describable); -1 marks faces whose image does not exist."""
    table2 = _rank_vset_table(c2)
    vs1 = c1.vertex_sets
    out = np.full(c1.n_faces, -1, dtype=np.int64)
    out[c1.least_id] = c2.least_id
    out[c1.greatest_id] = c2.greatest_id
    for f in range(c1.n_faces):
        r = c1.face_rank(f)
        if 0 <= r < c1.rank:
            image = tuple(sorted(int(pi[v]) for v in vs1[f]))
            out[f] = table2.get((r, image), -1)
    return out


def isomorphism_impl(c1, c2, node_cap=None):
    """Rank- and order-preserving face bijection c1 -> c2, or None.

    Returns a dict face id -> face id.  Vertex-describable complexes are
    matched through vertex images; otherwise a generic proper-face search
    runs.  Deterministic for fixed inputs.
    """
    if node_cap is None:
        node_cap = config.search_node_cap()
    if c1.rank != c2.rank or f_vector(c1) != f_vector(c2):
        return None
    if c1.covers.shape[0] != c2.covers.shape[0]:
        return None
    if c1.rank == 0:
        return {c1.least_id: c2.least_id, c1.greatest_id: c2.greatest_id}

    from .complexes import is_vertex_describable

    vd1 = is_vertex_describable(c1)
    vd2 = is_vertex_describable(c2)
    if vd1 != vd2:
        return None
    if vd1:
        P1, P2, col1, col2 = _vertex_invariants(c1, c2)
        pi = search_first(P1, P2, col1, col2, (), node_cap,
                          _make_vertex_verifier(c1, c2))
        if pi is None:
            return None
        fm = face_map_from_vertex_map(c1, c2, pi)
        return {int(f): int(g) for f, g in enumerate(fm)}
    pts1 = _face_points(c1)
    pts2 = _face_points(c2)
    P1, P2, col1, col2 = _face_invariants(c1, c2, pts1, pts2)
    pi = search_first(P1, P2, col1, col2, (), node_cap,
                      _make_face_verifier(c1, c2, pts1, pts2))
    if pi is None:
        return None
    out = {int(c1.least_id): int(c2.least_id),
           int(c1.greatest_id): int(c2.greatest_id)}
    for i, f in enumerate(pts1):
        out[int(f)] = int(pts2[pi[i]])
    return out


def automorphism_chain(cx, node_cap=None):
    """Generators and exact order of the automorphism group.

    Walks a point-stabilizer chain: for each base point, every candidate
    image is settled by a complete search, so the orbit sizes are exact and
    the order is their product.  Returns (mode, point_perms, order) where
    mode is "vertex" or "face" and the perms act on vertices resp. proper
    faces (index positions).
    """
    if node_cap is None:
        node_cap = config.search_node_cap()

    from .complexes import is_vertex_describable

    if cx.rank == 0:
        return "vertex", [], 1

    if is_vertex_describable(cx):
        mode = "vertex"
        P1, P2, col1, col2 = _vertex_invariants(cx, cx)
        verify = _make_vertex_verifier(cx, cx)
        n = cx.n_vertices
    else:
        mode = "face"
        pts = _face_points(cx)
        P1, P2, col1, col2 = _face_invariants(cx, cx, pts, pts)
        verify = _make_face_verifier(cx, cx, pts, pts)
        n = pts.shape[0]

    gens = []
    order = 1
    pins = []
    cand = col1[:, None] == col2[None, :]
    assign = np.full(n, -1, dtype=np.int64)
    for u in range(n):
        if assign[u] >= 0:
            continue
        choices = np.nonzero(cand[u])[0]
        if choices.size == 1:
            _apply_pin(cand, assign, u, int(choices[0]), P1, P2)
            pins.append((u, int(choices[0])))
            continue
        # candidates already reachable from u under stabilizer elements
        # found at this level need no search of their own
        level_gens = []
        known = {u}
        for w in choices:
            w = int(w)
            if w in known:
                continue
            pi = search_first(P1, P2, col1, col2, pins + [(u, w)],
                              node_cap, verify)
            if pi is None:
                continue
            pi = pi.astype(np.int64)
            gens.append(pi)
            level_gens.append(pi)
            frontier = list(known)
            while frontier:
                nxt = []
                for x in frontier:
                    for g in level_gens:
                        y = int(g[x])
                        if y not in known:
                            known.add(y)
                            nxt.append(y)
                frontier = nxt
        order *= len(known)
        pins.append((u, u))
        if not _apply_pin(cand, assign, u, u, P1, P2):
            raise AssertionError("identity pin wiped out candidates")
    return mode, gens, order

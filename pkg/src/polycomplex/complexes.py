"""Finite ranked incidence complexes.

An incidence complex of rank k is represented by its Hasse diagram: a dense
array of faces with ranks in -1..k (ids assigned rank-major, input-order
minor) and the set of cover pairs (rank difference exactly 1).  The partial
order is the reflexive-transitive closure of the covers; comparability is
answered from cached reachability bitsets.

The four defining axioms are checked by :func:`validate`:

  I1  unique least and greatest face, comparable to everything;
  I2  every maximal chain has k+2 elements (each face is covered and covers
      something, except at the extremes);
  I3  strong flag-connectedness: for every chain, the flags containing it
      form a connected graph under "differ in one face" adjacency; this is
      checked section by section, since the flags containing a chain split
      as a product over the sections between consecutive chain members;
  I4  between any (i-1)-face and (i+1)-face above it lie exactly c_i >= 2
      intermediate faces, with c_i independent of the pair.

Everything is immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import MalformedPoset, NotComparable, RankOutOfRange


@dataclass(frozen=True)
class Face:
    """One face: dense id, rank, and the vertex indices at or below it."""

    id: int
    rank: int
    vertices: tuple


@dataclass
class AxiomReport:
    """Outcome of validate(): one flag per axiom plus diagnostics.

    ``passed_i3`` is None when the flag cap was exceeded before the
    connectivity check could finish; that is a budget outcome, not a
    failure.  ``c_vector`` is present exactly when I4 holds.
    """

    passed_i1: bool
    passed_i2: bool
    passed_i3: bool | None
    passed_i4: bool
    c_vector: tuple | None
    vertex_describable: bool
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.passed_i1 and self.passed_i2
                and self.passed_i3 is True and self.passed_i4)


def _pack_reach(n_faces, neighbor_lists, order):
    """Reflexive-transitive reachability as packed uint64 bitsets."""
    words = (n_faces + 63) // 64
    bits = np.zeros((n_faces, words), dtype=np.uint64)
    idx = np.arange(n_faces)
    bits[idx, idx >> 6] = np.uint64(1) << (idx & 63).astype(np.uint64)
    for f in order:
        row = bits[f]
        for g in neighbor_lists[f]:
            row |= bits[g]
    return bits


def _bit_test(bits_row, j) -> bool:
    return bool((bits_row[j >> 6] >> np.uint64(j & 63)) & np.uint64(1))


def _bits_to_ids(bits_row, n_faces) -> np.ndarray:
    flat = np.unpackbits(bits_row.view(np.uint8), bitorder="little")
    return np.nonzero(flat[:n_faces])[0]


class IncidenceComplex:
    """Immutable ranked poset given by faces and cover pairs.

    Construction only checks structural well-formedness (dense rank-major
    ids, ranks in -1..k, covers with rank difference one); whether the
    axioms hold is decided by :func:`validate`, so defective fixtures can
    be represented.
    """

    def __init__(self, rank: int, face_ranks, covers):
        if rank < 0:
            raise MalformedPoset(f"complex rank must be >= 0, got {rank}")
        ranks = np.asarray(face_ranks, dtype=np.int16)
        if ranks.ndim != 1 or ranks.size < 2:
            raise MalformedPoset("need at least a least and a greatest face")
        if ranks.min(initial=0) < -1 or ranks.max(initial=0) > rank:
            raise MalformedPoset("face rank outside -1..k")
        if np.any(np.diff(ranks) < 0):
            raise MalformedPoset("face ids must be sorted by rank (rank-major)")
        self.rank = int(rank)
        self._ranks = ranks
        self._ranks.setflags(write=False)
        n = ranks.size

        cov = np.asarray(list(covers), dtype=np.int64)
        if cov.size == 0:
            cov = cov.reshape(0, 2)
        if cov.ndim != 2 or cov.shape[1] != 2:
            raise MalformedPoset("covers must be pairs")
        if cov.size and (cov.min() < 0 or cov.max() >= n):
            raise MalformedPoset("cover refers to unknown face id")
        if np.any(ranks[cov[:, 1]] - ranks[cov[:, 0]] != 1):
            raise MalformedPoset("cover pair without rank difference 1")
        cov = np.unique(cov, axis=0)
        self._covers = cov
        self._covers.setflags(write=False)

        # per-rank id blocks; ids of rank r live in [start[r+1], start[r+2])
        self._rank_start = np.searchsorted(ranks, np.arange(-1, rank + 2))

        up = [[] for _ in range(n)]
        down = [[] for _ in range(n)]
        for lo, hi in cov:
            up[lo].append(hi)
            down[hi].append(lo)
        self._uppers = [np.array(sorted(u), dtype=np.int64) for u in up]
        self._lowers = [np.array(sorted(d), dtype=np.int64) for d in down]

        self._up_bits = None
        self._down_bits = None
        self._vertex_sets = None
        self._flags = None

    # -- basic accessors ---------------------------------------------------

    @property
    def n_faces(self) -> int:
        return self._ranks.size

    @property
    def covers(self) -> np.ndarray:
        return self._covers

    def face_rank(self, i: int) -> int:
        return int(self._ranks[i])

    def faces_of_rank(self, r: int) -> range:
        if r < -1 or r > self.rank:
            raise RankOutOfRange(f"rank {r} outside -1..{self.rank}")
        return range(self._rank_start[r + 1], self._rank_start[r + 2])

    @property
    def least_id(self) -> int:
        block = self.faces_of_rank(-1)
        if len(block) != 1:
            raise MalformedPoset("no unique least face")
        return block[0]

    @property
    def greatest_id(self) -> int:
        block = self.faces_of_rank(self.rank)
        if len(block) != 1:
            raise MalformedPoset("no unique greatest face")
        return block[0]

    @property
    def n_vertices(self) -> int:
        return len(self.faces_of_rank(0))

    def vertex_index(self, face_id: int) -> int:
        if self.face_rank(face_id) != 0:
            raise RankOutOfRange(f"face {face_id} is not a vertex")
        return face_id - self._rank_start[1]

    def vertex_id(self, index: int) -> int:
        return self._rank_start[1] + index

    def uppers(self, i: int) -> np.ndarray:
        return self._uppers[i]

    def lowers(self, i: int) -> np.ndarray:
        return self._lowers[i]

    # -- order relation ----------------------------------------------------

    def _ensure_up_bits(self):
        if self._up_bits is None:
            self._up_bits = _pack_reach(
                self.n_faces, self._uppers, range(self.n_faces - 1, -1, -1))
        return self._up_bits

    def _ensure_down_bits(self):
        if self._down_bits is None:
            self._down_bits = _pack_reach(
                self.n_faces, self._lowers, range(self.n_faces))
        return self._down_bits

    def leq(self, a: int, b: int) -> bool:
        """True iff face a <= face b in the closure of the covers."""
        return _bit_test(self._ensure_up_bits()[a], b)

    def interval_ids(self, a: int, b: int) -> np.ndarray:
        """All face ids x with a <= x <= b, ascending (hence rank-major)."""
        row = self._ensure_up_bits()[a] & self._ensure_down_bits()[b]
        return _bits_to_ids(row, self.n_faces)

    def ids_above(self, a: int) -> np.ndarray:
        return _bits_to_ids(self._ensure_up_bits()[a], self.n_faces)

    def ids_below(self, b: int) -> np.ndarray:
        return _bits_to_ids(self._ensure_down_bits()[b], self.n_faces)

    # -- vertex sets ---------------------------------------------------------

    @property
    def vertex_sets(self) -> tuple:
        """Sorted tuple of vertex indices at or below each face."""
        if self._vertex_sets is None:
            n = self.n_faces
            sets = [()] * n
            for v in self.faces_of_rank(0):
                sets[v] = (self.vertex_index(v),)
            for f in range(self._rank_start[2], n):
                acc = set()
                for g in self._lowers[f]:
                    acc.update(sets[g])
                sets[f] = tuple(sorted(acc))
            self._vertex_sets = tuple(sets)
        return self._vertex_sets

    def face(self, i: int) -> Face:
        return Face(i, self.face_rank(i), self.vertex_sets[i])

    # -- flags ---------------------------------------------------------------

    def flag_count(self) -> int:
        """Number of maximal chains, by dynamic programming over covers."""
        cnt = np.zeros(self.n_faces, dtype=object)
        cnt[self.least_id] = 1
        for f in range(self.n_faces):
            if cnt[f]:
                for u in self._uppers[f]:
                    cnt[u] += cnt[f]
        return int(cnt[self.greatest_id])

    def flags(self) -> list:
        """All flags as (k+2)-tuples of face ids, in lexicographic order."""
        if self._flags is None:
            least = self.least_id
            top_rank = self.rank
            out = []
            path = [least]
            iters = [iter(self._uppers[least])]
            while iters:
                nxt = next(iters[-1], None)
                if nxt is None:
                    iters.pop()
                    path.pop()
                    continue
                path.append(int(nxt))
                if self.face_rank(nxt) == top_rank:
                    out.append(tuple(path))
                    path.pop()
                else:
                    iters.append(iter(self._uppers[nxt]))
            self._flags = out
        return self._flags

    def __repr__(self):
        return (f"IncidenceComplex(rank={self.rank}, "
                f"f={tuple(len(self.faces_of_rank(r)) for r in range(self.rank))})")


def from_hasse(rank: int, face_ranks, covers):
    """Build a complex from arbitrary hashable face keys.

    ``face_ranks`` is an iterable of (key, rank) pairs; ``covers`` uses the
    same keys.  Ids are assigned rank-major, preserving input order within
    each rank.  Returns (complex, key_to_id).
    """
    items = list(face_ranks)
    order = sorted(range(len(items)), key=lambda i: items[i][1])
    key_to_id = {}
    ranks = []
    for new_id, pos in enumerate(order):
        key, r = items[pos]
        if key in key_to_id:
            raise MalformedPoset(f"duplicate face key {key!r}")
        key_to_id[key] = new_id
        ranks.append(r)
    cov = [(key_to_id[a], key_to_id[b]) for a, b in covers]
    return IncidenceComplex(rank, ranks, cov), key_to_id


# -- operations --------------------------------------------------------------


def f_vector(cx: IncidenceComplex) -> tuple:
    """Counts of proper faces by rank 0..k-1."""
    return tuple(len(cx.faces_of_rank(r)) for r in range(cx.rank))


def enumerate_flags(cx: IncidenceComplex) -> list:
    return cx.flags()


def adjacent_flags(cx: IncidenceComplex, flag, i: int) -> list:
    """Flags differing from ``flag`` exactly in the rank-i face."""
    if not 0 <= i <= cx.rank - 1:
        raise RankOutOfRange(f"adjacency rank {i} outside 0..{cx.rank - 1}")
    below = flag[i]        # rank i-1 sits at tuple index i
    here = flag[i + 1]
    above = flag[i + 2]
    out = []
    for mid in cx.interval_ids(below, above):
        if cx.face_rank(mid) == i and mid != here:
            g = list(flag)
            g[i + 1] = int(mid)
            out.append(tuple(g))
    return out


def section(cx: IncidenceComplex, low_id: int, high_id: int) -> IncidenceComplex:
    """The interval high/low as a complex of rank r(high)-r(low)-1."""
    if low_id == high_id or not cx.leq(low_id, high_id):
        raise NotComparable(f"face {low_id} is not strictly below {high_id}")
    ids = cx.interval_ids(low_id, high_id)
    old_to_new = {int(old): new for new, old in enumerate(ids)}
    shift = cx.face_rank(low_id) + 1
    ranks = [cx.face_rank(int(old)) - shift for old in ids]
    keep = set(old_to_new)
    covers = [(old_to_new[int(lo)], old_to_new[int(hi)])
              for lo, hi in cx.covers
              if int(lo) in keep and int(hi) in keep]
    return IncidenceComplex(cx.face_rank(high_id) - shift, ranks, covers)


def skeleton(cx: IncidenceComplex, j: int) -> IncidenceComplex:
    """Faces of rank <= j plus the greatest face re-ranked to j+1."""
    if not 0 <= j <= cx.rank - 1:
        raise RankOutOfRange(f"skeleton index {j} outside 0..{cx.rank - 1}")
    top = cx.greatest_id
    cutoff = cx._rank_start[j + 2]      # first id of rank j+1
    ranks = list(cx._ranks[:cutoff]) + [j + 1]
    new_top = cutoff
    covers = [(int(lo), int(hi)) for lo, hi in cx.covers if hi < cutoff]
    covers += [(f, new_top) for f in cx.faces_of_rank(j)]
    return IncidenceComplex(j + 1, ranks, covers)


def is_vertex_describable(cx: IncidenceComplex) -> bool:
    """True iff (rank, vertex set) determines every proper face."""
    seen = set()
    vs = cx.vertex_sets
    for f in range(cx.n_faces):
        r = cx.face_rank(f)
        if r == -1 or r == cx.rank:
            continue
        key = (r, vs[f])
        if key in seen:
            return False
        seen.add(key)
    return True


def isomorphism(c1: IncidenceComplex, c2: IncidenceComplex,
                node_cap: int | None = None):
    """Rank- and order-preserving face bijection, or None.

    The witness is a dict face id of c1 -> face id of c2.  Backtracks over
    vertex images (vertex-describable case) or proper-face images, with
    color refinement; deterministic.  Raises SearchBudgetExceeded past the
    node cap.
    """
    from ._search import isomorphism_impl

    return isomorphism_impl(c1, c2, node_cap)


def validate(cx: IncidenceComplex, flag_cap: int | None = None) -> AxiomReport:
    """Check axioms I1-I4 and vertex-describability, with diagnostics.

    I3 needs I1 and I2 first (otherwise flags are not well defined); if the
    complex has more flags than ``flag_cap`` the I3 entry is None and a
    diagnostic records the cap.
    """
    if flag_cap is None:
        flag_cap = config.flag_cap()
    diags = []
    k = cx.rank
    n = cx.n_faces

    least_block = cx.faces_of_rank(-1)
    top_block = cx.faces_of_rank(k)
    i1 = len(least_block) == 1 and len(top_block) == 1
    if not i1:
        diags.append(
            f"I1: {len(least_block)} faces of rank -1, {len(top_block)} of rank {k}")
    else:
        least, top = least_block[0], top_block[0]
        above = cx.ids_above(least)
        below = cx.ids_below(top)
        if len(above) != n:
            missing = sorted(set(range(n)) - set(int(x) for x in above))
            i1 = False
            diags.append(f"I1: least face not below faces {missing[:8]}")
        if len(below) != n:
            missing = sorted(set(range(n)) - set(int(x) for x in below))
            i1 = False
            diags.append(f"I1: greatest face not above faces {missing[:8]}")

    i2 = True
    for f in range(n):
        r = cx.face_rank(f)
        if r > -1 and len(cx.lowers(f)) == 0:
            i2 = False
            diags.append(f"I2: face {f} (rank {r}) covers nothing")
        if r < k and len(cx.uppers(f)) == 0:
            i2 = False
            diags.append(f"I2: face {f} (rank {r}) has no cover above")

    # I4: sandwich counts via two-step cover paths
    i4 = True
    c_vec = [None] * k
    counts = {}
    for mid in range(n):
        r = cx.face_rank(mid)
        if r < 0 or r > k - 1:
            continue
        for lo in cx.lowers(mid):
            for hi in cx.uppers(mid):
                key = (int(lo), int(hi))
                counts[key] = counts.get(key, 0) + 1
    for (lo, hi), cnt in sorted(counts.items()):
        r = cx.face_rank(lo) + 1
        if c_vec[r] is None:
            c_vec[r] = cnt
        if cnt != c_vec[r] or cnt < 2:
            i4 = False
            diags.append(
                f"I4: sandwich ({lo}, {hi}) has {cnt} middle faces at rank {r}, "
                f"expected {max(c_vec[r], 2)}")
            break
    if i4:
        for r in range(k):
            if c_vec[r] is None:
                # no sandwich at this rank at all; only possible when I2 fails
                i4 = False
                diags.append(f"I4: no (rank {r - 1}, rank {r + 1}) pairs exist")
                break

    i3: bool | None = False
    if i1 and i2:
        total = cx.flag_count()
        if total > flag_cap:
            i3 = None
            diags.append(f"I3: flag count {total} exceeds cap {flag_cap}")
        else:
            i3 = True
            witness = _strong_flag_connectivity_witness(cx)
            if witness is not None:
                i3 = False
                a, b = witness
                diags.append(
                    f"I3: flags of section {b}/{a} form a disconnected graph")
    else:
        diags.append("I3: skipped, needs I1 and I2")

    return AxiomReport(
        passed_i1=i1,
        passed_i2=i2,
        passed_i3=i3,
        passed_i4=i4,
        c_vector=tuple(c_vec) if i4 else None,
        vertex_describable=is_vertex_describable(cx),
        diagnostics=diags,
    )


def _section_flags(cx, a, b, down_bits_b):
    """Maximal chains from a to b (inclusive), walking covers inside [a,b]."""
    out = []
    path = [a]
    iters = [iter(cx.uppers(a))]
    while iters:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            path.pop()
            continue
        nxt = int(nxt)
        if nxt == b:
            out.append(tuple(path) + (b,))
            continue
        if not _bit_test(down_bits_b, nxt):
            continue
        path.append(nxt)
        iters.append(iter(cx.uppers(nxt)))
    return out


def _strong_flag_connectivity_witness(cx):
    """First section whose flag graph is disconnected, or None.

    The flags containing a chain C factor as a product of the section flag
    sets between consecutive members of C (improper faces included), and the
    one-face-change graph on a product is connected iff it is on every
    factor.  So strong flag-connectedness holds iff every section of rank
    >= 2 (rank difference >= 3) has a connected flag graph.
    """
    down = cx._ensure_down_bits()
    ranks = cx._ranks
    for a in range(cx.n_faces):
        ra = ranks[a]
        for b in cx.ids_above(a):
            b = int(b)
            if ranks[b] - ra < 3:
                continue
            chains = _section_flags(cx, a, int(b), down[b])
            if len(chains) <= 1:
                continue
            # union-find over local chains; chains sharing all but one
            # position are adjacent
            parent = list(range(len(chains)))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            length = len(chains[0])
            for pos in range(1, length - 1):
                groups = {}
                for idx, ch in enumerate(chains):
                    key = ch[:pos] + ch[pos + 1:]
                    other = groups.get(key)
                    if other is None:
                        groups[key] = idx
                    else:
                        ra_, rb_ = find(other), find(idx)
                        if ra_ != rb_:
                            parent[max(ra_, rb_)] = min(ra_, rb_)
            root = find(0)
            if any(find(i) != root for i in range(len(chains))):
                return (a, b)
    return None


# -- serialization -----------------------------------------------------------


def to_json_dict(cx: IncidenceComplex) -> dict:
    vs = cx.vertex_sets
    return {
        "rank": cx.rank,
        "faces": [
            {"id": i, "rank": cx.face_rank(i), "vertices": [int(v) for v in vs[i]]}
            for i in range(cx.n_faces)
        ],
        "covers": [[int(lo), int(hi)] for lo, hi in cx.covers],
    }


def from_json_dict(data: dict) -> IncidenceComplex:
    try:
        rank = int(data["rank"])
        faces = data["faces"]
        covers = data["covers"]
    except (KeyError, TypeError) as exc:
        raise MalformedPoset(f"missing field in complex JSON: {exc}") from exc
    pairs = [(int(f["id"]), int(f["rank"])) for f in faces]
    cx, key_to_id = from_hasse(rank, pairs, [(int(a), int(b)) for a, b in covers])
    declared = {int(f["id"]): f.get("vertices") for f in faces}
    vs = cx.vertex_sets
    for old_id, verts in declared.items():
        if verts is None:
            continue
        if tuple(sorted(int(v) for v in verts)) != vs[key_to_id[old_id]]:
            raise MalformedPoset(
                f"declared vertex set of face {old_id} does not match the order")
    return cx


def to_json(cx: IncidenceComplex, indent=None) -> str:
    return json.dumps(to_json_dict(cx), indent=indent, sort_keys=False)


def from_json(text: str) -> IncidenceComplex:
    return from_json_dict(json.loads(text))


def to_dot(cx: IncidenceComplex) -> str:
    """Hasse diagram in DOT, one rank per layer."""
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=box];"]
    for r in range(-1, cx.rank + 1):
        ids = list(cx.faces_of_rank(r))
        if not ids:
            continue
        names = " ".join(f"f{i};" for i in ids)
        lines.append(f"  {{ rank=same; {names} }}")
    vs = cx.vertex_sets
    for i in range(cx.n_faces):
        label = f"{i} r{cx.face_rank(i)}"
        if 0 <= cx.face_rank(i) < cx.rank:
            label += " {" + ",".join(str(v) for v in vs[i]) + "}"
        lines.append(f'  f{i} [label="{label}"];')
    for lo, hi in cx.covers:
        lines.append(f"  f{lo} -> f{hi};")
    lines.append("}")
    return "\n".join(lines)

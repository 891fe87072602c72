"""Finite permutation groups with full enumeration as the engine.

Groups are generated sets of permutations on 0..degree-1.  The element
list, when materialized, is ordered by word length over the generators and
lexicographically within each length, so transversals and reports are
reproducible.  Right cosets of arbitrary subgroups fall out of the
enumeration directly; no stabilizer-chain machinery is used or needed at
the sizes this package targets.

Composition convention: permutations act on the right, so ``(p * q)(x) ==
q(p(x))`` and orbits/cosets match the usual right-action formulas.
"""

from __future__ import annotations

import numpy as np

from . import config
from .accel import RowIndex
from .complexes import IncidenceComplex
from .errors import (
    CapExceeded,
    NotASubgroup,
    NotVertexDescribable,
    RequiresEnumeration,
)


class Permutation:
    """A bijection of 0..degree-1, stored as the image vector."""

    __slots__ = ("images",)

    def __init__(self, images):
        arr = np.ascontiguousarray(images, dtype=np.int32)
        if arr.ndim != 1:
            raise ValueError("a permutation is a 1-d image vector")
        self.images = arr
        self.images.setflags(write=False)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(np.arange(degree, dtype=np.int32))

    @classmethod
    def checked(cls, images) -> "Permutation":
        p = cls(images)
        seen = np.zeros(p.degree, dtype=bool)
        seen[p.images] = True
        if not seen.all():
            raise ValueError("image vector is not a bijection")
        return p

    @property
    def degree(self) -> int:
        return self.images.shape[0]

    def __call__(self, point: int) -> int:
        return int(self.images[point])

    def __mul__(self, other: "Permutation") -> "Permutation":
        # apply self first, then other
        return Permutation(other.images[self.images])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.int32)
        return Permutation(inv)

    def is_identity(self) -> bool:
        return bool(np.all(self.images == np.arange(self.degree)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Permutation)
                and self.degree == other.degree
                and np.array_equal(self.images, other.images))

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    def __lt__(self, other) -> bool:
        return tuple(self.images) < tuple(other.images)

    def __repr__(self):
        if self.degree > 12:
            return f"Permutation(degree={self.degree})"
        return f"Permutation({list(map(int, self.images))})"

    def to_list(self) -> list:
        return [int(x) for x in self.images]


def compose_rows(rows: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Row-wise composition: each row applied first, then g."""
    return g[rows]


class PermutationGroup:
    """Generated permutation group, optionally with its full element list.

    ``elements`` ids are stable: the identity is element 0 and ids follow
    the deterministic closure order.
    """

    def __init__(self, degree: int, generators, known_order: int | None = None):
        self.degree = int(degree)
        self.generators = [g if isinstance(g, Permutation) else Permutation(g)
                           for g in generators]
        for g in self.generators:
            if g.degree != self.degree:
                raise ValueError("generator degree mismatch")
        self._index: RowIndex | None = None
        self._known_order = known_order

    @classmethod
    def from_element_matrix(cls, matrix: np.ndarray) -> "PermutationGroup":
        """Group whose elements are exactly the given rows (must be closed)."""
        matrix = np.ascontiguousarray(matrix, dtype=np.int32)
        degree = matrix.shape[1]
        idx = RowIndex(degree, expect=matrix.shape[0])
        ident = np.arange(degree, dtype=np.int32)
        idx.add(ident)
        idx.add(matrix)
        g = cls(degree, [Permutation(row) for row in matrix])
        g._index = idx
        g._known_order = len(idx)
        return g

    # -- enumeration ---------------------------------------------------------

    def enumerate(self, cap: int | None = None) -> "PermutationGroup":
        """Materialize the element list (word length, then lex order)."""
        if self._index is not None:
            return self
        if cap is None:
            cap = config.group_order_cap()
        idx = RowIndex(self.degree, expect=max(64, 2 * len(self.generators)))
        ident = np.arange(self.degree, dtype=np.int32)
        idx.add(ident)
        gen_rows = [g.images for g in self.generators]
        frontier = ident.reshape(1, -1)
        while frontier.shape[0]:
            if not gen_rows:
                break
            cands = np.concatenate([g[frontier] for g in gen_rows], axis=0)
            # cheap membership pass first; lexicographic sort only on the
            # genuinely new rows, so the element order stays word length
            # then lex without sorting the whole candidate block
            cands = cands[idx.lookup(cands) < 0]
            if cands.shape[0] == 0:
                break
            cands = np.unique(cands, axis=0)
            before = len(idx)
            ids = idx.add(cands)
            if len(idx) > cap:
                raise CapExceeded(
                    f"group closure passed the cap of {cap} elements")
            frontier = cands[ids >= before]
        self._index = idx
        self._known_order = len(idx)
        return self

    @property
    def is_enumerated(self) -> bool:
        return self._index is not None

    @property
    def element_matrix(self) -> np.ndarray:
        if self._index is None:
            raise RequiresEnumeration("call enumerate() first")
        return self._index.matrix

    @property
    def order(self) -> int:
        if self._known_order is not None:
            return self._known_order
        self.enumerate()
        return self._known_order

    @property
    def elements(self) -> list:
        return [Permutation(row) for row in self.element_matrix]

    def element_id(self, perm) -> int:
        """Dense id of an element, or -1 if outside the group."""
        row = perm.images if isinstance(perm, Permutation) else np.asarray(perm)
        if self._index is None:
            raise RequiresEnumeration("call enumerate() first")
        return int(self._index.lookup(row)[0])

    def __contains__(self, perm) -> bool:
        return self.element_id(perm) >= 0

    def __len__(self) -> int:
        return self.order

    def __repr__(self):
        order = self._known_order if self._known_order is not None else "?"
        return (f"PermutationGroup(degree={self.degree}, "
                f"gens={len(self.generators)}, order={order})")

    # -- actions ---------------------------------------------------------------

    def orbit(self, point: int) -> list:
        seen = {int(point)}
        frontier = [int(point)]
        gen_rows = [g.images for g in self.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gen_rows:
                    y = int(g[x])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def orbits(self) -> list:
        left = set(range(self.degree))
        out = []
        while left:
            o = self.orbit(min(left))
            out.append(o)
            left -= set(o)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "generators": [g.to_list() for g in self.generators],
            "order": self._known_order,
        }


def closure(generators, cap: int | None = None,
            degree: int | None = None) -> PermutationGroup:
    """Group generated by the permutations, fully enumerated.

    Raises CapExceeded if the order would pass ``cap``.
    """
    gens = [g if isinstance(g, Permutation) else Permutation(g)
            for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("need a degree for the empty generating set")
        degree = gens[0].degree
    group = PermutationGroup(degree, gens)
    group.enumerate(cap)
    return group


class CosetDecomposition:
    """Right cosets Hg of a subgroup, with a deterministic transversal.

    The first representative is the identity; ``coset_of[i]`` maps element
    id i of the ambient group to its coset index.
    """

    def __init__(self, group, subgroup, transversal_ids, coset_of):
        self.group = group
        self.subgroup = subgroup
        self.transversal_ids = transversal_ids
        self.coset_of = coset_of

    @property
    def n_cosets(self) -> int:
        return len(self.transversal_ids)

    @property
    def transversal(self) -> list:
        mat = self.group.element_matrix
        return [Permutation(mat[i]) for i in self.transversal_ids]


def right_cosets(group: PermutationGroup, subgroup_generators) -> CosetDecomposition:
    """Decompose an enumerated group into right cosets of a subgroup."""
    group.enumerate()
    sub_gens = [g if isinstance(g, Permutation) else Permutation(g)
                for g in subgroup_generators]
    for g in sub_gens:
        if group.element_id(g) < 0:
            raise NotASubgroup(
                "subgroup generator does not lie in the ambient group")
    sub = closure(sub_gens, cap=group.order, degree=group.degree)
    return _cosets_of_enumerated(group, sub)


def _cosets_of_enumerated(group, sub) -> CosetDecomposition:
    mat = group.element_matrix
    n = mat.shape[0]
    coset_of = np.full(n, -1, dtype=np.int64)
    transversal = []
    sub_rows = sub.element_matrix
    for eid in range(n):
        if coset_of[eid] >= 0:
            continue
        cidx = len(transversal)
        transversal.append(eid)
        member_ids = group._index.lookup(compose_rows(sub_rows, mat[eid]))
        if np.any(member_ids < 0):
            raise NotASubgroup("claimed subgroup leads outside the group")
        coset_of[member_ids] = cidx
    if len(transversal) * sub.order != n:
        raise NotASubgroup("coset sizes do not divide the group order")
    return CosetDecomposition(group, sub, transversal, coset_of)


def stabilizer(group: PermutationGroup, points) -> PermutationGroup:
    """Pointwise stabilizer of the given points, as an explicit subgroup."""
    group.enumerate()
    pts = np.asarray(list(points), dtype=np.int64)
    mat = group.element_matrix
    if pts.size == 0:
        mask = np.ones(mat.shape[0], dtype=bool)
    else:
        mask = np.all(mat[:, pts] == pts[None, :], axis=1)
    return PermutationGroup.from_element_matrix(mat[mask])


def fixes_face(images: np.ndarray, vset) -> bool:
    """Does a vertex permutation map the face's vertex set onto itself?"""
    arr = np.fromiter(vset, dtype=np.int64, count=len(vset))
    return np.array_equal(np.sort(images[arr]), arr)


def stabilizer_of_faces(group: PermutationGroup, cx: IncidenceComplex,
                        face_ids) -> PermutationGroup:
    """Subgroup fixing each listed face.

    For a vertex action (degree == vertex count) a face is fixed when its
    vertex set is preserved, which is faithful on vertex-describable
    complexes; for a face action the face id must be fixed.
    """
    group.enumerate()
    mat = group.element_matrix
    mask = np.ones(mat.shape[0], dtype=bool)
    if group.degree == cx.n_vertices and group.degree != cx.n_faces:
        vs = cx.vertex_sets
        for f in face_ids:
            r = cx.face_rank(f)
            if r == -1 or r == cx.rank:
                continue      # improper faces are fixed by any vertex action
            arr = np.fromiter(vs[f], dtype=np.int64, count=len(vs[f]))
            if arr.size == 1:
                mask &= mat[:, arr[0]] == arr[0]
                continue
            sub = np.sort(mat[:, arr], axis=1)
            mask &= np.all(sub == arr[None, :], axis=1)
    elif group.degree == cx.n_faces:
        pts = np.asarray(list(face_ids), dtype=np.int64)
        mask &= np.all(mat[:, pts] == pts[None, :], axis=1)
    else:
        raise ValueError("group degree matches neither vertices nor faces")
    return PermutationGroup.from_element_matrix(mat[mask])


def face_action(cx: IncidenceComplex, images: np.ndarray) -> np.ndarray:
    """Lift a vertex permutation to the face-id permutation it induces."""
    from ._search import face_map_from_vertex_map

    out = face_map_from_vertex_map(cx, cx, images)
    if np.any(out < 0):
        raise NotVertexDescribable(
            "vertex permutation does not induce a face permutation")
    return out.astype(np.int32)


def generator_face_actions(group: PermutationGroup, cx: IncidenceComplex) -> list:
    """Face-id image arrays for each generator, whatever the group acts on."""
    if group.degree == cx.n_faces:
        return [g.images.astype(np.int64) for g in group.generators]
    if group.degree == cx.n_vertices:
        return [face_action(cx, g.images).astype(np.int64)
                for g in group.generators]
    raise ValueError("group degree matches neither vertices nor faces")


def acts_by_automorphisms(group: PermutationGroup, cx: IncidenceComplex) -> bool:
    """Do all generators preserve the cover relation (hence the order)?"""
    try:
        actions = generator_face_actions(group, cx)
    except NotVertexDescribable:
        return False
    cov = cx.covers
    keys = np.unique(cov[:, 0] * cx.n_faces + cov[:, 1])
    for act in actions:
        mapped = act[cov[:, 0]] * cx.n_faces + act[cov[:, 1]]
        if not np.isin(mapped, keys).all():
            return False
    return True


def is_flag_transitive(group: PermutationGroup, cx: IncidenceComplex) -> bool:
    """One orbit on the flags of the complex?

    The generators must act by automorphisms (checked); then the orbit of
    the base flag has size |G| / |flag stabilizer| and transitivity is the
    statement that this equals the flag count.
    """
    if not acts_by_automorphisms(group, cx):
        return False
    group.enumerate()
    least = cx.least_id
    first_flag = None
    # lexicographically first flag, without enumerating all of them
    f = least
    chain = [least]
    while cx.face_rank(f) < cx.rank:
        ups = cx.uppers(f)
        if len(ups) == 0:
            return False
        f = int(ups[0])
        chain.append(f)
    first_flag = tuple(chain)
    stab = stabilizer_of_faces(group, cx, first_flag)
    return group.order == stab.order * cx.flag_count()


def automorphism_group(cx: IncidenceComplex, on: str = "faces",
                       node_cap: int | None = None,
                       order_cap: int | None = None) -> PermutationGroup:
    """The full automorphism group, found by exhaustive backtracking.

    ``on`` selects the permutation domain: "faces" (all face ids; always
    available) or "vertices" (vertex indices; vertex-describable complexes
    only, much cheaper on large instances).  The order from the search's
    stabilizer chain is cross-checked against the closure enumeration
    whenever the order fits the cap.
    """
    from ._search import automorphism_chain

    if order_cap is None:
        order_cap = config.group_order_cap()
    mode, point_gens, order = automorphism_chain(cx, node_cap)
    if mode == "face":
        pts = [f for f in range(cx.n_faces)
               if 0 <= cx.face_rank(f) < cx.rank]
        full = []
        for g in point_gens:
            arr = np.arange(cx.n_faces, dtype=np.int32)
            for i, f in enumerate(pts):
                arr[f] = pts[int(g[i])]
            full.append(arr)
        gens = full
        degree = cx.n_faces
        if on == "vertices":
            raise NotVertexDescribable(
                "vertex action unavailable: faces are not determined by vertices")
    elif on == "vertices":
        gens = [g.astype(np.int32) for g in point_gens]
        degree = cx.n_vertices
    else:
        gens = [face_action(cx, g) for g in point_gens]
        degree = cx.n_faces
    group = PermutationGroup(degree, [Permutation(g) for g in gens],
                             known_order=order)
    if order <= order_cap:
        group._known_order = None
        group.enumerate(order_cap)
        if group.order != order:
            raise AssertionError(
                f"closure order {group.order} disagrees with the search "
                f"chain order {order}")
    return group

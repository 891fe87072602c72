"""Regular complexes and their groups: distinguished subgroup systems,
the commutation and intersection properties, and rebuilding a complex from
a group.

For a flag-transitive group G on a complex with base flag Phi, the i-th
distinguished subgroup R_i stabilizes every face of Phi except the rank-i
one; R_{-1} = R_k is the full flag stabilizer.  Conversely a group with
subgroups R_{-1}..R_k satisfying the generation, commutation and
intersection conditions is flag-transitive on a complex it determines:
i-faces are the right cosets of the subgroup generated by all R_j with
j != i, and a lower face is incident to a higher one iff their cosets
intersect, which reduces to a product-set membership test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import IncidenceComplex, validate
from .errors import (
    NotFlagTransitive,
    PreconditionFailed,
    PropertyViolation,
)
from .permgroup import (
    PermutationGroup,
    closure,
    compose_rows,
    is_flag_transitive,
    stabilizer_of_faces,
)


def reduced_generators(sub: PermutationGroup) -> list:
    """A small generating subset of an enumerated subgroup (greedy)."""
    sub.enumerate()
    mat = sub.element_matrix
    if mat.shape[0] <= 1:
        return []
    gens = []
    span = {mat[0].tobytes()}
    for row in mat:
        if row.tobytes() in span:
            continue
        gens.append(row)
        grown = closure([g for g in gens], degree=mat.shape[1])
        span = {r.tobytes() for r in grown.element_matrix}
        if len(span) == mat.shape[0]:
            break
    return gens


def span_ids(group: PermutationGroup, gen_rows, seed_ids=None) -> np.ndarray:
    """Element-id bitmask of the subgroup generated inside ``group``."""
    group.enumerate()
    mat = group.element_matrix
    idx = group._index
    bits = np.zeros(mat.shape[0], dtype=bool)
    bits[0] = True
    if seed_ids is not None:
        bits[seed_ids] = True
    frontier = mat[np.nonzero(bits)[0]]
    gen_rows = [np.asarray(g, dtype=np.int32) for g in gen_rows]
    while frontier.shape[0] and gen_rows:
        cands = np.concatenate([g[frontier] for g in gen_rows], axis=0)
        ids = idx.lookup(cands)
        if np.any(ids < 0):
            raise PreconditionFailed("generators lead outside the group")
        fresh = np.unique(ids[~bits[ids]])
        bits[fresh] = True
        frontier = mat[fresh]
    return bits


@dataclass
class DistinguishedSystem:
    """Base flag plus the subgroups R_{-1}..R_k of a flag-transitive group."""

    group: PermutationGroup
    complex: IncidenceComplex
    base_flag: tuple
    subgroups: list          # index i+1 holds R_i, for i = -1..k

    @property
    def rank(self) -> int:
        return len(self.subgroups) - 2

    @property
    def flag_stabilizer(self) -> PermutationGroup:
        return self.subgroups[0]

    def subgroup(self, i: int) -> PermutationGroup:
        return self.subgroups[i + 1]

    def to_spec(self) -> "GroupComplexSpec":
        return GroupComplexSpec(self.group, list(self.subgroups))


@dataclass
class GroupComplexSpec:
    """Abstract input to reconstruction: a group and subgroups R_{-1}..R_k."""

    group: PermutationGroup
    subgroups: list

    @property
    def rank(self) -> int:
        return len(self.subgroups) - 2

    def subgroup(self, i: int) -> PermutationGroup:
        return self.subgroups[i + 1]


def distinguished_subgroups(group: PermutationGroup, cx: IncidenceComplex,
                            base_flag=None) -> DistinguishedSystem:
    """R_i = stabilizer of the base flag minus its rank-i face.

    Requires the group to be flag-transitive on the complex; the generation
    identity (the R_i together generate the group) is asserted.
    """
    group.enumerate()
    if not is_flag_transitive(group, cx):
        raise NotFlagTransitive(
            "the group does not act flag-transitively on the complex")
    if base_flag is None:
        base_flag = cx.flags()[0]
    k = cx.rank
    subs = []
    for i in range(-1, k + 1):
        kept = [f for j, f in enumerate(base_flag) if j != i + 1]
        subs.append(stabilizer_of_faces(group, cx, kept))
    system = DistinguishedSystem(group, cx, tuple(base_flag), subs)

    stab = system.flag_stabilizer
    if set(map(int, _ids_of(group, subs[-1]))) != set(map(int, _ids_of(group, stab))):
        raise PreconditionFailed("R_k differs from R_{-1}")
    gen_rows = []
    for s in subs:
        gen_rows.extend(reduced_generators(s))
    if int(span_ids(group, gen_rows).sum()) != group.order:
        raise PreconditionFailed(
            "distinguished subgroups fail to generate the group")
    return system


def _ids_of(group: PermutationGroup, sub: PermutationGroup) -> np.ndarray:
    ids = group._index.lookup(sub.element_matrix)
    if np.any(ids < 0):
        raise PreconditionFailed("subgroup element outside the ambient group")
    return ids


def c_from_indices(system: DistinguishedSystem) -> tuple:
    """c_i as the index of the flag stabilizer in R_i, i = 0..k-1."""
    base = system.flag_stabilizer.order
    out = []
    for i in range(0, system.rank):
        size = system.subgroup(i).order
        if size % base:
            raise PreconditionFailed(
                f"flag stabilizer order {base} does not divide |R_{i}| = {size}")
        out.append(size // base)
    return tuple(out)


def _product_id_set(group, sub_a, sub_b) -> np.ndarray:
    """Bool mask over element ids of the product set A * B."""
    if sub_a.order == group.order or sub_b.order == group.order:
        return np.ones(group.order, dtype=bool)
    rows_a = sub_a.element_matrix
    rows_b = sub_b.element_matrix
    bits = np.zeros(group.order, dtype=bool)
    filled = 0
    for j in range(rows_b.shape[0]):
        ids = group._index.lookup(compose_rows(rows_a, rows_b[j]))
        if np.any(ids < 0):
            raise PreconditionFailed("product escapes the ambient group")
        bits[ids] = True
        if j % 32 == 31:
            filled = int(bits.sum())
            if filled == group.order:
                break
    return bits


def check_commutation(spec) -> tuple:
    """R_i R_j == R_j R_i as sets, for all -1 <= i < j-1 <= k-1.

    Returns (ok, witnesses); a witness is (i, j) for a failing pair.
    """
    spec.group.enumerate()
    k = spec.rank
    witnesses = []
    for i in range(-1, k):
        for j in range(i + 2, k + 1):
            ab = _product_id_set(spec.group, spec.subgroup(i), spec.subgroup(j))
            ba = _product_id_set(spec.group, spec.subgroup(j), spec.subgroup(i))
            if not np.array_equal(ab, ba):
                witnesses.append((i, j))
    return (not witnesses), witnesses


class _GammaCache:
    """Memoized element-id masks for the subgroups Gamma_I = <R_i : i in I>.

    Subsets are keyed by the indices whose R_i is nontrivial, so the
    4^(k+2) subset pairs of the intersection check collapse to far fewer
    distinct computations.
    """

    def __init__(self, spec):
        self.spec = spec
        self.group = spec.group
        self.group.enumerate()
        k = spec.rank
        self._gens = {}
        self._nontrivial = []
        for i in range(-1, k + 1):
            gens = reduced_generators(spec.subgroup(i))
            self._gens[i] = gens
            if gens:
                self._nontrivial.append(i)
        self._base_ids = _ids_of(self.group, spec.subgroup(-1))
        self._cache = {}

    def key(self, indices) -> tuple:
        return tuple(i for i in self._nontrivial if i in indices)

    def bits(self, indices) -> np.ndarray:
        """Mask of Gamma_I; the empty set yields R_{-1} itself."""
        key = self.key(set(indices))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not key:
            bits = np.zeros(self.group.order, dtype=bool)
            bits[self._base_ids] = True
            bits[0] = True
        else:
            gen_rows = []
            for i in key:
                gen_rows.extend(self._gens[i])
            # the flag stabilizer sits inside every R_i of a well-formed
            # system, but seed it anyway so Gamma_emptyset <= Gamma_I holds
            # even for corrupted fixtures
            bits = span_ids(self.group, gen_rows, seed_ids=self._base_ids)
        self._cache[key] = bits
        return bits


def check_intersection_property(spec) -> tuple:
    """Gamma_I n Gamma_J == Gamma_{I n J} over all subset pairs.

    Exhaustive over the 4^(k+2) pairs (distinct computations are memoized);
    returns (ok, witnesses) with witnesses (I, J, element_id) naming an
    element of the symmetric difference.
    """
    cache = _GammaCache(spec)
    k = spec.rank
    indices = list(range(-1, k + 1))
    subsets = []
    for mask in range(1 << len(indices)):
        subsets.append(frozenset(
            indices[t] for t in range(len(indices)) if mask >> t & 1))
    witnesses = []
    seen_pairs = set()
    for I in subsets:
        for J in subsets:
            pair_key = (cache.key(I), cache.key(J))
            if pair_key in seen_pairs:
                continue
            seen_pairs.add(pair_key)
            lhs = cache.bits(I) & cache.bits(J)
            rhs = cache.bits(I & J)
            if not np.array_equal(lhs, rhs):
                bad = int(np.nonzero(lhs ^ rhs)[0][0])
                witnesses.append((tuple(sorted(I)), tuple(sorted(J)), bad))
    return (not witnesses), witnesses


def complex_from_group(spec: GroupComplexSpec, checked: bool = True,
                       flag_cap: int | None = None) -> IncidenceComplex:
    """Rebuild the complex whose i-faces are the cosets of <R_j : j != i>.

    With ``checked`` (default) the commutation and intersection properties
    and R_{-1} == R_k are verified first and a violation raises
    PropertyViolation; with checked=False the output complex is validated
    instead and PreconditionFailed reports broken axioms.
    """
    group = spec.group
    group.enumerate()
    k = spec.rank
    if checked:
        a = set(map(int, _ids_of(group, spec.subgroup(-1))))
        b = set(map(int, _ids_of(group, spec.subgroup(k))))
        if a != b:
            raise PropertyViolation("R_{-1} and R_k differ", witness=("R-1", "Rk"))
        ok, wit = check_commutation(spec)
        if not ok:
            raise PropertyViolation(
                f"commutation fails for subgroup pairs {wit}", witness=wit)
        ok, wit = check_intersection_property(spec)
        if not ok:
            raise PropertyViolation(
                f"intersection property fails for subset pairs "
                f"{[(i, j) for i, j, _ in wit]}", witness=wit)

    cache = _GammaCache(spec)
    all_indices = set(range(-1, k + 1))
    mat = group.element_matrix
    n_elem = mat.shape[0]

    cosets = []          # per rank: CosetDecomposition-like data
    for i in range(-1, k + 1):
        bits = cache.bits(all_indices - {i})
        sub = PermutationGroup.from_element_matrix(mat[np.nonzero(bits)[0]])
        coset_of = np.full(n_elem, -1, dtype=np.int64)
        transversal = []
        sub_rows = sub.element_matrix
        for eid in range(n_elem):
            if coset_of[eid] >= 0:
                continue
            cidx = len(transversal)
            transversal.append(eid)
            member_ids = group._index.lookup(compose_rows(sub_rows, mat[eid]))
            coset_of[member_ids] = cidx
        cosets.append((transversal, coset_of, sub))

    face_ranks = []
    face_key = {}
    for r in range(-1, k + 1):
        transversal, _, _ = cosets[r + 1]
        for t in range(len(transversal)):
            face_key[(r, t)] = len(face_ranks)
            face_ranks.append(r)

    covers = []
    for r in range(-1, k):
        _, lo_of, _ = cosets[r + 1]
        _, hi_of, _ = cosets[r + 2]
        # two cosets meet iff some group element carries both labels, so one
        # pass over the element list yields every incident pair
        pairs = np.unique(np.stack([lo_of, hi_of], axis=1), axis=0)
        for ti, tj in pairs:
            covers.append((face_key[(r, int(ti))], face_key[(r + 1, int(tj))]))

    cx = IncidenceComplex(k, face_ranks, covers)
    if not checked:
        report = validate(cx, flag_cap=flag_cap)
        if not report.ok:
            raise PreconditionFailed(
                "unchecked reconstruction violates the axioms: "
                + "; ".join(report.diagnostics[:3]))
    return cx


def verify_system_report(cx: IncidenceComplex, group: PermutationGroup | None = None,
                         node_cap: int | None = None) -> dict:
    """End-to-end report for one complex: properties plus round trip."""
    from .complexes import isomorphism
    from .permgroup import automorphism_group

    if group is None:
        group = automorphism_group(cx, on="vertices") \
            if _vd(cx) else automorphism_group(cx)
    system = distinguished_subgroups(group, cx)
    spec = system.to_spec()
    comm_ok, comm_wit = check_commutation(spec)
    int_ok, int_wit = check_intersection_property(spec)
    rebuilt = complex_from_group(spec, checked=False)
    iso = isomorphism(cx, rebuilt, node_cap)
    return {
        "groupOrder": group.order,
        "commutation": comm_ok,
        "commutationWitnesses": comm_wit,
        "intersection": int_ok,
        "intersectionWitnesses": [(list(i), list(j)) for i, j, _ in int_wit],
        "cVector": list(c_from_indices(system)),
        "reconstructionIsomorphic": iso is not None,
    }


def _vd(cx) -> bool:
    from .complexes import is_vertex_describable

    return is_vertex_describable(cx)

"""Twisting constructions: recovering n^K from a small flag-transitive
subgroup, and generalized power complexes L^K for a universal regular
polytope L.

The Coxeter group W of the merged diagram is realized exactly as a
permutation group on its own elements via the completed coset table of
the trivial subgroup.  The automorphism group of K acts on W by permuting
generators along the diagram (string nodes fixed, vertex nodes moved like
the vertices), and the semidirect product acts on pairs (w, phi).  The
distinguished subgroups of that product feed the generic group-to-complex
reconstruction.

Whenever the flag stabilizer of K is nontrivial, the rank-i subgroups of
rank < d are taken together with the lifted flag stabilizer; this keeps
the intersection property (whose empty-set value is R_{-1}) intact, and
for polytopal K it changes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .accel import hlt_fill
from .complexes import (
    IncidenceComplex,
    f_vector,
    is_vertex_describable,
    isomorphism,
    section,
    skeleton,
)
from .errors import (
    CapExceeded,
    InfiniteGroupSuspected,
    NotVertexDescribable,
    PropertyViolation,
    RankOutOfRange,
)
from .kernels import FILL_CAP
from .permgroup import (
    Permutation,
    PermutationGroup,
    automorphism_group,
)
from .power import component_perm, lift_perm, power_complex
from .regular import (
    GroupComplexSpec,
    complex_from_group,
    distinguished_subgroups,
    reduced_generators,
)


@dataclass(frozen=True)
class CoxeterDiagram:
    """Labeled graph on abstract nodes; absent branch means order 2."""

    nodes: tuple
    branches: tuple      # ((node_a, node_b, label), ...) with label >= 3

    def label(self, a, b) -> int:
        for x, y, m in self.branches:
            if {x, y} == {a, b}:
                return m
        return 2

    def to_dot(self) -> str:
        lines = ["graph coxeter {", "  node [shape=circle];"]
        for nd in self.nodes:
            lines.append(f'  "{nd}";')
        for a, b, m in self.branches:
            mark = "" if m == 3 else f' [label="{m}"]'
            lines.append(f'  "{a}" -- "{b}"{mark};')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class GroupPresentation:
    """Involutory generators with pairwise braid orders m_ij >= 2."""

    generator_count: int
    braid_orders: tuple    # ((i, j, m) for i < j, complete over all pairs)

    def relator_words(self) -> list:
        out = []
        for i, j, m in self.braid_orders:
            out.append([i, j] * m)
        return out


def presentation_from_diagram(diagram: CoxeterDiagram) -> GroupPresentation:
    order = list(diagram.nodes)
    braid = []
    for a_idx in range(len(order)):
        for b_idx in range(a_idx + 1, len(order)):
            m = diagram.label(order[a_idx], order[b_idx])
            braid.append((a_idx, b_idx, m))
    return GroupPresentation(len(order), tuple(braid))


def string_presentation(schlafli) -> GroupPresentation:
    """Presentation of the string Coxeter group with the given labels."""
    d = len(schlafli) + 1
    braid = []
    for i in range(d):
        for j in range(i + 1, d):
            m = schlafli[i] if j == i + 1 else 2
            braid.append((i, j, m))
    return GroupPresentation(d, tuple(braid))


@dataclass
class CosetTable:
    """Completed coset table: row per coset, column per generator."""

    table: np.ndarray

    @property
    def n_cosets(self) -> int:
        return self.table.shape[0]

    @property
    def complete(self) -> bool:
        return bool((self.table >= 0).all())

    def column(self, g: int) -> Permutation:
        return Permutation(self.table[:, g])


def todd_coxeter(presentation: GroupPresentation, subgroup_words=(),
                 cap: int | None = None) -> CosetTable:
    """Enumerate cosets of the word-generated subgroup; exact and
    deterministic (scan order fixed, coincidences keep the smaller coset,
    numbering by first appearance).

    Raises CapExceeded when the table would pass ``cap`` cosets: the group
    is possibly infinite or the cap too small; no truncated table is ever
    returned.
    """
    if cap is None:
        cap = config.coset_cap()
    ngens = presentation.generator_count
    if ngens == 0:
        return CosetTable(np.zeros((1, 0), dtype=np.int32))
    relators = presentation.relator_words()
    rel_flat = np.array([g for w in relators for g in w], dtype=np.int32)
    rel_off = np.cumsum([0] + [len(w) for w in relators]).astype(np.int32)
    subs = [list(w) for w in subgroup_words]
    sub_flat = np.array([g for w in subs for g in w], dtype=np.int32)
    sub_off = np.cumsum([0] + [len(w) for w in subs]).astype(np.int32)
    table = np.full((cap, ngens), -1, dtype=np.int32)
    p = np.arange(cap, dtype=np.int32)
    queue = np.empty(cap, dtype=np.int32)
    status, n = hlt_fill(table, p, rel_flat, rel_off, sub_flat, sub_off, queue)
    if status == FILL_CAP:
        raise CapExceeded(
            f"coset enumeration hit the cap of {cap} cosets; "
            "the index may be infinite or the cap too small")
    # resolve representatives and compress to dense first-appearance order
    p = p[:n]
    while True:
        q = p[p]
        if np.array_equal(q, p):
            break
        p = q
    live = np.nonzero(p == np.arange(n, dtype=np.int32))[0]
    newid = np.full(n, -1, dtype=np.int32)
    newid[live] = np.arange(live.size, dtype=np.int32)
    dense = newid[p[table[live]]]
    ct = CosetTable(np.ascontiguousarray(dense))
    for g in range(ngens):
        col = ct.table[:, g]
        if np.any(np.sort(col) != np.arange(live.size)):
            raise AssertionError("completed coset table column is not a permutation")
    return ct


def coxeter_group_regular_rep(presentation: GroupPresentation,
                              cap: int | None = None) -> PermutationGroup:
    """W as permutations of its own elements (columns of the full table)."""
    ct = todd_coxeter(presentation, (), cap)
    gens = [ct.column(g) for g in range(presentation.generator_count)]
    group = PermutationGroup(ct.n_cosets, gens)
    group.enumerate(max(ct.n_cosets, 2))
    if group.order != ct.n_cosets:
        raise AssertionError(
            "regular representation order disagrees with the coset count")
    return group


def trivial_subgroup(degree: int) -> PermutationGroup:
    return PermutationGroup.from_element_matrix(
        np.arange(degree, dtype=np.int32).reshape(1, -1))


def universal_polytope(schlafli, cap: int | None = None) -> IncidenceComplex:
    """The universal regular polytope with the given type symbol.

    Builds the string Coxeter group by coset enumeration, forms the system
    with R_i generated by the i-th reflection, and reconstructs the
    complex.  CapExceeded propagates for infinite or oversized types.
    """
    for q in schlafli:
        if q < 2:
            raise ValueError("type symbol entries must be >= 2")
    W = coxeter_group_regular_rep(string_presentation(schlafli), cap)
    d = len(schlafli) + 1
    subs = [trivial_subgroup(W.degree)]
    for i in range(d):
        subs.append(PermutationGroup.from_element_matrix(
            np.stack([np.arange(W.degree, dtype=np.int32),
                      W.generators[i].images])))
    subs.append(trivial_subgroup(W.degree))
    spec = GroupComplexSpec(W, subs)
    return complex_from_group(spec)


def _lifted_gens(n: int, v: int, sub: PermutationGroup) -> list:
    return [lift_perm(n, v, g) for g in reduced_generators(sub)]


def twist_cyclic(n: int, base: IncidenceComplex,
                 Lambda: PermutationGroup | None = None,
                 check_power_isomorphism: bool = True,
                 node_cap: int | None = None):
    """Recover n^K from the cyclic twist group C_n wr Lambda.

    The group acts on the tuples N^v; the rank-0 subgroup is generated by
    the n-cycle in the base-vertex component (together with the lifted
    flag stabilizer of Lambda), and the higher subgroups are the lifted
    distinguished subgroups of Lambda shifted up one rank.  The rebuilt
    complex is checked against the directly constructed power complex.

    Returns (group, complex).
    """
    if not is_vertex_describable(base):
        raise NotVertexDescribable("the base complex must be vertex-describable")
    if Lambda is None:
        Lambda = automorphism_group(base, on="vertices")
    if Lambda.degree != base.n_vertices:
        raise ValueError("Lambda must act on the base vertices")
    system = distinguished_subgroups(Lambda, base, base.flags()[0])
    v = base.n_vertices
    k = base.rank
    p0 = base.vertex_index(system.base_flag[1])

    n_cycle = [(i + 1) % n for i in range(n)]
    sigma0 = component_perm(n, v, p0, n_cycle)
    gens = [sigma0] + [lift_perm(n, v, g.images) for g in Lambda.generators]
    group = PermutationGroup(n ** v, gens)
    group.enumerate()
    if group.order != n ** v * Lambda.order:
        raise PropertyViolation(
            f"twist group order {group.order} differs from "
            f"{n}^{v} * {Lambda.order}")

    h_gens = _lifted_gens(n, v, system.subgroup(-1))
    subs = []
    for i in range(-1, k + 2):
        if i == -1 or i == k + 1:
            rows = h_gens
        elif i == 0:
            rows = [sigma0] + h_gens
        else:
            rows = _lifted_gens(n, v, system.subgroup(i - 1)) + h_gens
        sub = PermutationGroup(n ** v, rows)
        sub.enumerate()
        subs.append(sub)
    spec = GroupComplexSpec(group, subs)
    cx = complex_from_group(spec)
    if check_power_isomorphism:
        direct = power_complex(n, base)
        if f_vector(cx) != f_vector(direct):
            raise PropertyViolation(
                f"twist reconstruction f-vector {f_vector(cx)} differs from "
                f"the power complex {f_vector(direct)}")
        if isomorphism(cx, direct, node_cap) is None:
            raise PropertyViolation(
                "twist reconstruction is not isomorphic to the power complex")
    return group, cx


def build_diagram_d(schlafli, base: IncidenceComplex) -> CoxeterDiagram:
    """Merge the string diagram of L with the trivial diagram on the base
    vertices: node d-1 becomes the base-vertex node, and every vertex node
    hangs off node d-2 with the last string label."""
    if not is_vertex_describable(base):
        raise NotVertexDescribable(
            "the node intersection condition needs a vertex-describable base")
    d = len(schlafli) + 1
    string_nodes = list(range(d - 1))
    vertex_nodes = [("v", i) for i in range(base.n_vertices)]
    branches = []
    for i in range(d - 2):
        if schlafli[i] != 2:
            branches.append((i, i + 1, schlafli[i]))
    if d >= 2:
        q_last = schlafli[d - 2]
        if q_last != 2:
            for nd in vertex_nodes:
                branches.append((d - 2, nd, q_last))
    return CoxeterDiagram(tuple(string_nodes + vertex_nodes), tuple(branches))


@dataclass
class TwistSpec:
    """The assembled input of one twisting run: the type symbol, the base
    complex, the merged diagram, the realized group on (w, phi) pairs, and
    the distinguished subgroups handed to reconstruction."""

    schlafli: tuple
    base: IncidenceComplex
    diagram: CoxeterDiagram
    w_order: int
    group: PermutationGroup
    subgroups: list

    def to_group_spec(self) -> GroupComplexSpec:
        return GroupComplexSpec(self.group, list(self.subgroups))


def build_twist_spec(schlafli, base: IncidenceComplex,
                     cap: int | None = None,
                     Lambda: PermutationGroup | None = None) -> TwistSpec:
    """Realize W x| Gamma(K) on pairs and assemble its subgroup system."""
    d = len(schlafli) + 1
    if not is_vertex_describable(base):
        raise NotVertexDescribable("the base complex must be vertex-describable")
    if Lambda is None:
        Lambda = automorphism_group(base, on="vertices")
    system = distinguished_subgroups(Lambda, base, base.flags()[0])
    v = base.n_vertices
    k = base.rank
    p0 = base.vertex_index(system.base_flag[1])

    diagram = build_diagram_d(schlafli, base)
    pres = presentation_from_diagram(diagram)
    try:
        ct = todd_coxeter(pres, (), cap)
    except CapExceeded as exc:
        raise InfiniteGroupSuspected(
            f"the merged diagram's group did not close within the coset cap; "
            f"{exc}") from exc
    Wn = ct.n_cosets
    Wtab = ct.table

    Lambda.enumerate()
    lam_mat = Lambda.element_matrix
    m = lam_mat.shape[0]
    lam_inv = np.empty_like(lam_mat)
    ar_v = np.arange(v, dtype=np.int32)
    for t in range(m):
        lam_inv[t, lam_mat[t]] = ar_v

    degree = Wn * m
    w_part, phi_part = np.divmod(np.arange(degree, dtype=np.int64), m)

    def w_gen_perm(node_idx_for_phi) -> Permutation:
        cols = node_idx_for_phi[phi_part]
        return Permutation((Wtab[w_part, cols].astype(np.int64) * m
                            + phi_part).astype(np.int32))

    def lam_gen_perm(lam_images) -> Permutation:
        # phi-part gets multiplied on the right: phi * lam, i.e. phi first
        lam_ids = Lambda._index.lookup(
            np.asarray(lam_images, dtype=np.int32)[lam_mat])
        if np.any(lam_ids < 0):
            raise PropertyViolation("base group is not closed under a generator")
        return Permutation((w_part * m + lam_ids[phi_part]).astype(np.int32))

    # rho_i for i <= d-2: string node i for every phi
    rho = []
    for i in range(d - 1):
        rho.append(w_gen_perm(np.full(m, i, dtype=np.int64)))
    # rho_{d-1}: vertex node phi^{-1}(p0)
    node_for_phi = (d - 1) + lam_inv[:, p0].astype(np.int64)
    rho.append(w_gen_perm(node_for_phi))

    lam_lift = {}

    def lift_lambda_sub(sub: PermutationGroup) -> list:
        out = []
        for g in reduced_generators(sub):
            key = g.tobytes()
            if key not in lam_lift:
                lam_lift[key] = lam_gen_perm(g)
            out.append(lam_lift[key])
        return out

    gens = list(rho)
    for g in Lambda.generators:
        gens.append(lam_gen_perm(g.images))
    group = PermutationGroup(degree, gens)
    group.enumerate()
    if group.order != Wn * m:
        raise PropertyViolation(
            f"twisted group order {group.order} differs from |W|*|Gamma(K)| "
            f"= {Wn} * {m}")

    h_gens = lift_lambda_sub(system.subgroup(-1))
    subs = []
    for i in range(-1, d + k + 1):
        if i == -1 or i == d + k:
            rows = h_gens
        elif i <= d - 1:
            rows = [rho[i]] + h_gens
        else:
            rows = lift_lambda_sub(system.subgroup(i - d)) + h_gens
        sub = PermutationGroup(degree, rows)
        sub.enumerate()
        subs.append(sub)
    return TwistSpec(tuple(schlafli), base, diagram, Wn, group, subs)


def generalized_power(schlafli, base: IncidenceComplex,
                      cap: int | None = None,
                      Lambda: PermutationGroup | None = None):
    """The twisted complex L^K with group W x| Gamma(K).

    W comes from the merged diagram via coset enumeration (its regular
    representation realizes the product on pairs (w, phi)); the
    distinguished subgroups are the reflections for ranks < d and the
    lifted base subgroups above.  An empty type symbol degenerates to the
    2-edge, recovering 2^K through the cyclic twist.

    Returns (group, complex).  Raises InfiniteGroupSuspected when the
    coset enumeration hits its cap.
    """
    if len(schlafli) == 0:
        return twist_cyclic(2, base, Lambda)
    tw = build_twist_spec(schlafli, base, cap, Lambda)
    cx = complex_from_group(tw.to_group_spec())
    return tw.group, cx


def check_node_intersection(base: IncidenceComplex,
                            Lambda: PermutationGroup | None = None) -> bool:
    """Orbit condition on the trivial diagram: the set of base-vertex
    images under the subgroup for I intersected with the one for J equals
    the one for I n J, over all subsets of 0..k-1."""
    if Lambda is None:
        if not is_vertex_describable(base):
            raise NotVertexDescribable(
                "the orbit condition is checked through the vertex action, "
                "which cannot represent this base faithfully")
        Lambda = automorphism_group(base, on="vertices")
    if Lambda.degree != base.n_vertices:
        raise ValueError("need the vertex action of the base group")
    system = distinguished_subgroups(Lambda, base, base.flags()[0])
    k = base.rank
    p0 = base.vertex_index(system.base_flag[1])
    orbits = {}
    for mask in range(1 << k):
        I = [i for i in range(k) if mask >> i & 1]
        gens = []
        for i in I:
            gens.extend(Permutation(g) for g in reduced_generators(system.subgroup(i)))
        sub = PermutationGroup(Lambda.degree, gens)
        orbits[mask] = frozenset(sub.orbit(p0))
    for a in orbits:
        for b in orbits:
            if orbits[a] & orbits[b] != orbits[a & b]:
                return False
    return True


def verify_subcomplex_theorem(schlafli, base: IncidenceComplex, i: int,
                              cap: int | None = None) -> bool:
    """The (d+i)-faces of L^K are copies of L^{K_i} (K_i = an i-face of K)."""
    k = base.rank
    if not 1 <= i <= k:
        raise RankOutOfRange(f"face rank {i} outside 1..{k}")
    _, full = generalized_power(schlafli, base, cap)
    d = len(schlafli) + 1
    if i == k:
        # the unique (d+k)-face is the whole complex
        sec = section(full, full.least_id, full.greatest_id)
        return isomorphism(sec, full) is not None
    face = next(iter(full.faces_of_rank(d + i)))
    sec = section(full, full.least_id, face)
    k_face = next(iter(base.faces_of_rank(i)))
    base_i = section(base, base.least_id, k_face)
    _, rhs = generalized_power(schlafli, base_i, cap)
    return isomorphism(sec, rhs) is not None


def verify_coface_theorem(schlafli, base: IncidenceComplex, i: int,
                          cap: int | None = None) -> bool:
    """Co-faces at i-faces of L^K (i <= d-2) are copies of L_i^K with
    L_i = {q_{i+2},..,q_{d-1}}; an empty remainder symbol means the 2-edge,
    handled by the cyclic-twist route."""
    d = len(schlafli) + 1
    if not 0 <= i <= d - 2:
        raise RankOutOfRange(f"co-face rank {i} outside 0..{d - 2}")
    _, full = generalized_power(schlafli, base, cap)
    face = next(iter(full.faces_of_rank(i)))
    sec = section(full, face, full.greatest_id)
    rest = tuple(schlafli[i + 1:])
    _, rhs = generalized_power(rest, base, cap)
    return isomorphism(sec, rhs) is not None


def verify_twist_skel(schlafli, base: IncidenceComplex, j: int,
                      cap: int | None = None) -> bool:
    """skel_{d+j}(L^K) is a copy of L^{skel_j(K)}."""
    if not 0 <= j <= base.rank - 1:
        raise RankOutOfRange(f"skeleton index {j} outside 0..{base.rank - 1}")
    d = len(schlafli) + 1
    _, full = generalized_power(schlafli, base, cap)
    if j == base.rank - 1:
        lhs = full
    else:
        lhs = skeleton(full, d + j)
    _, rhs = generalized_power(schlafli, skeleton(base, j), cap)
    return isomorphism(lhs, rhs) is not None

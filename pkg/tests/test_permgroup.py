"""Permutation groups: closure, cosets, stabilizers, automorphism groups."""

import numpy as np
import pytest

from polycomplex import catalog
from polycomplex.complexes import enumerate_flags, is_vertex_describable
from polycomplex.errors import (
    CapExceeded,
    NotASubgroup,
    NotVertexDescribable,
    RequiresEnumeration,
)
from polycomplex.permgroup import (
    Permutation,
    PermutationGroup,
    acts_by_automorphisms,
    automorphism_group,
    closure,
    face_action,
    is_flag_transitive,
    right_cosets,
    stabilizer,
    stabilizer_of_faces,
)


def naive_closure(gens):
    """Multiply-until-fixed-point oracle."""
    degree = gens[0].degree
    els = {tuple(range(degree))}
    els |= {tuple(g.images) for g in gens}
    changed = True
    while changed:
        changed = False
        for a in sorted(els):
            arr = np.array(a)
            for g in gens:
                b = tuple(int(x) for x in g.images[arr])
                if b not in els:
                    els.add(b)
                    changed = True
    return els


S3_GENS = [Permutation([1, 0, 2]), Permutation([0, 2, 1])]
CUBE_GROUP_GENS = [
    # reflections generating the symmetries of the 3-cube on its 8 vertices
    # (coordinates as bits: swap axes 0/1, swap axes 1/2, flip axis 0)
    Permutation([0, 2, 1, 3, 4, 6, 5, 7]),
    Permutation([0, 1, 4, 5, 2, 3, 6, 7]),
    Permutation([4, 5, 6, 7, 0, 1, 2, 3]),
]


class TestPermutation:
    def test_compose_right_action(self):
        p = Permutation([1, 2, 0])
        q = Permutation([0, 2, 1])
        pq = p * q
        for x in range(3):
            assert pq(x) == q(p(x))

    def test_inverse_and_identity(self):
        p = Permutation([2, 0, 3, 1])
        assert (p * p.inverse()).is_identity()
        assert (p.inverse() * p).is_identity()
        assert Permutation.identity(4).is_identity()

    def test_checked_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation.checked([0, 0, 1])

    def test_hash_eq(self):
        assert Permutation([1, 0]) == Permutation([1, 0])
        assert len({Permutation([1, 0]), Permutation([1, 0])}) == 1


class TestClosure:
    @pytest.mark.parametrize("gens,order", [
        (S3_GENS, 6),
        ([Permutation([1, 2, 3, 4, 0])], 5),
        (CUBE_GROUP_GENS, 48),
        ([Permutation([1, 0, 2, 3]), Permutation([0, 2, 1, 3]),
          Permutation([0, 1, 3, 2])], 24),
    ])
    def test_orders(self, gens, order):
        assert closure(gens).order == order

    @pytest.mark.parametrize("gens", [
        S3_GENS,
        CUBE_GROUP_GENS,
        [Permutation([1, 2, 3, 0]), Permutation([1, 0, 2, 3])],   # S4
        [Permutation(np.roll(np.arange(12), 1))],                 # C12
    ])
    def test_agrees_with_naive_oracle(self, gens):
        grp = closure(gens)
        assert grp.order == len(naive_closure(gens))

    def test_identity_is_element_zero(self):
        grp = closure(S3_GENS)
        assert grp.elements[0].is_identity()
        assert grp.element_id(Permutation.identity(3)) == 0

    def test_deterministic_order(self):
        a = closure(S3_GENS).element_matrix
        b = closure(S3_GENS).element_matrix
        assert np.array_equal(a, b)
        # word length then lexicographic: generators precede longer words
        rows = [tuple(r) for r in a]
        assert rows[0] == (0, 1, 2)
        assert rows[1] == (0, 2, 1) and rows[2] == (1, 0, 2)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            closure(CUBE_GROUP_GENS, cap=10)

    def test_empty_generators(self):
        grp = closure([], degree=5)
        assert grp.order == 1


class TestCosets:
    def test_s3_mod_a3(self):
        s3 = closure(S3_GENS)
        cd = right_cosets(s3, [Permutation([1, 2, 0])])
        assert cd.n_cosets == 2
        assert cd.transversal[0].is_identity()
        assert cd.subgroup.order * cd.n_cosets == s3.order
        assert set(map(int, cd.coset_of)) == {0, 1}

    def test_cube_group_mod_vertex_stabilizer(self):
        grp = closure(CUBE_GROUP_GENS)
        stab = stabilizer(grp, [0])
        from polycomplex.regular import reduced_generators

        cd = right_cosets(grp, [Permutation(g) for g in reduced_generators(stab)])
        assert cd.n_cosets == 8    # orbit-stabilizer on the 8 vertices

    def test_whole_group_single_coset(self):
        s3 = closure(S3_GENS)
        cd = right_cosets(s3, S3_GENS)
        assert cd.n_cosets == 1

    def test_outside_generator_rejected(self):
        a3 = closure([Permutation([1, 2, 0])])
        with pytest.raises(NotASubgroup):
            right_cosets(a3, [Permutation([1, 0, 2])])


class TestStabilizers:
    def test_point_stabilizer_s3(self):
        s3 = closure(S3_GENS)
        assert stabilizer(s3, [1]).order == 2

    def test_orbit_stabilizer_on_catalog_groups(self):
        for name in ("simplex2", "fano", "moebius_kantor", "cube3"):
            cx = catalog.build(name)
            grp = automorphism_group(cx, on="vertices")
            for x in (0, cx.n_vertices - 1):
                orb = grp.orbit(x)
                assert grp.order == len(orb) * stabilizer(grp, [x]).order

    def test_requires_enumeration(self):
        grp = PermutationGroup(3, S3_GENS)
        with pytest.raises(RequiresEnumeration):
            grp.element_matrix


class TestAutomorphismGroups:
    @pytest.mark.parametrize("name,order", [
        ("cube3", 48), ("fano", 168), ("moebius_kantor", 48),
        ("edge3", 6), ("simplex3", 24), ("square", 8), ("digon", 4),
    ])
    def test_orders(self, name, order):
        cx = catalog.build(name)
        on = "vertices" if is_vertex_describable(cx) else "faces"
        assert automorphism_group(cx, on=on).order == order

    def test_face_action_degree(self, cube3):
        grp = automorphism_group(cube3)     # default: on face ids
        assert grp.degree == cube3.n_faces
        assert grp.order == 48

    def test_generators_preserve_covers(self, cube3, fano):
        for cx in (cube3, fano):
            grp = automorphism_group(cx, on="vertices")
            assert acts_by_automorphisms(grp, cx)
            cov = {(int(a), int(b)) for a, b in cx.covers}
            for g in grp.generators:
                fa = face_action(cx, g.images)
                assert all((int(fa[a]), int(fa[b])) in cov for a, b in cx.covers)

    def test_vertex_action_refused_for_digon(self):
        with pytest.raises(NotVertexDescribable):
            automorphism_group(catalog.digon(), on="vertices")

    def test_flag_transitivity(self, cube3):
        aut = automorphism_group(cube3, on="vertices")
        assert is_flag_transitive(aut, cube3)
        trivial = PermutationGroup(8, [])
        trivial.enumerate()
        assert not is_flag_transitive(trivial, cube3)

    def test_order_equals_flags_times_stabilizer(self):
        for name in ("cube3", "fano", "moebius_kantor", "edge5", "cross334"):
            cx = catalog.build(name)
            aut = automorphism_group(cx, on="vertices")
            flags = enumerate_flags(cx)
            stab = stabilizer_of_faces(aut, cx, flags[0])
            assert aut.order == len(flags) * stab.order

    def test_flag_stabilizer_orders(self, cube3, fano, moebius):
        for cx, expect in ((cube3, 1), (fano, 8), (moebius, 2)):
            aut = automorphism_group(cx, on="vertices")
            st = stabilizer_of_faces(aut, cx, enumerate_flags(cx)[0])
            assert st.order == expect

    def test_serialization(self):
        grp = closure(S3_GENS)
        d = grp.to_json_dict()
        assert d["degree"] == 3 and d["order"] == 6
        assert all(isinstance(g, list) for g in d["generators"])

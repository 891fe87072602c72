"""Coset enumeration, universal polytopes, cyclic twists and L^K."""

import numpy as np
import pytest

from polycomplex import catalog
from polycomplex.complexes import (
    f_vector,
    isomorphism,
    skeleton,
    validate,
)
from polycomplex.errors import (
    CapExceeded,
    InfiniteGroupSuspected,
    NotVertexDescribable,
)
from polycomplex.permgroup import (
    Permutation,
    PermutationGroup,
    automorphism_group,
    closure,
    is_flag_transitive,
)
from polycomplex.twisting import (
    build_diagram_d,
    build_twist_spec,
    check_node_intersection,
    coxeter_group_regular_rep,
    generalized_power,
    presentation_from_diagram,
    string_presentation,
    todd_coxeter,
    twist_cyclic,
    universal_polytope,
    verify_coface_theorem,
    verify_subcomplex_theorem,
    verify_twist_skel,
)


def d4_signed_permutation_group():
    """The reflection group with the 3-legged star diagram, realized
    independently as signed permutations of 4 coordinates with an even
    number of sign changes, acting on the 8 points +-e_i."""
    def swap(i, j):
        img = list(range(8))
        img[i], img[j] = j, i
        img[i + 4], img[j + 4] = j + 4, i + 4
        return Permutation(img)

    def swap_negate(i, j):
        img = list(range(8))
        img[i], img[j] = j + 4, i + 4
        img[i + 4], img[j + 4] = j, i
        return Permutation(img)

    return closure([swap(0, 1), swap(1, 2), swap(2, 3), swap_negate(2, 3)])


class TestToddCoxeter:
    def test_cube_group_trivial_subgroup(self):
        ct = todd_coxeter(string_presentation((4, 3)))
        assert ct.n_cosets == 48
        assert ct.complete
        # the columns generate a group of exactly that order
        assert closure([ct.column(g) for g in range(3)]).order == 48

    def test_cube_group_matches_automorphism_count(self, cube3):
        ct = todd_coxeter(string_presentation((4, 3)))
        assert ct.n_cosets == automorphism_group(cube3).order

    def test_cube_vertices_subgroup(self):
        ct = todd_coxeter(string_presentation((4, 3)), [[1], [2]])
        assert ct.n_cosets == 8

    def test_24_cell_group(self):
        ct = todd_coxeter(string_presentation((3, 4, 3)))
        assert ct.n_cosets == 1152
        ct_v = todd_coxeter(string_presentation((3, 4, 3)), [[1], [2], [3]])
        assert ct_v.n_cosets == 24

    def test_star_diagram_gives_d4_order(self, simplex2):
        diagram = build_diagram_d((3,), simplex2)
        ct = todd_coxeter(presentation_from_diagram(diagram))
        assert ct.n_cosets == 192
        assert ct.n_cosets == d4_signed_permutation_group().order

    def test_cap_exceeded(self):
        with pytest.raises(CapExceeded):
            todd_coxeter(string_presentation((3, 4, 3)), cap=100)

    def test_infinite_group_hits_cap(self, fano):
        diagram = build_diagram_d((3,), fano)
        with pytest.raises(CapExceeded):
            todd_coxeter(presentation_from_diagram(diagram), cap=5000)

    def test_regular_representation(self):
        grp = coxeter_group_regular_rep(string_presentation((4,)))
        assert grp.order == 8 and grp.degree == 8


class TestUniversalPolytope:
    def test_cube(self, cube3):
        cx = universal_polytope((4, 3))
        assert isomorphism(cx, cube3) is not None

    def test_triangle(self, simplex2):
        cx = universal_polytope((3,))
        assert isomorphism(cx, simplex2) is not None

    def test_24_cell(self):
        cx = universal_polytope((3, 4, 3))
        assert f_vector(cx) == (24, 96, 96, 24)
        rep = validate(cx)
        assert rep.ok and rep.c_vector == (2, 2, 2, 2)

    def test_segment(self):
        cx = universal_polytope(())
        assert f_vector(cx) == (2,)


class TestTwistCyclic:
    def test_triangle(self, simplex2, cube3):
        group, cx = twist_cyclic(2, simplex2)
        assert group.order == 2 ** 3 * 6
        assert isomorphism(cx, cube3) is not None

    def test_3_edge2(self):
        group, cx = twist_cyclic(3, catalog.edge(2))
        assert group.order == 18
        assert f_vector(cx) == (9, 6)

    def test_fano(self, fano):
        group, cx = twist_cyclic(2, fano)
        assert group.order == 2 ** 7 * 168
        assert f_vector(cx) == (128, 448, 112)

    def test_elementwise_commutation_of_sigma_with_high_ranks(self, fano):
        # the rank-0 cycle commutes element by element with the lifted
        # subgroups two or more ranks up
        from polycomplex.power import component_perm, lift_perm
        from polycomplex.regular import distinguished_subgroups

        lam = automorphism_group(fano, on="vertices")
        system = distinguished_subgroups(lam, fano, fano.flags()[0])
        p0 = fano.vertex_index(system.base_flag[1])
        n, v = 2, 7
        sigma = component_perm(n, v, p0, [1, 0])
        for i in (2, 3):
            src = system.subgroup(i - 1) if i <= fano.rank else system.subgroup(-1)
            for row in src.element_matrix:
                lifted = lift_perm(n, v, row)
                assert np.array_equal((sigma * lifted).images,
                                      (lifted * sigma).images)

    def test_flag_transitive_replacement_gives_same_complex(self):
        e3 = catalog.edge(3)
        rot = PermutationGroup(3, [Permutation([1, 2, 0])])
        rot.enumerate()
        assert is_flag_transitive(rot, e3)
        g_small, cx_small = twist_cyclic(2, e3, Lambda=rot)
        g_full, cx_full = twist_cyclic(2, e3)
        assert g_small.order == 2 ** 3 * 3
        assert g_full.order == 2 ** 3 * 6
        assert isomorphism(cx_small, cx_full) is not None

    def test_rejects_non_vertex_describable(self):
        with pytest.raises(NotVertexDescribable):
            twist_cyclic(2, catalog.digon())


class TestDiagram:
    def test_star_for_triangle(self, simplex2):
        diagram = build_diagram_d((3,), simplex2)
        assert len(diagram.nodes) == 4
        verts = [nd for nd in diagram.nodes if isinstance(nd, tuple)]
        assert len(verts) == 3
        assert all(diagram.label(0, nd) == 3 for nd in verts)
        assert all(diagram.label(a, b) == 2
                   for a in verts for b in verts if a != b)

    def test_string_plus_fan_for_43(self):
        diagram = build_diagram_d((4, 3), catalog.edge(2))
        assert diagram.label(0, 1) == 4
        assert diagram.label(1, ("v", 0)) == 3
        assert diagram.label(1, ("v", 1)) == 3
        assert diagram.label(("v", 0), ("v", 1)) == 2

    def test_star_with_seven_satellites(self, fano):
        diagram = build_diagram_d((3,), fano)
        verts = [nd for nd in diagram.nodes if isinstance(nd, tuple)]
        assert len(verts) == 7
        assert all(diagram.label(0, nd) == 3 for nd in verts)

    def test_dot_export(self, simplex2):
        dot = build_diagram_d((3,), simplex2).to_dot()
        assert dot.startswith("graph") and "--" in dot


class TestGeneralizedPower:
    def test_24_cell_case(self, simplex2):
        group, cx = generalized_power((3,), simplex2)
        assert group.order == 192 * 6
        assert f_vector(cx) == (24, 96, 96, 24)
        assert isomorphism(cx, universal_polytope((3, 4, 3))) is not None

    def test_skeleton_case(self):
        group, cx = generalized_power((3,), catalog.edge(3))
        assert group.order == 192 * 6
        assert f_vector(cx) == (24, 96, 96)
        sk = skeleton(universal_polytope((3, 4, 3)), 2)
        assert isomorphism(cx, sk) is not None

    def test_degenerate_empty_symbol_is_power(self, simplex2, cube3):
        group, cx = generalized_power((), simplex2)
        assert isomorphism(cx, cube3) is not None

    def test_group_order_is_w_times_base(self, simplex2):
        tw = build_twist_spec((3,), simplex2)
        lam_order = automorphism_group(simplex2, on="vertices").order
        assert tw.group.order == tw.w_order * lam_order

    def test_infinite_case_detected(self, fano):
        with pytest.raises(InfiniteGroupSuspected):
            generalized_power((3,), fano, cap=20000)

    def test_flag_transitive_replacement(self):
        e3 = catalog.edge(3)
        rot = PermutationGroup(3, [Permutation([1, 2, 0])])
        rot.enumerate()
        g1, cx1 = generalized_power((3,), e3, Lambda=rot)
        g2, cx2 = generalized_power((3,), e3)
        assert g1.order == 192 * 3
        assert g2.order == 192 * 6
        assert isomorphism(cx1, cx2) is not None


class TestTheorems:
    def test_subcomplex_faces(self, simplex2):
        assert verify_subcomplex_theorem((3,), simplex2, 1)

    def test_subcomplex_top_face_is_whole(self, simplex2):
        assert verify_subcomplex_theorem((3,), simplex2, 2)

    def test_coface_at_vertex_of_24_cell(self, simplex2):
        # the vertex figure of the 24-cell is the cube, which is also the
        # degenerate remainder symbol's power complex
        assert verify_coface_theorem((3,), simplex2, 0)

    def test_coface_for_edge3(self):
        assert verify_coface_theorem((3,), catalog.edge(3), 0)

    @pytest.mark.parametrize("schlafli,name,j", [
        ((3,), "simplex2", 0),
        ((3,), "simplex2", 1),
        ((3,), "edge2", 0),
    ])
    def test_twist_skeleton(self, schlafli, name, j):
        assert verify_twist_skel(schlafli, catalog.build(name), j)

    def test_square_over_edge2_is_infinite(self):
        # the merged diagram for {4} over the 2-edge is the affine [4,4]
        # group (zero Gram determinant), so the construction must refuse
        with pytest.raises(InfiniteGroupSuspected):
            generalized_power((4,), catalog.edge(2), cap=30000)

    def test_octahedron_from_edge2(self):
        group, cx = generalized_power((3,), catalog.edge(2))
        assert group.order == 48
        assert f_vector(cx) == (6, 12, 8)
        assert isomorphism(cx, universal_polytope((3, 4))) is not None


class TestNodeIntersection:
    def test_simplex_and_fano_pass(self, simplex2, fano):
        assert check_node_intersection(simplex2)
        assert check_node_intersection(fano)

    def test_digon_outcome_recorded(self):
        # the construction needs the vertex action of a flag-transitive
        # group; the digon's vertex action cannot separate its edges, so
        # the check refuses the instance rather than reporting a verdict
        from polycomplex.errors import PolycomplexError

        with pytest.raises(PolycomplexError):
            check_node_intersection(catalog.digon())

"""polycomplex: ranked incidence complexes, power complexes and their
automorphism groups, with group-to-complex reconstruction and twisting.

The main entry points:

* :mod:`polycomplex.complexes` -- the IncidenceComplex carrier, axiom
  validation, sections, skeletons, flags, isomorphism;
* :mod:`polycomplex.permgroup` -- permutation groups by full enumeration,
  cosets, stabilizers, automorphism groups;
* :mod:`polycomplex.regular` -- distinguished subgroup systems and the
  coset reconstruction of a complex from a group;
* :mod:`polycomplex.power` -- power complexes n^K and the wreath-product
  structure of their groups;
* :mod:`polycomplex.twisting` -- coset enumeration, universal polytopes,
  cyclic twists and generalized power complexes;
* :mod:`polycomplex.catalog` -- the named instances used everywhere.

Hot kernels run numba-compiled by default; set POLYCOMPLEX_ACCEL=numpy to
force the pure-Python/numpy fallback (results are identical).
"""

from .catalog import (
    cube,
    cubical_toroid,
    cross_polytope4,
    digon,
    edge,
    fano_plane,
    moebius_kantor,
    simplex,
)
from .complexes import (
    AxiomReport,
    Face,
    IncidenceComplex,
    adjacent_flags,
    enumerate_flags,
    f_vector,
    from_hasse,
    from_json,
    is_vertex_describable,
    isomorphism,
    section,
    skeleton,
    to_dot,
    to_json,
    validate,
)
from .errors import (
    CapExceeded,
    InfiniteGroupSuspected,
    MalformedPoset,
    NotASubgroup,
    NotComparable,
    NotFlagTransitive,
    NotTransitive,
    NotVertexDescribable,
    PolycomplexError,
    PreconditionFailed,
    PropertyViolation,
    RankOutOfRange,
    RequiresEnumeration,
    SearchBudgetExceeded,
    SizeCapExceeded,
)
from .permgroup import (
    CosetDecomposition,
    Permutation,
    PermutationGroup,
    automorphism_group,
    closure,
    is_flag_transitive,
    right_cosets,
    stabilizer,
    stabilizer_of_faces,
)
from .power import (
    face_count_formula,
    power_complex,
    power_distinguished_subgroups,
    verify_power_aut,
    verify_skeleton_identity,
    wreath_group,
)
from .regular import (
    DistinguishedSystem,
    GroupComplexSpec,
    c_from_indices,
    check_commutation,
    check_intersection_property,
    complex_from_group,
    distinguished_subgroups,
)
from .twisting import (
    CosetTable,
    CoxeterDiagram,
    GroupPresentation,
    TwistSpec,
    build_diagram_d,
    build_twist_spec,
    check_node_intersection,
    generalized_power,
    todd_coxeter,
    twist_cyclic,
    universal_polytope,
    verify_coface_theorem,
    verify_subcomplex_theorem,
    verify_twist_skel,
)

__version__ = "0.1.0"

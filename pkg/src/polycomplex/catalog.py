"""Deterministic constructors for the complexes used throughout the suite.

Labelings are frozen: changing the vertex numbering of the Fano plane or of
the Moebius-Kantor configuration is a format-breaking change, since golden
files and group computations depend on them.

Every expected value in the registry is re-derived by the test suite
(f-vectors by counting, automorphism orders by brute-force search); the
numbers here are documentation, not trusted input.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .complexes import IncidenceComplex, from_hasse

LEAST = ("least",)
GREATEST = ("greatest",)

# 7 points, 7 lines; 0-based frozen labeling
FANO_LINES = (
    (0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5),
)

# 8 vertices, 8 blocks: cyclic shifts of {0,1,3} mod 8
MOEBIUS_KANTOR_BLOCKS = tuple(
    tuple(sorted(((0 + s) % 8, (1 + s) % 8, (3 + s) % 8))) for s in range(8)
)


def _from_blocks(n_points: int, blocks) -> IncidenceComplex:
    """Rank-2 complex of a point/block incidence structure."""
    faces = [(LEAST, -1)]
    faces += [(("p", i), 0) for i in range(n_points)]
    faces += [(("b", i), 1) for i in range(len(blocks))]
    faces += [(GREATEST, 2)]
    covers = [(LEAST, ("p", i)) for i in range(n_points)]
    for bi, block in enumerate(blocks):
        covers += [(("p", p), ("b", bi)) for p in block]
        covers.append((("b", bi), GREATEST))
    cx, _ = from_hasse(2, faces, covers)
    return cx


def edge(v: int) -> IncidenceComplex:
    """The v-edge: rank 1, v vertices on one edge."""
    if v < 2:
        raise ValueError(f"an edge needs at least 2 vertices, got {v}")
    faces = [(LEAST, -1)] + [(("p", i), 0) for i in range(v)] + [(GREATEST, 1)]
    covers = [(LEAST, ("p", i)) for i in range(v)]
    covers += [(("p", i), GREATEST) for i in range(v)]
    cx, _ = from_hasse(1, faces, covers)
    return cx


def simplex(k: int) -> IncidenceComplex:
    """The k-simplex as a rank-k complex on k+1 vertices."""
    if k < 1:
        raise ValueError(f"simplex rank must be >= 1, got {k}")
    verts = range(k + 1)
    faces = [(frozenset(), -1)]
    for size in range(1, k + 2):
        faces += [(frozenset(s), size - 1) for s in combinations(verts, size)]
    covers = []
    for key, r in faces:
        if r == -1:
            continue
        for drop in sorted(key):
            covers.append((key - {drop}, key))
    cx, _ = from_hasse(k, faces, covers)
    return cx


def cube(k: int) -> IncidenceComplex:
    """The ordinary k-cube.

    A face is (free axis set A, fixed coordinates b on the complement); its
    rank is |A|.  The full-free face is the greatest face.
    """
    if k < 1:
        raise ValueError(f"cube rank must be >= 1, got {k}")
    axes = range(k)
    faces = [(LEAST, -1)]
    for size in range(k + 1):
        for A in combinations(axes, size):
            rest = [i for i in axes if i not in A]
            for vals in product((0, 1), repeat=len(rest)):
                faces.append(((A, tuple(zip(rest, vals))), size))
    covers = []
    for key, r in faces:
        if r <= -1:
            continue
        A, fixed = key
        if r == 0:
            covers.append((LEAST, key))
        for i in A:
            sub_A = tuple(a for a in A if a != i)
            for val in (0, 1):
                sub_fixed = tuple(sorted(fixed + ((i, val),)))
                covers.append(((sub_A, sub_fixed), key))
    cx, _ = from_hasse(k, faces, covers)
    return cx


def cross_polytope4() -> IncidenceComplex:
    """The 4-crosspolytope: 8 vertices, antipodal pairs (i, i+4)."""
    verts = range(8)
    ok = lambda s: all(not (i in s and i + 4 in s) for i in range(4))
    faces = [(frozenset(), -1)]
    for size in range(1, 5):
        faces += [(frozenset(s), size - 1)
                  for s in combinations(verts, size) if ok(s)]
    faces.append((GREATEST, 4))
    covers = []
    for key, r in faces:
        if r == -1 or key == GREATEST:
            continue
        for drop in sorted(key):
            covers.append((key - {drop}, key))
        if r == 3:
            covers.append((key, GREATEST))
    cx, _ = from_hasse(4, faces, covers)
    return cx


def fano_plane() -> IncidenceComplex:
    """The 7-point projective plane with the frozen line set."""
    return _from_blocks(7, FANO_LINES)


def moebius_kantor() -> IncidenceComplex:
    """The 8-point configuration underlying the complex polygon with
    triangular edges; blocks are the cyclic shifts of {0,1,3} mod 8."""
    return _from_blocks(8, MOEBIUS_KANTOR_BLOCKS)


def cubical_toroid(s: int) -> IncidenceComplex:
    """Cubical tessellation of the 4-torus over Z_s^4, rank 5.

    A j-face is (base point, axis subset of size j); small s produces
    degenerate identifications, which validate() reports rather than this
    constructor rejecting them.
    """
    if s < 2:
        raise ValueError(f"toroid modulus must be >= 2, got {s}")
    axes = range(4)
    points = list(product(range(s), repeat=4))
    faces = [(LEAST, -1)]
    for size in range(5):
        for A in combinations(axes, size):
            faces += [((b, A), size) for b in points]
    faces.append((GREATEST, 5))
    covers = []
    for key, r in faces:
        if r == -1 or key == GREATEST:
            continue
        b, A = key
        if r == 0:
            covers.append((LEAST, key))
        if r == 4:
            covers.append((key, GREATEST))
        for i in A:
            sub = tuple(a for a in A if a != i)
            shifted = tuple(
                (b[a] + 1) % s if a == i else b[a] for a in axes)
            covers.append(((b, sub), key))
            covers.append(((shifted, sub), key))
    cx, _ = from_hasse(5, faces, covers)
    return cx


def digon() -> IncidenceComplex:
    """Two edges on the same two vertices: regular, not vertex-describable."""
    faces = [(LEAST, -1), (("p", 0), 0), (("p", 1), 0),
             (("e", 0), 1), (("e", 1), 1), (GREATEST, 2)]
    covers = [(LEAST, ("p", 0)), (LEAST, ("p", 1))]
    for e in range(2):
        covers += [(("p", 0), ("e", e)), (("p", 1), ("e", e)),
                   (("e", e), GREATEST)]
    cx, _ = from_hasse(2, faces, covers)
    return cx


@dataclass(frozen=True)
class CatalogEntry:
    """A named instance with the values the test suite re-derives."""

    name: str
    builder: object
    params: dict
    f_vector: tuple
    c_vector: tuple
    aut_order: int | None      # None: too large for the default budget
    regular: bool
    vertex_describable: bool

    def build(self) -> IncidenceComplex:
        return self.builder(**self.params)


REGISTRY = {
    e.name: e
    for e in (
        CatalogEntry("edge2", edge, {"v": 2}, (2,), (2,), 2, True, True),
        CatalogEntry("edge3", edge, {"v": 3}, (3,), (3,), 6, True, True),
        CatalogEntry("edge5", edge, {"v": 5}, (5,), (5,), 120, True, True),
        CatalogEntry("simplex2", simplex, {"k": 2}, (3, 3), (2, 2), 6, True, True),
        CatalogEntry("simplex3", simplex, {"k": 3}, (4, 6, 4), (2, 2, 2), 24, True, True),
        CatalogEntry("cube3", cube, {"k": 3}, (8, 12, 6), (2, 2, 2), 48, True, True),
        CatalogEntry("cube4", cube, {"k": 4}, (16, 32, 24, 8), (2, 2, 2, 2), 384, True, True),
        CatalogEntry("square", cube, {"k": 2}, (4, 4), (2, 2), 8, True, True),
        CatalogEntry("cross334", cross_polytope4, {}, (8, 24, 32, 16), (2, 2, 2, 2), 384, True, True),
        CatalogEntry("fano", fano_plane, {}, (7, 7), (3, 3), 168, True, True),
        CatalogEntry("moebius_kantor", moebius_kantor, {}, (8, 8), (3, 3), 48, True, True),
        CatalogEntry("toroid4", cubical_toroid, {"s": 4},
                     (256, 1024, 1536, 1024, 256), (2, 2, 2, 2, 2), 98304, True, True),
        CatalogEntry("digon", digon, {}, (2, 2), (2, 2), 4, True, False),
    )
}


def names() -> list:
    return sorted(REGISTRY)


def build(name: str, **overrides) -> IncidenceComplex:
    entry = REGISTRY.get(name)
    if entry is None:
        raise KeyError(f"unknown catalog name {name!r}; known: {', '.join(names())}")
    params = dict(entry.params)
    params.update(overrides)
    return entry.builder(**params)

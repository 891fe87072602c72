"""Shared fixtures; the heavyweight instances are built once per session."""

import numpy as np
import pytest

from polycomplex import catalog
from polycomplex.permgroup import automorphism_group
from polycomplex.power import power_complex


@pytest.fixture(scope="session")
def cube3():
    return catalog.build("cube3")


@pytest.fixture(scope="session")
def fano():
    return catalog.build("fano")


@pytest.fixture(scope="session")
def simplex2():
    return catalog.build("simplex2")


@pytest.fixture(scope="session")
def moebius():
    return catalog.build("moebius_kantor")


@pytest.fixture(scope="session")
def toroid4():
    return catalog.build("toroid4")


@pytest.fixture(scope="session")
def aut_toroid4(toroid4):
    return automorphism_group(toroid4, on="vertices")


@pytest.fixture(scope="session")
def power_fano(fano):
    return power_complex(2, fano)


@pytest.fixture(scope="session")
def aut_power_fano(power_fano):
    return automorphism_group(power_fano, on="vertices")


@pytest.fixture(scope="session")
def power_moebius(moebius):
    return power_complex(2, moebius)


@pytest.fixture(scope="session")
def power_cross():
    return power_complex(2, catalog.build("cross334"))


def relabel_within_ranks(cx, seed=7):
    """The same complex with face ids shuffled inside each rank block."""
    from polycomplex.complexes import IncidenceComplex

    rng = np.random.RandomState(seed)
    perm = np.arange(cx.n_faces)
    for r in range(-1, cx.rank + 1):
        ids = np.array(list(cx.faces_of_rank(r)))
        if ids.size > 1:
            perm[ids] = ids[rng.permutation(ids.size)]
    ranks = [cx.face_rank(i) for i in range(cx.n_faces)]
    new_ranks = [0] * cx.n_faces
    for old, new in enumerate(perm):
        new_ranks[new] = ranks[old]
    covers = [(int(perm[a]), int(perm[b])) for a, b in cx.covers]
    return IncidenceComplex(cx.rank, new_ranks, covers)

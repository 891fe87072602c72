"""Both acceleration modes must produce identical results."""

import numpy as np
import pytest

from polycomplex import accel
from polycomplex.accel import RowIndex
from polycomplex.permgroup import Permutation, closure
from polycomplex.twisting import string_presentation, todd_coxeter


@pytest.fixture
def restore_mode():
    before = accel.mode()
    yield
    accel.set_mode(before)


def numba_available():
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


pytestmark = pytest.mark.skipif(not numba_available(),
                                reason="numba not importable")


class TestRowIndex:
    @pytest.mark.parametrize("mode", ["numba", "numpy"])
    def test_contract(self, mode, restore_mode):
        accel.set_mode(mode)
        idx = RowIndex(4, expect=4)
        rows = np.array([[0, 1, 2, 3], [1, 0, 2, 3], [0, 1, 2, 3], [3, 2, 1, 0]],
                        dtype=np.int32)
        ids = idx.add(rows)
        assert list(ids) == [0, 1, 0, 2]
        assert len(idx) == 3
        got = idx.lookup(np.array([[3, 2, 1, 0], [2, 2, 2, 2]], dtype=np.int32))
        assert list(got) == [2, -1]
        assert np.array_equal(idx.matrix[1], rows[1])

    def test_growth_keeps_ids(self, restore_mode):
        accel.set_mode("numba")
        idx = RowIndex(3, expect=2)
        rows = np.array([[i, (i + 1) % 97, (i * 7) % 97] for i in range(500)],
                        dtype=np.int32)
        ids = idx.add(rows)
        assert list(ids) == list(range(500))
        again = idx.lookup(rows)
        assert np.array_equal(ids, again)

    def test_modes_agree(self, restore_mode):
        rng = np.random.RandomState(0)
        rows = rng.randint(0, 50, size=(300, 6)).astype(np.int32)
        results = {}
        for mode in ("numba", "numpy"):
            accel.set_mode(mode)
            idx = RowIndex(6, expect=8)
            results[mode] = (list(idx.add(rows)), idx.matrix.copy())
        assert results["numba"][0] == results["numpy"][0]
        assert np.array_equal(results["numba"][1], results["numpy"][1])


class TestCosetTablesAgree:
    @pytest.mark.parametrize("schlafli,subgroup,cosets", [
        ((4, 3), (), 48),
        ((4, 3), ([1], [2]), 8),
        ((3, 4, 3), (), 1152),
    ])
    def test_identical_tables(self, schlafli, subgroup, cosets, restore_mode):
        tables = {}
        for mode in ("numba", "numpy"):
            accel.set_mode(mode)
            ct = todd_coxeter(string_presentation(schlafli), subgroup)
            tables[mode] = ct.table.copy()
            assert ct.n_cosets == cosets
        assert np.array_equal(tables["numba"], tables["numpy"])


class TestClosureAgrees:
    def test_identical_element_order(self, restore_mode):
        gens = [Permutation([1, 0, 2, 3, 4, 5, 6, 7]),
                Permutation([0, 2, 1, 3, 4, 5, 6, 7]),
                Permutation([7, 6, 5, 4, 3, 2, 1, 0])]
        mats = {}
        for mode in ("numba", "numpy"):
            accel.set_mode(mode)
            mats[mode] = closure(gens).element_matrix.copy()
        assert np.array_equal(mats["numba"], mats["numpy"])

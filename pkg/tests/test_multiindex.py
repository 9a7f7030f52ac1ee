"""Tests for triangular multi-indices and their index counts."""

import math

import numpy as np
import pytest

from singular_kernels.exceptions import DomainError
from singular_kernels.models import MultiIndexGrid
from singular_kernels.multiindex import (
    cell_count,
    compositions,
    count_matrices,
    enumerate_grids,
    grid_cells,
    grid_shell,
    index_gap,
    m_count,
    n_count,
)


class TestIndexCounts:
    """Test cases for M_l(k, n), N_l(k, n) and their difference."""

    def setup_method(self):
        """Set up a three-variable grid (m22, m23, m33) = (i, j, k)."""
        self.i, self.j, self.k = 2, 3, 5
        self.grid = MultiIndexGrid(3, (self.i, self.j, self.k))

    def test_m_count_examples(self):
        """Test M_2(1,3) = i + j and M_2(2,3) = i + k."""
        assert m_count(self.grid, 2, 1) == self.i + self.j
        assert m_count(self.grid, 2, 2) == self.i + self.k

    def test_n_count_examples(self):
        """Test N_2(1,3) = i + j and N_2(3,3) = i + j + k."""
        assert n_count(self.grid, 2, 1) == self.i + self.j
        assert n_count(self.grid, 2, 3) == self.i + self.j + self.k

    def test_two_variable_counts_coincide(self):
        """Test M_2(1,2) = M_2(2,2) = m22."""
        grid = MultiIndexGrid(2, (5,))
        assert m_count(grid, 2, 1) == 5
        assert m_count(grid, 2, 2) == 5

    def test_empty_grid(self):
        """Test N_2(1,1) = 0 for the one-variable grid."""
        assert n_count(MultiIndexGrid(1, ()), 2, 1) == 0
        assert m_count(MultiIndexGrid(1, ()), 2, 1) == 0

    def test_counts_table(self):
        """Test all counts of the grid (1, 2, 3)."""
        grid = MultiIndexGrid(3, (1, 2, 3))
        assert [m_count(grid, 2, k) for k in (1, 2, 3)] == [3, 4, 5]
        assert [n_count(grid, 2, k) for k in (1, 2, 3)] == [3, 6, 6]
        assert [index_gap(grid, k) for k in (1, 2, 3)] == [0, 2, 1]

    @pytest.mark.parametrize("l, k", [(0, 1), (2, 0), (2, 4)])
    def test_index_range(self, l, k):
        with pytest.raises(DomainError) as exc_info:
            m_count(self.grid, l, k)
        assert exc_info.value.error_code == "INDEX_RANGE"
        with pytest.raises(DomainError):
            n_count(self.grid, l, k)


class TestIndexIdentities:
    """Exhaustive checks of the telescoping identities for n <= 5, degree <= 4."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_identities(self, n):
        for g in enumerate_grids(n, 4):
            for k in range(1, n + 1):
                assert n_count(g, 2, 1) + n_count(g, 3, k) == n_count(g, 2, k)
                assert g.get(2, k) + m_count(g, 3, k) == m_count(g, 2, k)
                gap = n_count(g, 2, k) - m_count(g, 2, k)
                assert gap >= 0
                assert gap == index_gap(g, k)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_count_matrices_match_counts(self, n):
        """Test that grids @ M reproduces m_count for every grid."""
        m_mat, n_mat = count_matrices(n)
        for g in enumerate_grids(n, 3):
            row = np.array(g.values, dtype=np.int64)
            assert list(row @ m_mat) == [m_count(g, 2, k) for k in range(1, n + 1)]
            assert list(row @ n_mat) == [n_count(g, 2, k) for k in range(1, n + 1)]

    def test_count_matrices_read_only(self):
        m_mat, _ = count_matrices(3)
        assert not m_mat.flags.writeable


class TestEnumeration:
    """Test cases for grid enumeration and compositions."""

    def test_two_variables(self):
        """Test n=2, max=2: three one-cell grids."""
        grids = list(enumerate_grids(2, 2))
        assert [g.values for g in grids] == [(0,), (1,), (2,)]

    def test_three_variables_degree_one(self):
        """Test n=3, max=1: the zero grid and three unit grids."""
        grids = list(enumerate_grids(3, 1))
        assert len(grids) == 4
        assert grids[0].total_degree == 0
        assert sorted(g.values for g in grids[1:]) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    def test_one_variable(self):
        """Test n=1: exactly one (empty) grid whatever the degree."""
        grids = list(enumerate_grids(1, 5))
        assert len(grids) == 1
        assert grids[0].values == ()

    def test_graded_order(self):
        degrees = [g.total_degree for g in enumerate_grids(4, 3)]
        assert degrees == sorted(degrees)

    @pytest.mark.parametrize("n, max_degree", [(0, 2), (3, -1)])
    def test_invalid_arguments(self, n, max_degree):
        with pytest.raises(DomainError):
            list(enumerate_grids(n, max_degree))

    def test_grid_count_formula(self):
        """Test that shells hold C(d + T - 1, T - 1) grids."""
        n = 4
        cells = cell_count(n)
        for degree in range(5):
            assert grid_shell(n, degree).shape == (
                math.comb(degree + cells - 1, cells - 1),
                cells,
            )

    def test_compositions_order(self):
        np.testing.assert_array_equal(compositions(2, 2), [[0, 2], [1, 1], [2, 0]])

    def test_compositions_edge_cases(self):
        assert compositions(0, 0).shape == (1, 0)
        assert compositions(3, 0).shape == (0, 0)
        assert not compositions(4, 3).flags.writeable

    def test_compositions_negative(self):
        with pytest.raises(DomainError):
            compositions(-1, 2)

    def test_grid_cells(self):
        assert grid_cells(3) == [(2, 2), (2, 3), (3, 3)]
        assert grid_cells(1) == []

"""Triangular multi-indices and the index counts of the decomposition formula.

A grid assigns a non-negative integer m_{i,j} to every cell 2 <= i <= j <= n.
The counts

    M_l(k, n) = sum_{i=l}^{k} m_{i,k} + sum_{i=k+1}^{n} m_{k+1,i}
    N_l(k, n) = sum_{i=l}^{k+1} sum_{j=i}^{n} m_{i,j}

are linear in the grid, so the counts of every grid in a shell are one
integer matrix product against count_matrices(n, l).
"""

from functools import lru_cache
from typing import Iterator, List, Tuple

import numpy as np

from .exceptions import DomainError
from .models import MultiIndexGrid


def grid_cells(n: int) -> List[Tuple[int, int]]:
    """Cells of an n-grid in canonical order (2,2), (2,3), ..., (n,n)."""
    return [(i, j) for i in range(2, n + 1) for j in range(i, n + 1)]


def cell_count(n: int) -> int:
    return n * (n - 1) // 2


def _check_counts_args(g: MultiIndexGrid, l: int, k: int) -> None:
    if l < 1:
        raise DomainError(
            f"lower index l must be positive, got {l}",
            error_code="INDEX_RANGE",
            parameter="l",
            value=l,
        )
    if not 1 <= k <= g.n:
        raise DomainError(
            f"k must satisfy 1 <= k <= n = {g.n}, got {k}",
            error_code="INDEX_RANGE",
            parameter="k",
            value=k,
        )


def m_count(g: MultiIndexGrid, l: int, k: int) -> int:
    """M_l(k, n); cells outside the triangle count as zero."""
    _check_counts_args(g, l, k)
    column = sum(g.get(i, k) for i in range(l, k + 1))
    row = sum(g.get(k + 1, i) for i in range(k + 1, g.n + 1))
    return column + row


def n_count(g: MultiIndexGrid, l: int, k: int) -> int:
    """N_l(k, n); cells outside the triangle count as zero."""
    _check_counts_args(g, l, k)
    return sum(g.get(i, j) for i in range(l, k + 2) for j in range(i, g.n + 1))


def index_gap(g: MultiIndexGrid, k: int) -> int:
    """sum_{i=2}^{k} (sum_{j=i}^{n} m_{i,j} - m_{i,k}), which equals N_2 - M_2 >= 0."""
    _check_counts_args(g, 2, k)
    return sum(
        sum(g.get(i, j) for j in range(i, g.n + 1)) - g.get(i, k)
        for i in range(2, k + 1)
    )


@lru_cache(maxsize=1024)
def compositions(total: int, parts: int) -> np.ndarray:
    """All ways to write total as an ordered sum of parts non-negative integers.

    Rows come in ascending lexicographic order. The returned array is cached
    and read-only.
    """
    if total < 0 or parts < 0:
        raise DomainError(
            f"compositions need non-negative total and parts, got {total}, {parts}",
            error_code="COMPOSITION_RANGE",
            parameter="total",
            value=total,
        )
    if parts == 0:
        arr = np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    elif parts == 1:
        arr = np.array([[total]], dtype=np.int64)
    else:
        blocks = []
        for first in range(total + 1):
            rest = compositions(total - first, parts - 1)
            block = np.empty((rest.shape[0], parts), dtype=np.int64)
            block[:, 0] = first
            block[:, 1:] = rest
            blocks.append(block)
        arr = np.concatenate(blocks)
    arr.setflags(write=False)
    return arr


def grid_shell(n: int, degree: int) -> np.ndarray:
    """Every n-grid of total degree `degree`, one row per grid in cell order."""
    return compositions(degree, cell_count(n))


def enumerate_grids(n: int, max_total_degree: int) -> Iterator[MultiIndexGrid]:
    """Yield all n-grids with total degree <= max_total_degree.

    Order is graded: by total degree, then lexicographic in cell order.
    """
    if n < 1:
        raise DomainError(
            f"n must be positive, got {n}",
            error_code="INDEX_RANGE",
            parameter="n",
            value=n,
        )
    if max_total_degree < 0:
        raise DomainError(
            f"maximum degree must be non-negative, got {max_total_degree}",
            error_code="INDEX_RANGE",
            parameter="max_total_degree",
            value=max_total_degree,
        )
    for degree in range(max_total_degree + 1):
        for row in grid_shell(n, degree):
            yield MultiIndexGrid(n, tuple(int(v) for v in row))


@lru_cache(maxsize=64)
def count_matrices(n: int, l: int = 2) -> Tuple[np.ndarray, np.ndarray]:
    """Integer matrices (T x n) so that grids @ M and grids @ N give M_l, N_l."""
    cells = grid_cells(n)
    m_mat = np.zeros((len(cells), n), dtype=np.int64)
    n_mat = np.zeros((len(cells), n), dtype=np.int64)
    for c in range(len(cells)):
        unit = [0] * len(cells)
        unit[c] = 1
        g = MultiIndexGrid(n, tuple(unit))
        for k in range(1, n + 1):
            m_mat[c, k - 1] = m_count(g, l, k)
            n_mat[c, k - 1] = n_count(g, l, k)
    m_mat.setflags(write=False)
    n_mat.setflags(write=False)
    return m_mat, n_mat

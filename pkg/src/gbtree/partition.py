"""Level partitions, equitability, characteristic and divisor matrices."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse

from .tree import BetheTree, DegreeSequence


class MalformedPartition(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LevelPartition:
    cells: tuple[np.ndarray, ...]

    @property
    def cell_sizes(self) -> tuple[int, ...]:
        return tuple(int(c.shape[0]) for c in self.cells)

    @property
    def vertex_count(self) -> int:
        return sum(self.cell_sizes)

    def __len__(self) -> int:
        return len(self.cells)


def level_partition(tree: BetheTree) -> LevelPartition:
    offsets = tree.level_offsets
    cells = tuple(
        np.arange(start, start + size, dtype=np.int64)
        for start, size in zip(offsets, tree.level_sizes)
    )
    return LevelPartition(cells)


def _cell_index(cells: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """Map vertex -> cell, rejecting overlaps, gaps and out-of-range ids."""
    owner = np.full(n, -1, dtype=np.int64)
    for j, cell in enumerate(cells):
        cell = np.asarray(cell, dtype=np.int64)
        if cell.size == 0:
            raise MalformedPartition(f"cell {j + 1} is empty")
        if cell.min() < 0 or cell.max() >= n:
            raise MalformedPartition(f"cell {j + 1} has a vertex outside 0..{n - 1}")
        if np.unique(cell).size != cell.size or (owner[cell] != -1).any():
            raise MalformedPartition(f"cell {j + 1} overlaps another cell")
        owner[cell] = j
    missing = np.flatnonzero(owner < 0)
    if missing.size:
        raise MalformedPartition(f"vertex {int(missing[0])} is in no cell")
    return owner


def characteristic_matrix(partition: LevelPartition | Sequence[Sequence[int]], n: int | None = None) -> sparse.csr_array:
    """n-by-k 0/1 matrix whose column j is the indicator vector of cell j."""
    cells = partition.cells if isinstance(partition, LevelPartition) else partition
    if n is None:
        n = sum(len(c) for c in cells)
    owner = _cell_index(cells, n)
    data = np.ones(n, dtype=np.int64)
    return sparse.csr_array((data, (np.arange(n), owner)), shape=(n, len(cells)))


def is_equitable(adj, partition: LevelPartition | Sequence[Sequence[int]]) -> tuple[bool, np.ndarray | None]:
    """Check equitability of ``partition`` for the graph with adjacency ``adj``.

    Returns ``(True, b)`` with the k-by-k table of neighbour counts ``b[i, j]``
    when every vertex of cell i has the same number of neighbours in cell j,
    and ``(False, None)`` otherwise. Works for any graph and any partition.
    """
    adj = sparse.csr_array(adj)
    n = adj.shape[0]
    cells = partition.cells if isinstance(partition, LevelPartition) else partition
    owner = _cell_index(cells, n)
    C = characteristic_matrix(cells, n)
    counts = (adj @ C).toarray()
    k = len(cells)
    table = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        rows = counts[owner == i]
        if not (rows == rows[0]).all():
            return False, None
        table[i] = rows[0]
    return True, table


def divisor_matrix(ds: DegreeSequence) -> np.ndarray:
    """Closed-form divisor matrix of the level partition of ``B(ds)``.

    Tridiagonal: ``b[0,1] = d_1``, ``b[i,i+1] = d_{i+1} - 1`` further down,
    ones on the subdiagonal (every non-root vertex has one parent).
    """
    k = ds.k
    B = np.zeros((k, k), dtype=np.int64)
    for i in range(k - 1):
        B[i, i + 1] = ds.children(i + 1)
        B[i + 1, i] = 1
    return B


def check_compatibility(A, C, B) -> bool:
    """Exact integer test of ``A C == C B``."""
    A = sparse.csr_array(A)
    C = sparse.csr_array(C)
    B = np.asarray(B)
    n, k = C.shape
    if A.shape != (n, n) or B.shape != (k, k):
        raise ValueError(
            f"dimension mismatch: A {A.shape}, C {C.shape}, B {B.shape}"
        )
    if not all(np.issubdtype(m.dtype, np.integer) for m in (A, C, B)):
        raise ValueError("check_compatibility needs integer matrices")
    lhs = (A @ C).toarray()
    rhs = C @ sparse.csr_array(B)
    return bool(np.array_equal(lhs, rhs.toarray()))


def check_similarity(B, cell_sizes: Sequence[int]) -> bool:
    """``b_ij |C_i| == b_ji |C_j|`` for all i, j.

    This is ``D B D^{-1} = B^T`` with ``D = diag(cell_sizes)``, cross-multiplied
    so no division happens. Python ints throughout.
    """
    rows = [[int(x) for x in row] for row in np.asarray(B, dtype=object)]
    sizes = [int(s) for s in cell_sizes]
    k = len(rows)
    if len(sizes) != k or any(len(r) != k for r in rows):
        raise ValueError("B must be square with one size per row")
    if any(s <= 0 for s in sizes):
        raise ValueError("cell sizes must be positive")
    return all(
        rows[i][j] * sizes[i] == rows[j][i] * sizes[j]
        for i in range(k)
        for j in range(i + 1, k)
    )


def divisor_to_json(B) -> str:
    return json.dumps([[int(x) for x in row] for row in np.asarray(B)])


def divisor_to_text(B) -> str:
    rows = [[str(int(x)) for x in row] for row in np.asarray(B)]
    width = max(len(s) for row in rows for s in row)
    return "".join(" ".join(s.rjust(width) for s in row) + "\n" for row in rows)

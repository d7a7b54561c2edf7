"""Generalized Bethe trees.

A generalized Bethe tree ``B(d_1, ..., d_{k-1})`` has ``k`` levels; the root
(level 1) has ``d_1`` children and every vertex at level ``i`` (``2 <= i < k``)
has degree ``d_i``, i.e. ``d_i - 1`` children. Level ``k`` holds the leaves.

Vertices are numbered breadth-first: root is 0, levels are contiguous and the
children of a vertex are contiguous.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse

DEFAULT_MAX_VERTICES = 10**6
MAX_VERTICES_ENV = "GBT_MAX_VERTICES"


class InvalidDegreeSequence(ValueError):
    pass


class TreeTooLarge(ValueError):
    def __init__(self, projected: int, cap: int):
        super().__init__(
            f"tree would have {projected} vertices, above the cap of {cap} "
            f"(set {MAX_VERTICES_ENV} to raise it)"
        )
        self.projected = projected
        self.cap = cap


def max_vertices() -> int:
    """Tree-size cap, honouring the ``GBT_MAX_VERTICES`` override."""
    raw = os.environ.get(MAX_VERTICES_ENV)
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_VERTICES_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{MAX_VERTICES_ENV} must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]

    def __post_init__(self):
        degrees = tuple(self.degrees)
        if len(degrees) < 1:
            raise InvalidDegreeSequence("a degree sequence needs at least one entry (k >= 2)")
        for i, d in enumerate(degrees, start=1):
            if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
                raise InvalidDegreeSequence(f"d_{i} = {d!r} is not an integer")
            if d < 2:
                raise InvalidDegreeSequence(f"d_{i} = {d} is below 2")
        object.__setattr__(self, "degrees", tuple(int(d) for d in degrees))

    @classmethod
    def parse(cls, text: str) -> "DegreeSequence":
        """Parse ``"5,3,5,3,2"``."""
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(p == "" for p in parts):
            raise InvalidDegreeSequence(f"cannot parse degree sequence {text!r}")
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            if isinstance(exc, InvalidDegreeSequence):
                raise
            raise InvalidDegreeSequence(f"cannot parse degree sequence {text!r}") from None

    @property
    def k(self) -> int:
        """Number of levels."""
        return len(self.degrees) + 1

    def children(self, level: int) -> int:
        """Children per vertex at 1-based ``level``."""
        if level == 1:
            return self.degrees[0]
        if level < self.k:
            return self.degrees[level - 1] - 1
        return 0

    def __str__(self) -> str:
        return ",".join(map(str, self.degrees))


@dataclass(frozen=True)
class TreeClass:
    """One of ``star``, ``bethe``, ``quasi-regular`` or ``general``."""

    kind: str
    d: int | None = None

    def __str__(self) -> str:
        return self.kind if self.d is None else f"{self.kind}({self.d})"


def classify(ds: DegreeSequence) -> TreeClass:
    if ds.k == 2:
        return TreeClass("star", ds.degrees[0])
    d1, rest = ds.degrees[0], ds.degrees[1:]
    if all(d == d1 + 1 for d in rest):
        return TreeClass("bethe", d1)
    if all(d == d1 for d in rest):
        return TreeClass("quasi-regular", d1)
    return TreeClass("general")


def bethe_degrees(d: int, k: int) -> DegreeSequence:
    """Degree sequence of the ordinary Bethe tree ``B_{d,k}``."""
    if k < 2:
        raise InvalidDegreeSequence(f"k = {k} is below 2")
    return DegreeSequence((d,) + (d + 1,) * (k - 2))


def quasi_regular_degrees(d: int, k: int) -> DegreeSequence:
    """Degree sequence of the quasi-regular complete tree ``Q_{d,k}``."""
    if k < 2:
        raise InvalidDegreeSequence(f"k = {k} is below 2")
    return DegreeSequence((d,) * (k - 1))


def counterexample_degrees(k: int) -> DegreeSequence:
    """``(5, k-3, 5, 3, 2, ..., 2)`` with ``k - 5`` trailing twos, for even ``k >= 6``."""
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise ValueError(f"k must be an integer, got {k!r}")
    if k < 6 or k % 2:
        raise ValueError(f"the counterexample family needs even k >= 6, got k = {k}")
    return DegreeSequence((5, k - 3, 5, 3) + (2,) * (k - 5))


def level_sizes(ds: DegreeSequence) -> list[int]:
    sizes = [1]
    for level in range(1, ds.k):
        sizes.append(sizes[-1] * ds.children(level))
    return sizes


def vertex_count(ds: DegreeSequence) -> int:
    return sum(level_sizes(ds))


def check_size(ds: DegreeSequence, cap: int | None = None) -> int:
    """Return the projected vertex count, raising :class:`TreeTooLarge` above ``cap``."""
    cap = max_vertices() if cap is None else cap
    n = vertex_count(ds)
    if n > cap:
        raise TreeTooLarge(n, cap)
    return n


@dataclass(frozen=True, eq=False)
class BetheTree:
    degree_sequence: DegreeSequence
    level_sizes: tuple[int, ...]
    # (n - 1, 2) array of (parent, child) pairs in BFS order
    edges: np.ndarray
    # 0-based level index per vertex
    level_of: np.ndarray

    @property
    def vertex_count(self) -> int:
        return int(self.level_of.shape[0])

    @property
    def k(self) -> int:
        return self.degree_sequence.k

    @property
    def level_offsets(self) -> list[int]:
        """First vertex id of each level."""
        return [0] + list(np.cumsum(self.level_sizes[:-1]).tolist())

    def edge_list_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges.tolist())

    def to_dict(self) -> dict:
        return {
            "degrees": list(self.degree_sequence.degrees),
            "level_sizes": list(self.level_sizes),
            "edges": self.edges.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def build_tree(ds: DegreeSequence, cap: int | None = None) -> BetheTree:
    n = check_size(ds, cap)
    sizes = level_sizes(ds)
    level_of = np.repeat(np.arange(ds.k, dtype=np.int64), sizes)

    parents = []
    children = []
    start = 0
    for level in range(1, ds.k):
        size = sizes[level - 1]
        c = ds.children(level)
        parent_ids = np.arange(start, start + size, dtype=np.int64)
        first_child = start + size
        parents.append(np.repeat(parent_ids, c))
        children.append(np.arange(first_child, first_child + size * c, dtype=np.int64))
        start = first_child
    edges = np.column_stack([np.concatenate(parents), np.concatenate(children)])
    assert edges.shape[0] == n - 1
    return BetheTree(ds, tuple(sizes), edges, level_of)


def adjacency(tree: BetheTree) -> sparse.csr_array:
    """Symmetric 0/1 adjacency matrix in CSR form."""
    n = tree.vertex_count
    u, v = tree.edges[:, 0], tree.edges[:, 1]
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    data = np.ones(rows.shape[0], dtype=np.int64)
    return sparse.csr_array((data, (rows, cols)), shape=(n, n))


def adjacency_from_edges(n: int, edges: Sequence[tuple[int, int]]) -> sparse.csr_array:
    """Adjacency of an arbitrary simple graph, for feeding the partition checks."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    data = np.ones(rows.shape[0], dtype=np.int64)
    return sparse.csr_array((data, (rows, cols)), shape=(n, n))

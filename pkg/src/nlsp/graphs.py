"""Graph representation and the matrices derived from it.

Vertices are dense indices 0..n-1.  Matrices use sparse triplet storage with
deterministic ordering; dense numpy conversion happens only at the eigensolver
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np

EdgeInput = tuple[int, int] | tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """A simple weighted graph with canonical 0..n-1 vertex labels.

    Undirected edges are stored with u < v.  No self-loops, no duplicate
    edges, strictly positive weights.  A directed graph may contain both
    (u, v) and (v, u); families that forbid bi-directed pairs enforce that
    at generation time.
    """

    n_vertices: int
    edges: tuple[tuple[int, int, float], ...]
    directed: bool = False

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        seen: set[tuple[int, int]] = set()
        for u, v, w in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range for {self.n_vertices} vertices")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if w <= 0:
                raise ValueError(f"non-positive weight {w} on edge ({u},{v})")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add(key)
            if not self.directed and u > v:
                raise ValueError("undirected edges must be stored with u < v")

    @staticmethod
    def from_edges(n_vertices: int, edges: Iterable[EdgeInput], directed: bool = False) -> "Graph":
        """Build a graph, normalizing edge tuples and defaulting weights to 1."""
        out: list[tuple[int, int, float]] = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if not directed and u > v:
                u, v = v, u
            out.append((u, v, w))
        return Graph(n_vertices, tuple(out), directed)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


class SymmetricMatrix:
    """Real symmetric matrix in sparse triplet form, upper-triangle storage."""

    def __init__(self, order: int, entries: dict[tuple[int, int], float]):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        data: dict[tuple[int, int], float] = {}
        for (i, j), v in entries.items():
            if not (0 <= i < order and 0 <= j < order):
                raise ValueError(f"entry ({i},{j}) out of range")
            key = (i, j) if i <= j else (j, i)
            if key in data and data[key] != v:
                raise ValueError(f"conflicting values for symmetric entry {key}")
            if v != 0.0:
                data[key] = v
        self._data = data

    def entry(self, i: int, j: int) -> float:
        key = (i, j) if i <= j else (j, i)
        return self._data.get(key, 0.0)

    def items(self) -> Iterator[tuple[int, int, float]]:
        """Upper-triangle entries in deterministic (row, col) order."""
        for (i, j) in sorted(self._data):
            yield i, j, self._data[(i, j)]

    def row_nnz(self) -> list[int]:
        counts = [0] * self.order
        for i, j, _ in self.items():
            counts[i] += 1
            if i != j:
                counts[j] += 1
        return counts

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.order, self.order))
        for i, j, v in self.items():
            dense[i, j] = v
            dense[j, i] = v
        return dense

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SymmetricMatrix)
            and self.order == other.order
            and self._data == other._data
        )


class RectMatrix:
    """Real rectangular matrix in sparse triplet form."""

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], float]):
        if rows < 1 or cols < 1:
            raise ValueError("dimensions must be >= 1")
        self.rows = rows
        self.cols = cols
        data: dict[tuple[int, int], float] = {}
        for (i, j), v in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i},{j}) out of range")
            if v != 0.0:
                data[(i, j)] = v
        self._data = data

    def entry(self, i: int, j: int) -> float:
        return self._data.get((i, j), 0.0)

    def items(self) -> Iterator[tuple[int, int, float]]:
        for (i, j) in sorted(self._data):
            yield i, j, self._data[(i, j)]

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols))
        for i, j, v in self.items():
            dense[i, j] = v
        return dense


def adjacency_matrix(g: Graph) -> SymmetricMatrix:
    """Weighted adjacency matrix Q with zero diagonal (undirected only)."""
    if g.directed:
        raise ValueError("adjacency matrix is defined for undirected graphs")
    return SymmetricMatrix(g.n_vertices, {(u, v): w for u, v, w in g.edges})


def degree_matrix(g: Graph) -> SymmetricMatrix:
    """Diagonal matrix of weighted degrees (undirected only)."""
    if g.directed:
        raise ValueError("degree matrix is defined for undirected graphs")
    deg = [0.0] * g.n_vertices
    for u, v, w in g.edges:
        deg[u] += w
        deg[v] += w
    return SymmetricMatrix(g.n_vertices, {(i, i): d for i, d in enumerate(deg)})


def laplacian(g: Graph) -> SymmetricMatrix:
    """Weighted Laplacian L = D - Q (undirected only)."""
    if g.directed:
        raise ValueError("laplacian is defined for undirected graphs")
    entries: dict[tuple[int, int], float] = {}
    deg = [0.0] * g.n_vertices
    for u, v, w in g.edges:
        deg[u] += w
        deg[v] += w
        entries[(u, v)] = -w
    for i, d in enumerate(deg):
        if d != 0.0:
            entries[(i, i)] = d
    return SymmetricMatrix(g.n_vertices, entries)


def incidence_matrix(g: Graph) -> RectMatrix:
    """Vertex-edge incidence matrix B: -1 at the initial vertex of each edge,
    +1 at the terminal vertex, columns in stored edge order (directed only)."""
    if not g.directed:
        raise ValueError("incidence matrix is defined for directed graphs")
    entries: dict[tuple[int, int], float] = {}
    for col, (u, v, _) in enumerate(g.edges):
        entries[(u, col)] = -1.0
        entries[(v, col)] = 1.0
    return RectMatrix(g.n_vertices, max(g.n_edges, 1), entries)


def hermitian_dilation(b: RectMatrix) -> SymmetricMatrix:
    """Symmetric block matrix [[0, B], [B^T, 0]] of order rows + cols."""
    entries = {(i, b.rows + j): v for i, j, v in b.items()}
    return SymmetricMatrix(b.rows + b.cols, entries)


def next_power_of_two(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def pad_to_power_of_two(m: SymmetricMatrix, fill: float) -> SymmetricMatrix:
    """Extend to the next power-of-two order with a fill * identity block.

    The caller is responsible for choosing fill inside the nonzero spectral
    range when the condition number must be preserved.
    """
    if fill <= 0:
        raise ValueError("fill must be positive")
    target = next_power_of_two(m.order)
    if target == m.order:
        return m
    entries = {(i, j): v for i, j, v in m.items()}
    for k in range(m.order, target):
        entries[(k, k)] = fill
    return SymmetricMatrix(target, entries)


def write_edge_list(g: Graph, fh: IO[str]) -> None:
    """Write the exchange format: header 'directed|undirected n', then 'u v w' lines."""
    fh.write(f"{'directed' if g.directed else 'undirected'} {g.n_vertices}\n")
    for u, v, w in g.edges:
        fh.write(f"{u} {v} {w!r}\n")


def read_edge_list(fh: IO[str]) -> Graph:
    header = fh.readline().split()
    if len(header) != 2 or header[0] not in ("directed", "undirected"):
        raise ValueError("expected header 'directed|undirected n_vertices'")
    directed = header[0] == "directed"
    n = int(header[1])
    edges: list[EdgeInput] = []
    for line in fh:
        parts = line.split()
        if not parts:
            continue
        u, v = int(parts[0]), int(parts[1])
        w = float(parts[2]) if len(parts) > 2 else 1.0
        edges.append((u, v, w))
    return Graph.from_edges(n, edges, directed)

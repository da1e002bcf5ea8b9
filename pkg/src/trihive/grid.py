"""Torus geometry: vertex indexing, rhombus edges by class, square partitions.

Vertices of the side-n torus are pairs (i, j) with both coordinates mod n,
flattened row-major as i*n + j.  The two lattice generators map to (1, 0) and
(0, 1); their sum (1, 1) is the third lattice axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, TrihiveError

# Offsets (a, b, c, d) of the class-r rhombus quadruple relative to its anchor.
# The alternating sum -f(a)+f(b)-f(c)+f(d) over these four vertices is the
# class-r second difference used throughout the package.
EDGE_OFFSETS = {
    0: ((0, 0), (1, 0), (2, 1), (1, 1)),
    1: ((0, 0), (0, 1), (-1, 1), (-1, 0)),
    2: ((0, 0), (-1, -1), (-1, -2), (0, -1)),
}


@dataclass(frozen=True)
class TorusGrid:
    """The n x n vertex set with wrap-around arithmetic."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise TrihiveError(f"grid side must be at least 2, got {self.n}")

    @property
    def vertex_count(self) -> int:
        return self.n * self.n

    def flat(self, i: int, j: int) -> int:
        """Row-major flat index of (i, j), wrapping both coordinates."""
        return (i % self.n) * self.n + (j % self.n)

    def coords(self, idx: int) -> tuple[int, int]:
        return divmod(idx % self.vertex_count, self.n)

    def neighbor(self, i: int, j: int, di: int, dj: int) -> tuple[int, int]:
        return ((i + di) % self.n, (j + dj) % self.n)


def build_grid(n: int) -> TorusGrid:
    return TorusGrid(n)


@dataclass(frozen=True)
class RhombusEdge:
    """One class-r rhombus, anchored at (k, l), with its vertex quadruple.

    The quadruple carries signs (-, +, -, +) on (a, b, c, d) in the second
    difference.
    """

    r: int
    anchor: tuple[int, int]
    a: tuple[int, int]
    b: tuple[int, int]
    c: tuple[int, int]
    d: tuple[int, int]


def enumerate_edges(grid: TorusGrid, r: int) -> list[RhombusEdge]:
    """All n^2 class-r rhombi, one per anchor."""
    if r not in (0, 1, 2):
        raise TrihiveError(f"edge class must be 0, 1 or 2, got {r}")
    n = grid.n
    offs = EDGE_OFFSETS[r]
    edges = []
    for k in range(n):
        for l in range(n):
            quad = tuple(((k + di) % n, (l + dj) % n) for di, dj in offs)
            edges.append(RhombusEdge(r, (k, l), *quad))
    return edges


@dataclass(frozen=True)
class SquareBlock:
    """One n1 x n1 square of a partition; `index` is 1-based (i, j)."""

    index: tuple[int, int]
    cells: np.ndarray        # flat vertex indices, row-major within the block
    anchor: tuple[int, int]  # corner vertex o + (i*n1, j*n1) mod n


@dataclass(frozen=True)
class SquarePartition:
    """Square tiling of an n2 x n2 window plus two-layer boundary bookkeeping.

    n2 is the largest multiple of n1 at most n.  The window covers coordinates
    o + {1..n2}^2 (mod n); whatever is left over is the residual strip, folded
    into the boundary set.  Within the window, the cells whose local
    coordinate is 0 or 1 mod n1 form the double separating layers between
    neighboring squares.
    """

    grid: TorusGrid
    n1: int
    n2: int
    offset: tuple[int, int]
    blocks: tuple[SquareBlock, ...]
    boundary: frozenset = field(repr=False)
    residual: frozenset = field(repr=False)


def square_partition(grid: TorusGrid, n1: int, offset: tuple[int, int] = (0, 0)) -> SquarePartition:
    n = grid.n
    if n1 > n:
        raise PreconditionError(f"coarse side n1={n1} exceeds grid side n={n}")
    if n1 <= 2:
        raise PreconditionError(f"coarse side n1 must exceed 2, got {n1}")
    o1, o2 = offset[0] % n, offset[1] % n
    n2 = (n // n1) * n1
    nb = n2 // n1

    blocks = []
    covered = set()
    for bi in range(1, nb + 1):
        for bj in range(1, nb + 1):
            cells = []
            for x in range((bi - 1) * n1 + 1, bi * n1 + 1):
                for y in range((bj - 1) * n1 + 1, bj * n1 + 1):
                    cells.append(grid.flat(o1 + x, o2 + y))
            covered.update(cells)
            anchor = ((o1 + bi * n1) % n, (o2 + bj * n1) % n)
            blocks.append(SquareBlock((bi, bj), np.array(cells, dtype=np.intp), anchor))

    residual = frozenset(range(n * n)) - covered

    # Double layers: local coordinate (relative to the offset) is 0 or 1 mod n1.
    boundary = set(residual)
    for v in covered:
        i, j = grid.coords(v)
        li, lj = (i - o1) % n, (j - o2) % n
        if li % n1 in (0, 1) or lj % n1 in (0, 1):
            boundary.add(v)

    return SquarePartition(grid, n1, n2, (o1, o2), tuple(blocks),
                           frozenset(boundary), residual)

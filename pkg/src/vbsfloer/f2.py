"""Linear algebra over the two-element field, rows packed into int bitsets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class BoundarySquareError(ArithmeticError):
    """The boundary map does not square to zero."""


@dataclass(frozen=True)
class F2Matrix:
    """Bit ``j`` of ``rows[i]`` is entry ``(i, j)``."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], ncols: int | None = None) -> F2Matrix:
        ncols = ncols if ncols is not None else (len(dense[0]) if dense else 0)
        rows = tuple(sum(1 << j for j, x in enumerate(row) if x % 2) for row in dense)
        return cls(len(dense), ncols, rows)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int]]) -> F2Matrix:
        """Build from (row, col) pairs; repeated pairs cancel."""
        rows = [0] * nrows
        for i, j in entries:
            rows[i] ^= 1 << j
        return cls(nrows, ncols, tuple(rows))

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_dense(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for row in self.rows:
            acc = 0
            k = 0
            while row:
                if row & 1:
                    acc ^= other.rows[k]
                row >>= 1
                k += 1
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def permuted(self, perm: Sequence[int]) -> F2Matrix:
        """Relabel basis ``i -> perm[i]`` on both sides of a square matrix."""
        rows = [0] * self.nrows
        for i, row in enumerate(self.rows):
            new = 0
            for j in range(self.ncols):
                if (row >> j) & 1:
                    new |= 1 << perm[j]
            rows[perm[i]] = new
        return F2Matrix(self.nrows, self.ncols, tuple(rows))


def f2_rank(m: F2Matrix | Sequence[int]) -> int:
    """Rank by elimination on the lowest set bit of each pivot row."""
    rows = list(m.rows if isinstance(m, F2Matrix) else m)
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            low = row & -row
            if low in pivots:
                row ^= pivots[low]
            else:
                pivots[low] = row
                rank += 1
                break
    return rank


@dataclass(frozen=True)
class ChainComplexF2:
    """Generators with a boundary map; entry ``(i, j)`` is the coefficient of
    generator ``i`` in the boundary of generator ``j``."""

    generators: tuple
    boundary: F2Matrix

    def __len__(self) -> int:
        return len(self.generators)

    def squares_to_zero(self) -> bool:
        return (self.boundary @ self.boundary).is_zero()


def homology_dim(cc: ChainComplexF2) -> int:
    if not cc.squares_to_zero():
        raise BoundarySquareError("boundary map does not square to zero")
    return len(cc.generators) - 2 * f2_rank(cc.boundary)

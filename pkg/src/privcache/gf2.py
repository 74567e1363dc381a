"""Bit-packed linear algebra over GF(2).

Each row of a :class:`BitMatrix` is a Python int.  Column 0 is the most
significant bit of a row, so ``int("1010", 2)`` is the row with ones in
columns 0 and 2 of a 4-column matrix.  This matches the bit-string
serialization used in the scheme JSON format.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

MAX_COLS = 64


class DimensionError(ValueError):
    """Raised when matrix or vector widths do not line up."""


def _check_cols(cols: int) -> None:
    if not 1 <= cols <= MAX_COLS:
        raise DimensionError(f"column count {cols} outside [1, {MAX_COLS}]")


@dataclass(frozen=True)
class BitMatrix:
    """Immutable GF(2) matrix stored as one int per row."""

    cols: int
    data: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        _check_cols(self.cols)
        object.__setattr__(self, "data", tuple(int(r) for r in self.data))
        limit = 1 << self.cols
        for r in self.data:
            if not 0 <= r < limit:
                raise DimensionError(f"row {r:#x} does not fit in {self.cols} columns")

    @property
    def rows(self) -> int:
        return len(self.data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(cols, (0,) * rows)

    @classmethod
    def empty(cls, cols: int) -> BitMatrix:
        return cls(cols, ())

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, tuple(unit(n, i) for i in range(n)))

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer width of an empty matrix")
            cols = len(rows[0])
        packed = []
        for r in rows:
            if len(r) != cols:
                raise DimensionError(f"row of length {len(r)} in a {cols}-column matrix")
            v = 0
            for bit in r:
                if bit not in (0, 1):
                    raise ValueError(f"entry {bit!r} is not a GF(2) element")
                v = (v << 1) | bit
            packed.append(v)
        return cls(cols, tuple(packed))

    @classmethod
    def from_strings(cls, rows: Sequence[str], cols: int | None = None) -> BitMatrix:
        """Parse rows written as bit strings, most significant column first."""
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer width of an empty matrix")
            cols = len(rows[0])
        packed = []
        for s in rows:
            if len(s) != cols or any(ch not in "01" for ch in s):
                raise ValueError(f"malformed bit string {s!r} (expected {cols} chars of 0/1)")
            packed.append(int(s, 2))
        return cls(cols, tuple(packed))

    def to_strings(self) -> list[str]:
        return [format(r, f"0{self.cols}b") for r in self.data]

    def to_lists(self) -> list[list[int]]:
        return [[int(ch) for ch in s] for s in self.to_strings()]

    def bit(self, i: int, j: int) -> int:
        return (self.data[i] >> (self.cols - 1 - j)) & 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.data)

    def __repr__(self) -> str:
        return f"BitMatrix({self.cols}, {self.to_strings()})"


def unit(cols: int, j: int) -> int:
    """Row with a single one in column ``j``."""
    if not 0 <= j < cols:
        raise DimensionError(f"column {j} outside a {cols}-column row")
    return 1 << (cols - 1 - j)


def row_from_columns(cols: int, indices: Iterable[int]) -> int:
    """XOR of the unit rows at ``indices``."""
    v = 0
    for j in indices:
        v ^= unit(cols, j)
    return v


def _eliminate(data: Iterable[int], cols: int) -> list[int]:
    """Fully reduced echelon basis, pivots in increasing column order."""
    basis: list[int] = []
    for r in data:
        for b in basis:
            if r ^ b < r:
                r ^= b
        if r:
            # keep the basis fully reduced against the new pivot
            top = r.bit_length() - 1
            basis = [b ^ r if (b >> top) & 1 else b for b in basis]
            basis.append(r)
            basis.sort(reverse=True)
    return basis


def rank(m: BitMatrix) -> int:
    return len(_eliminate(m.data, m.cols))


def rref(m: BitMatrix) -> BitMatrix:
    """Reduced row-echelon form with zero rows dropped."""
    return BitMatrix(m.cols, tuple(_eliminate(m.data, m.cols)))


def stack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.cols:
        raise DimensionError(f"cannot stack {a.cols}-column and {b.cols}-column matrices")
    return BitMatrix(a.cols, a.data + b.data)


def in_row_span(v: int, m: BitMatrix) -> bool:
    if not 0 <= v < (1 << m.cols):
        raise DimensionError(f"vector does not fit in {m.cols} columns")
    for b in _eliminate(m.data, m.cols):
        if v ^ b < v:
            v ^= b
    return v == 0


def reduce_against(v: int, basis: Sequence[int]) -> int:
    """Residue of ``v`` modulo an rref basis (as returned by :func:`rref`)."""
    for b in basis:
        if v ^ b < v:
            v ^= b
    return v


def gaussian_binomial(n: int, k: int, q: int = 2) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_row_spaces(cols: int, dim: int) -> Iterator[BitMatrix]:
    """Yield one rref representative per ``dim``-dimensional subspace of GF(2)^cols.

    Representatives are produced pivot set by pivot set (lexicographic over
    column combinations), then over the free entries in counting order.
    """
    if not 0 <= dim <= cols <= 16 or cols < 1:
        raise DimensionError(f"need 0 <= dim <= cols <= 16, got dim={dim}, cols={cols}")
    for pivots in combinations(range(cols), dim):
        pivot_set = set(pivots)
        # free slots of each pivot row: non-pivot columns to its right
        free = [[c for c in range(p + 1, cols) if c not in pivot_set] for p in pivots]
        slots = [(i, c) for i, cs in enumerate(free) for c in cs]
        for bits in product((0, 1), repeat=len(slots)):
            rows = [unit(cols, p) for p in pivots]
            for (i, c), b in zip(slots, bits):
                if b:
                    rows[i] |= unit(cols, c)
            yield BitMatrix(cols, tuple(rows))

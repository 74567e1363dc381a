"""Placement delivery arrays: validation, text format, and the induced scheme."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .gf2 import BitMatrix, unit
from .scheme import Scheme, SchemeParams, Violation

STAR = None


class PdaFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Pda:
    """A (K, f, Z, S) array; ``cells[j][k]`` is ``None`` for a star."""

    users: int
    subpack: int
    stars: int
    symbols: int
    cells: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(tuple(r) for r in self.cells))

    def positions(self, s: int) -> list[tuple[int, int]]:
        """(row, column) cells holding integer ``s``, row-major."""
        return [
            (j, k)
            for j, row in enumerate(self.cells)
            for k, v in enumerate(row)
            if v == s
        ]


def validate_pda(p: Pda) -> list[Violation]:
    out = []
    if len(p.cells) != p.subpack or any(len(r) != p.users for r in p.cells):
        return [Violation("pda-shape", detail=f"array is not {p.subpack}x{p.users}")]
    for j, k in product(range(p.subpack), range(p.users)):
        v = p.cells[j][k]
        if v is not STAR and not 0 <= v < p.symbols:
            out.append(Violation("pda-shape", detail=f"cell ({j},{k}) holds {v}, outside [0,{p.symbols})"))
    for k in range(p.users):
        z = sum(1 for j in range(p.subpack) if p.cells[j][k] is STAR)
        if z != p.stars:
            out.append(Violation("pda-D1", user=k, detail=f"column {k} has {z} stars, expected {p.stars}"))
    for s in range(p.symbols):
        cells = p.positions(s)
        if not cells:
            out.append(Violation("pda-D2", detail=f"integer {s} does not occur"))
        for a in range(len(cells)):
            for b in range(a + 1, len(cells)):
                (j1, k1), (j2, k2) = cells[a], cells[b]
                if j1 == j2 or k1 == k2:
                    out.append(Violation("pda-D3", detail=f"integer {s} repeats in a row or column at {cells[a]}, {cells[b]}"))
                elif p.cells[j1][k2] is not STAR or p.cells[j2][k1] is not STAR:
                    out.append(Violation("pda-D3", detail=f"integer {s} at {cells[a]}, {cells[b]}: crossing cells not both stars"))
    return out


def parse_pda(text: str) -> Pda:
    """Parse the ``K f Z S`` header followed by f rows of K cells."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise PdaFormatError("empty PDA document")
    try:
        K, f, Z, S = (int(x) for x in lines[0])
    except ValueError:
        raise PdaFormatError(f"line 1: header must be 'K f Z S', got {' '.join(lines[0])!r}") from None
    if len(lines) - 1 != f:
        raise PdaFormatError(f"expected {f} array rows, found {len(lines) - 1}")
    rows = []
    for n, parts in enumerate(lines[1:], start=2):
        if len(parts) != K:
            raise PdaFormatError(f"line {n}: expected {K} cells, found {len(parts)}")
        row = []
        for tok in parts:
            if tok == "*":
                row.append(STAR)
            elif tok.isdigit():
                row.append(int(tok))
            else:
                raise PdaFormatError(f"line {n}: bad cell {tok!r}")
        rows.append(tuple(row))
    return Pda(K, f, Z, S, tuple(rows))


def format_pda(p: Pda) -> str:
    lines = [f"{p.users} {p.subpack} {p.stars} {p.symbols}"]
    for row in p.cells:
        lines.append(" ".join("*" if v is STAR else str(v) for v in row))
    return "\n".join(lines) + "\n"


def build_from_pda(p: Pda, files: int) -> Scheme:
    """Deterministic scheme: stars are cached subfiles, integers are XOR rows."""
    bad = validate_pda(p)
    if bad:
        raise ValueError(f"invalid PDA: {bad[0].detail}")
    params = SchemeParams(p.users, files, p.subpack)
    w, f = params.width, p.subpack
    caches = []
    for k in range(p.users):
        starred = [j for j in range(f) if p.cells[j][k] is STAR]
        rows = [unit(w, n * f + j) for n in range(files) for j in starred]
        caches.append((BitMatrix(w, tuple(rows)),))

    tx = {}
    for d in product(range(files), repeat=p.users):
        rows = []
        for s in range(p.symbols):
            r = 0
            for j, k in p.positions(s):
                r ^= unit(w, d[k] * f + j)
            rows.append(r)
        tx[(d, (0,) * p.users)] = (BitMatrix(w, tuple(rows)),)
    return Scheme(params, tuple(caches), tx, f"pda({p.users},{p.subpack},{p.stars},{p.symbols}) N={files}")


# (6, 4, 2, 4) array: six users, four subfiles, two stars per column.
EXAMPLE_PDA = Pda(
    6,
    4,
    2,
    4,
    (
        (STAR, 1, STAR, 2, STAR, 0),
        (0, STAR, STAR, 3, 1, STAR),
        (STAR, 3, 0, STAR, 2, STAR),
        (2, STAR, 1, STAR, STAR, 3),
    ),
)

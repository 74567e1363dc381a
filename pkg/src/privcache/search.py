"""Exhaustive GF(2) searches behind the two small impossibility results.

``search_sub2``: two subfiles per file, M = 1, one transmission row
(R = 1/2).  Caches range over the nine reduced block-diagonal forms; any
rank-2 cache whose per-file blocks both have rank 1 is row-equivalent to
exactly one of them.

``search_sub3_uncoded``: three subfiles per file, M = 1, two transmission
rows (R = 2/3), every cache an uncoded 3-subset of the six symbols, two
uniformly chosen options per user.  A cell is feasible when some
transmission row space serves both assigned caches and, for each user,
lets one of its two options decode each file.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .gf2 import BitMatrix, enumerate_row_spaces, rank, rref, row_from_columns
from .scheme import SchemeParams, decodable_files, decodes

ProgressFn = Callable[[int], None]

SUB2_PARAMS = SchemeParams(2, 2, 2)
SUB3_PARAMS = SchemeParams(2, 2, 3)
A, B = 0, 1
PROGRESS_EVERY = 10**6

SUB2_SCOPE = (
    "deterministic caches in reduced block form (C_A, C_B of rank 1), one-row "
    "transmissions for demands AA and AB over GF(2); privacy enters only through "
    "the necessary condition that both file halves of the AA transmission are nonzero"
)
SUB3_SCOPE = (
    "uncoded caches (3 of the 6 subfiles), exactly two uniform options per user, "
    "two-dimensional transmission row spaces over GF(2), all 16 (demand, keys) cells; "
    "privacy enters through the per-cell weak condition (each file decodable by some "
    "option of each user); sub-lemma checks hold for any number of options"
)


@dataclass
class SearchReport:
    name: str
    candidates_examined: int = 0
    feasible_found: int = 0
    witnesses: list = field(default_factory=list)
    sub_lemma_checks: dict = field(default_factory=dict)
    elapsed: float = 0.0
    scope: str = ""
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "candidatesExamined": self.candidates_examined,
            "feasibleFound": self.feasible_found,
            "witnesses": self.witnesses,
            "subLemmaChecks": self.sub_lemma_checks,
            "elapsedSeconds": round(self.elapsed, 3),
            "scope": self.scope,
            "params": self.params,
        }

    def to_json(self, *, timing: bool = True) -> str:
        doc = self.to_dict()
        if not timing:
            doc.pop("elapsedSeconds")
        return json.dumps(doc, indent=2) + "\n"


class _Progress:
    def __init__(self, fn: ProgressFn | None):
        self.fn = fn
        self.count = 0
        self.next_mark = PROGRESS_EVERY

    def add(self, n: int) -> None:
        self.count += n
        while self.fn is not None and self.count >= self.next_mark:
            self.fn(self.next_mark)
            self.next_mark += PROGRESS_EVERY


# -- subpacketization 2 ----------------------------------------------------------------

_NONZERO_PAIRS = ((0, 1), (1, 0), (1, 1))


def enumerate_reduced_caches() -> list[BitMatrix]:
    """All 2x4 caches [[a, b, 0, 0], [0, 0, c, d]] with (a, b), (c, d) nonzero."""
    return [
        BitMatrix.from_lists([[a, b, 0, 0], [0, 0, c, d]])
        for (a, b), (c, d) in product(_NONZERO_PAIRS, repeat=2)
    ]


def _halves(row: int) -> tuple[int, int]:
    """(A half, B half) of a 4-column row, each as a 2-bit int."""
    return row >> 2, row & 0b11


def _block_ranks(m: BitMatrix) -> tuple[int, int]:
    a = BitMatrix(2, tuple(r >> 2 for r in m.data))
    b = BitMatrix(2, tuple(r & 0b11 for r in m.data))
    return rank(a), rank(b)


def search_sub2(privacy_condition: bool = True, progress: ProgressFn | None = None) -> SearchReport:
    start = time.perf_counter()
    rep = SearchReport("sub2", scope=SUB2_SCOPE, params={"privacyCondition": privacy_condition})
    prog = _Progress(progress)
    p = SUB2_PARAMS
    caches = enumerate_reduced_caches()
    for (i0, c0), (i1, c1) in product(enumerate(caches), repeat=2):
        for taa in range(16):
            rep.candidates_examined += 1
            prog.add(1)
            t = BitMatrix(4, (taa,))
            if not (decodes(c0, t, A, p) and decodes(c1, t, A, p)):
                continue
            ta, tb = _halves(taa)
            if privacy_condition and not (ta and tb):
                continue
            for tab in range(16):
                rep.candidates_examined += 1
                prog.add(1)
                u = BitMatrix(4, (tab,))
                if decodes(c0, u, A, p) and decodes(c1, u, B, p):
                    rep.witnesses.append(
                        {
                            "cacheIndices": [i0, i1],
                            "C0": c0.to_strings(),
                            "C1": c1.to_strings(),
                            "T_AA": format(taa, "04b"),
                            "T_AB": format(tab, "04b"),
                        }
                    )
    rep.feasible_found = len(rep.witnesses)
    rep.sub_lemma_checks = sub2_lemma_checks()
    if not privacy_condition:
        rep.sub_lemma_checks["control-witnesses-have-zero-T_AA_B"] = all(
            _halves(int(w["T_AA"], 2))[1] == 0 for w in rep.witnesses
        )
    rep.elapsed = time.perf_counter() - start
    return rep


def sub2_lemma_checks() -> dict[str, bool]:
    """Structural facts used by the two-subfile argument, each checked exhaustively."""
    p = SUB2_PARAMS
    reduced = enumerate_reduced_caches()
    reduced_forms = [rref(c) for c in reduced]
    all_caches = [
        BitMatrix(4, (r0, r1)) for r0, r1 in product(range(16), repeat=2)
    ]
    full = [c for c in all_caches if rank(c) == 2]
    rows = [BitMatrix(4, (v,)) for v in range(16)]

    # caches able to serve both files with one row each have rank-1 blocks
    rank_constraints = all(
        _block_ranks(c) == (1, 1)
        for c in full
        if any(decodes(c, t, A, p) for t in rows) and any(decodes(c, t, B, p) for t in rows)
    )
    # every such cache is row-equivalent to exactly one reduced form
    coverage = all(
        sum(rref(c) == r for r in reduced_forms) == 1
        for c in full
        if _block_ranks(c) == (1, 1)
    )
    # decoding file X <=> rank [C_X; T_X] = 2 and rank [C_Xbar; T_Xbar] = 1
    def rank_rule(c: BitMatrix, t: int, x: int) -> bool:
        own = BitMatrix(2, tuple(_halves(r)[x] for r in c.data) + (_halves(t)[x],))
        other = BitMatrix(2, tuple(_halves(r)[1 - x] for r in c.data) + (_halves(t)[1 - x],))
        return rank(own) == 2 and rank(other) == 1

    recovery = all(
        decodes(c, BitMatrix(4, (t,)), x, p) == rank_rule(c, t, x)
        for c in reduced
        for t in range(16)
        for x in (A, B)
    )
    # the A half of any row that lets a reduced cache decode A is nonzero
    a_half = all(
        _halves(t)[0] != 0
        for c in reduced
        for t in range(16)
        if decodes(c, BitMatrix(4, (t,)), A, p)
    )
    return {
        "rank-constraints": rank_constraints,
        "reduced-form-coverage": coverage,
        "recovery-rank-rule": recovery,
        "T_AA_A-nonzero": a_half,
    }


# -- subpacketization 3, uncoded caches --------------------------------------------

SYMBOLS = ("A0", "A1", "A2", "B0", "B1", "B2")


def uncoded_caches(restricted: bool = False) -> list[tuple[int, ...]]:
    """3-subsets of the six subfile symbols (column indices), lexicographic.

    ``restricted`` keeps only caches holding two subfiles of one file and one
    of the other.
    """
    out = list(combinations(range(6), 3))
    if restricted:
        out = [c for c in out if sum(1 for x in c if x < 3) in (1, 2)]
    return out


def uncoded_matrix(cache: Sequence[int]) -> BitMatrix:
    return BitMatrix(6, tuple(row_from_columns(6, [x]) for x in cache))


def cache_label(cache: Sequence[int]) -> str:
    return "{" + ",".join(SYMBOLS[x] for x in cache) + "}"


class _DecodeTable:
    """Bitsets over the 651 transmission spaces: which ones let a cache decode a file."""

    def __init__(self, caches: Sequence[BitMatrix]):
        self.spaces = list(enumerate_row_spaces(6, 2))
        self.n = len(self.spaces)
        self.bits = []
        for c in caches:
            per_file = [0, 0]
            for s, t in enumerate(self.spaces):
                for f in decodable_files(c, t, SUB3_PARAMS):
                    per_file[f] |= 1 << s
            self.bits.append(tuple(per_file))

    def covers(self, opts: Sequence[int]) -> int:
        """Spaces from which the option set jointly decodes every file."""
        out = (1 << self.n) - 1
        for f in (A, B):
            any_opt = 0
            for o in opts:
                any_opt |= self.bits[o][f]
            out &= any_opt
        return out


def _lowest(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


def _search_pairs(
    table: _DecodeTable,
    option_sets: Sequence[tuple[int, int]],
    first_indices: Iterable[int],
    prog: _Progress,
    privacy_condition: bool = True,
) -> tuple[int, list]:
    everything = (1 << table.n) - 1
    cover = [table.covers(s) if privacy_condition else everything for s in option_sets]
    cells = [(d, k) for d in product((A, B), repeat=2) for k in product((0, 1), repeat=2)]
    examined = 0
    witnesses = []
    for i0 in first_indices:
        s0 = option_sets[i0]
        for i1, s1 in enumerate(option_sets):
            base = cover[i0] & cover[i1]
            chosen = []
            for d, k in cells:
                examined += table.n
                prog.add(table.n)
                ok = base & table.bits[s0[k[0]]][d[0]] & table.bits[s1[k[1]]][d[1]]
                if not ok:
                    break
                chosen.append(_lowest(ok))
            else:
                witnesses.append({"optionSets": [i0, i1], "cellSpaces": chosen})
    return examined, witnesses


def search_sub3_uncoded(
    restricted: bool = False,
    privacy_condition: bool = True,
    progress: ProgressFn | None = None,
    threads: int = 1,
    lemma_checks: bool = True,
) -> SearchReport:
    start = time.perf_counter()
    rep = SearchReport(
        "sub3-uncoded",
        scope=SUB3_SCOPE,
        params={"restricted": restricted, "privacyCondition": privacy_condition},
    )
    prog = _Progress(progress)
    caches = uncoded_caches(restricted)
    table = _DecodeTable([uncoded_matrix(c) for c in caches])
    option_sets = list(combinations(range(len(caches)), 2))
    rep.params["optionSets"] = len(option_sets)
    rep.params["transmissionSpaces"] = table.n

    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [list(range(i, len(option_sets), threads)) for i in range(threads)]
        with ProcessPoolExecutor(threads) as pool:
            results = list(
                pool.map(_worker, [(restricted, privacy_condition, ch) for ch in chunks])
            )
        for examined, wit in results:
            rep.candidates_examined += examined
            rep.witnesses.extend(wit)
            prog.add(examined)
        rep.witnesses.sort(key=lambda w: w["optionSets"])
    else:
        examined, wit = _search_pairs(
            table, option_sets, range(len(option_sets)), prog, privacy_condition
        )
        rep.candidates_examined, rep.witnesses = examined, wit

    for w in rep.witnesses:
        w["caches"] = [[cache_label(caches[o]) for o in option_sets[i]] for i in w["optionSets"]]
    rep.feasible_found = len(rep.witnesses)
    if lemma_checks:
        rep.sub_lemma_checks = sub3_lemma_checks()
        if not restricted:
            narrowed = search_sub3_uncoded(restricted=True, privacy_condition=privacy_condition, lemma_checks=False)
            rep.sub_lemma_checks["restricted-run-agrees"] = (narrowed.feasible_found == 0) == (rep.feasible_found == 0)
    rep.elapsed = time.perf_counter() - start
    return rep


def _worker(args) -> tuple[int, list]:
    restricted, privacy_condition, indices = args
    caches = uncoded_caches(restricted)
    table = _DecodeTable([uncoded_matrix(c) for c in caches])
    option_sets = list(combinations(range(len(caches)), 2))
    return _search_pairs(table, option_sets, indices, _Progress(None), privacy_condition)


def cell_feasible(
    options: Sequence[Sequence[BitMatrix]],
    keys: Sequence[int],
    demand: Sequence[int],
    tx: BitMatrix,
    params: SchemeParams = SUB3_PARAMS,
) -> bool:
    """Both assigned caches decode their demands and each user's options cover every file."""
    for i, opts in enumerate(options):
        if not decodes(opts[keys[i]], tx, demand[i], params):
            return False
        got = set()
        for c in opts:
            got |= decodable_files(c, tx, params)
        if len(got) < params.files:
            return False
    return True


def sub3_lemma_checks() -> dict[str, bool]:
    """Structural facts of the uncoded argument, with Z0 = {A0, A1, B2}.

    These quantify over every uncoded cache as a potential alternative
    option, so they do not depend on the number of options per user.
    """
    caches = uncoded_caches()
    table = _DecodeTable([uncoded_matrix(c) for c in caches])
    idx = {c: n for n, c in enumerate(caches)}
    a0, a1, a2, b0, b1, b2 = range(6)
    z0 = idx[(a0, a1, b2)]
    def dec(c: int, f: int) -> int:
        return table.bits[c][f]

    # demand (B, A): any uncoded cache serving user 1 holds A2
    ba_spaces = dec(z0, B)
    serving = [c for n, c in enumerate(caches) if ba_spaces & dec(n, A)]
    a2_forced = bool(serving) and all(a2 in c for c in serving)

    # permissible partner caches: serve A in cell BA and can decode B somewhere
    permissible = {c for c in serving if dec(idx[c], B)}
    b_sub = {b0, b1, b2}
    lemma_set = {
        tuple(sorted((g0, g1, a2)))
        for g0, g1 in combinations(sorted(b_sub | {a0, a1}), 2)
        if (g0 in b_sub and g1 in b_sub) or (g0 in (a0, a1) and g1 in b_sub)
    }
    permissible_ok = permissible <= lemma_set

    # two B subfiles in Z1: cells BA and AA cannot both be served while some
    # other permissible partner cache decodes B from the AA transmission
    alt_b = 0
    for c in permissible:
        alt_b |= dec(idx[c], B)

    def cell_ok(d0: int, d1: int, z1: int, need_alt: bool) -> bool:
        ok = dec(z0, d0) & dec(z1, d1)
        if need_alt:
            ok &= alt_b
        return ok != 0

    both_b = [idx[tuple(sorted((g0, g1, a2)))] for g0, g1 in combinations(sorted(b_sub), 2)]
    no_two_b = all(not (cell_ok(B, A, z1, False) and cell_ok(A, A, z1, True)) for z1 in both_b)

    # a partner holding B2 cannot serve demand (A, B)
    with_b2 = [idx[tuple(sorted((g, a2, b2)))] for g in (a0, a1)]
    no_b2 = all(not cell_ok(A, B, z1, False) for z1 in with_b2)

    # Z1 = {A1, A2, B0}: cell AB cannot keep both users private
    za = idx[(a1, a2, b0)]
    consistent_1 = [idx[c] for c in ((a1, a2, b0), (a1, a2, b1), (a0, a2, b0), (a0, a2, b1))]
    consistent_0 = [idx[c] for c in ((a0, a1, b1), (a0, a1, b2), (a0, a2, b1), (a0, a2, b2))]
    spaces = dec(z0, A) & dec(za, B)
    alt0_b = 0
    for c in consistent_0:
        alt0_b |= dec(c, B)
    alt1_a = 0
    for c in consistent_1:
        alt1_a |= dec(c, A)
    za_blocked = (spaces & alt0_b & alt1_a) == 0

    return {
        "A2-forced": a2_forced,
        "permissible-Z1": permissible_ok,
        "no-two-B-subfiles-in-Z1": no_two_b,
        "no-B2-in-Z1": no_b2,
        "Za-not-private": za_blocked,
    }


def table1_positive_control() -> bool:
    """The coded subpacketization-3 scheme passes the same per-cell test everywhere."""
    from .constructions import build_table1

    s = build_table1()
    return all(
        cell_feasible(s.caches, k, d, s.tx[(d, k)][0], s.params) for d, k in s.cells()
    )

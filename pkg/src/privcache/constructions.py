"""Builders for private and non-private coded caching schemes.

Symbol layout everywhere: column ``n * f + j`` is subfile ``j`` of file ``n``.
Users are 0-based; user ``k`` of a privatized scheme owns the block
``k*N .. k*N + N - 1`` of the underlying non-private users.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, gcd
from typing import Sequence

from .gf2 import BitMatrix, row_from_columns, unit
from .scheme import (
    Scheme,
    SchemeParams,
    decodes,
    privacy_report,
    rate_and_memory,
    verify_correctness,
)


def _is_deterministic(s: Scheme) -> bool:
    return all(n == 1 for n in s.option_counts) and s.aux_branches == 1


def _single(s: Scheme, demand: Sequence[int]) -> BitMatrix:
    return s.tx[(tuple(demand), (0,) * s.params.users)][0]


# -- non-private schemes ---------------------------------------------------------


def build_mn(users: int, files: int, t: int) -> Scheme:
    """Centralized Maddah-Ali--Niesen scheme with cache parameter ``t``."""
    if not 0 <= t <= users:
        raise ValueError(f"t={t} outside [0, {users}]")
    subsets = list(combinations(range(users), t))
    index = {tau: n for n, tau in enumerate(subsets)}
    f = len(subsets)
    params = SchemeParams(users, files, f)
    w = params.width

    caches = []
    for i in range(users):
        rows = [unit(w, n * f + index[tau]) for n in range(files) for tau in subsets if i in tau]
        caches.append((BitMatrix(w, tuple(rows)),))

    groups = list(combinations(range(users), t + 1))
    tx = {}
    for d in product(range(files), repeat=users):
        rows = []
        for sigma in groups:
            cols = [d[k] * f + index[tuple(x for x in sigma if x != k)] for k in sigma]
            rows.append(row_from_columns(w, cols))
        tx[(d, (0,) * users)] = (BitMatrix(w, tuple(rows)),)
    return Scheme(params, tuple(caches), tx, f"mn(K={users},N={files},t={t})")


def build_trivial(files: int, users: int, mode: str) -> Scheme:
    """``empty``: no cache, broadcast every file.  ``full``: cache everything."""
    params = SchemeParams(users, files, 1)
    ident = BitMatrix.identity(files)
    none = BitMatrix.empty(files)
    if mode in ("empty", "empty-cache"):
        cache, sent = none, ident
    elif mode in ("full", "full-cache"):
        cache, sent = ident, none
    else:
        raise ValueError(f"unknown trivial mode {mode!r}")
    tx = {(d, (0,) * users): (sent,) for d in product(range(files), repeat=users)}
    return Scheme(params, tuple((cache,) for _ in range(users)), tx, f"trivial-{mode.split('-')[0]}(N={files},K={users})")


# -- privatization ----------------------------------------------------------------


def extend_demand(demand: Sequence[int], keys: Sequence[int], files: int) -> tuple[int, ...]:
    """Length N*K demand for the underlying non-private scheme.

    Block k is the cyclic run ``(d_k - r_k + j) mod N``, which places d_k at
    position r_k of the block.
    """
    if len(demand) != len(keys):
        raise ValueError("demand and key vectors differ in length")
    out = []
    for k, (d, r) in enumerate(zip(demand, keys)):
        if not 0 <= d < files or not 0 <= r < files:
            raise ValueError(f"user {k}: demand {d} / key {r} outside [0, {files})")
        out.extend((d - r + j) % files for j in range(k * files, (k + 1) * files))
    return tuple(out)


def privatize(np_scheme: Scheme) -> Scheme:
    """Private K-user scheme from a deterministic (N*K)-user scheme."""
    p = np_scheme.params
    N = p.files
    if not _is_deterministic(np_scheme):
        raise ValueError("privatize needs a deterministic single-option scheme")
    if p.users % N:
        raise ValueError(f"{p.users} users is not a multiple of N={N}")
    K = p.users // N
    params = SchemeParams(K, N, p.subpack)
    caches = tuple(tuple(np_scheme.caches[k * N + r][0] for r in range(N)) for k in range(K))
    tx = {}
    for d in product(range(N), repeat=K):
        for r in product(range(N), repeat=K):
            tx[(d, r)] = (_single(np_scheme, extend_demand(d, r, N)),)
    return Scheme(params, caches, tx, f"private[{np_scheme.provenance}]")


def build_partial_private(np_scheme: Scheme, level: int) -> Scheme:
    """Scheme where each peer's demand stays ambiguous among ``level`` files.

    User k draws one of ``level`` caches of the underlying users
    ``k*L .. k*L + L - 1``.  The unassigned options receive decoy demands
    drawn without replacement from the other files; every decoy assignment is
    kept as an equally likely auxiliary branch.
    """
    p = np_scheme.params
    N, L = p.files, level
    if not _is_deterministic(np_scheme):
        raise ValueError("partial privatization needs a deterministic single-option scheme")
    if not 2 <= L <= N:
        raise ValueError(f"level {L} outside [2, {N}]")
    if p.users % L:
        raise ValueError(f"{p.users} users is not a multiple of level {L}")
    K = p.users // L
    params = SchemeParams(K, N, p.subpack)
    caches = tuple(tuple(np_scheme.caches[k * L + r][0] for r in range(L)) for k in range(K))

    tx = {}
    for d in product(range(N), repeat=K):
        decoys = [list(permutations([w for w in range(N) if w != d[k]], L - 1)) for k in range(K)]
        for r in product(range(L), repeat=K):
            branches = []
            for choice in product(*decoys):
                ext: list[int] = []
                for k in range(K):
                    block = list(choice[k])
                    block.insert(r[k], d[k])
                    ext.extend(block)
                branches.append(_single(np_scheme, ext))
            tx[(d, r)] = tuple(branches)
    return Scheme(params, caches, tx, f"partial[L={L}][{np_scheme.provenance}]")


def private_rate_formula(users: int, files: int, memory) -> Fraction:
    """Rate of the privatized Maddah-Ali--Niesen scheme for integral K*M."""
    M = Fraction(memory)
    K, N = users, files
    if not 0 <= M <= N:
        raise ValueError(f"memory {M} outside [0, {N}]")
    if (K * M).denominator != 1:
        raise ValueError(f"K*M = {K * M} is not an integer")
    if M >= Fraction(K - 1, K):
        return K * (N - M) / (1 + K * M)
    return N - M


def subpack_comparison(files: int, users: int, memory, level: int) -> tuple[int, int]:
    """Subpacketization of full privacy (N*K users) vs. level-L privacy (L*K users)."""
    M = Fraction(memory)
    out = []
    for base in (files * users, level * users):
        t = base * M / files
        if t.denominator != 1:
            raise ValueError(f"t = {t} is not an integer for {base} underlying users")
        out.append(comb(base, int(t)))
    return out[0], out[1]


# -- the subpacketization-3 scheme and its relatives -----------------------------

_T1_WIDTH = 6
A0, A1, A2, B0, B1, B2 = range(6)


def _m(*rows: Sequence[int]) -> BitMatrix:
    return BitMatrix(_T1_WIDTH, tuple(row_from_columns(_T1_WIDTH, r) for r in rows))


TABLE1_CACHES = (
    (_m((A0, A1), (B0, B1), (A2, B1)), _m((A0, A1), (B0, B1), (A1, B2))),
    (_m((A0, A2), (B0, B2), (A1, B2)), _m((A0, A2), (B0, B2), (A2, B1))),
)
# transmissions used when both users hold option 0, indexed by demand AA, AB, BA, BB
TABLE1_ALPHABET = (
    _m((A0,), (B0,)),
    _m((A1,), (B1,)),
    _m((A2,), (B2,)),
    _m((A0, A1, A2), (B0, B1, B2)),
)


def build_table1() -> Scheme:
    """(2, 2; 1, 2/3) private scheme with three subfiles per file.

    Each cell picks the unique alphabet member that serves the demand for
    the cache pair selected by the keys.
    """
    params = SchemeParams(2, 2, 3)
    tx = {}
    for d in product(range(2), repeat=2):
        for k in product(range(2), repeat=2):
            fits = [
                x
                for x in TABLE1_ALPHABET
                if decodes(TABLE1_CACHES[0][k[0]], x, d[0], params)
                and decodes(TABLE1_CACHES[1][k[1]], x, d[1], params)
            ]
            if len(fits) != 1:
                raise AssertionError(f"cell {d};{k} has {len(fits)} serving transmissions")
            tx[(d, k)] = (fits[0],)
    return Scheme(params, TABLE1_CACHES, tx, "table1")


def dualize(s: Scheme) -> Scheme:
    """Swap the roles of cache options and transmissions of a (2,2) private scheme."""
    p = s.params
    if (p.users, p.files) != (2, 2) or s.option_counts != (2, 2) or s.aux_branches != 1:
        raise ValueError("dualize needs a 2-user, 2-file scheme with two options per user")
    alphabet = [_single(s, d) for d in product(range(2), repeat=2)]
    distinct = {t.data for v in s.tx.values() for t in v}
    if len({a.data for a in alphabet}) != 4 or distinct != {a.data for a in alphabet}:
        raise ValueError("dualize needs exactly four distinct transmissions")
    if not privacy_report(s).exact_private:
        raise ValueError("dualize needs an exactly private scheme")
    old_caches = [c for opts in s.caches for c in opts]

    for i in (1, 2, 3):
        rest = [x for x in range(4) if x not in (0, i)]
        caches = ((alphabet[rest[0]], alphabet[rest[1]]), (alphabet[i], alphabet[0]))
        tx = {}
        for d in product(range(2), repeat=2):
            for k in product(range(2), repeat=2):
                fits = [
                    z
                    for z in old_caches
                    if decodes(caches[0][k[0]], z, d[0], p) and decodes(caches[1][k[1]], z, d[1], p)
                ]
                if not fits:
                    break
                tx[(d, k)] = (fits[0],)
        if len(tx) != 16:
            continue
        cand = Scheme(p, caches, tx, f"dual[{s.provenance}]")
        if not verify_correctness(cand) and privacy_report(cand).exact_private:
            return cand
    raise ValueError("no partition of the transmissions yields a private dual scheme")


def time_share(s1: Scheme, s2: Scheme, alpha) -> Scheme:
    """Run ``s1`` on a fraction ``alpha`` of every file and ``s2`` on the rest.

    The split uses ``a`` copies of s1 and ``b`` copies of s2 with
    ``a*f1 / (a*f1 + b*f2) == alpha`` exactly and (a, b) minimal.  Copies of
    one sub-scheme share its key; the two keys are independent, and user i's
    combined option index is ``k1 * L2 + k2``.
    """
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    if (s1.params.users, s1.params.files) != (s2.params.users, s2.params.files):
        raise ValueError("time sharing needs schemes with the same K and N")
    if alpha == 1:
        return s1
    if alpha == 0:
        return s2
    K, N = s1.params.users, s1.params.files
    f1, f2 = s1.params.subpack, s2.params.subpack
    x, y = f1 * (alpha.denominator - alpha.numerator), f2 * alpha.numerator
    g = gcd(x, y)
    a, b = y // g, x // g
    f = a * f1 + b * f2
    params = SchemeParams(K, N, f)  # raises on width overflow
    w = params.width

    def embed(m: BitMatrix, fo: int, offset: int) -> list[int]:
        out = []
        for r in m.data:
            v = 0
            for c in range(m.cols):
                if (r >> (m.cols - 1 - c)) & 1:
                    n, j = divmod(c, fo)
                    v |= unit(w, n * f + offset + j)
            out.append(v)
        return out

    def combine(m1: BitMatrix, m2: BitMatrix) -> BitMatrix:
        rows = []
        for c in range(a):
            rows += embed(m1, f1, c * f1)
        for c in range(b):
            rows += embed(m2, f2, a * f1 + c * f2)
        return BitMatrix(w, tuple(rows))

    L2 = s2.option_counts
    caches = tuple(
        tuple(combine(c1, c2) for c1 in s1.caches[i] for c2 in s2.caches[i]) for i in range(K)
    )
    combined = [range(n1 * n2) for n1, n2 in zip(s1.option_counts, L2)]
    tx = {}
    for d in product(range(N), repeat=K):
        for k in product(*combined):
            k1 = tuple(ki // L2[i] for i, ki in enumerate(k))
            k2 = tuple(ki % L2[i] for i, ki in enumerate(k))
            tx[(d, k)] = tuple(
                combine(t1, t2) for t1 in s1.tx[(d, k1)] for t2 in s2.tx[(d, k2)]
            )
    return Scheme(params, caches, tx, f"timeshare[{alpha}][{s1.provenance}|{s2.provenance}]")


# -- trade-off curve ----------------------------------------------------------------


@dataclass(frozen=True)
class RatePoint:
    M: Fraction
    R: Fraction
    label: str

    def __post_init__(self) -> None:
        if self.M < 0 or self.R < 0:
            raise ValueError(f"negative rate point {self}")


def tradeoff_schemes() -> list[tuple[RatePoint, Scheme]]:
    """Vertices of the (2, 2) private trade-off, each backed by a verified scheme."""
    table1 = build_table1()
    schemes = [
        build_trivial(2, 2, "empty"),
        dualize(table1),
        table1,
        build_trivial(2, 2, "full"),
    ]
    out = []
    for s in schemes:
        bad = verify_correctness(s)
        if bad or not privacy_report(s).exact_private:
            raise AssertionError(f"{s.provenance} failed verification")
        M, R = rate_and_memory(s)
        out.append((RatePoint(M, R, s.provenance), s))
    return out


def tradeoff_curve() -> list[RatePoint]:
    return [pt for pt, _ in tradeoff_schemes()]


def find_realizations(s: Scheme, demand: Sequence[int], rows: Sequence[int]) -> list[tuple[tuple[int, ...], int]]:
    """(keys, branch) pairs whose transmission has exactly the given row set."""
    target = sorted(rows)
    hits = []
    for k in s.key_vectors():
        for b, t in enumerate(s.tx[(tuple(demand), k)]):
            if sorted(t.data) == target:
                hits.append((k, b))
    return hits

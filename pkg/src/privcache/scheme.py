"""Data model for randomized coded caching schemes and their exact verifiers.

A scheme is public: every user's list of cache options and the full
transmission table are known to everybody.  What stays private is the
option index (the key) each user was handed, the demands, and any auxiliary
delivery randomness.  All probabilities are uniform and enumerated exactly.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping, Sequence

from .exactlog import LogSum
from .gf2 import MAX_COLS, BitMatrix, DimensionError, rank, rref, stack, unit, reduce_against

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
DEFAULT_ENUMERATION_CAP = 10**7

Demand = tuple[int, ...]
Keys = tuple[int, ...]
Cell = tuple[Demand, Keys]


class SchemeFormatError(ValueError):
    """A scheme document could not be parsed."""


class EnumerationCapError(RuntimeError):
    """The exact privacy enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class SchemeParams:
    users: int
    files: int
    subpack: int

    def __post_init__(self) -> None:
        if self.users < 1 or self.files < 1 or self.subpack < 1:
            raise ValueError(f"users, files and subpack must be positive: {self}")
        if self.width > MAX_COLS:
            raise DimensionError(f"symbol width N*f = {self.width} exceeds {MAX_COLS}")

    @property
    def width(self) -> int:
        return self.files * self.subpack

    def file_units(self, n: int) -> list[int]:
        """Unit rows of the subfile symbols of file ``n``."""
        return [unit(self.width, n * self.subpack + s) for s in range(self.subpack)]


@dataclass(frozen=True)
class Violation:
    kind: str
    user: int | None = None
    demand: Demand | None = None
    keys: Keys | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.user is not None:
            out["user"] = self.user
        if self.demand is not None:
            out["demand"] = list(self.demand)
        if self.keys is not None:
            out["keys"] = list(self.keys)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class Scheme:
    """A (possibly randomized) linear coded caching scheme.

    ``caches[i]`` lists user i's cache options.  ``tx`` maps a
    ``(demand, keys)`` cell to a tuple of equally likely transmission
    matrices; deterministic delivery is a single branch.
    """

    params: SchemeParams
    caches: tuple[tuple[BitMatrix, ...], ...]
    tx: Mapping[Cell, tuple[BitMatrix, ...]] = field(compare=True)
    provenance: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "caches", tuple(tuple(opts) for opts in self.caches))
        object.__setattr__(
            self, "tx", {(tuple(d), tuple(k)): tuple(v) for (d, k), v in self.tx.items()}
        )

    @property
    def option_counts(self) -> tuple[int, ...]:
        return tuple(len(opts) for opts in self.caches)

    @property
    def aux_branches(self) -> int:
        return max((len(v) for v in self.tx.values()), default=1)

    def demands(self) -> Iterator[Demand]:
        return product(range(self.params.files), repeat=self.params.users)

    def key_vectors(self) -> Iterator[Keys]:
        return product(*(range(n) for n in self.option_counts))

    def cells(self) -> Iterator[Cell]:
        """All (demand, keys) cells, demand-major, both in lexicographic order."""
        keys = list(self.key_vectors())
        for d in self.demands():
            for k in keys:
                yield d, k

    def cache(self, user: int, key: int) -> BitMatrix:
        return self.caches[user][key]

    def transmissions(self, demand: Sequence[int], keys: Sequence[int]) -> tuple[BitMatrix, ...]:
        return self.tx[(tuple(demand), tuple(keys))]

    def cache_rows(self) -> int:
        return max((c.rows for opts in self.caches for c in opts), default=0)

    def tx_rows(self) -> int:
        return max((t.rows for v in self.tx.values() for t in v), default=0)

    def enumeration_size(self) -> int:
        n = self.params.files ** self.params.users * self.aux_branches
        for c in self.option_counts:
            n *= c
        return n


# -- decodability ----------------------------------------------------------------


def decodes(cache: BitMatrix, tx: BitMatrix, file: int, params: SchemeParams) -> bool:
    """True iff every subfile of ``file`` lies in the row span of cache + tx."""
    if cache.cols != params.width or tx.cols != params.width:
        raise DimensionError(
            f"matrix widths {cache.cols}/{tx.cols} do not match N*f = {params.width}"
        )
    basis = rref(stack(cache, tx)).data
    return all(reduce_against(u, basis) == 0 for u in params.file_units(file))


def decodable_files(cache: BitMatrix, tx: BitMatrix, params: SchemeParams) -> frozenset[int]:
    basis = rref(stack(cache, tx)).data
    return frozenset(
        n
        for n in range(params.files)
        if all(reduce_against(u, basis) == 0 for u in params.file_units(n))
    )


def shape_violations(s: Scheme) -> list[Violation]:
    p = s.params
    out: list[Violation] = []
    if len(s.caches) != p.users:
        return [Violation("shape-error", detail=f"{len(s.caches)} cache lists for {p.users} users")]
    for i, opts in enumerate(s.caches):
        if not opts:
            out.append(Violation("shape-error", user=i, detail="no cache options"))
            continue
        rows = {c.rows for c in opts}
        if len(rows) > 1:
            out.append(Violation("shape-error", user=i, detail=f"option row counts differ: {sorted(rows)}"))
        for k, c in enumerate(opts):
            if c.cols != p.width:
                out.append(Violation("shape-error", user=i, detail=f"option {k} has width {c.cols}"))
            elif rank(c) != c.rows:
                out.append(Violation("shape-error", user=i, detail=f"option {k} is not full row rank"))
    if out:
        return out
    valid = set(s.cells())
    for cell in sorted(set(s.tx) - valid):
        out.append(Violation("shape-error", demand=cell[0], keys=cell[1], detail="cell outside the table domain"))
    branch_counts = set()
    tx_rows = set()
    for d, k in s.cells():
        branches = s.tx.get((d, k))
        if not branches:
            out.append(Violation("shape-error", demand=d, keys=k, detail="missing transmission cell"))
            continue
        branch_counts.add(len(branches))
        for t in branches:
            if t.cols != p.width:
                out.append(Violation("shape-error", demand=d, keys=k, detail=f"transmission width {t.cols}"))
            tx_rows.add(t.rows)
    if len(branch_counts) > 1:
        out.append(Violation("shape-error", detail=f"auxiliary branch counts differ: {sorted(branch_counts)}"))
    if len(tx_rows) > 1:
        out.append(Violation("shape-error", detail=f"transmission row counts differ: {sorted(tx_rows)}"))
    return out


def verify_correctness(s: Scheme) -> list[Violation]:
    """Every user decodes its demand in every cell and auxiliary branch."""
    out = shape_violations(s)
    p = s.params
    if len(s.caches) != p.users or not all(s.caches):
        return out
    for d, k in s.cells():
        for b, t in enumerate(s.tx.get((d, k), ())):
            if t.cols != p.width:
                continue
            for i in range(p.users):
                c = s.caches[i][k[i]]
                if c.cols == p.width and not decodes(c, t, d[i], p):
                    note = f"cannot decode file {d[i]}"
                    if len(s.tx[(d, k)]) > 1:
                        note += f" (branch {b})"
                    out.append(Violation("decode-failure", user=i, demand=d, keys=k, detail=note))
    return out


def weak_privacy_check(s: Scheme) -> list[Violation]:
    """Local necessary condition for privacy.

    For every populated cell and branch, every user and every file ``w``,
    some cache option of that user must decode ``w`` from the transmission.
    Otherwise a view exists under which ``w`` has posterior zero.
    """
    p = s.params
    out: list[Violation] = []
    memo: dict[tuple[int, tuple[int, ...]], frozenset[int]] = {}
    for d, k in s.cells():
        for t in s.tx.get((d, k), ()):
            for i in range(p.users):
                key = (i, t.data)
                if key not in memo:
                    got: set[int] = set()
                    for c in s.caches[i]:
                        got |= decodable_files(c, t, p)
                    memo[key] = frozenset(got)
                missing = [w for w in range(p.files) if w not in memo[key]]
                if missing:
                    out.append(
                        Violation(
                            "privacy-leak",
                            user=i,
                            demand=d,
                            keys=k,
                            detail=f"no cache option decodes file(s) {missing}",
                        )
                    )
    return out


def rate_and_memory(s: Scheme) -> tuple[Fraction, Fraction]:
    f = s.params.subpack
    return Fraction(s.cache_rows(), f), Fraction(s.tx_rows(), f)


# -- exact privacy ---------------------------------------------------------------


@dataclass(frozen=True)
class PairDetail:
    user: int
    peer: int
    mutual_info_bits: LogSum
    min_ambiguity: int


@dataclass(frozen=True)
class PrivacyReport:
    exact_private: bool
    max_mutual_info_bits: LogSum
    min_ambiguity: int
    per_pair: tuple[PairDetail, ...]
    enumerated: int

    def to_dict(self) -> dict:
        return {
            "exactPrivate": self.exact_private,
            "maxMutualInfoBits": str(self.max_mutual_info_bits),
            "minAmbiguity": self.min_ambiguity,
            "enumerated": self.enumerated,
            "perPairDetail": [
                {
                    "user": d.user,
                    "peer": d.peer,
                    "mutualInfoBits": str(d.mutual_info_bits),
                    "minAmbiguity": d.min_ambiguity,
                }
                for d in self.per_pair
            ],
        }


def privacy_report(s: Scheme, cap: int = DEFAULT_ENUMERATION_CAP) -> PrivacyReport:
    """Exact demand-privacy statistics by full enumeration.

    User i's view is (own key, own cache, own demand, transmission
    coefficient matrix).  Demands, keys and auxiliary branches are uniform
    and independent, so every enumerated outcome carries the same weight and
    the joint law of (view, D_j) is a table of integer counts.
    """
    p = s.params
    total = s.enumeration_size()
    if total > cap:
        raise EnumerationCapError(f"enumeration size {total} exceeds cap {cap}")
    K, N = p.users, p.files
    # counts[i][view] -> per-peer list of demand histograms
    counts: list[dict] = [defaultdict(lambda: [[0] * N for _ in range(K)]) for _ in range(K)]
    for d, k in s.cells():
        for t in s.tx[(d, k)]:
            for i in range(K):
                hist = counts[i][(k[i], d[i], t.data)]
                for j in range(K):
                    hist[j][d[j]] += 1

    details = []
    for i in range(K):
        for j in range(K):
            if i == j:
                continue
            terms = []
            amb = N
            for hist in counts[i].values():
                h = hist[j]
                cv = sum(h)
                amb = min(amb, sum(1 for c in h if c))
                for c in h:
                    if c:
                        terms.append((Fraction(c, total), Fraction(c * N, cv)))
            details.append(PairDetail(i, j, LogSum.build(terms), amb))

    if details:
        worst = max(details, key=lambda x: float(x.mutual_info_bits))
        max_mi = worst.mutual_info_bits
        if all(x.mutual_info_bits.is_zero() for x in details):
            max_mi = LogSum()
        min_amb = min(x.min_ambiguity for x in details)
    else:
        max_mi, min_amb = LogSum(), N
    return PrivacyReport(max_mi.is_zero(), max_mi, min_amb, tuple(details), total)


# -- serialization ---------------------------------------------------------------


def _digits(values: Sequence[int]) -> str:
    return "".join(DIGITS[v] for v in values)


def _undigits(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(DIGITS.index(ch) for ch in text)
    except ValueError:
        raise SchemeFormatError(f"transmissions: bad {what} digits {text!r}") from None


def scheme_to_dict(s: Scheme) -> dict:
    branched = s.aux_branches > 1
    tx = {}
    for d, k in s.cells():
        if (d, k) not in s.tx:
            continue
        branches = [t.to_strings() for t in s.tx[(d, k)]]
        tx[f"{_digits(d)};{_digits(k)}"] = branches if branched else branches[0]
    out = {
        "users": s.params.users,
        "files": s.params.files,
        "subpack": s.params.subpack,
        "cache_options": [[c.to_strings() for c in opts] for opts in s.caches],
        "transmissions": tx,
    }
    if branched:
        out["aux_branches"] = s.aux_branches
    if s.provenance:
        out["provenance"] = s.provenance
    return out


def serialize_scheme(s: Scheme) -> str:
    return json.dumps(scheme_to_dict(s), indent=1) + "\n"


def _matrix(rows, width: int, where: str) -> BitMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, str) for r in rows):
        raise SchemeFormatError(f"{where}: expected a list of bit strings")
    try:
        return BitMatrix.from_strings(rows, width)
    except ValueError as exc:
        raise SchemeFormatError(f"{where}: {exc}") from None


def scheme_from_dict(doc: dict) -> Scheme:
    if not isinstance(doc, dict):
        raise SchemeFormatError("top level: expected an object")
    for key in ("users", "files", "subpack", "cache_options", "transmissions"):
        if key not in doc:
            raise SchemeFormatError(f"{key}: missing field")
    try:
        params = SchemeParams(int(doc["users"]), int(doc["files"]), int(doc["subpack"]))
    except (TypeError, ValueError) as exc:
        raise SchemeFormatError(f"users/files/subpack: {exc}") from None
    w = params.width
    caches = []
    for i, opts in enumerate(doc["cache_options"]):
        if not isinstance(opts, list):
            raise SchemeFormatError(f"cache_options[{i}]: expected a list of options")
        caches.append(tuple(_matrix(c, w, f"cache_options[{i}][{k}]") for k, c in enumerate(opts)))
    branched = "aux_branches" in doc
    tx = {}
    if not isinstance(doc["transmissions"], dict):
        raise SchemeFormatError("transmissions: expected an object")
    for label, value in doc["transmissions"].items():
        if label.count(";") != 1:
            raise SchemeFormatError(f"transmissions: bad cell label {label!r}")
        dtxt, ktxt = label.split(";")
        d, k = _undigits(dtxt, "demand"), _undigits(ktxt, "key")
        where = f"transmissions[{label!r}]"
        if branched:
            if not isinstance(value, list):
                raise SchemeFormatError(f"{where}: expected a list of branches")
            tx[(d, k)] = tuple(_matrix(b, w, f"{where}[{n}]") for n, b in enumerate(value))
        else:
            tx[(d, k)] = (_matrix(value, w, where),)
    return Scheme(params, tuple(caches), tx, str(doc.get("provenance", "")))


def deserialize_scheme(text: str) -> Scheme:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemeFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return scheme_from_dict(doc)

"""Brute-force reference implementations, independent of the elimination code."""

from __future__ import annotations

import math
from collections import Counter
from itertools import product


def span(rows, cols):
    """Every GF(2) combination of ``rows`` (ints), by enumerating 2^len(rows) subsets."""
    out = set()
    for mask in range(1 << len(rows)):
        v = 0
        for i, r in enumerate(rows):
            if mask >> i & 1:
                v ^= r
        out.add(v)
    return out


def rank(rows, cols):
    return len(span(rows, cols)).bit_length() - 1


def unit(cols, j):
    return 1 << (cols - 1 - j)


def decodes(cache_rows, tx_rows, file, files, subpack):
    cols = files * subpack
    sp = span(list(cache_rows) + list(tx_rows), cols)
    return all(unit(cols, file * subpack + s) in sp for s in range(subpack))


def count_subspaces(cols, dim):
    """Distinct dim-dimensional spans among all dim-tuples of vectors."""
    seen = set()
    for rows in product(range(1, 1 << cols), repeat=dim):
        sp = span(rows, cols)
        if len(sp) == 1 << dim:
            seen.add(frozenset(sp))
    return len(seen)


def correctness_failures(s):
    """(demand, keys, user) triples that cannot decode, via brute-force spans."""
    p = s.params
    bad = []
    for (d, k), branches in sorted(s.tx.items()):
        for t in branches:
            for i in range(p.users):
                c = s.caches[i][k[i]]
                if not decodes(c.data, t.data, d[i], p.files, p.subpack):
                    bad.append((d, k, i))
    return bad


def mutual_information_float(s, i, j):
    """I(view_i; D_j) in bits from entropies of an explicit joint distribution."""
    joint = Counter()
    for (d, k), branches in s.tx.items():
        for t in branches:
            joint[((k[i], d[i], t.data), d[j])] += 1.0 / len(branches)
    total = sum(joint.values())
    pv, pd = Counter(), Counter()
    for (v, x), c in joint.items():
        pv[v] += c
        pd[x] += c

    def h(cnt):
        return -sum(c / total * math.log2(c / total) for c in cnt.values() if c)

    return h(pv) + h(pd) - h(joint)

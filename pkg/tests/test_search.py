import json
import random
from itertools import combinations, product

from privcache.scheme import decodes
from privcache.gf2 import BitMatrix, enumerate_row_spaces, rank
from privcache.search import (
    SUB3_PARAMS,
    _DecodeTable,
    cell_feasible,
    enumerate_reduced_caches,
    search_sub2,
    search_sub3_uncoded,
    sub2_lemma_checks,
    sub3_lemma_checks,
    table1_positive_control,
    uncoded_caches,
    uncoded_matrix,
)

A, B = 0, 1


def test_reduced_caches():
    caches = enumerate_reduced_caches()
    assert len(caches) == 9
    assert all(rank(c) == 2 for c in caches)
    assert len({c.data for c in caches}) == 9


def test_sub2_infeasible():
    rep = search_sub2()
    assert rep.feasible_found == 0 and rep.witnesses == []
    assert 0 < rep.candidates_examined <= 81 * 16 * 16 + 81 * 16
    assert all(sub2_lemma_checks().values())


def test_sub2_control_contains_mn_witness():
    rep = search_sub2(privacy_condition=False)
    assert rep.feasible_found > 0
    mn = {"C0": ["1000", "0010"], "C1": ["0100", "0001"], "T_AB": "0110"}
    assert any(all(w[k] == v for k, v in mn.items()) for w in rep.witnesses)
    assert rep.sub_lemma_checks["control-witnesses-have-zero-T_AA_B"]


def test_sub3_uncoded_infeasible():
    rep = search_sub3_uncoded()
    assert rep.feasible_found == 0
    assert rep.params["optionSets"] == 190 and rep.params["transmissionSpaces"] == 651
    assert rep.sub_lemma_checks and all(rep.sub_lemma_checks.values())
    assert search_sub3_uncoded(restricted=True, lemma_checks=False).feasible_found == 0


def test_sub3_control_finds_witnesses():
    rep = search_sub3_uncoded(privacy_condition=False, lemma_checks=False)
    assert rep.feasible_found > 0
    caches = uncoded_caches()
    table = _DecodeTable([uncoded_matrix(c) for c in caches])
    w = rep.witnesses[0]
    sets = [list(combinations(range(len(caches)), 2))[i] for i in w["optionSets"]]
    cells = [(d, k) for d in product((A, B), repeat=2) for k in product((0, 1), repeat=2)]
    for (d, k), sp in zip(cells, w["cellSpaces"]):
        opts = [[uncoded_matrix(caches[o]) for o in s] for s in sets]
        tx = table.spaces[sp]
        assert all(decodes(opts[u][k[u]], tx, d[u], SUB3_PARAMS) for u in (0, 1))


def test_sub3_lemma_checks():
    assert all(sub3_lemma_checks().values())
    assert table1_positive_control()


def test_no_two_b_check_is_not_vacuous():
    # the BA cell alone can be served with Z1 = {B0, B1, A2}
    caches = uncoded_caches()
    table = _DecodeTable([uncoded_matrix(c) for c in caches])
    z0, z1 = caches.index((0, 1, 5)), caches.index((2, 3, 4))
    assert table.bits[z0][B] & table.bits[z1][A]


def test_bitset_cells_match_brute_force():
    caches = uncoded_caches()
    mats = [uncoded_matrix(c) for c in caches]
    table = _DecodeTable(mats)
    spaces = list(enumerate_row_spaces(6, 2))
    option_sets = list(combinations(range(len(caches)), 2))
    rng = random.Random(7)
    for _ in range(2):
        s0, s1 = rng.choice(option_sets), rng.choice(option_sets)
        opts = [[mats[o] for o in s0], [mats[o] for o in s1]]
        base = table.covers(s0) & table.covers(s1)
        for d, k in product(product((A, B), repeat=2), product((0, 1), repeat=2)):
            bits = base & table.bits[s0[k[0]]][d[0]] & table.bits[s1[k[1]]][d[1]]
            brute = {n for n, t in enumerate(spaces) if cell_feasible(opts, k, d, t)}
            assert {n for n in range(table.n) if bits >> n & 1} == brute


def test_cell_feasible_uses_every_option():
    z, y = uncoded_matrix((0, 1, 5)), uncoded_matrix((2, 3, 4))
    # {A0, A1, B2} with rows A2 and B0+B1 decodes A but never B
    tx = BitMatrix.from_strings(["001000", "000110"])
    assert not cell_feasible([[z], [z]], (0, 0), (A, A), tx)
    # rows A2 and B2: z decodes A, {B0, B1, A2} decodes B, so the pair covers both files
    tx = BitMatrix.from_strings(["001000", "000001"])
    assert cell_feasible([[z, y], [z, y]], (0, 1), (A, B), tx)
    assert not cell_feasible([[z, y], [z, y]], (1, 1), (A, B), tx)


def test_progress_and_threads():
    marks = []
    rep = search_sub3_uncoded(restricted=True, progress=marks.append, lemma_checks=False)
    assert marks and marks == sorted(marks) and marks[-1] <= rep.candidates_examined
    par = search_sub3_uncoded(restricted=True, threads=2, lemma_checks=False)
    assert (par.candidates_examined, par.witnesses) == (rep.candidates_examined, rep.witnesses)


def test_report_json_is_stable_without_timing():
    a = json.loads(search_sub2().to_json(timing=False))
    assert "elapsedSeconds" not in a
    assert a["feasibleFound"] == 0
    assert search_sub2().to_json(timing=False) == search_sub2().to_json(timing=False)

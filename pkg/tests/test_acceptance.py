"""Acceptance suite: ten end-to-end criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from circmagic.circulant import enumerate_sets, make_connection_set
from circmagic.families import (
    FamilyKind,
    Status,
    TRIVIAL_KINDS,
    cycle_lex,
    decide,
    enumerate_families,
    family_connection_set,
    family_raw,
    recognize,
    t1_case1,
    type2_delta,
    type3_necessary,
)
from circmagic.fixtures import GAMMA3_TABLE
from circmagic.labelings import (
    Labeling,
    label_family,
    label_t1_case1,
    tetravalent_contract_ok,
    tetravalent_sublabeling,
    verify,
)
from circmagic.oracle import SearchBudget, exhaustive_scan, scan_summary
from circmagic.spectra import (
    TypeTag,
    admissible_set,
    candidate_sets,
    oracle_zero_mask,
    tag_masks,
)

_LINES: list[str] = []


def _report(number: int, title: str, body, capsys=None) -> None:
    t0 = time.perf_counter()
    try:
        body()
    except BaseException:
        line = f"ACCEPTANCE {number:2d} FAIL  {title} ({time.perf_counter() - t0:.1f}s)"
        _emit(line, capsys)
        raise
    _emit(f"ACCEPTANCE {number:2d} PASS  {title} ({time.perf_counter() - t0:.1f}s)", capsys)


def _emit(line: str, capsys) -> None:
    _LINES.append(line)
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


def _S(n, *reps):
    return make_connection_set(n, reps)


def _tags(S):
    return {c.j: {t.value for t in c.types} for c in admissible_set(S)}


# 1 -------------------------------------------------------------------------

def check_admissible_fixtures():
    assert _tags(_S(24, 1, 2, 3)) == {3: {"T1"}, 9: {"T1"}, 15: {"T1"}, 21: {"T1"},
                                      8: {"T2"}, 16: {"T2"}}
    t60 = _tags(_S(60, 5, 6, 12))
    assert sorted(t60) == [2, 14, 15, 22, 26, 34, 38, 45, 46, 58]
    assert all(t60[j] == ({"T1"} if j in (15, 45) else {"T3"}) for j in t60)


# 2 -------------------------------------------------------------------------

def check_engine_equivalence(n_max=120):
    mismatched = []
    for n in range(7, n_max + 1):
        reps = np.array([S.reps for S in enumerate_sets(n)])
        oracle = oracle_zero_mask(n, reps)
        oracle[:, 0] = False
        masks = tag_masks(n, reps)
        congruence = masks[TypeTag.T1] | masks[TypeTag.T2] | masks[TypeTag.T3]
        bad = np.nonzero(np.any(oracle != congruence, axis=1))[0]
        mismatched += [(n, tuple(reps[k])) for k in bad]
    assert not mismatched, mismatched[:10]


# 3 -------------------------------------------------------------------------

PAPER_1540 = [(1, 385, 769), (2, 385, 768), (2, 152, 385), (2, 385, 548), (2, 68, 385),
              (1, 155, 231), (1, 329, 715), (1, 209, 595), (5, 413, 737)]


def check_1540_example():
    got = sorted(family_connection_set(F).reps for F in enumerate_families(1540))
    assert got == sorted(PAPER_1540)


# 4 -------------------------------------------------------------------------

def check_constructive_labelings(n_max=2000):
    count = 0
    for n in range(8, n_max + 1):
        if n % 4 and n % 3:
            continue
        for F in enumerate_families(n):
            if F.kind in TRIVIAL_KINDS:
                continue
            if F.kind is FamilyKind.T2 and n % 2 == 0:
                continue  # the criterion covers odd d, d' only
            S = family_connection_set(F)
            L = label_family(F)
            assert verify(S, L) == 3 * (n + 1), F
            if F.kind is FamilyKind.T1B:
                assert all(L[x] + L[x + n // 2] == n + 1 for x in range(n)), F
            elif F.kind is FamilyKind.T1A:
                n0 = n // 4
                assert all(L[x + n0] + L[x - n0] == n + 1 for x in range(n)), F
            elif F.kind is FamilyKind.T2:
                n0 = n // 3
                dn = type2_delta(n0) * n0
                c = family_raw(F)[2]
                assert all(L[x - c] + L[x + c] == L[x + dn - 1] + L[x - dn + 1] for x in range(n)), F
                assert all(L[x] + L[x + dn] + L[x - dn] == 3 * (n + 1) // 2 for x in range(n)), F
            count += 1
    assert count > 400


# 5 -------------------------------------------------------------------------

def check_gamma3_table():
    L = Labeling(24, GAMMA3_TABLE)
    for reps in ((1, 2, 3), (1, 3, 10), (1, 5, 6)):
        assert verify(_S(24, *reps), L) == 75, reps


# 6 -------------------------------------------------------------------------

def check_enumeration_counts():
    assert len(candidate_sets(12)) == 2
    assert len(candidate_sets(24)) == 5
    c60 = candidate_sets(60)
    assert len(c60) == 15
    profiles = [{t for c in admissible_set(S) for t in c.types} for S in c60]
    with_t3 = [p for p in profiles if TypeTag.T3 in p]
    assert len(with_t3) == 1
    assert all({TypeTag.T1, TypeTag.T2} <= p for p in profiles if TypeTag.T3 not in p)
    trivial = [S for S in c60 if recognize(S, TRIVIAL_KINDS) is not None]
    assert len(trivial) == 3


# 7 -------------------------------------------------------------------------

def check_theorem_oracle_agreement(n_max=16):
    records = exhaustive_scan(n_max, SearchBudget(None))
    summary = scan_summary(records)
    assert summary["disagree"] == [] and summary["inconclusive"] == 0, summary
    assert summary["classes"] == len(records) > 0


# 8 -------------------------------------------------------------------------

def check_type3_filter():
    target = _S(60, 5, 6, 12)
    assert bool(type3_necessary(target))
    assert 60 // 12 in target.reps
    for S in candidate_sets(60):
        if S == target:
            continue
        if any(c.has(TypeTag.T3) for c in admissible_set(S)):
            assert not type3_necessary(S), S


# 9 -------------------------------------------------------------------------

def check_type2_corollary(n_max=300):
    checked = 0
    for n in range(12, n_max + 1, 6):
        sets = enumerate_sets(n)
        reps = np.array([S.reps for S in sets])
        adm = oracle_zero_mask(n, reps)
        adm[:, 0] = False
        t2 = tag_masks(n, reps)[TypeTag.T2]
        all_t2 = adm.any(axis=1) & ~np.any(adm & ~t2, axis=1)
        for k in np.nonzero(all_t2)[0]:
            v = decide(sets[k], SearchBudget(10_000))
            assert v.status is not Status.YES, (sets[k], v)
            checked += 1
    for n0 in range(6, n_max // 3 + 1, 4):
        v = decide(family_connection_set(cycle_lex(n0)), SearchBudget(10_000))
        assert v.status is Status.NO, (n0, v)
    assert checked > 0


# 10 ------------------------------------------------------------------------

def check_tetravalent_contract():
    budget = SearchBudget(None, 240.0)
    for n0, c0 in ((15, 4), (35, 6), (21, 8)):
        L = tetravalent_sublabeling(n0, c0, method="search", budget=budget)
        assert tetravalent_contract_ok(L, n0, c0)
    for d, d1 in ((3, 5), (5, 7), (3, 7)):
        F = t1_case1(d, d1)
        L = label_t1_case1(F, method="search", budget=budget)
        assert verify(family_connection_set(F), L) == 3 * (F.order + 1)


CRITERIA = [
    (1, "admissible-set fixtures at 24 and 60", check_admissible_fixtures),
    (2, "congruence engine equals cyclotomic oracle, n <= 120", check_engine_equivalence),
    (3, "family enumeration at n = 1540", check_1540_example),
    (4, "constructive labelings verify, n <= 2000", check_constructive_labelings),
    (5, "published order-24 labeling on three sets", check_gamma3_table),
    (6, "candidate counts at 12, 24, 60", check_enumeration_counts),
    (7, "decide agrees with exhaustive search, n <= 16", check_theorem_oracle_agreement),
    (8, "type-3 necessary conditions at n = 60", check_type3_filter),
    (9, "all-type-2 even orders never magic, n <= 300", check_type2_corollary),
    (10, "tetravalent contract via constrained search", check_tetravalent_contract),
]


@pytest.mark.parametrize("number,title,body", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_acceptance(number, title, body, capsys):
    _report(number, title, body, capsys)


if __name__ == "__main__":  # pragma: no cover
    failures = 0
    for number, title, body in CRITERIA:
        try:
            _report(number, title, body)
        except Exception:  # noqa: BLE001
            failures += 1
    raise SystemExit(1 if failures else 0)

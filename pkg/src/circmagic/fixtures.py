"""Reference checks used by ``circmagic selftest`` and the test-suite."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .circulant import canonical_form, make_connection_set
from .families import (
    FamilyKind,
    Status,
    cycle_lex,
    decide,
    enumerate_families,
    family_connection_set,
    family_raw,
    mobius_ladder_lex,
    prism_lex,
    recognize,
    t1_case1,
    t1_case2,
    type3_necessary,
)
from .labelings import Labeling, label_cycle_lex, label_family, verify
from .modular import DomainError, crt, p_part
from .oracle import SearchBudget, search_labeling
from .spectra import admissible_set, candidate_filter, candidate_sets, type1_test, type2_test, type3_test

# A distance magic labeling of Circ(24; {±1, ±2, ±3}), vertex 0 first.
GAMMA3_TABLE: tuple[int, ...] = (
    2, 7, 15, 5, 22, 18, 11, 19, 3, 8, 13, 6,
    23, 16, 12, 20, 1, 9, 14, 4, 24, 17, 10, 21,
)

# Canonical triples of the nine order-1540 family members.
FAMILIES_1540 = frozenset({
    (1, 385, 769), (2, 385, 768), (2, 152, 385), (2, 385, 548), (2, 68, 385),
    (1, 155, 231), (1, 329, 715), (1, 209, 595), (5, 413, 737),
})


def _set(n: int, *reps: int):
    return make_connection_set(n, reps)


def _tags(n: int, reps: Sequence[int]) -> dict[int, set[str]]:
    return {c.j: {str(t) for t in c.types} for c in admissible_set(_set(n, *reps))}


def _canon(S) -> tuple[int, ...]:
    return canonical_form(S).reps


@dataclass(frozen=True)
class Fixture:
    name: str
    check: Callable[[], bool]


def fixtures(gamma3: Sequence[int] = GAMMA3_TABLE) -> list[Fixture]:
    g3 = tuple(gamma3)

    def gamma3_ok() -> bool:
        try:
            L = Labeling(24, g3)
        except DomainError:
            return False
        return all(verify(_set(24, *r), L) == 75 for r in ((1, 2, 3), (1, 3, 10), (1, 5, 6)))

    def raw_t1b() -> bool:
        F = t1_case2(1, 5, 77)
        return family_raw(F)[1:] == (1385, 1309) and family_connection_set(F).reps == (1, 155, 231)

    def candidates(n: int) -> int:
        return len(candidate_sets(n))

    def w1(n, reps, j):
        return type1_test(_set(n, *reps), j)

    return [
        Fixture("p-part 60 at 5", lambda: p_part(60, 5) == 5),
        Fixture("crt 152", lambda: crt((0, 4), (2, 5), (-2, 77)) == 152),
        Fixture("crt 548", lambda: crt((0, 4), (2, 7), (-2, 55)) == 548),
        Fixture("admissible 24:1,2,3", lambda: _tags(24, (1, 2, 3)) == {
            3: {"T1"}, 9: {"T1"}, 15: {"T1"}, 21: {"T1"}, 8: {"T2"}, 16: {"T2"}}),
        Fixture("admissible 60:5,6,12", lambda: _tags(60, (5, 6, 12)) == {
            j: ({"T1"} if j in (15, 45) else {"T3"}) for j in (2, 14, 15, 22, 26, 34, 38, 45, 46, 58)}),
        Fixture("type1 witness 24:1,2,3 j=3", lambda: (w := w1(24, (1, 2, 3), 3)) is not None and w.holds(24, 3)),
        Fixture("type1 none 24:1,2,3 j=8", lambda: w1(24, (1, 2, 3), 8) is None),
        Fixture("type1 witness 60:5,6,12 j=15", lambda: (w := w1(60, (5, 6, 12), 15)) is not None
                and abs(w.assignment[1]) == 5),
        Fixture("type2 witness 24:1,2,3 j=8", lambda: type2_test(_set(24, 1, 2, 3), 8) is not None),
        Fixture("type1 and type2 60:1,5,9 j=5", lambda: type2_test(_set(60, 1, 5, 9), 5) is not None
                and w1(60, (1, 5, 9), 5) is not None),
        Fixture("type3 witness 60:5,6,12 j=2", lambda: (w := type3_test(_set(60, 5, 6, 12), 2)) is not None
                and w.variant == 2),
        Fixture("type3 none 60:5,6,12 j=15", lambda: type3_test(_set(60, 5, 6, 12), 15) is None),
        Fixture("filter passes 24:1,2,3", lambda: bool(candidate_filter(_set(24, 1, 2, 3)))),
        Fixture("candidates at 24", lambda: candidates(24) == 5),
        Fixture("candidates at 60", lambda: candidates(60) == 15),
        Fixture("T1a[5,77] set", lambda: family_connection_set(t1_case1(5, 77)).reps == (2, 152, 385)),
        Fixture("T1b[5,7,11] set", lambda: family_connection_set(t1_case2(5, 7, 11)).reps == (5, 413, 737)),
        Fixture("T1b[1,5,77] raw", raw_t1b),
        Fixture("recognize 24:1,6,11", lambda: (h := recognize(_set(24, 1, 6, 11))) is not None
                and h[0] == mobius_ladder_lex(6)),
        Fixture("recognize 24:1,7,9", lambda: (h := recognize(_set(24, 1, 7, 9))) is not None
                and h[0] == cycle_lex(8)),
        Fixture("recognize 24:1,2,3", lambda: recognize(_set(24, 1, 2, 3)) is None),
        Fixture("type3 bullets 60:5,6,12", lambda: bool(type3_necessary(_set(60, 5, 6, 12)))),
        Fixture("decide 1540:2,152,385", lambda: (v := decide(_set(1540, 2, 152, 385))).status is Status.YES
                and v.family == t1_case1(5, 77)),
        Fixture("decide 24:1,2,3", lambda: decide(_set(24, 1, 2, 3)).status is Status.YES),
        Fixture("families at 1540", lambda: {_canon(family_connection_set(F))
                                             for F in enumerate_families(1540)}
                == {_canon(_set(1540, *r)) for r in FAMILIES_1540}),
        Fixture("families at 12", lambda: {F.kind for F in enumerate_families(12)}
                == {FamilyKind.ML, FamilyKind.PR, FamilyKind.C3K}),
        Fixture("gamma3 table", gamma3_ok),
        Fixture("Ml[3] labeling", lambda: verify(_set(12, 1, 3, 5), label_family(mobius_ladder_lex(3))) == 39),
        Fixture("Pr[3] labeling", lambda: verify(_set(12, 2, 3, 4), label_family(prism_lex(3))) == 39),
        Fixture("T1b[5,7,11] labeling", lambda: verify(_set(1540, 5, 413, 737),
                                                        label_family(t1_case2(5, 7, 11))) == 4623),
        Fixture("T1a[5,77] labeling", lambda: verify(_set(1540, 2, 152, 385),
                                                      label_family(t1_case1(5, 77))) == 4623),
        Fixture("C3K[8] labeling", lambda: verify(_set(24, 1, 7, 9), label_cycle_lex(8)) == 75),
        Fixture("search 12:1,3,5", lambda: search_labeling(_set(12, 1, 3, 5)).found),
        Fixture("search 24 candidates", lambda: all(
            search_labeling(_set(24, *r), SearchBudget(200_000)).found
            for r in ((1, 2, 3), (1, 3, 10), (1, 5, 6), (1, 6, 11), (1, 7, 9)))),
    ]


def run_fixtures(gamma3: Sequence[int] = GAMMA3_TABLE) -> tuple[int, list[str]]:
    """Return (number passed, names of failures); exceptions count as failures."""
    failed = []
    passed = 0
    for fx in fixtures(gamma3):
        try:
            ok = bool(fx.check())
        except Exception as exc:  # noqa: BLE001 - report, do not abort the suite
            ok = False
            failed.append(f"{fx.name} ({type(exc).__name__}: {exc})")
            continue
        if ok:
            passed += 1
        else:
            failed.append(fx.name)
    return passed, failed

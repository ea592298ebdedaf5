import pytest
from hypothesis import given
from hypothesis import strategies as st

from circmagic.circulant import canonical_form, make_connection_set, multiply
from circmagic.families import (
    Family,
    FamilyKind,
    Status,
    cycle_lex,
    decide,
    enumerate_families,
    family_connection_set,
    family_raw,
    is_known_magic,
    mobius_ladder_lex,
    parse_family,
    prism_lex,
    recognize,
    recognize_all,
    t1_case1,
    t1_case2,
    t1b_smallest_b,
    t2_family,
    type3_necessary,
)
from circmagic.modular import DomainError, units
from circmagic.oracle import SearchBudget


def S(n, *reps):
    return make_connection_set(n, reps)


def test_parse_and_format_roundtrip():
    for text in ["Ml[3]", "Pr[5]", "C3K[8]", "T1a[5,77]", "T1b[5,7,11]", "T2[5,7]"]:
        assert str(parse_family(text)) == text


@pytest.mark.parametrize("text", ["Ml[1]", "Pr[4]", "T1a[7,5]", "T1a[3,9]", "T1b[1,3,3]", "T2[3,5]", "Zz[3]"])
def test_invalid_parameters(text):
    with pytest.raises(DomainError):
        parse_family(text)


def test_family_sets():
    assert family_connection_set(mobius_ladder_lex(385)).reps == (1, 385, 769)
    assert family_connection_set(prism_lex(385)).reps == (2, 385, 768)
    assert family_connection_set(t1_case1(5, 77)).reps == (2, 152, 385)
    assert family_connection_set(t1_case2(5, 7, 11)).reps == (5, 413, 737)
    assert family_raw(t1_case2(1, 5, 77)) == (1, 1385, 1309)
    assert family_raw(t2_family(5, 7)) == (1, 34, 6)
    assert family_connection_set(t2_family(5, 7)).reps == (1, 6, 34)


def test_smallest_b_is_coprime_to_d():
    for d, d1, d2 in [(3, 5, 7), (5, 7, 11), (3, 7, 11)]:
        b = t1b_smallest_b(d, d1, d2)
        assert b % d and b % d1 == 0 and (b + d) % 4 == 2


def test_enumerate_families_examples():
    assert [str(F) for F in enumerate_families(12)] == ["Ml[3]", "Pr[3]", "C3K[4]"]
    assert {str(F) for F in enumerate_families(105)} == {"C3K[35]", "T2[5,7]"}
    assert len(enumerate_families(1540)) == 9


def test_recognize():
    assert recognize(S(24, 1, 6, 11))[0] == mobius_ladder_lex(6)
    assert recognize(S(24, 1, 7, 9))[0] == cycle_lex(8)
    assert recognize(S(24, 1, 2, 3)) is None
    assert {str(F) for F, _ in recognize_all(S(12, 1, 3, 5))} >= {"Ml[3]"}


def test_known_magic_trivial_families():
    assert is_known_magic(cycle_lex(8)) and not is_known_magic(cycle_lex(6))
    assert is_known_magic(mobius_ladder_lex(4))


@given(st.sampled_from(enumerate_families(1540) + enumerate_families(105) + enumerate_families(420)),
       st.data())
def test_recognition_survives_multipliers(F, data):
    T = family_connection_set(F)
    q = data.draw(st.sampled_from(units(T.n)))
    hit = recognize(multiply(T, q))
    assert hit is not None
    G, p = hit
    assert multiply(multiply(T, q), p) == family_connection_set(G)


def test_type3_bullets():
    assert type3_necessary(S(60, 5, 6, 12))
    with pytest.raises(DomainError):
        type3_necessary(S(24, 1, 2, 3))


@pytest.mark.parametrize("reps,status,reason", [
    ((1540, 2, 152, 385), Status.YES, "family"),
    ((1540, 5, 413, 737), Status.YES, "family"),
    ((105, 1, 6, 34), Status.YES, "family"),
    ((24, 1, 2, 3), Status.YES, "search"),
    ((24, 1, 6, 11), Status.YES, "family"),
    ((7, 1, 2, 3), Status.NO, "empty-kernel"),
    ((15, 1, 2, 4), Status.NO, "empty-kernel"),
    ((18, 1, 5, 7), Status.NO, "theorem-type2"),
])
def test_decide_examples(reps, status, reason):
    v = decide(S(*reps))
    assert (v.status, v.reason) == (status, reason)


def test_decide_unknown_under_small_budget():
    v = decide(S(60, 5, 6, 12), SearchBudget(5_000))
    assert v.status is Status.UNKNOWN and v.reason == "budget"


def test_decide_rejects_disconnected():
    with pytest.raises(DomainError):
        decide(S(24, 2, 4, 6))


def test_family_dataclass_validation():
    with pytest.raises(DomainError):
        Family(FamilyKind.ML, (3, 4))
    assert t1_case2(1, 3, 5).order == 60
    assert cycle_lex(4).trivial and not t2_family(5, 7).trivial


def test_canonical_forms_of_1540_members_are_distinct():
    forms = {canonical_form(family_connection_set(F)) for F in enumerate_families(1540)}
    assert len(forms) == 9

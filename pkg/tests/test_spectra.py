import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from circmagic.circulant import enumerate_sets, make_connection_set
from circmagic.spectra import (
    TypeTag,
    admissible_set,
    candidate_filter,
    candidate_sets,
    char_sum_is_zero,
    classify_char,
    cyclotomic_poly,
    filter_from_js,
    oracle_admissible,
    oracle_zero_mask,
    poly_divmod,
    tag_masks,
    type1_test,
    type2_test,
    type3_test,
)


def S(n, *reps):
    return make_connection_set(n, reps)


@pytest.mark.parametrize("n,coeffs", [
    (1, (-1, 1)),
    (2, (1, 1)),
    (6, (1, -1, 1)),
    (12, (1, 0, -1, 0, 1)),
])
def test_small_cyclotomic_polynomials(n, coeffs):
    assert cyclotomic_poly(n) == coeffs


def test_cyclotomic_105_has_coefficient_minus_two():
    assert min(cyclotomic_poly(105)) == -2


@given(st.integers(1, 60))
def test_cyclotomic_product_is_x_pow_n_minus_one(n):
    from circmagic.spectra import _divisors

    prod = [1]
    for d in _divisors(n):
        p = cyclotomic_poly(d)
        out = [0] * (len(prod) + len(p) - 1)
        for i, a in enumerate(prod):
            for k, b in enumerate(p):
                out[i + k] += a * b
        prod = out
    assert prod == [-1] + [0] * (n - 1) + [1]


def test_poly_divmod_exact():
    q, r = poly_divmod([-1, 0, 0, 1], [-1, 1])
    assert q == [1, 1, 1] and not any(r)


def test_admissible_example_24():
    chars = admissible_set(S(24, 1, 2, 3))
    assert [c.j for c in chars] == [3, 8, 9, 15, 16, 21]
    assert {c.j for c in chars if c.has(TypeTag.T2)} == {8, 16}


def test_admissible_example_60():
    chars = {c.j: c.types for c in admissible_set(S(60, 5, 6, 12))}
    assert sorted(chars) == [2, 14, 15, 22, 26, 34, 38, 45, 46, 58]
    assert chars[15] == chars[45] == frozenset({TypeTag.T1})


def test_empty_kernel_order_seven():
    assert admissible_set(S(7, 1, 2, 3)) == []
    assert not any(char_sum_is_zero(S(7, 1, 2, 3), j) for j in range(1, 7))
    f = candidate_filter(S(7, 1, 2, 3))
    assert not f and f.reason == "empty"


def test_witnesses():
    w = type1_test(S(24, 1, 2, 3), 3)
    assert w is not None and w.assignment[1] == 2 and w.holds(24, 3)
    assert type1_test(S(24, 1, 2, 3), 8) is None
    assert type2_test(S(24, 1, 2, 3), 8).holds(24, 8)
    w3 = type3_test(S(60, 5, 6, 12), 2)
    assert w3.variant == 2 and w3.holds(60, 2)
    assert type3_test(S(60, 5, 6, 12), 15) is None
    assert abs(type1_test(S(60, 5, 6, 12), 15).assignment[1]) == 5


def test_character_of_both_types():
    ch = classify_char(S(60, 1, 5, 9), 5)
    assert ch.types == frozenset({TypeTag.T1, TypeTag.T2})


def test_filter_common_divisor():
    f = filter_from_js(24, [4, 8, 20])
    assert not f and f.reason == "gcd" and f.divisor == 4
    assert filter_from_js(24, [3, 8])


def test_candidate_sets_small_orders():
    assert [c.reps for c in candidate_sets(12)] == [(1, 3, 5), (2, 3, 4)]
    assert [c.reps for c in candidate_sets(24)] == [
        (1, 2, 3), (1, 3, 10), (1, 5, 6), (1, 6, 11), (1, 7, 9)]


@pytest.mark.parametrize("n", [24, 30, 48, 60, 84])
def test_engines_agree_on_every_class(n):
    sets = enumerate_sets(n)
    reps = np.array([s.reps for s in sets])
    oracle = oracle_zero_mask(n, reps)
    masks = tag_masks(n, reps)
    union = masks[TypeTag.T1] | masks[TypeTag.T2] | masks[TypeTag.T3]
    oracle[:, 0] = False
    assert np.array_equal(oracle, union)


@given(st.sampled_from([12, 20, 24, 30, 36, 40, 60, 72, 90, 120]), st.data())
def test_every_witness_substitutes_back(n, data):
    reps = data.draw(st.lists(st.integers(1, (n - 1) // 2), min_size=3, max_size=3, unique=True))
    T = make_connection_set(n, reps)
    exact = set(oracle_admissible(T))
    chars = admissible_set(T)
    assert {c.j for c in chars} == exact
    for c in chars:
        assert c.witnesses and all(w.holds(n, c.j) for w in c.witnesses)
        assert char_sum_is_zero(T, c.j)


@given(st.integers(7, 80), st.data())
def test_admissible_set_closed_under_negation_and_units(n, data):
    reps = data.draw(st.lists(st.integers(1, (n - 1) // 2), min_size=3, max_size=3, unique=True))
    T = make_connection_set(n, reps)
    js = set(oracle_admissible(T))
    assert {(-j) % n for j in js} == js

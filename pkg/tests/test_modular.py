import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circmagic.modular import (
    Congruence,
    DomainError,
    crt,
    crt_solve,
    gcd_all,
    is_prime,
    mod_inverse,
    p_part,
    prime_factors,
    units,
    xgcd,
)


def test_crt_family_residues():
    assert crt((0, 4), (2, 5), (-2, 77)) == 152
    assert crt((0, 4), (2, 7), (-2, 55)) == 548
    assert crt((0, 4), (2, 3), (-2, 5)) == 8


def test_crt_empty_and_trivial_moduli():
    assert crt_solve([]) == 0
    assert crt((5, 1), (2, 3)) == 2


def test_crt_rejects_shared_factor():
    with pytest.raises(DomainError):
        crt((1, 4), (0, 6))


def test_congruence_normalizes():
    c = Congruence(-2, 77)
    assert c.residue == 75 and c.holds(152)
    with pytest.raises(DomainError):
        Congruence(1, 0)


def test_p_part():
    assert p_part(60, 5) == 5
    assert p_part(60, 2) == 4
    assert p_part(60, 7) == 1
    with pytest.raises(DomainError):
        p_part(60, 4)
    with pytest.raises(DomainError):
        p_part(0, 2)


def test_factorization_and_primes():
    assert prime_factors(1540) == {2: 2, 5: 1, 7: 1, 11: 1}
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_units_and_inverse():
    assert units(12) == [1, 5, 7, 11]
    assert mod_inverse(7, 12) == 7
    with pytest.raises(DomainError):
        mod_inverse(4, 12)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd_bezout(a, b):
    g, x, y = xgcd(a, b)
    assert g == math.gcd(a, b)
    assert a * x + b * y == g


@given(st.lists(st.integers(1, 10**5), min_size=1, max_size=6))
def test_gcd_all_divides(values):
    g = gcd_all(values)
    assert all(v % g == 0 for v in values)


_coprime_pairs = st.lists(st.sampled_from([3, 4, 5, 7, 11, 13, 17, 19]), min_size=1, max_size=4, unique=True)


@given(_coprime_pairs, st.data())
def test_crt_solution_satisfies_every_congruence(moduli, data):
    residues = [data.draw(st.integers(-100, 100)) for _ in moduli]
    x = crt(*zip(residues, moduli))
    assert 0 <= x < math.prod(moduli)
    assert all((x - r) % m == 0 for r, m in zip(residues, moduli))


@given(st.integers(1, 5000))
def test_factorization_roundtrip(m):
    f = prime_factors(m)
    assert math.prod(p**e for p, e in f.items()) == m
    assert all(is_prime(p) for p in f)
    for p in f:
        assert p_part(m, p) == p ** f[p]

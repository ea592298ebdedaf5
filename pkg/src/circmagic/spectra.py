"""Admissible characters of 6-valent circulants.

A character index j is admissible for S when chi_j(S) = sum_{s in S} zeta_n^{js}
vanishes.  Two exact engines decide this:

* an oracle that reduces sum_s x^{js mod n} modulo the cyclotomic polynomial
  Phi_n (integer polynomial arithmetic only);
* congruence tests for the three families of rational solutions of
  cos(r1 pi) + cos(r2 pi) + cos(r3 pi) = 0, which also classify each
  admissible j by type and produce integer witnesses.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .circulant import ConnectionSet
from .modular import DomainError, gcd_all


# ---------------------------------------------------------------------------
# Cyclotomic oracle
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Quotient and remainder of integer polynomials; ``den`` must be monic.

    Coefficients are listed by ascending power.
    """
    if not den or den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    dd = len(den) - 1
    quot = [0] * max(len(rem) - dd, 1)
    for k in range(len(rem) - 1, dd - 1, -1):
        coef = rem[k]
        if coef:
            quot[k - dd] = coef
            for i, c in enumerate(den):
                rem[k - dd + i] -= coef * c
    rem = rem[:dd] if dd else []
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError(f"cyclotomic_poly needs n >= 1, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num, rem = poly_divmod(num, cyclotomic_poly(d))
        assert not rem, "x^n - 1 not divisible by a proper cyclotomic factor"
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def char_sum_is_zero(S: ConnectionSet, j: int) -> bool:
    """True iff chi_j(S) = 0, i.e. Phi_n divides sum_{s in S} x^{js mod n}."""
    n = S.n
    poly = [0] * n
    for s in S.elements:
        poly[(j * s) % n] += 1
    _, rem = poly_divmod(poly, cyclotomic_poly(n))
    return not rem


@lru_cache(maxsize=64)
def _power_table(n: int) -> np.ndarray:
    """Row e holds x^e + x^{-e} reduced modulo Phi_n, for 0 <= e < n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(n):
        rows.append(cur)
        nxt = [0] + cur
        top = nxt.pop() if deg else 0
        if top:
            nxt = [c - top * p for c, p in zip(nxt, phi)]
        cur = nxt
    big = max((abs(c) for r in rows for c in r), default=0)
    dtype = np.int64 if big < 2**40 else object
    pw = np.array(rows, dtype=dtype).reshape(n, deg)
    return pw + pw[(-np.arange(n)) % n]


def oracle_zero_mask(n: int, reps: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Boolean (C, n) array: entry [k, j] is chi_j(S_k) == 0.

    ``reps`` is a (C, m) integer array of connection-set representatives.
    A float cosine sum discards entries that are clearly nonzero; the rest
    are decided exactly by reduction modulo Phi_n.
    """
    table = _power_table(n)
    cos = 2 * np.cos(2 * np.pi * np.arange(n) / n)
    reps = np.atleast_2d(np.asarray(reps, dtype=np.int64))
    js = np.arange(n, dtype=np.int64)
    out = np.zeros((len(reps), n), dtype=bool)
    for lo in range(0, len(reps), chunk):
        block = reps[lo:lo + chunk]
        exps = (js[None, :, None] * block[:, None, :]) % n
        near = np.abs(cos[exps].sum(axis=2)) < 1e-6
        ks, jj = np.nonzero(near)
        if len(ks):
            total = table[exps[ks, jj]].sum(axis=1)
            out[lo + ks, jj] = ~np.any(total != 0, axis=1)
    return out


def oracle_admissible(S: ConnectionSet) -> list[int]:
    mask = oracle_zero_mask(S.n, np.array([S.reps]))[0]
    return [int(j) for j in np.nonzero(mask)[0] if j]


# ---------------------------------------------------------------------------
# Congruence engine
# ---------------------------------------------------------------------------

class TypeTag(enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TypeWitness:
    """Signed assignment (s1, s2, s3) and integer multipliers for one type.

    T1 and T2 carry (k1, k2); T3 carries (k1, k2, k3), ``variant`` (1 or 2,
    the two exceptional cosine triples) and ``j0`` when n/30 divides j.
    """

    tag: TypeTag
    assignment: tuple[int, int, int]
    ks: tuple[int, ...]
    j0: Optional[int] = None
    variant: Optional[int] = None

    def holds(self, n: int, j: int) -> bool:
        """Substitute back into the defining integer identities."""
        s1, s2, s3 = self.assignment
        if self.tag is TypeTag.T1:
            n0 = n // 4
            k1, k2 = self.ks
            return n % 4 == 0 and j * s2 == n0 * (1 + 2 * k1) and j * (s1 + s3) == 2 * n0 * (1 + 2 * k2)
        if self.tag is TypeTag.T2:
            n0 = n // 3
            k1, k2 = self.ks
            return n % 3 == 0 and j * (s2 - s1) == n0 * (1 + 3 * k1) and j * (s3 - s1) == n0 * (2 + 3 * k2)
        k1, k2, k3 = self.ks
        if n % 30:
            return False
        if self.variant == 1:
            ok = (10 * j * s1 == n * (1 + 10 * k1) and 10 * j * s2 == n * (3 + 10 * k2)
                  and 3 * j * s3 == n * (1 + 3 * k3))
        else:
            ok = (6 * j * s1 == n * (1 + 6 * k1) and 5 * j * s2 == n * (1 + 5 * k2)
                  and 5 * j * s3 == n * (2 + 5 * k3))
        if self.j0 is not None:
            ok = ok and j == self.j0 * (n // 30)
        return ok


@dataclass(frozen=True)
class AdmissibleChar:
    j: int
    types: frozenset[TypeTag]
    witnesses: tuple[TypeWitness, ...] = field(default=())

    def has(self, tag: TypeTag) -> bool:
        return tag in self.types


def _signed(values: Sequence[int], pattern: int) -> tuple[int, ...]:
    return tuple(-v if pattern >> i & 1 else v for i, v in enumerate(values))


def type1_test(S: ConnectionSet, j: int) -> Optional[TypeWitness]:
    n = S.n
    if n % 4:
        return None
    n0 = n // 4
    reps = S.reps
    for i in range(3):
        s2 = reps[i]
        if (j * s2) % (2 * n0) != n0:
            continue
        rest = [r for k, r in enumerate(reps) if k != i]
        for pattern in range(4):
            s1, s3 = _signed(rest, pattern)
            if (j * (s1 + s3)) % (4 * n0) == 2 * n0:
                k1 = (j * s2 - n0) // (2 * n0)
                k2 = (j * (s1 + s3) - 2 * n0) // (4 * n0)
                return TypeWitness(TypeTag.T1, (s1, s2, s3), (k1, k2))
    return None


def type2_test(S: ConnectionSet, j: int) -> Optional[TypeWitness]:
    n = S.n
    if n % 3:
        return None
    n0 = n // 3
    for perm in itertools.permutations(S.reps):
        for pattern in range(8):
            s1, s2, s3 = _signed(perm, pattern)
            if (j * (s2 - s1)) % n == n0 and (j * (s3 - s1)) % n == 2 * n0:
                k1 = (j * (s2 - s1) - n0) // n
                k2 = (j * (s3 - s1) - 2 * n0) // n
                return TypeWitness(TypeTag.T2, (s1, s2, s3), (k1, k2))
    return None


# targets (as fractions of n) and the denominators of the integer identities
_T3_FORMS = {
    1: ((1, 10), (3, 10), (1, 3)),
    2: ((1, 6), (1, 5), (2, 5)),
}


def type3_test(S: ConnectionSet, j: int) -> Optional[TypeWitness]:
    n = S.n
    if n % 30:
        return None
    for variant, form in _T3_FORMS.items():
        targets = [n * num // den for num, den in form]
        for perm in itertools.permutations(S.reps):
            for pattern in range(8):
                signed = _signed(perm, pattern)
                if all((j * s) % n == t for s, t in zip(signed, targets)):
                    # den*j*s = n*(num + den*k)
                    ks = tuple((den * j * s - n * num) // (den * n)
                               for s, (num, den) in zip(signed, form))
                    n0 = n // 30
                    j0 = j // n0 if j % n0 == 0 else None
                    return TypeWitness(TypeTag.T3, signed, ks, j0=j0, variant=variant)
    return None


_TESTS = ((TypeTag.T1, type1_test), (TypeTag.T2, type2_test), (TypeTag.T3, type3_test))


def classify_char(S: ConnectionSet, j: int) -> Optional[AdmissibleChar]:
    witnesses = []
    for _, test in _TESTS:
        w = test(S, j)
        if w is not None:
            witnesses.append(w)
    if not witnesses:
        return None
    return AdmissibleChar(j, frozenset(w.tag for w in witnesses), tuple(witnesses))


def admissible_set(S: ConnectionSet) -> list[AdmissibleChar]:
    """Every j in [1, n-1] passing some type test, ascending, with witnesses."""
    if S.n % 3 and S.n % 4:
        return []  # no type applies (30 | n implies 3 | n)
    if len(S.reps) != 3:
        raise DomainError(f"{S} is not 6-valent")
    # the vectorized masks pick the j's; the scalar tests then supply witnesses
    masks = tag_masks(S.n, np.array([S.reps]))
    hits = {tag: m[0] for tag, m in masks.items()}
    out = []
    for j in np.nonzero(hits[TypeTag.T1] | hits[TypeTag.T2] | hits[TypeTag.T3])[0]:
        j = int(j)
        ws = tuple(test(S, j) for tag, test in _TESTS if hits[tag][j])
        assert all(w is not None for w in ws), (S, j)
        out.append(AdmissibleChar(j, frozenset(w.tag for w in ws), ws))
    return out


def tag_masks(n: int, reps: np.ndarray) -> dict[TypeTag, np.ndarray]:
    """Vectorized congruence engine.

    Returns boolean (C, n) arrays per tag; entry [k, j] says j passes the
    type test for the set with representatives ``reps[k]``.
    """
    reps = np.atleast_2d(np.asarray(reps, dtype=np.int64))
    js = np.arange(n, dtype=np.int64)
    R = [(js[None, :] * reps[:, i:i + 1]) % n for i in range(3)]
    shape = (len(reps), n)
    out = {t: np.zeros(shape, dtype=bool) for t in TypeTag}
    if n % 4 == 0:
        n0, half = n // 4, n // 2
        m = out[TypeTag.T1]
        for i in range(3):
            r1, r3 = (R[k] for k in range(3) if k != i)
            m |= (R[i] % (2 * n0) == n0) & (((r1 + r3) % n == half) | ((r1 - r3) % n == half))
    if n % 3 == 0:
        n0 = n // 3
        m = out[TypeTag.T2]
        # s1, s1 + n0, s1 + 2n0 is a coset of <n0>: some signing of the three
        # residues must agree modulo n0 and stay pairwise distinct modulo n
        r1, r2, r3 = R
        for sg2, sg3 in itertools.product((1, -1), repeat=2):
            x2, x3 = (sg2 * r2) % n, (sg3 * r3) % n
            m |= (((x2 - r1) % n0 == 0) & ((x3 - r1) % n0 == 0)
                  & (x2 != r1) & (x3 != r1) & (x2 != x3))
    if n % 30 == 0:
        m = out[TypeTag.T3]
        for form in _T3_FORMS.values():
            targets = [n * num // den for num, den in form]
            for p in itertools.permutations(range(3)):
                ok = np.ones(shape, dtype=bool)
                for k, t in zip(p, targets):
                    ok &= (R[k] == t) | (R[k] == (n - t) % n)
                m |= ok
    for m in out.values():
        m[:, 0] = False
    return out


@dataclass(frozen=True)
class FilterResult:
    passed: bool
    reason: Optional[str] = None  # "empty" | "gcd"
    divisor: Optional[int] = None

    def __bool__(self) -> bool:
        return self.passed


def filter_from_js(n: int, js: Sequence[int]) -> FilterResult:
    if not js:
        return FilterResult(False, "empty")
    d = math.gcd(n, gcd_all(js))
    if 1 < d < n:
        return FilterResult(False, "gcd", d)
    return FilterResult(True)


def candidate_filter(S: ConnectionSet, chars: Optional[list[AdmissibleChar]] = None) -> FilterResult:
    """Kernel-based necessary conditions: nonempty A_n(S) with no common divisor."""
    if chars is None:
        chars = admissible_set(S)
    return filter_from_js(S.n, [c.j for c in chars])


def candidate_sets(n: int) -> list[ConnectionSet]:
    """Classes of order n (up to multipliers) that pass :func:`candidate_filter`."""
    from .circulant import enumerate_sets

    sets = enumerate_sets(n)
    if not sets:
        return []
    mask = oracle_zero_mask(n, np.array([S.reps for S in sets]))
    return [S for S, row in zip(sets, mask)
            if filter_from_js(n, [int(j) for j in np.nonzero(row)[0] if j])]

"""Classified families of 6-valent circulants and the decision procedure."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .circulant import ConnectionSet, canonical_form, make_connection_set, multipliers_between
from .modular import DomainError, crt, p_part, prime_factors
from .oracle import SearchBudget, SearchStatus, hard_cap, search_labeling
from .spectra import AdmissibleChar, FilterResult, TypeTag, admissible_set, candidate_filter


class FamilyKind(enum.Enum):
    ML = "Ml"      # Möbius ladder Ml_m[2K1], n = 4m
    PR = "Pr"      # prism Pr_m[2K1], m odd, n = 4m
    C3K = "C3K"    # cycle C_m[3K1], n = 3m
    T1A = "T1a"    # type-1 family, two coprime factors, n = 4dd'
    T1B = "T1b"    # type-1 family, three coprime factors, n = 4dd'd''
    T2 = "T2"      # type-2 family, n = 3dd'


TRIVIAL_KINDS = (FamilyKind.ML, FamilyKind.PR, FamilyKind.C3K)
TYPE1_KINDS = (FamilyKind.ML, FamilyKind.PR, FamilyKind.T1A, FamilyKind.T1B)
TYPE2_KINDS = (FamilyKind.C3K, FamilyKind.T2)
_ARITY = {FamilyKind.ML: 1, FamilyKind.PR: 1, FamilyKind.C3K: 1,
          FamilyKind.T1A: 2, FamilyKind.T1B: 3, FamilyKind.T2: 2}


def _pairwise_coprime(*xs: int) -> bool:
    return all(math.gcd(x, y) == 1 for i, x in enumerate(xs) for y in xs[i + 1:])


@dataclass(frozen=True)
class Family:
    """A family variant with its parameters, validated on construction."""

    kind: FamilyKind
    params: tuple[int, ...]

    def __post_init__(self) -> None:
        k, p = self.kind, self.params
        if len(p) != _ARITY[k]:
            raise DomainError(f"{k.value} takes {_ARITY[k]} parameters, got {p}")
        if k is FamilyKind.ML:
            ok = p[0] >= 2
        elif k is FamilyKind.PR:
            ok = p[0] >= 3 and p[0] % 2 == 1
        elif k is FamilyKind.C3K:
            ok = p[0] >= 3
        elif k is FamilyKind.T1A:
            d, d1 = p
            ok = 1 < d < d1 and d % 2 == 1 and d1 % 2 == 1 and math.gcd(d, d1) == 1
        elif k is FamilyKind.T1B:
            d, d1, d2 = p
            ok = 1 <= d < d1 < d2 and all(x % 2 for x in p) and _pairwise_coprime(*p)
        else:
            d, d1 = p
            ok = 1 < d < d1 and math.gcd(d, d1) == 1 and d % 3 and d1 % 3
        if not ok:
            raise DomainError(f"invalid parameters for {k.value}: {p}")

    @property
    def order(self) -> int:
        p = math.prod(self.params)
        return 3 * p if self.kind in TYPE2_KINDS else 4 * p

    @property
    def trivial(self) -> bool:
        return self.kind in TRIVIAL_KINDS

    def __str__(self) -> str:
        return f"{self.kind.value}[{','.join(map(str, self.params))}]"


def mobius_ladder_lex(m: int) -> Family:
    return Family(FamilyKind.ML, (m,))


def prism_lex(m: int) -> Family:
    return Family(FamilyKind.PR, (m,))


def cycle_lex(m: int) -> Family:
    return Family(FamilyKind.C3K, (m,))


def t1_case1(d: int, d1: int) -> Family:
    return Family(FamilyKind.T1A, (d, d1))


def t1_case2(d: int, d1: int, d2: int) -> Family:
    return Family(FamilyKind.T1B, (d, d1, d2))


def t2_family(d: int, d1: int) -> Family:
    return Family(FamilyKind.T2, (d, d1))


_FAMILY_RE = re.compile(r"^\s*(Ml|Pr|C3K|T1a|T1b|T2)\[([\d,\s]+)\]\s*$")


def parse_family(text: str) -> Family:
    """Parse "Ml[m]", "Pr[m]", "C3K[m]", "T1a[d,d']", "T1b[d,d',d'']", "T2[d,d']"."""
    m = _FAMILY_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse family {text!r}")
    return Family(FamilyKind(m.group(1)), tuple(int(x) for x in m.group(2).split(",")))


def t1b_smallest_b(d: int, d1: int, d2: int) -> int:
    """Smallest solution b' of the left type-1 system that is coprime to d."""
    step = 4 * d1 * d2
    b = crt((2 - d, 4), (0, d1), (-d, d2))
    while math.gcd(b, d) != 1:
        b += step
    return b


def type2_delta(n0: int) -> int:
    """The sign delta with n0 ≡ delta (mod 3)."""
    if n0 % 3 == 0:
        raise DomainError(f"{n0} is divisible by 3")
    return 1 if n0 % 3 == 1 else -1


def family_raw(F: Family) -> tuple[int, int, int]:
    """Unnormalized defining elements of the family's connection set.

    The constructive labelings use these exact residues (signs matter).
    """
    k, p = F.kind, F.params
    if k is FamilyKind.ML:
        m = p[0]
        return (1, m, 2 * m - 1)
    if k is FamilyKind.PR:
        m = p[0]
        return (2, m, 2 * m - 2)
    if k is FamilyKind.C3K:
        m = p[0]
        return (1, m - 1, m + 1)
    if k is FamilyKind.T1A:
        d, d1 = p
        return (2, d * d1, crt((0, 4), (2, d), (-2, d1)))
    if k is FamilyKind.T1B:
        d, d1, d2 = p
        b = t1b_smallest_b(d, d1, d2)
        c = crt((2 - d, 4), (-b, d), (-d, d1), (0, d2))
        return (d, b, c)
    d, d1 = p
    n0 = d * d1
    c = crt((0, 3), (1, d), (-1, d1))
    return (1, n0 + type2_delta(n0), c)


def family_connection_set(F: Family) -> ConnectionSet:
    return make_connection_set(F.order, family_raw(F))


def _unitary_splits(m: int, parts: int) -> list[tuple[int, ...]]:
    """Ordered tuples (x1 <= ... ) of pairwise coprime factors with product m."""
    blocks = [p ** e for p, e in sorted(prime_factors(m).items())] if m > 1 else []
    out = set()

    def rec(i: int, acc: list[int]) -> None:
        if i == len(blocks):
            out.add(tuple(sorted(acc)))
            return
        for k in range(parts):
            acc[k] *= blocks[i]
            rec(i + 1, acc)
            acc[k] //= blocks[i]

    rec(0, [1] * parts)
    return sorted(out)


def enumerate_families(n: int) -> list[Family]:
    """Every valid family instance of order n, in a fixed order."""
    if n < 7:
        raise DomainError(f"order {n} too small for valency 6")
    out: list[Family] = []
    if n % 4 == 0:
        m = n // 4
        if m >= 2:
            out.append(mobius_ladder_lex(m))
        if m >= 3 and m % 2:
            out.append(prism_lex(m))
    if n % 3 == 0 and n // 3 >= 3:
        out.append(cycle_lex(n // 3))
    if n % 4 == 0 and (n // 4) % 2:
        n0 = n // 4
        for d, d1 in _unitary_splits(n0, 2):
            if 1 < d < d1:
                out.append(t1_case1(d, d1))
        for d, d1, d2 in _unitary_splits(n0, 3):
            if d < d1 < d2:
                out.append(t1_case2(d, d1, d2))
    if n % 3 == 0 and (n // 3) % 3:
        for d, d1 in _unitary_splits(n // 3, 2):
            if 1 < d < d1:
                out.append(t2_family(d, d1))
    return out


def recognize_all(S: ConnectionSet, kinds=tuple(FamilyKind)) -> list[tuple[Family, int]]:
    """Every family instance of order n equivalent to S, each with its least multiplier."""
    canon = canonical_form(S)
    hits = []
    for F in enumerate_families(S.n):
        if F.kind not in kinds:
            continue
        T = family_connection_set(F)
        if canonical_form(T) == canon:
            hits.append((F, multipliers_between(S, T)[0]))
    return hits


def recognize(S: ConnectionSet, kinds=tuple(FamilyKind)) -> Optional[tuple[Family, int]]:
    """First (family, q) with multiply(S, q) equal to the family's set, or None."""
    hits = recognize_all(S, kinds)
    return hits[0] if hits else None


def is_known_magic(F: Family) -> bool:
    """C_m[3K1] is distance magic iff m is odd or 4 | m; all other families are."""
    if F.kind is FamilyKind.C3K:
        m = F.params[0]
        return m % 2 == 1 or m % 4 == 0
    if F.kind is FamilyKind.T2:
        return all(x % 2 for x in F.params)
    return True


# ---------------------------------------------------------------------------
# Type-3 necessary conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    passed: bool
    bullet: Optional[str] = None

    def __bool__(self) -> bool:
        return self.passed


def type3_necessary(S: ConnectionSet, chars: Optional[list[AdmissibleChar]] = None) -> Check:
    """First violated necessary condition for distance magic with a type-3 character."""
    if chars is None:
        chars = admissible_set(S)
    if not any(c.has(TypeTag.T3) for c in chars):
        raise DomainError(f"{S} has no type-3 admissible character")
    n = S.n
    if n % 60:
        return Check(False, "divisibility")
    if p_part(n, 3) != 3:
        return Check(False, "3-part")
    if p_part(n, 5) != 5:
        return Check(False, "5-part")
    fives = [s for s in S.reps if s % 5 == 0]
    if len(fives) != 1 or fives[0] not in (n // 12, 5 * n // 12):
        return Check(False, "five-element")
    t1 = [c.j for c in chars if c.has(TypeTag.T1)]
    if not t1:
        return Check(False, "needs-T1")
    if any(c.has(TypeTag.T2) for c in chars):
        return Check(False, "no-T2")
    if any(j % 2 == 0 or j % 15 for j in t1):
        return Check(False, "T1-parity")
    if any(c.j % 2 or math.gcd(c.j, 15) != 1 for c in chars if c.has(TypeTag.T3)):
        return Check(False, "T3-parity")
    return Check(True)


# ---------------------------------------------------------------------------
# Decision procedure
# ---------------------------------------------------------------------------

class Status(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DmVerdict:
    status: Status
    reason: str  # decisive step, e.g. "family", "search", "empty-kernel", "theorem-type1"
    family: Optional[Family] = None
    multiplier: Optional[int] = None
    labeling: Optional[tuple[int, ...]] = None
    search: dict = field(default_factory=dict)
    profile: tuple[str, ...] = ()

    @property
    def yes(self) -> bool:
        return self.status is Status.YES


def tag_profile(chars: list[AdmissibleChar]) -> tuple[str, ...]:
    """Tags present anywhere in A_n(S), e.g. ("T1", "T2")."""
    return tuple(t.value for t in TypeTag if any(c.has(t) for c in chars))


def decide(S: ConnectionSet, budget: SearchBudget = SearchBudget()) -> DmVerdict:
    """Decide whether Circ(n; S) is distance magic.

    Theorems settle every set whose admissible characters share a type; the
    mixed cases fall back to the search oracle under ``budget``.
    """
    if not S.connected or S.valency != 6:
        raise DomainError(f"{S} is not a connected 6-valent connection set")
    chars = admissible_set(S)
    profile = tag_profile(chars)
    filt: FilterResult = candidate_filter(S, chars)
    if not filt:
        reason = "empty-kernel" if filt.reason == "empty" else "common-divisor"
        return DmVerdict(Status.NO, reason, profile=profile)

    def yes(hit: tuple[Family, int]) -> DmVerdict:
        return DmVerdict(Status.YES, "family", hit[0], hit[1], profile=profile)

    if all(c.has(TypeTag.T1) for c in chars):
        hit = recognize(S, TYPE1_KINDS)
        return yes(hit) if hit else DmVerdict(Status.NO, "theorem-type1", profile=profile)
    if all(c.has(TypeTag.T2) for c in chars):
        hit = recognize(S, TYPE2_KINDS) if S.n % 2 else None
        return yes(hit) if hit else DmVerdict(Status.NO, "theorem-type2", profile=profile)
    if any(c.has(TypeTag.T3) for c in chars):
        if not type3_necessary(S, chars):
            return DmVerdict(Status.NO, "type3-necessary", profile=profile)
    # mixed profile: the lexicographic products are magic regardless of types
    for F, q in recognize_all(S, TRIVIAL_KINDS):
        if is_known_magic(F):
            return yes((F, q))
    out = search_labeling(S, budget)
    if out.status is SearchStatus.FOUND:
        return DmVerdict(Status.YES, "search", labeling=out.values, search=out.stats(), profile=profile)
    if out.status is SearchStatus.EXHAUSTED and S.n <= hard_cap():
        return DmVerdict(Status.NO, "search-exhausted", search=out.stats(), profile=profile)
    return DmVerdict(Status.UNKNOWN, "budget", search=out.stats(), profile=profile)

"""Constructive distance magic labelings and the universal verifier."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .circulant import ConnectionSet, make_connection_set, multiply, neighbors
from .families import (
    Family,
    FamilyKind,
    _unitary_splits,
    cycle_lex,
    family_connection_set,
    family_raw,
    recognize,
    t2_family,
    type2_delta,
)
from .modular import DomainError
from .oracle import SearchBudget, search_constrained, search_labeling


class LabelingNotFound(RuntimeError):
    """A search-backed construction ran out of budget or space."""


@dataclass(frozen=True)
class Labeling:
    """Bijection Z_n -> {1, ..., n}; ``values[x]`` is the label of vertex x."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != self.n or sorted(self.values) != list(range(1, self.n + 1)):
            raise DomainError(f"labels are not a bijection onto 1..{self.n}")

    def __getitem__(self, x: int) -> int:
        return self.values[x % self.n]


def neighbor_sums(S: ConnectionSet, L: Labeling) -> list[int]:
    return [sum(L[u] for u in neighbors(S, v)) for v in range(S.n)]


def verify(S: ConnectionSet, L: Labeling) -> Optional[int]:
    """The magic constant of L on Circ(n; S), or None if L is not magic."""
    if L.n != S.n:
        raise DomainError(f"labeling of order {L.n} does not fit Z_{S.n}")
    sums = neighbor_sums(S, L)
    kappa = sums[0]
    if any(s != kappa for s in sums):
        return None
    assert kappa == len(S.reps) * (S.n + 1)
    return kappa


# ---------------------------------------------------------------------------
# Lexicographic products with 2K1
# ---------------------------------------------------------------------------

def label_lex_pair(F: Family) -> Labeling:
    """Twin pairs {x, x + 2m} receive labels x + 1 and 4m - x."""
    if F.kind not in (FamilyKind.ML, FamilyKind.PR):
        raise DomainError(f"{F} is not Ml[m] or Pr[m]")
    m = F.params[0]
    half = 2 * m
    return Labeling(4 * m, tuple(range(1, half + 1)) + tuple(4 * m - x for x in range(half)))


# ---------------------------------------------------------------------------
# Coordinates on a cyclic subgroup
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinateScaffold:
    """Coordinates x = zeta(x)*lam + xi(x)*mu on H = <step> in Z_n."""

    n: int
    step: int
    lam: int
    mu: int
    row: int
    zeta: dict
    xi: dict

    def ell_h(self, x: int) -> int:
        x %= self.n
        return 1 + self.zeta[x] + self.xi[x] * self.row


def build_scaffold(n: int, step: int, lam: int, mu: int, row: int, col: int) -> CoordinateScaffold:
    """Tabulate coordinates by iterating over all (zeta, xi) pairs.

    Raises DomainError unless the coordinate map is a bijection onto <step>.
    """
    if n % step or row * col != n // step:
        raise DomainError(f"{row}x{col} grid cannot cover <{step}> in Z_{n}")
    zeta: dict[int, int] = {}
    xi: dict[int, int] = {}
    for z in range(row):
        for k in range(col):
            x = (z * lam + k * mu) % n
            if x % step or x in zeta:
                raise DomainError(f"coordinates (lam={lam}, mu={mu}) are not a bijection onto <{step}>")
            zeta[x] = z
            xi[x] = k
    return CoordinateScaffold(n, step, lam % n, mu % n, row, zeta, xi)


def residue_ell_h(n: int, step: int, moduli: Sequence[int]) -> dict:
    """Mixed-radix label of y = step*k in <step> from the residues of k.

    With pairwise coprime ``moduli`` whose product is n / step this is a
    bijection onto 1..n/step that is additive in each residue separately.
    """
    size = n // step
    if n % step or math.prod(moduli) != size:
        raise DomainError(f"moduli {tuple(moduli)} do not factor |<{step}>| = {size}")
    out = {}
    for k in range(size):
        lab, radix = 1, 1
        for m in moduli:
            lab += radix * (k % m)
            radix *= m
        out[step * k] = lab
    return out


def label_t1_case2(F: Family, rule: str = "auto") -> Labeling:
    """Four-coset labeling of a T1b circulant.

    ``rule`` picks the labeling of H = <4>: "grid" uses the (zeta, xi) grid of
    size dd' x d'', "residue" uses the residues of x/4 modulo d, d', d''.
    The grid coordinates carry between axes once d > 1 (<lam> and <mu> then
    meet in a subgroup of order d) and the sums stop balancing, so "auto"
    takes the grid only for d = 1.
    """
    if F.kind is not FamilyKind.T1B:
        raise DomainError(f"{F} is not a T1b family")
    d, d1, d2 = F.params
    _, b, c = family_raw(F)
    n0 = d * d1 * d2
    n = 4 * n0
    if rule == "auto":
        rule = "grid" if d == 1 else "residue"
    if rule == "grid":
        sc = build_scaffold(n, 4, b + d + 2 * n0, c + d + 2 * n0, d * d1, d2)
        ell_h = sc.ell_h
    elif rule == "residue":
        table = residue_ell_h(n, 4, (d, d1, d2))
        ell_h = lambda x: table[x % n]  # noqa: E731
    else:
        raise DomainError(f"unknown rule {rule!r}")
    delta = 1 if n0 % 4 == 1 else -1
    vals = []
    for x in range(n):
        r = x % 4
        if r == 0:
            vals.append(ell_h(x))
        elif r == 1:
            vals.append(n0 + ell_h(x - delta * n0))
        elif r == 2:
            vals.append(4 * n0 + 1 - ell_h(x + 2 * n0))
        else:
            vals.append(3 * n0 + 1 - ell_h(x + delta * n0))
    return Labeling(n, tuple(vals))


def label_t2(F: Family) -> Labeling:
    if F.kind is not FamilyKind.T2:
        raise DomainError(f"{F} is not a T2 family")
    d, d1 = F.params
    if d % 2 == 0 or d1 % 2 == 0:
        raise DomainError(f"{F} has even order; no type-2 labeling exists")
    n0 = d * d1
    n = 3 * n0
    c = family_raw(F)[2]
    delta = type2_delta(n0)
    lam = c + 1 - delta * n0
    sc = build_scaffold(n, 3, lam, c - 1 + delta * n0, d, d1)
    vals = []
    for x in range(n):
        r = x % 3
        if r == 0:
            vals.append(sc.ell_h(x))
        elif r == 1:
            vals.append(n0 + sc.ell_h(x + lam - 1))
        else:
            vals.append(2 * n0 + sc.ell_h(-2 * (x + 2 * (lam - 1))))
    return Labeling(n, tuple(vals))


# ---------------------------------------------------------------------------
# Tetravalent sub-labeling and the first type-1 family
# ---------------------------------------------------------------------------

def tetravalent_contract_ok(L: Labeling, n0: int, c0: int) -> bool:
    """Magic on Circ(2n0; {±1, ±c0}), low labels on even vertices, antipodal sums 2n0+1."""
    D = make_connection_set(2 * n0, [1, c0], size=2)
    return (
        verify(D, L) == 2 * (2 * n0 + 1)
        and sorted(L.values[0::2]) == list(range(1, n0 + 1))
        and all(L[y] + L[y + n0] == 2 * n0 + 1 for y in range(2 * n0))
    )


def _tetravalent_product(n0: int, c0: int) -> Labeling:
    # Z_{2n0} = Z_2 x Z_d x Z_d' with c0 = (0, 1, -1), 1 = (1, 1, 1), n0 = (1, 0, 0);
    # a label 1 + u + d*v on even vertices cancels in every neighbourhood.
    d = math.gcd(c0 - 1, n0)
    d1 = math.gcd(c0 + 1, n0)
    vals = [0] * (2 * n0)
    for y in range(0, 2 * n0, 2):
        lab = 1 + y % d + d * (y % d1)
        vals[y] = lab
        vals[(y + n0) % (2 * n0)] = 2 * n0 + 1 - lab
    return Labeling(2 * n0, tuple(vals))


def tetravalent_sublabeling(n0: int, c0: int, method: str = "auto",
                            budget: SearchBudget = SearchBudget()) -> Labeling:
    """Labeling of Circ(2n0; {±1, ±c0}) meeting the three contract properties.

    ``method`` is "product" (coordinate construction), "search" (constrained
    backtracking) or "auto" (product).
    """
    if n0 < 3 or n0 % 2 == 0 or c0 % 2 or (c0 * c0 - 1) % n0:
        raise DomainError(f"need odd n0 >= 3, even c0 and n0 | c0^2 - 1; got ({n0}, {c0})")
    if method in ("auto", "product"):
        L = _tetravalent_product(n0, c0)
    elif method == "search":
        D = make_connection_set(2 * n0, [1, c0], size=2)
        out = search_constrained(D, n0, low_parity=True, budget=budget)
        if not out.found:
            raise LabelingNotFound(f"no contract labeling found for ({n0}, {c0}): {out.status.value}")
        L = Labeling(2 * n0, out.values)
    else:
        raise DomainError(f"unknown method {method!r}")
    if not tetravalent_contract_ok(L, n0, c0):
        raise LabelingNotFound(f"labeling for ({n0}, {c0}) violates the contract")
    return L


def label_t1_case1(F: Family, method: str = "auto",
                   budget: SearchBudget = SearchBudget()) -> Labeling:
    if F.kind is not FamilyKind.T1A:
        raise DomainError(f"{F} is not a T1a family")
    _, n0, c = family_raw(F)
    sub = tetravalent_sublabeling(n0, c // 2, method, budget)
    two_n0 = 2 * n0
    vals = []
    for x in range(4 * n0):
        r = x % 4
        if r == 0:
            vals.append(sub[x // 2] + two_n0)
        elif r == 1:
            vals.append(sub[(x - 1) // 2])
        elif r == 2:
            vals.append(sub[x // 2])
        else:
            vals.append(sub[(x - 1) // 2] + two_n0)
    return Labeling(4 * n0, tuple(vals))


# ---------------------------------------------------------------------------
# C_m[3K1], transport and dispatch
# ---------------------------------------------------------------------------

def _fibre_triples(m: int) -> list[tuple[int, int, int]]:
    """Label triples for the fibres {i, i+m, i+2m} of C_m[3K1].

    Fibres i-1 and i+1 must together carry 3(3m+1).  Odd m: every triple sums
    to 3(3m+1)/2.  m = 4q: residues 0, 1 mod 4 carry sums 8q+2 and 10q+1 built
    from 1..6q, residues 2, 3 carry the complements x -> 3m+1-x.
    """
    if m % 2:
        h = (m - 1) // 2
        target = 3 * (3 * m + 1) // 2
        out = []
        for i in range(m):
            x, y = i + 1, m + 1 + (i + h) % m
            out.append((x, y, target - x - y))
        return out
    q = m // 4
    first = [(r + 1, 4 * q - 2 * r, 4 * q + 1 + r) for r in range(q)]
    second = [(r + 1, 6 * q - 1 - 2 * r, 4 * q + 1 + r) for r in range(q, 2 * q)]

    def comp(t):
        return tuple(3 * m + 1 - v for v in t)

    return [(first, second, list(map(comp, first)), list(map(comp, second)))[i % 4][i // 4]
            for i in range(m)]


def label_cycle_lex(m: int, budget: SearchBudget = SearchBudget(),
                    method: str = "auto") -> Labeling:
    """Labeling of C_m[3K1] = Circ(3m; {±1, ±(m-1), ±(m+1)}).

    Vertex x lies in fibre x mod m and is adjacent to all of fibres x±1.
    When m = dd' with 1 < d < d' coprime to 6 the type-2 labeling is reused;
    otherwise ``method`` "auto" uses balanced fibre triples and "search" the
    backtracking oracle.
    """
    if method not in ("auto", "search"):
        raise DomainError(f"unknown method {method!r}")
    if m < 3:
        raise DomainError(f"C_m[3K1] needs m >= 3, got {m}")
    if m % 4 == 2:
        raise DomainError(f"C_{m}[3K1] is not distance magic (m ≡ 2 mod 4)")
    S = family_connection_set(cycle_lex(m))
    if m % 2 and m % 3:
        for d, d1 in _unitary_splits(m, 2):
            if 1 < d < d1:
                L = label_t2(t2_family(d, d1))
                if verify(S, L) is not None:
                    return L
    L = None
    if method == "auto":
        triples = _fibre_triples(m)
        L = Labeling(3 * m, tuple(triples[x % m][x // m] for x in range(3 * m)))
    if L is None or verify(S, L) is None:
        out = search_labeling(S, budget)
        if not out.found:
            raise LabelingNotFound(f"search for C_{m}[3K1] ended: {out.status.value}")
        L = Labeling(S.n, out.values)
    return L


def transport_labeling(L: Labeling, S: ConnectionSet, T: ConnectionSet, q: int) -> Labeling:
    """Pull a labeling of Circ(n; T) back along x -> qx, where qS = T."""
    if multiply(S, q) != T:
        raise DomainError(f"{q} does not map {S} onto {T}")
    n = S.n
    return Labeling(n, tuple(L[q * x % n] for x in range(n)))


def label_family(F: Family, budget: SearchBudget = SearchBudget(), method: str = "auto") -> Labeling:
    """A verified labeling of the family's own connection set."""
    k = F.kind
    if k in (FamilyKind.ML, FamilyKind.PR):
        L = label_lex_pair(F)
    elif k is FamilyKind.C3K:
        L = label_cycle_lex(F.params[0], budget)
    elif k is FamilyKind.T1A:
        L = label_t1_case1(F, method, budget)
    elif k is FamilyKind.T1B:
        L = label_t1_case2(F)
    else:
        L = label_t2(F)
    if verify(family_connection_set(F), L) is None:
        raise LabelingNotFound(f"construction for {F} failed verification")
    return L


def label_set(S: ConnectionSet, budget: SearchBudget = SearchBudget()) -> tuple[Labeling, str]:
    """A verified labeling of Circ(n; S) with a short provenance string."""
    hit = recognize(S)
    if hit is not None:
        F, q = hit
        try:
            L = label_family(F, budget)
        except DomainError:
            L = None  # family member that is not distance magic
        if L is not None:
            L = transport_labeling(L, S, family_connection_set(F), q)
            return L, f"{F} via q={q}"
    out = search_labeling(S, budget)
    if not out.found:
        raise LabelingNotFound(f"search for {S} ended: {out.status.value}")
    L = Labeling(S.n, out.values)
    assert verify(S, L) is not None
    return L, "search"


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def labeling_to_json(L: Labeling) -> str:
    return json.dumps(list(L.values))


def labeling_to_csv(L: Labeling) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertex", "label"])
    w.writerows(enumerate(L.values))
    return buf.getvalue()


def parse_labeling(text: str) -> Labeling:
    """Read a JSON array or a two-column (vertex, label) CSV."""
    text = text.strip()
    if text.startswith("["):
        vals: Sequence[int] = json.loads(text)
        return Labeling(len(vals), tuple(vals))
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if rows and not rows[0][0].strip().lstrip("-").isdigit():
        rows = rows[1:]
    pairs = sorted((int(v), int(lab)) for v, lab in rows)
    if [v for v, _ in pairs] != list(range(len(pairs))):
        raise DomainError("CSV vertices must be 0..n-1, each once")
    return Labeling(len(pairs), tuple(lab for _, lab in pairs))


def load_labeling(path: str | Path) -> Labeling:
    return parse_labeling(Path(path).read_text())

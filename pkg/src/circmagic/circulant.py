"""Circulant graphs Circ(n; S) with S = -S given by representatives below n/2."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .modular import DomainError, gcd_all, units


class DegenerateSetError(DomainError):
    """The connection set has fewer distinct elements than requested."""


def _rep(s: int, n: int) -> int:
    s %= n
    return min(s, n - s)


@dataclass(frozen=True, order=True)
class ConnectionSet:
    """Connection set {±r : r in reps} of Circ(n; S).

    ``reps`` is sorted ascending with 1 <= r < n/2, so |S| = 2 * len(reps).
    Build instances with :func:`make_connection_set` or :func:`parse_set`.
    """

    n: int
    reps: tuple[int, ...]

    @property
    def valency(self) -> int:
        return 2 * len(self.reps)

    @property
    def connected(self) -> bool:
        return gcd_all((self.n, *self.reps)) == 1

    @property
    def elements(self) -> tuple[int, ...]:
        """All of S as residues, ordered +r, -r per representative."""
        out = []
        for r in self.reps:
            out += [r, self.n - r]
        return tuple(out)

    def __str__(self) -> str:
        return format_set(self)


def make_connection_set(n: int, elems: Iterable[int], size: int = 3) -> ConnectionSet:
    """Normalize ``elems`` to representatives min(s, n - s) and sort them.

    ``size`` is the number of ± pairs expected (3 for valency 6).
    """
    if n < 2 * size + 1:
        raise DomainError(f"order {n} too small for valency {2 * size}")
    elems = list(elems)
    if len(elems) != size:
        raise DomainError(f"expected {size} elements, got {len(elems)}")
    reps = []
    for s in elems:
        r = _rep(s, n)
        if r == 0:
            raise DegenerateSetError(f"{s} is 0 modulo {n}")
        if 2 * r == n:
            raise DegenerateSetError(f"{s} is self-negative modulo {n}")
        reps.append(r)
    if len(set(reps)) != size:
        raise DegenerateSetError(f"{sorted(elems)} collide modulo ± in Z_{n}")
    return ConnectionSet(n, tuple(sorted(reps)))


def parse_set(text: str, size: Optional[int] = 3) -> ConnectionSet:
    """Parse the textual form ``"n:a,b,c"``; ``size=None`` accepts any count."""
    try:
        head, tail = text.split(":")
        n = int(head)
        elems = [int(t) for t in tail.split(",")]
    except ValueError as exc:
        raise DomainError(f"cannot parse connection set {text!r}; expected n:a,b,c") from exc
    return make_connection_set(n, elems, size=len(elems) if size is None else size)


def format_set(S: ConnectionSet) -> str:
    return f"{S.n}:" + ",".join(str(r) for r in S.reps)


def neighbors(S: ConnectionSet, v: int) -> list[int]:
    """v + a, v - a, v + b, v - b, ... modulo n."""
    n = S.n
    out = []
    for r in S.reps:
        out += [(v + r) % n, (v - r) % n]
    return out


def multiply(S: ConnectionSet, q: int) -> ConnectionSet:
    if math.gcd(q, S.n) != 1:
        raise DomainError(f"{q} is not a unit modulo {S.n}")
    return ConnectionSet(S.n, tuple(sorted(_rep(q * r, S.n) for r in S.reps)))


def canonical_form(S: ConnectionSet) -> ConnectionSet:
    """Lexicographically least set in the multiplier orbit of S."""
    return min(multiply(S, q) for q in units(S.n))


def multipliers_between(S: ConnectionSet, T: ConnectionSet) -> list[int]:
    """All units q with multiply(S, q) == T, ascending."""
    if S.n != T.n:
        return []
    return [q for q in units(S.n) if multiply(S, q) == T]


def stabilizer(S: ConnectionSet) -> list[int]:
    return multipliers_between(S, S)


def _triples(n: int) -> np.ndarray:
    half = (n - 1) // 2  # largest r with 2r < n
    r = np.arange(1, half + 1)
    a, b, c = np.meshgrid(r, r, r, indexing="ij")
    mask = (a < b) & (b < c)
    return np.stack([a[mask], b[mask], c[mask]], axis=1)


def _canonical_keys(n: int, triples: np.ndarray) -> np.ndarray:
    """Canonical-form key a*n^2 + b*n + c of every triple (vectorized)."""
    best = None
    for q in units(n):
        t = (triples * q) % n
        t = np.minimum(t, n - t)
        t.sort(axis=1)
        key = (t[:, 0] * n + t[:, 1]) * n + t[:, 2]
        best = key if best is None else np.minimum(best, key)
    return best


def enumerate_sets(n: int) -> list[ConnectionSet]:
    """One canonical representative per multiplier class of connected valency-6 sets."""
    if n < 7:
        raise DomainError(f"order {n} too small for valency 6")
    triples = _triples(n)
    # a unit moves any s to gcd(s, n), so the least element of a canonical form divides n
    triples = triples[n % triples[:, 0] == 0]
    g = np.gcd(np.gcd(np.gcd(triples[:, 0], triples[:, 1]), triples[:, 2]), n)
    triples = triples[g == 1]
    keys = np.unique(_canonical_keys(n, triples))
    return [
        ConnectionSet(n, (int(k // (n * n)), int(k // n % n), int(k % n))) for k in keys
    ]

"""Exact residue arithmetic: gcd helpers, inverses, p-parts and a CRT solver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


@dataclass(frozen=True)
class Congruence:
    """x ≡ residue (mod modulus); the residue is stored normalized."""

    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise DomainError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def holds(self, x: int) -> bool:
        return (x - self.residue) % self.modulus == 0


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_factors(m: int) -> dict[int, int]:
    """Trial-division factorization of m >= 1 as {prime: exponent}."""
    if m < 1:
        raise DomainError(f"cannot factor {m}")
    out: dict[int, int] = {}
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def p_part(m: int, p: int) -> int:
    """Largest power of the prime p dividing m."""
    if m < 1:
        raise DomainError(f"p_part needs m >= 1, got {m}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    part = 1
    while m % p == 0:
        m //= p
        part *= p
    return part


def mod_inverse(a: int, m: int) -> int:
    if m < 1:
        raise DomainError(f"modulus must be >= 1, got {m}")
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise DomainError(f"{a} is not invertible modulo {m}")
    return x % m


def units(n: int) -> list[int]:
    """The group of units of Z_n in ascending order."""
    return [q for q in range(1, n) if math.gcd(q, n) == 1] if n > 1 else [0]


def crt_solve(system: Iterable[Congruence]) -> int:
    """Unique x in [0, M) satisfying every congruence, M the product of moduli.

    Moduli must be pairwise coprime; moduli equal to 1 are ignored.  An empty
    system yields 0.
    """
    x, modulus = 0, 1
    for cong in system:
        if cong.modulus == 1:
            continue
        if math.gcd(modulus, cong.modulus) != 1:
            raise DomainError(
                f"modulus {cong.modulus} not coprime to the running product {modulus}"
            )
        # x + modulus*t ≡ residue (mod m)
        t = (cong.residue - x) * mod_inverse(modulus, cong.modulus) % cong.modulus
        x += modulus * t
        modulus *= cong.modulus
    return x % modulus


def crt(*pairs: tuple[int, int]) -> int:
    """Shorthand: crt((r1, m1), (r2, m2), ...)."""
    return crt_solve(Congruence(r, m) for r, m in pairs)

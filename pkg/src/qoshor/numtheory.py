"""Exact integer arithmetic for the factoring pipelines.

Everything here is a pure function of its arguments.  Moduli are capped at
``MAX_MODULUS`` so that products of two residues stay inside 64 bits, the
width the rest of the package assumes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import DomainError

__all__ = [
    "MAX_MODULUS",
    "GcdRow",
    "GcdTrace",
    "PeriodSource",
    "PeriodCandidate",
    "gcd",
    "mod_pow",
    "multiplicative_order",
    "coprime_list",
    "factors_from_period",
    "convergents",
    "continued_fraction_period",
    "is_prime",
    "integer_root",
    "prime_power_base",
]

MAX_MODULUS = 2**31


class GcdRow(NamedTuple):
    step: int
    a: int
    b: int


@dataclass(frozen=True)
class GcdTrace:
    """Every ``(a, b)`` pair visited by the recursive Euclid listing."""

    rows: tuple[GcdRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[GcdRow]:
        return iter(self.rows)

    def to_json(self) -> list[dict]:
        return [{"step": r.step, "a": r.a, "b": r.b} for r in self.rows]

    def format_table(self) -> str:
        width = max(len(str(v)) for r in self.rows for v in (r.a, r.b))
        lines = [f"{'#':<3} {'a':>{width}} {'b':>{width}}"]
        lines += [f"{r.step:<3} {r.a:>{width}} {r.b:>{width}}" for r in self.rows]
        return "\n".join(lines)


class PeriodSource(str, enum.Enum):
    CONTINUED_FRACTION = "continued_fraction"
    BRUTE_FORCE = "brute_force"
    ORACLE_SELECTION = "oracle_selection"


@dataclass(frozen=True)
class PeriodCandidate:
    r: int
    source: PeriodSource

    def __post_init__(self):
        if self.r < 1:
            raise DomainError(f"period candidate must be >= 1, got {self.r}")


def _period_value(r: PeriodCandidate | int) -> int:
    return r.r if isinstance(r, PeriodCandidate) else int(r)


def _check_modulus(n: int) -> None:
    if n < 2:
        raise DomainError(f"modulus must be >= 2, got {n}")
    if n >= MAX_MODULUS:
        raise DomainError(f"modulus {n} exceeds supported width (< 2**31)")


def gcd(a: int, b: int) -> tuple[int, GcdTrace]:
    """Greatest common divisor with the full recursion trace.

    Follows ``gcd(a, b) = b != 0 ? gcd(b, a % b) : a`` literally, so when
    ``a < b`` the second row is the swapped pair.

    >>> g, trace = gcd(110, 129)
    >>> g, len(trace), trace.rows[-1][1:]
    (1, 8, (1, 0))
    """
    if a < 0 or b < 0:
        raise DomainError("gcd operands must be nonnegative")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    rows = [GcdRow(1, a, b)]
    while b != 0:
        a, b = b, a % b
        rows.append(GcdRow(len(rows) + 1, a, b))
    return a, GcdTrace(tuple(rows))


def mod_pow(a: int, x: int, n: int) -> int:
    """Return ``a**x mod n``."""
    _check_modulus(n)
    if a < 0 or x < 0:
        raise DomainError("mod_pow operands must be nonnegative")
    return pow(a, x, n)


def multiplicative_order(a: int, n: int) -> PeriodCandidate:
    """Smallest ``r >= 1`` with ``a**r = 1 (mod n)``, by direct iteration.

    This is deliberately the slow, obviously-correct route; the quantum
    pipelines are checked against it.
    """
    _check_modulus(n)
    if not 1 <= a < n:
        raise DomainError(f"base must satisfy 1 <= a < n, got a={a}, n={n}")
    if math.gcd(a, n) != 1:
        raise DomainError(f"order of {a} mod {n} is undefined (not coprime)")
    r, y = 1, a % n
    while y != 1:
        y = (y * a) % n
        r += 1
    return PeriodCandidate(r, PeriodSource.BRUTE_FORCE)


def coprime_list(n: int, cap: int) -> list[int]:
    """Ascending bases ``2 <= a < n`` coprime to ``n``, at most ``cap`` of them.

    ``a = 1`` is left out: its order is 1 and it can never yield a factor.
    """
    _check_modulus(n)
    if cap < 1:
        raise DomainError(f"cap must be positive, got {cap}")
    out = []
    for a in range(2, n):
        if math.gcd(a, n) == 1:
            out.append(a)
            if len(out) == cap:
                break
    return out


def factors_from_period(a: int, r: PeriodCandidate | int, n: int) -> tuple[int, int] | None:
    """Try to split ``n`` using an even period ``r`` of ``a``.

    Returns the nontrivial divisors among ``gcd(a**(r/2) +- 1, n)``, sorted,
    or ``None`` when ``r`` is odd or both gcds are trivial.  When only one
    gcd is nontrivial the pair is completed with its cofactor.
    """
    _check_modulus(n)
    if math.gcd(a, n) != 1:
        raise DomainError(f"{a} and {n} are not coprime")
    r = _period_value(r)
    if r % 2:
        return None
    half = mod_pow(a, r // 2, n)
    if half == n - 1:
        return None
    found = {g for g in (math.gcd(half + 1, n), math.gcd(half - 1, n)) if 1 < g < n}
    if not found:
        return None
    if len(found) == 1:
        (g,) = found
        found.add(n // g)
    p, q = sorted(found)
    return p, q


def convergents(t: int, q: int) -> list[Fraction]:
    """All continued-fraction convergents of ``t/q``, in order."""
    if q <= 0:
        raise DomainError("denominator must be positive")
    terms = []
    num, den = t, q
    while den:
        whole, rem = divmod(num, den)
        terms.append(whole)
        num, den = den, rem
    out = []
    h_prev, h = 1, terms[0]
    k_prev, k = 0, 1
    out.append(Fraction(h, k))
    for term in terms[1:]:
        h_prev, h = h, term * h + h_prev
        k_prev, k = k, term * k + k_prev
        out.append(Fraction(h, k))
    return out


def continued_fraction_period(t: int, q: int, n: int) -> PeriodCandidate | None:
    """Period candidate from a measured ``t`` on a ``q``-point register.

    Picks the largest convergent denominator of ``t/q`` not exceeding ``n``.
    """
    _check_modulus(n)
    if q < 1 or q & (q - 1):
        raise DomainError(f"q must be a power of two, got {q}")
    if not 0 <= t < q:
        raise DomainError(f"measurement t={t} outside [0, {q})")
    if t == 0:
        return None
    best = max(c.denominator for c in convergents(t, q) if c.denominator <= n)
    return PeriodCandidate(best, PeriodSource.CONTINUED_FRACTION)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def integer_root(n: int, k: int) -> int:
    """Largest ``x`` with ``x**k <= n``."""
    if n < 0 or k < 1:
        raise DomainError("integer_root needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = int(round(n ** (1.0 / k)))
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def prime_power_base(n: int) -> int | None:
    """Return ``p`` when ``n = p**k`` with ``p`` prime and ``k >= 2``, else ``None``."""
    for k in range(2, n.bit_length() + 1):
        x = integer_root(n, k)
        if x >= 2 and x**k == n and is_prime(x):
            return x
    return None

"""Exact arithmetic over Q: valuations, square classes, and local symbols.

Rationals are `fractions.Fraction` everywhere, so numerators and
denominators are always coprime and denominators positive.  In text and
JSON a rational is written "num/den", with the "/den" part omitted when
the denominator is 1.

Places of Q are the finite primes together with the single real place,
spelled "inf".  Classes in the 2-torsion of a Brauer group are returned
additively as bits: 0 is the trivial class, 1 the nontrivial one, and
classes combine by XOR.  In particular `hilbert(a, b, v) == 0` means the
conic z^2 = a*x^2 + b*y^2 has a nontrivial point over the completion of
Q at v.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "INF",
    "INFINITE_PLACE",
    "Place",
    "SquareClass",
    "check_prime",
    "companion_prime",
    "format_rational",
    "hilbert",
    "is_prime",
    "legendre",
    "next_progression_prime",
    "parse_rational",
    "prime_factors",
    "square_class",
    "support_primes",
    "val_p",
]


class _Infinity:
    """The valuation of zero: beats every integer and absorbs addition."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Infinity()

# Witness set proven sufficient for deterministic Miller-Rabin far beyond
# 2**64; the 2**64 cap below keeps the guarantee comfortably inside the
# proven range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n < 0 or n >= 1 << 64:
        raise ValueError(f"primality test supports 0 <= n < 2**64, got {n}")
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def val_p(x, p: int):
    """p-adic valuation of a rational; val_p(0) is the INF sentinel."""
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) in {0, 1, -1}; p must be an odd prime."""
    check_prime(p)
    if p == 2:
        raise ValueError("legendre symbol needs an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def prime_factors(n: int) -> dict[int, int]:
    """Factor |n| by trial division; inputs here are small by design."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class SquareClass:
    """An element of Q*/(Q*)^2, stored as a sign and a squarefree positive part."""

    sign: int
    sqfree: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.sqfree < 1:
            raise ValueError("squarefree part must be positive")
        if self.sqfree > 1 and any(e > 1 for e in prime_factors(self.sqfree).values()):
            raise ValueError(f"{self.sqfree} is not squarefree")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        g = math.gcd(self.sqfree, other.sqfree)
        return SquareClass(self.sign * other.sign, (self.sqfree // g) * (other.sqfree // g))

    @property
    def is_trivial(self) -> bool:
        return self.sign == 1 and self.sqfree == 1

    def representative(self) -> int:
        """The canonical integer representative sign * sqfree."""
        return self.sign * self.sqfree

    def __str__(self) -> str:
        return str(self.representative())

    def to_json(self) -> dict:
        return {"sign": self.sign, "sqfree": self.sqfree}


def square_class(x) -> SquareClass:
    """Image of a nonzero rational in Q*/(Q*)^2."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no square class")
    # num/den and num*den differ by the square den^2.
    v = x.numerator * x.denominator
    sqf = 1
    for p, e in prime_factors(v).items():
        if e % 2:
            sqf *= p
    return SquareClass(1 if v > 0 else -1, sqf)


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime, or the real place (prime=None)."""

    prime: int | None = None

    def __post_init__(self) -> None:
        if self.prime is not None:
            check_prime(self.prime)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(check_prime(p))

    @classmethod
    def infinite(cls) -> "Place":
        return cls(None)

    @classmethod
    def parse(cls, token: str) -> "Place":
        token = token.strip()
        if token in ("inf", "infinity", "oo"):
            return cls(None)
        try:
            p = int(token)
        except ValueError:
            raise ValueError(f"cannot parse place {token!r}") from None
        return cls.finite(p)

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def sort_key(self) -> tuple[int, int]:
        return (1, 0) if self.prime is None else (0, self.prime)

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)


INFINITE_PLACE = Place(None)


def _unit_residue(u: Fraction, p: int) -> int:
    # num * den = (num/den) * den^2, so same square class mod p.
    return (u.numerator * u.denominator) % p


def hilbert(a, b, place: Place) -> int:
    """Hilbert symbol of (a, b) at a place of Q, as an additive bit.

    At the real place the symbol is nontrivial exactly when both arguments
    are negative.  At a finite prime p the arguments are split as
    a = p^alpha * u, b = p^beta * w with u, w p-adic units, and the symbol
    is evaluated by the classical closed forms: Legendre symbols of the
    unit parts for odd p, and the mod-8 characters eps/omega at p = 2.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    if not place.is_finite:
        return 1 if (a < 0 and b < 0) else 0
    p = place.prime
    alpha, beta = val_p(a, p), val_p(b, p)
    u = a / Fraction(p) ** alpha
    w = b / Fraction(p) ** beta
    if p == 2:
        ru = _unit_residue(u, 8)
        rw = _unit_residue(w, 8)
        eps_u, eps_w = (ru - 1) // 2 % 2, (rw - 1) // 2 % 2
        omega_u = 1 if ru in (3, 5) else 0
        omega_w = 1 if rw in (3, 5) else 0
        return (eps_u * eps_w + alpha * omega_w + beta * omega_u) % 2
    eps_p = (p - 1) // 2 % 2
    lu = 0 if legendre(_unit_residue(u, p), p) == 1 else 1
    lw = 0 if legendre(_unit_residue(w, p), p) == 1 else 1
    return (alpha * beta * eps_p + beta * lu + alpha * lw) % 2


def support_primes(values) -> set[int]:
    """Primes dividing the numerator or denominator of any of the values."""
    primes: set[int] = set()
    for v in values:
        v = Fraction(v)
        if v == 0:
            raise ValueError("support of 0 is undefined")
        primes.update(prime_factors(v.numerator * v.denominator))
    return primes


def next_progression_prime(p: int, x: int) -> int:
    """Smallest prime q with q = x (mod p) and q = 3 (mod 4).

    p must be an odd prime and x coprime to p; the result is automatically
    odd.  Used to pick auxiliary primes sitting in a prescribed residue
    class.
    """
    check_prime(p)
    if p == 2:
        raise ValueError("modulus must be an odd prime")
    if x % p == 0:
        raise ValueError("residue must be coprime to p")
    r = x % p
    while r % 4 != 3:
        r += p
    q = r
    while True:
        if is_prime(q):
            return q
        q += 4 * p


def companion_prime(p1: int) -> int:
    """Smallest odd prime q = 3 (mod 4), q != p1, with the prescribed symbol mod p1.

    The prescription is legendre(q, p1) = +1 when p1 = 3 (mod 4) and -1
    when p1 = 1 (mod 4); this is what makes the auxiliary rank-3 diagonal
    block of the rank-8 and rank-6 lattice cases carry the right local
    invariants.
    """
    check_prime(p1)
    if p1 == 2:
        raise ValueError("p1 must be an odd prime")
    want = 1 if p1 % 4 == 3 else -1
    q = 3
    while True:
        if q != p1 and is_prime(q) and legendre(q, p1) == want:
            return q
        q += 4


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?\Z")


def parse_rational(text: str) -> Fraction:
    """Parse 'n' or 'n/d' with integer parts; anything else is an error.

    Decimal notation is rejected on purpose: every quantity in this package
    is exact, and a stray '0.1' should fail loudly instead of being
    reinterpreted as 1/10.
    """
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"cannot parse rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None

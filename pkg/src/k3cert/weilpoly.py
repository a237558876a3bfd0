"""Dense exact polynomials over Q and the root-location toolkit built on them.

A polynomial is a tuple of Fractions in ascending order of degree
(index i holds the coefficient of T^i); trailing zeros are trimmed and
the zero polynomial is the empty tuple, with degree -1.  In text a
polynomial is a comma-separated list of rationals starting at the
constant term, e.g. "1,1/7,1,1/7,1".

Newton polygon convention: for P with nonzero constant term, the polygon
at p is the lower convex hull of the points (i, val_p(c_i)) over the
nonzero coefficients c_i.  A segment of slope s and horizontal length l
certifies exactly l roots of P (in an algebraic closure of Q_p, counted
with multiplicity) of valuation -s.  For example T - p at p has the
single segment (-1, 1): one root of valuation +1.

Real root counting is exact, by Sturm chains over Q; `sturm_count`
counts distinct roots in the half-open interval (lo, hi], with roots at
the endpoints handled by direct evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import check_prime, format_rational, parse_rational, prime_factors, val_p

__all__ = [
    "IrreducibilityCertificate",
    "NewtonPolygon",
    "RatPoly",
    "cyclotomic",
    "cyclotomic_index_list",
    "denominators_are_p_power",
    "euler_phi",
    "format_poly",
    "has_cyclotomic_factor",
    "kronecker_certificate",
    "newton_polygon",
    "parse_poly",
    "poly_gcd",
    "reciprocal_transform",
    "squarefree_decompose",
    "strip_cyclotomic",
    "sturm_count",
    "symmetric_descent",
    "unit_circle_check",
]


@dataclass(frozen=True)
class RatPoly:
    """Dense univariate polynomial over Q; immutable, normalized on construction."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        cs = tuple(Fraction(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, *coeffs) -> "RatPoly":
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls(())

    @classmethod
    def one(cls) -> "RatPoly":
        return cls((Fraction(1),))

    @classmethod
    def monomial(cls, k: int, c=1) -> "RatPoly":
        if k < 0:
            raise ValueError("monomial degree must be nonnegative")
        return cls((Fraction(0),) * k + (Fraction(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return RatPoly(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RatPoly):
            if self.is_zero or other.is_zero:
                return RatPoly(())
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return RatPoly(tuple(out))
        return RatPoly(tuple(c * Fraction(other) for c in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "RatPoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = RatPoly.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 0)
        rem = list(self.coeffs)
        d = other.degree
        lead = other.leading
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            shift = len(rem) - 1 - d
            factor = rem[-1] / lead
            q[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= factor * c
            rem.pop()
        return RatPoly(tuple(q)), RatPoly(tuple(rem))

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return divmod(self, other)[1]

    def __truediv__(self, other):
        """Exact division; raises when the divisor does not divide exactly."""
        if isinstance(other, RatPoly):
            q, r = divmod(self, other)
            if not r.is_zero:
                raise ValueError("inexact polynomial division")
            return q
        return RatPoly(tuple(c / Fraction(other) for c in self.coeffs))

    def derivative(self) -> "RatPoly":
        return RatPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        return self / self.leading

    def __repr__(self) -> str:
        return f"RatPoly({format_poly(self)!r})"


def poly_gcd(f: RatPoly, g: RatPoly) -> RatPoly:
    """Monic gcd over Q (zero polynomial if both inputs are zero)."""
    while not g.is_zero:
        f, g = g, f % g
    return f.monic()


def parse_poly(text: str) -> RatPoly:
    parts = [tok for tok in text.split(",")]
    if not parts or all(not tok.strip() for tok in parts):
        raise ValueError("empty coefficient list")
    return RatPoly(tuple(parse_rational(tok) for tok in parts))


def format_poly(p: RatPoly) -> str:
    if p.is_zero:
        return "0"
    return ",".join(format_rational(c) for c in p.coeffs)


def reciprocal_transform(f: RatPoly) -> RatPoly:
    """Return L(T) = T^m * f(T + 1/T) for m = deg f; L is self-reciprocal of degree 2m."""
    if f.is_zero:
        raise ValueError("cannot transform the zero polynomial")
    m = f.degree
    base = RatPoly.of(1, 0, 1)  # T^2 + 1, since T^m (T + 1/T)^k = T^(m-k) (T^2+1)^k
    acc = RatPoly.zero()
    power = RatPoly.one()
    for k, c in enumerate(f.coeffs):
        if c != 0:
            acc = acc + c * (power * RatPoly.monomial(m - k))
        if k < m:
            power = power * base
    return acc


def symmetric_descent(L: RatPoly) -> RatPoly | None:
    """Inverse of `reciprocal_transform`: the unique G with L = T^m * G(T + 1/T).

    Works by peeling off the basis polynomials T^(m-k) * (T^2+1)^k from the
    top degree down; returns None when L is not in their span (in
    particular whenever L is not self-reciprocal of even degree).
    """
    if L.is_zero or L.degree % 2 != 0:
        return None
    m = L.degree // 2
    base = RatPoly.of(1, 0, 1)
    powers = [RatPoly.one()]
    for _ in range(m):
        powers.append(powers[-1] * base)
    rem = L
    g = [Fraction(0)] * (m + 1)
    for k in range(m, -1, -1):
        c = rem.coeff(m + k)
        g[k] = c
        if c != 0:
            rem = rem - c * (powers[k] * RatPoly.monomial(m - k))
    if not rem.is_zero:
        return None
    return RatPoly(tuple(g))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sturm_chain(f: RatPoly) -> list[RatPoly]:
    chain = [f, f.derivative()]
    while chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero:
        chain.pop()
    return chain


def _variations(chain: list[RatPoly], x: Fraction) -> int:
    signs = [s for s in (_sign(p.evaluate(x)) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(f: RatPoly, lo, hi) -> int:
    """Distinct real roots of a squarefree f in the half-open interval (lo, hi]."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    if poly_gcd(f, f.derivative()).degree > 0:
        raise ValueError("sturm_count requires a squarefree polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    count = 0
    # Peel off rational endpoint roots so the classical theorem applies
    # on the open interval; hi is in the interval, lo is not.
    if f.evaluate(hi) == 0:
        count += 1
        f = f / RatPoly.of(-hi, 1)
    if f.evaluate(lo) == 0:
        f = f / RatPoly.of(-lo, 1)
    if f.degree <= 0:
        return count
    chain = _sturm_chain(f)
    return count + _variations(chain, lo) - _variations(chain, hi)


def unit_circle_check(L: RatPoly) -> bool:
    """Decide exactly whether every complex root of L lies on the unit circle.

    Expects the self-reciprocal shape L(0) = 1, degree 2m.  The test is:
    L must be palindromic, and the unique G with L = T^m * G(T + 1/T)
    must be squarefree with all m of its roots real and in [-2, 2]
    (Sturm count on (-2, 2] plus a separate check at -2).  The result is
    exact for such L; anything else — odd degree, a non-palindrome, or a
    repeated symmetric factor — conservatively returns False.
    """
    if L.is_zero or L.degree <= 0 or L.degree % 2 != 0:
        return False
    if L.coeffs != L.coeffs[::-1]:
        return False
    G = symmetric_descent(L)
    if G is None:
        return False
    if poly_gcd(G, G.derivative()).degree > 0:
        return False
    inside = sturm_count(G, -2, 2) + (1 if G.evaluate(-2) == 0 else 0)
    return inside == G.degree


def euler_phi(k: int) -> int:
    if k < 1:
        raise ValueError("euler_phi needs a positive integer")
    if k == 1:
        return 1
    out = 1
    for p, e in prime_factors(k).items():
        out *= (p - 1) * p ** (e - 1)
    return out


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> RatPoly:
    """The k-th cyclotomic polynomial, by exact division of T^k - 1."""
    if k < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = RatPoly.monomial(k) - RatPoly.one()
    for d in range(1, k):
        if k % d == 0:
            poly = poly / cyclotomic(d)
    return poly


def cyclotomic_index_list(maxdeg: int) -> list[int]:
    """All k >= 1 with euler_phi(k) <= maxdeg, ascending."""
    if maxdeg < 1:
        return []
    # phi(k) >= sqrt(k/2) for every k >= 1, so scanning to 2*maxdeg^2 is enough.
    return [k for k in range(1, 2 * maxdeg * maxdeg + 1) if euler_phi(k) <= maxdeg]


def has_cyclotomic_factor(L: RatPoly) -> int | None:
    """Smallest k with cyclotomic(k) dividing L, or None."""
    if L.is_zero:
        raise ValueError("zero polynomial")
    for k in cyclotomic_index_list(L.degree):
        if (L % cyclotomic(k)).is_zero:
            return k
    return None


def strip_cyclotomic(P: RatPoly) -> tuple[RatPoly, list[int]]:
    """Divide out all cyclotomic factors, returning (quotient, removed indices).

    The removed indices form a multiset, returned sorted; P must have a
    nonzero constant term.
    """
    if P.is_zero or P.constant == 0:
        raise ValueError("strip_cyclotomic needs a nonzero constant term")
    removed: list[int] = []
    while True:
        k = has_cyclotomic_factor(P)
        if k is None:
            return P, sorted(removed)
        P = P / cyclotomic(k)
        removed.append(k)


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower hull of a p-adic coefficient cloud, as (slope, length) segments.

    Slopes are strictly increasing Fractions, lengths positive integers;
    a segment (s, l) certifies l roots of valuation -s.
    """

    segments: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        for (s1, l1), (s2, l2) in zip(self.segments, self.segments[1:]):
            if not s1 < s2:
                raise ValueError("polygon slopes must be strictly increasing")
        if any(l < 1 for _, l in self.segments):
            raise ValueError("polygon lengths must be positive")

    @property
    def total_length(self) -> int:
        return sum(l for _, l in self.segments)

    def negative_segments(self) -> tuple[tuple[Fraction, int], ...]:
        """The initial run of segments with negative slope (possibly empty)."""
        return tuple((s, l) for s, l in self.segments if s < 0)

    def to_json(self) -> list:
        return [[format_rational(s), l] for s, l in self.segments]


def newton_polygon(P: RatPoly, p: int) -> NewtonPolygon:
    """Newton polygon of P at p; requires a nonzero constant term."""
    check_prime(p)
    if P.is_zero or P.constant == 0:
        raise ValueError("newton polygon needs a nonzero constant term")
    pts = [(i, Fraction(val_p(c, p))) for i, c in enumerate(P.coeffs) if c != 0]
    hull: list[tuple[int, Fraction]] = []
    for x, y in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (x - x2) >= (y - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    segs = tuple(
        ((y2 - y1) / (x2 - x1), x2 - x1)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    )
    return NewtonPolygon(segs)


def squarefree_decompose(L: RatPoly) -> tuple[RatPoly, int] | None:
    """Write L = R^e with R squarefree and R(0) = 1, or None if impossible.

    L must satisfy L(0) = 1.  R is L divided by gcd(L, L'), rescaled so its
    constant term is 1; the exponent is then verified by exact powering.
    """
    if L.is_zero or L.constant != 1:
        raise ValueError("decomposition needs L(0) = 1")
    if L.degree == 0:
        return L, 1
    g = poly_gcd(L, L.derivative())
    R = L / g
    R = R / R.constant
    if R == L:
        return R, 1
    e, rem = divmod(L.degree, R.degree)
    if rem != 0 or R**e != L:
        return None
    return R, e


def denominators_are_p_power(P: RatPoly, p: int) -> bool:
    """True when every coefficient denominator is a power of p (i.e. P is integral away from p)."""
    check_prime(p)
    for c in P.coeffs:
        d = c.denominator
        while d % p == 0:
            d //= p
        if d != 1:
            return False
    return True


@dataclass(frozen=True)
class IrreducibilityCertificate:
    """Outcome of the Kronecker-style irreducibility test.

    verdict is "certified" or "unknown"; premises records which of the
    four sufficient conditions held.  "unknown" makes no claim either way.
    """

    verdict: str
    premises: dict[str, bool]
    detail: dict

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "premises": dict(self.premises), "detail": dict(self.detail)}


def _pure_negative_slope(polygon: NewtonPolygon) -> tuple[bool, dict]:
    """Check the symmetric pure-slope shape (-a/h, h), [0, mid], (a/h, h), gcd(a, h) = 1."""
    segs = polygon.segments
    detail: dict = {"segments": polygon.to_json()}
    if len(segs) not in (2, 3):
        return False, detail
    (s_neg, h) = segs[0]
    (s_pos, l_pos) = segs[-1]
    if not (s_neg < 0 and s_pos == -s_neg and l_pos == h):
        return False, detail
    if len(segs) == 3 and segs[1][0] != 0:
        return False, detail
    slope = -s_neg
    # slope = a/h in lowest terms with segment length exactly h forces
    # gcd(a, h) = 1: the negative part is then irreducible over Q_p.
    ok = slope.denominator == h
    detail.update({"h": h, "a": slope.numerator if ok else None})
    return ok, detail


def kronecker_certificate(R: RatPoly, p: int) -> IrreducibilityCertificate:
    """Certify that R is irreducible over Q, or report "unknown".

    R must be squarefree with R(0) = 1.  The sufficient premises: the
    Newton polygon of R at p is the symmetric pure-slope shape with
    coprime (a, h); R has no cyclotomic factor; all roots of R lie on the
    unit circle; and every coefficient denominator is a power of p.
    Together these force irreducibility: any proper factor with unit-root
    constraints would be cyclotomic by Kronecker's theorem.
    """
    check_prime(p)
    if R.is_zero or R.constant != 1:
        raise ValueError("certificate needs R(0) = 1")
    if poly_gcd(R, R.derivative()).degree > 0:
        raise ValueError("certificate needs a squarefree polynomial")
    polygon = newton_polygon(R, p)
    pure, pure_detail = _pure_negative_slope(polygon)
    cyc = has_cyclotomic_factor(R)
    premises = {
        "pure_negative_slope": pure,
        "no_cyclotomic_factor": cyc is None,
        "unit_circle": unit_circle_check(R),
        "denominators_p_power": denominators_are_p_power(R, p),
    }
    detail = dict(pure_detail)
    if cyc is not None:
        detail["cyclotomic_index"] = cyc
    verdict = "certified" if all(premises.values()) else "unknown"
    return IrreducibilityCertificate(verdict, premises, detail)

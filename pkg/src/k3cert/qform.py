"""Diagonal quadratic spaces over Q and their local-global invariants.

A space is a diagonal form <a_1, ..., a_n> with nonzero rational entries.
Its invariants are the dimension, the determinant as a square class, the
real signature (positive count, negative count), and the Hasse invariant
w = sum_{i<j} (a_i, a_j) at every place, stored sparsely: the map keeps
only the places with nontrivial bit, all others are implicitly 0.  The
support is finite (contained in {2, inf} and the primes dividing some
entry), so equality of Hasse invariants "at every place" is decidable.

`embedding_criterion` packages the three-part embedding test for a space
against the invariants of a CM field: determinant matching, even
signature components, and hyperbolicity of the localizations at every
prime where the field data says the reflex step degenerates.  The
hyperbolicity bullet can be undecidable from partial splitting data, so
its verdict is four-valued rather than boolean.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (
    INFINITE_PLACE,
    Place,
    SquareClass,
    check_prime,
    format_rational,
    hilbert,
    square_class,
    support_primes,
)

__all__ = [
    "CMFieldData",
    "EmbeddingReport",
    "HyperbolicityReport",
    "QuadSpace",
    "SpaceInvariants",
    "complement_invariants",
    "embedding_criterion",
    "embedding_from_invariants",
    "hyperbolic",
    "hyperbolicity_check",
    "hyperbolicity_from_invariants",
    "invariants",
]


@dataclass(frozen=True)
class QuadSpace:
    """Diagonal quadratic space <entries> over Q; entries are nonzero Fractions."""

    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        es = tuple(Fraction(e) for e in self.entries)
        if not es:
            raise ValueError("a quadratic space needs at least one entry")
        if any(e == 0 for e in es):
            raise ValueError("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", es)

    @classmethod
    def of(cls, *entries) -> "QuadSpace":
        return cls(tuple(entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def direct_sum(self, other: "QuadSpace") -> "QuadSpace":
        return QuadSpace(self.entries + other.entries)

    def to_json(self) -> list[str]:
        return [format_rational(e) for e in self.entries]


@dataclass(frozen=True)
class SpaceInvariants:
    """(dim, det, signature, Hasse bits) of a quadratic space over Q.

    hasse holds only the places with nontrivial invariant; use hasse_at
    for the total function.
    """

    dim: int
    det: SquareClass
    signature: tuple[int, int]
    hasse: dict[Place, int]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if sum(self.signature) != self.dim:
            raise ValueError("signature must sum to the dimension")
        if any(bit != 1 for bit in self.hasse.values()):
            raise ValueError("stored Hasse bits must be 1 (zeros are implicit)")

    def hasse_at(self, place: Place) -> int:
        return self.hasse.get(place, 0)

    @property
    def hasse_support(self) -> tuple[Place, ...]:
        return tuple(sorted(self.hasse, key=Place.sort_key))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "det": self.det.to_json(),
            "sig": list(self.signature),
            "hasse": {str(pl): 1 for pl in self.hasse_support},
        }


def _entry_support(entries) -> list[Place]:
    places = {INFINITE_PLACE, Place.finite(2)}
    places.update(Place.finite(q) for q in support_primes(entries))
    return sorted(places, key=Place.sort_key)


def invariants(space: QuadSpace) -> SpaceInvariants:
    """Dimension, determinant class, signature, and sparse Hasse map of a space."""
    entries = space.entries
    det = square_class(entries[0])
    for e in entries[1:]:
        det = det * square_class(e)
    pos = sum(1 for e in entries if e > 0)
    hasse: dict[Place, int] = {}
    for place in _entry_support(entries):
        bit = 0
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                bit ^= hilbert(entries[i], entries[j], place)
        if bit:
            hasse[place] = 1
    return SpaceInvariants(space.dim, det, (pos, space.dim - pos), hasse)


def hyperbolic(m: int) -> QuadSpace:
    """The hyperbolic space <1, -1>^m of dimension 2m."""
    if m < 1:
        raise ValueError("need m >= 1")
    return QuadSpace.of(*([1, -1] * m))


def complement_invariants(ambient: SpaceInvariants, sub: SpaceInvariants) -> SpaceInvariants:
    """Invariants of the orthogonal complement of sub inside ambient.

    Uses the Witt decomposition rules: dimensions and signatures subtract,
    determinants multiply (square classes are 2-torsion, so division and
    multiplication agree), and the Hasse bit picks up the correction term
    hilbert(det sub, det complement) at every place.
    """
    if sub.dim >= ambient.dim:
        raise ValueError("subspace must have strictly smaller dimension")
    pos = ambient.signature[0] - sub.signature[0]
    neg = ambient.signature[1] - sub.signature[1]
    if pos < 0 or neg < 0:
        raise ValueError("subspace signature does not fit inside the ambient space")
    det = ambient.det * sub.det
    places = {INFINITE_PLACE, Place.finite(2)}
    places.update(ambient.hasse)
    places.update(sub.hasse)
    places.update(Place.finite(q) for q in support_primes([sub.det.sqfree, det.sqfree]))
    hasse: dict[Place, int] = {}
    for place in sorted(places, key=Place.sort_key):
        bit = (
            ambient.hasse_at(place)
            ^ sub.hasse_at(place)
            ^ hilbert(sub.det.representative(), det.representative(), place)
        )
        if bit:
            hasse[place] = 1
    return SpaceInvariants(ambient.dim - sub.dim, det, (pos, neg), hasse)


@dataclass(frozen=True)
class CMFieldData:
    """The fragments of a degree-2m CM field this library consumes.

    n is a positive integer representing the discriminant square class
    of the field (up to the (-1)^m sign convention handled by callers);
    disc_is_square is kept explicit but must agree with n.  The splitting
    side is optional: nonsplit_witness is a prime where some place of the
    real subfield is known to stay inert, and split_table records primes
    with fully known splitting behaviour (True = every place above splits).
    """

    degree: int
    n: int
    disc_is_square: bool
    nonsplit_witness: int | None = None
    split_table: dict[int, bool] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.degree < 2 or self.degree % 2 != 0:
            raise ValueError("degree must be a positive even integer")
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.disc_is_square != square_class(self.n).is_trivial:
            raise ValueError("disc_is_square must match the square class of n")
        if self.nonsplit_witness is not None:
            w = self.nonsplit_witness
            check_prime(w)
            if w == 2:
                raise ValueError("nonsplit witness must be odd")
            if self.split_table.get(w) is True:
                raise ValueError(f"prime {w} cannot be both split and a nonsplit witness")
        for q in self.split_table:
            check_prime(q)

    @classmethod
    def from_m(
        cls,
        m: int,
        n: int,
        nonsplit_witness: int | None = None,
        split_table: dict[int, bool] | None = None,
    ) -> "CMFieldData":
        """Build field data for degree 2m, deriving disc_is_square from n."""
        return cls(2 * m, n, square_class(n).is_trivial, nonsplit_witness, dict(split_table or {}))

    @property
    def m(self) -> int:
        return self.degree // 2

    def split_status(self, p: int) -> bool | None:
        """True/False when splitting at p is known, None when it is not."""
        if p == self.nonsplit_witness:
            return False
        return self.split_table.get(p)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "n": self.n,
            "disc_is_square": self.disc_is_square,
            "nonsplit_witness": self.nonsplit_witness,
            "split_table": {str(q): v for q, v in sorted(self.split_table.items())},
        }


@dataclass(frozen=True)
class HyperbolicityReport:
    """Where a space fails to look hyperbolic, and whether field data excuses it.

    discrepancy lists the finite primes where the Hasse bit differs from
    the hyperbolic space of the same dimension.  The verdict is "pass"
    (no discrepancy), "conditional-pass" (every discrepancy prime is
    certified non-split), "needs-data" (some discrepancy prime has
    unknown splitting), or "fail" (a discrepancy prime is explicitly
    recorded as split, so the criterion genuinely fails there).
    """

    verdict: str
    discrepancy: tuple[int, ...]
    certified_nonsplit: tuple[int, ...]
    unknown_split: tuple[int, ...]
    split_conflicts: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.verdict in ("pass", "conditional-pass")

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "discrepancy": list(self.discrepancy),
            "certified_nonsplit": list(self.certified_nonsplit),
            "unknown_split": list(self.unknown_split),
            "split_conflicts": list(self.split_conflicts),
        }


def hyperbolicity_from_invariants(inv: SpaceInvariants, fielddata: CMFieldData) -> HyperbolicityReport:
    if inv.dim != fielddata.degree:
        raise ValueError("space dimension must equal the field degree")
    target = invariants(hyperbolic(fielddata.m))
    primes = sorted(
        {pl.prime for pl in inv.hasse if pl.is_finite}
        | {pl.prime for pl in target.hasse if pl.is_finite}
    )
    discrepancy = tuple(
        q for q in primes if inv.hasse_at(Place.finite(q)) != target.hasse_at(Place.finite(q))
    )
    certified, unknown, conflicts = [], [], []
    for q in discrepancy:
        status = fielddata.split_status(q)
        if status is False:
            certified.append(q)
        elif status is True:
            conflicts.append(q)
        else:
            unknown.append(q)
    if conflicts:
        verdict = "fail"
    elif not discrepancy:
        verdict = "pass"
    elif not unknown:
        verdict = "conditional-pass"
    else:
        verdict = "needs-data"
    return HyperbolicityReport(verdict, discrepancy, tuple(certified), tuple(unknown), tuple(conflicts))


def hyperbolicity_check(space: QuadSpace, fielddata: CMFieldData) -> HyperbolicityReport:
    """Compare the local Hasse data of a space against the hyperbolic space.

    The underlying condition quantifies over the primes where the field
    data forces hyperbolicity; only finitely many primes can carry a
    discrepancy, so the comparison over the joint Hasse support decides it.
    """
    return hyperbolicity_from_invariants(invariants(space), fielddata)


@dataclass(frozen=True)
class EmbeddingReport:
    """Three-part embedding criterion: determinant, signature parity, hyperbolicity."""

    verdict: str  # "pass" | "fail" | "needs-data"
    det_matches: bool
    expected_det: SquareClass
    actual_det: SquareClass
    signature: tuple[int, int]
    signature_even: bool
    hyperbolicity: HyperbolicityReport

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "det": {
                "matches": self.det_matches,
                "expected": self.expected_det.to_json(),
                "actual": self.actual_det.to_json(),
            },
            "signature": {"value": list(self.signature), "even": self.signature_even},
            "hyperbolicity": self.hyperbolicity.to_json(),
        }


def embedding_from_invariants(inv: SpaceInvariants, fielddata: CMFieldData) -> EmbeddingReport:
    if inv.dim != fielddata.degree:
        raise ValueError("space dimension must equal the field degree")
    # det(V) must be (-1)^m disc, and disc itself carries the (-1)^m sign,
    # so the required class is just that of n.
    expected = square_class(fielddata.n)
    det_ok = inv.det == expected
    sig_even = inv.signature[0] % 2 == 0 and inv.signature[1] % 2 == 0
    hyp = hyperbolicity_from_invariants(inv, fielddata)
    if not det_ok or not sig_even or hyp.verdict == "fail":
        verdict = "fail"
    elif hyp.verdict == "needs-data":
        verdict = "needs-data"
    else:
        verdict = "pass"
    return EmbeddingReport(verdict, det_ok, expected, inv.det, inv.signature, sig_even, hyp)


def embedding_criterion(space: QuadSpace, fielddata: CMFieldData) -> EmbeddingReport:
    """Run the embedding criterion for a diagonal space against CM field data."""
    return embedding_from_invariants(invariants(space), fielddata)

"""Even lattices for the K3 existence argument, and their rational shadows.

A lattice is described up to the data this library needs: an orthogonal
sum of copies of the even unimodular hyperbolic plane U and of rank-one
even diagonal blocks <d>.  Blocks are spelled "U" or an even integer d in
code, and "U" / {"diag": d} in JSON.

The central routine `verify_lattice` builds the rank-(22-2m) candidate
Picard block for a given case 6 <= m <= 10, takes its rational
diagonalization, computes the invariants of its orthogonal complement T
inside the K3 lattice (dimension 22, determinant -1, signature (3, 19),
Hasse support exactly {2, inf}), and runs the embedding criterion for T
against the supplied CM field data.  For the rank-2 case without square
discriminant it additionally certifies that the block <2> + <-8n>
represents 2 but not -2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .arith import INFINITE_PLACE, Place, SquareClass, check_prime, companion_prime, square_class
from .qform import (
    CMFieldData,
    EmbeddingReport,
    QuadSpace,
    SpaceInvariants,
    complement_invariants,
    embedding_from_invariants,
    invariants,
)

__all__ = [
    "Degree2Witness",
    "K3_RANK",
    "LatticeReport",
    "LatticeSpec",
    "NoMinusTwoCertificate",
    "build_picard_lattice",
    "k3_ambient_invariants",
    "no_minus_two_vector",
    "rationalize",
    "verify_lattice",
]

K3_RANK = 22
_EMBEDDING_MAX_RANK = 10  # rank bound under which primitive embeddings into the K3 lattice are automatic


@dataclass(frozen=True)
class LatticeSpec:
    """Orthogonal sum of "U" blocks and even rank-one blocks <d>."""

    blocks: tuple

    def __post_init__(self) -> None:
        for b in self.blocks:
            if b == "U":
                continue
            if not isinstance(b, int) or b == 0 or b % 2 != 0:
                raise ValueError(f"diagonal block {b!r} must be a nonzero even integer")
        if not self.blocks:
            raise ValueError("lattice needs at least one block")

    @property
    def rank(self) -> int:
        return sum(2 if b == "U" else 1 for b in self.blocks)

    @property
    def signature(self) -> tuple[int, int]:
        pos = neg = 0
        for b in self.blocks:
            if b == "U":
                pos += 1
                neg += 1
            elif b > 0:
                pos += 1
            else:
                neg += 1
        return (pos, neg)

    @property
    def is_even(self) -> bool:
        # U is even; diagonal blocks are validated even at construction.
        return True

    def to_json(self) -> dict:
        return {"blocks": [b if b == "U" else {"diag": b} for b in self.blocks]}


def k3_ambient_invariants() -> SpaceInvariants:
    """Rational invariants of the K3 lattice: dim 22, det -1, sig (3, 19), Hasse {2, inf}."""
    return SpaceInvariants(
        dim=K3_RANK,
        det=SquareClass(-1, 1),
        signature=(3, 19),
        hasse={Place.finite(2): 1, INFINITE_PLACE: 1},
    )


def build_picard_lattice(m: int, fielddata: CMFieldData) -> LatticeSpec:
    """The case-table candidate Picard block of rank 22 - 2m.

    For m in {6, 9} a single hyperbolic plane plus <-4n> plus <-4>'s; for
    m in {7, 8} two auxiliary odd primes p1 (the caller-supplied nonsplit
    witness) and p2 = companion_prime(p1) pad the determinant; for m = 10
    the block is U when disc is a square and <2> + <-8n> otherwise.
    """
    if not 6 <= m <= 10:
        raise ValueError("case table covers 6 <= m <= 10")
    if fielddata.degree != 2 * m:
        raise ValueError("field degree must be 2m")
    n = fielddata.n
    if m in (6, 9):
        blocks = ("U", -4 * n) + (-4,) * (19 - 2 * m)
    elif m in (7, 8):
        p1 = fielddata.nonsplit_witness
        if p1 is None:
            raise ValueError(f"case m = {m} needs a nonsplit witness prime")
        p2 = companion_prime(p1)
        if m == 7:
            blocks = ("U", -4 * n, -4, -4, -4 * p1, -4 * p2, -4 * p1 * p2)
        else:
            blocks = ("U", -4 * n, -4 * p1, -4 * p2, -4 * p1 * p2)
    elif fielddata.disc_is_square:
        blocks = ("U",)
    else:
        blocks = (2, -8 * n)
    spec = LatticeSpec(blocks)
    if spec.rank != K3_RANK - 2 * m or spec.signature != (1, 21 - 2 * m):
        raise RuntimeError("case table produced a lattice with wrong rank or signature")
    return spec


def rationalize(spec: LatticeSpec) -> QuadSpace:
    """The rational quadratic space of a lattice, entries reduced modulo squares.

    U diagonalizes to <1, -1> over Q; a block <d> keeps its square class,
    e.g. <-4n> becomes <-n>.
    """
    entries: list[int] = []
    for b in spec.blocks:
        if b == "U":
            entries.extend((1, -1))
        else:
            entries.append(square_class(b).representative())
    return QuadSpace.of(*entries)


@dataclass(frozen=True)
class NoMinusTwoCertificate:
    """Proof sketch plus exhaustive check that 2x^2 - 8ny^2 never takes the value -2.

    The mod-4 argument: a solution would force x^2 + 1 = 4ny^2, but
    squares are 0 or 1 mod 4, so x^2 + 1 is never divisible by 4.  The
    box search re-confirms emptiness for |x|, |y| <= bound, and the
    certificate also records the vector (1, 0) of square +2.
    """

    n: int
    bound: int
    mod4_square_residues: tuple[int, ...]
    mod4_required_residue: int
    exhaustive_no_solution: bool
    plus_two_vector: tuple[int, int]

    @property
    def holds(self) -> bool:
        return self.mod4_required_residue not in self.mod4_square_residues and self.exhaustive_no_solution

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "target": -2,
            "mod4": {
                "square_residues": list(self.mod4_square_residues),
                "required_residue": self.mod4_required_residue,
                "obstructed": self.mod4_required_residue not in self.mod4_square_residues,
            },
            "search_bound": self.bound,
            "exhaustive_no_solution": self.exhaustive_no_solution,
            "plus_two_vector": list(self.plus_two_vector),
        }


def no_minus_two_vector(n: int, bound: int = 1000) -> NoMinusTwoCertificate:
    """Certify that the form 2x^2 - 8ny^2 does not represent -2.

    Any solution gives x^2 = 4ny^2 - 1 = -1 (mod 4), impossible; the box
    |x|, |y| <= bound is also searched outright (a solution with |x| <=
    bound automatically has |y| <= |x|, so scanning x and solving for y
    exhausts the box).
    """
    if n < 1:
        raise ValueError("n must be positive")
    no_solution = True
    for x in range(bound + 1):
        target = x * x + 1  # would have to equal 4 n y^2
        if target % (4 * n) == 0:
            y2 = target // (4 * n)
            y = isqrt(y2)
            if y * y == y2 and y <= bound:
                no_solution = False
                break
    return NoMinusTwoCertificate(
        n=n,
        bound=bound,
        mod4_square_residues=(0, 1),
        mod4_required_residue=3,
        exhaustive_no_solution=no_solution,
        plus_two_vector=(1, 0),
    )


@dataclass(frozen=True)
class Degree2Witness:
    """An explicit lattice vector of square 2, in block coordinates."""

    coordinates: tuple[int, ...]
    square: int

    def to_json(self) -> dict:
        return {"coordinates": list(self.coordinates), "square": self.square}


@dataclass(frozen=True)
class LatticeReport:
    """Everything `verify_lattice` establishes about one case of the table."""

    lattice: LatticeSpec
    rank: int
    signature: tuple[int, int]
    is_even: bool
    rational_space: QuadSpace
    picard_invariants: SpaceInvariants
    transcendental_invariants: SpaceInvariants
    embedding: EmbeddingReport
    has_U_embedding: bool
    degree2_vector: Degree2Witness | None
    no_minus2_certificate: NoMinusTwoCertificate | None
    embedding_rank_ok: bool

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice.to_json(),
            "rank": self.rank,
            "signature": list(self.signature),
            "is_even": self.is_even,
            "rational_space": self.rational_space.to_json(),
            "picard_invariants": self.picard_invariants.to_json(),
            "transcendental_invariants": self.transcendental_invariants.to_json(),
            "embedding": self.embedding.to_json(),
            "has_U_embedding": self.has_U_embedding,
            "degree2_vector": self.degree2_vector.to_json() if self.degree2_vector else None,
            "no_minus2_certificate": (
                self.no_minus2_certificate.to_json() if self.no_minus2_certificate else None
            ),
            "embedding_rank_bound": {
                "rank": self.rank,
                "max_rank": _EMBEDDING_MAX_RANK,
                "ok": self.embedding_rank_ok,
            },
        }


def verify_lattice(m: int, fielddata: CMFieldData) -> LatticeReport:
    """Build the case lattice for m and certify its role in the existence argument.

    Computes the complement invariants inside the K3 lattice and runs the
    embedding criterion on them; for the m = 10 non-square case, attaches
    the degree-2 vector and the no-(-2)-vector certificate that replace
    the hyperbolic-plane embedding.
    """
    spec = build_picard_lattice(m, fielddata)
    space = rationalize(spec)
    picard_inv = invariants(space)
    t_inv = complement_invariants(k3_ambient_invariants(), picard_inv)
    embedding = embedding_from_invariants(t_inv, fielddata)
    has_u = spec.blocks[0] == "U"
    degree2 = None
    no_minus2 = None
    if not has_u:
        # <2> + <-8n>: the first basis vector has square 2, and -2 is not
        # represented at all, which is what the surface-side argument needs.
        degree2 = Degree2Witness(coordinates=(1, 0), square=2)
        no_minus2 = no_minus_two_vector(fielddata.n)
    return LatticeReport(
        lattice=spec,
        rank=spec.rank,
        signature=spec.signature,
        is_even=spec.is_even,
        rational_space=space,
        picard_invariants=picard_inv,
        transcendental_invariants=t_inv,
        embedding=embedding,
        has_U_embedding=has_u,
        degree2_vector=degree2,
        no_minus2_certificate=no_minus2,
        embedding_rank_ok=spec.rank <= _EMBEDDING_MAX_RANK,
    )

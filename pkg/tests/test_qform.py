"""Rational quadratic space invariants, Witt-style complement arithmetic,
and the two-layer embedding criterion."""

import random
from fractions import Fraction

import pytest

from k3cert.arith import INFINITE_PLACE, Place, SquareClass, hilbert, square_class
from k3cert.qform import (
    CMFieldData,
    EmbeddingReport,
    QuadSpace,
    complement_invariants,
    embedding_criterion,
    hyperbolic,
    hyperbolicity_check,
    hyperbolicity_from_invariants,
    invariants,
)

from oracles import brute_hilbert_bit


# ---------------------------------------------------------------------------
# spaces and invariants


def test_quadspace_basics():
    sp = QuadSpace.of(1, -1, Fraction(2, 3))
    assert sp.dim == 3
    assert sp.direct_sum(QuadSpace.of(5)).dim == 4
    assert sp.to_json() == ["1", "-1", "2/3"]
    with pytest.raises(ValueError):
        QuadSpace.of(1, 0, 2)


def test_invariants_of_unit_form():
    inv = invariants(QuadSpace.of(1))
    assert inv.dim == 1
    assert inv.det == SquareClass(1, 1)
    assert inv.signature == (1, 0)
    assert inv.hasse == {}


def test_invariants_of_hyperbolic_plane():
    inv = invariants(hyperbolic(1))
    assert inv.dim == 2
    assert inv.det == SquareClass(-1, 1)
    assert inv.signature == (1, 1)
    assert inv.hasse == {}


def test_invariants_frozen_examples():
    inv = invariants(QuadSpace.of(1, -1, -3, -1))
    assert inv.det == SquareClass(-1, 3)
    assert inv.signature == (1, 3)
    assert inv.hasse == {Place.finite(2): 1, INFINITE_PLACE: 1}

    inv = invariants(QuadSpace.of(2, -40))
    assert inv.det == SquareClass(-1, 5)
    assert inv.signature == (1, 1)
    assert inv.hasse == {Place.finite(2): 1, Place.finite(5): 1}


def test_invariants_json_shape():
    doc = invariants(QuadSpace.of(1, -1, -3, -1)).to_json()
    assert doc == {
        "dim": 4,
        "det": {"sign": -1, "sqfree": 3},
        "sig": [1, 3],
        "hasse": {"2": 1, "inf": 1},
    }


def test_hasse_support_is_sorted_and_even():
    inv = invariants(QuadSpace.of(2, -40))
    support = inv.hasse_support
    assert support == tuple(sorted(support, key=lambda v: v.sort_key()))
    # product formula: the symbol is nontrivial at an even number of places
    assert len(inv.hasse) % 2 == 0


def test_hyperbolic_hasse_closed_form():
    # w(U^m) is the class of ((-1)^(m(m-1)/2), -1)
    for m in range(1, 11):
        inv = invariants(hyperbolic(m))
        assert inv.dim == 2 * m
        assert inv.signature == (m, m)
        assert inv.det == square_class((-1) ** m)
        a = (-1) ** (m * (m - 1) // 2)
        for place in (Place.finite(2), Place.finite(3), Place.finite(7), INFINITE_PLACE):
            assert inv.hasse_at(place) == hilbert(a, -1, place)


def _random_space(rng, dim=None):
    dim = dim or rng.randint(1, 6)
    pool = [1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 15, -15]
    return QuadSpace.of(*(rng.choice(pool) for _ in range(dim)))


def test_invariants_stable_under_permutation_and_scaling():
    rng = random.Random(20260815)
    for _ in range(200):
        sp = _random_space(rng)
        entries = list(sp.entries)
        rng.shuffle(entries)
        scaled = [e * rng.choice([1, 4, 9, Fraction(1, 4), Fraction(25, 9)]) for e in entries]
        assert invariants(QuadSpace.of(*scaled)) == invariants(sp)


def test_invariants_product_formula_randomized():
    rng = random.Random(7)
    for _ in range(200):
        inv = invariants(_random_space(rng))
        assert len(inv.hasse) % 2 == 0


def test_invariants_direct_sum_rule():
    rng = random.Random(99)
    for _ in range(100):
        a, b = _random_space(rng), _random_space(rng)
        got = invariants(a.direct_sum(b))
        ia, ib = invariants(a), invariants(b)
        assert got.dim == ia.dim + ib.dim
        assert got.det == ia.det * ib.det
        assert got.signature == tuple(x + y for x, y in zip(ia.signature, ib.signature))
        places = set(got.hasse) | set(ia.hasse) | set(ib.hasse)
        places |= {Place.finite(2), INFINITE_PLACE}
        for v in places:
            expected = (
                ia.hasse_at(v)
                + ib.hasse_at(v)
                + hilbert(ia.det.representative(), ib.det.representative(), v)
            ) % 2
            assert got.hasse_at(v) == expected


def test_invariants_hasse_against_bruteforce():
    # one moderately interesting space, checked symbol-by-symbol the slow way
    sp = QuadSpace.of(2, -3, 5, -1)
    inv = invariants(sp)
    for place in (Place.finite(2), Place.finite(3), Place.finite(5), INFINITE_PLACE):
        entries = list(sp.entries)
        bit = 0
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                bit ^= brute_hilbert_bit(entries[i], entries[j], place.prime)
        assert inv.hasse_at(place) == bit


# ---------------------------------------------------------------------------
# orthogonal complements


def test_complement_recovers_other_summand():
    rng = random.Random(4242)
    for _ in range(100):
        sub, rest = _random_space(rng), _random_space(rng)
        ambient = invariants(sub.direct_sum(rest))
        got = complement_invariants(ambient, invariants(sub))
        assert got == invariants(rest)


def test_complement_involution():
    sub = QuadSpace.of(1, -3)
    rest = QuadSpace.of(2, 5, -1)
    ambient = invariants(sub.direct_sum(rest))
    t = complement_invariants(ambient, invariants(sub))
    assert complement_invariants(ambient, t) == invariants(sub)


def test_complement_dimension_guard():
    amb = invariants(QuadSpace.of(1, -1))
    with pytest.raises(ValueError):
        complement_invariants(amb, invariants(QuadSpace.of(1, 1, 1)))


def test_complement_signature_guard():
    amb = invariants(QuadSpace.of(1, 1))
    with pytest.raises(ValueError):
        complement_invariants(amb, invariants(QuadSpace.of(-1)))


# ---------------------------------------------------------------------------
# CM field data


def test_fielddata_from_m_derives_square_flag():
    fd = CMFieldData.from_m(2, 15)
    assert fd.degree == 4 and fd.m == 2
    assert fd.disc_is_square is False
    assert CMFieldData.from_m(3, 9).disc_is_square is True


def test_fielddata_validation():
    with pytest.raises(ValueError):
        CMFieldData(4, 15, True)  # 15 is not a square
    with pytest.raises(ValueError):
        CMFieldData(3, 1, True)  # odd degree
    with pytest.raises(ValueError):
        CMFieldData(4, 0, True)
    with pytest.raises(ValueError):
        CMFieldData.from_m(2, 15, nonsplit_witness=2)
    with pytest.raises(ValueError):
        CMFieldData.from_m(2, 15, nonsplit_witness=3, split_table={3: True})
    with pytest.raises(ValueError):
        CMFieldData.from_m(2, 15, split_table={4: False})


def test_fielddata_split_status():
    fd = CMFieldData.from_m(2, 15, nonsplit_witness=3, split_table={5: True, 7: False})
    assert fd.split_status(3) is False
    assert fd.split_status(5) is True
    assert fd.split_status(7) is False
    assert fd.split_status(11) is None


# ---------------------------------------------------------------------------
# hyperbolicity comparison


NEEDS_DATA_SPACE = QuadSpace.of(1, -1, 3, -5)  # det class 15, discrepancy {3, 5}


def test_hyperbolicity_pass_on_actual_hyperbolic():
    report = hyperbolicity_check(hyperbolic(2), CMFieldData.from_m(2, 1))
    assert report.verdict == "pass"
    assert report.discrepancy == ()
    assert report.passed


def test_hyperbolicity_needs_data_without_split_info():
    report = hyperbolicity_check(NEEDS_DATA_SPACE, CMFieldData.from_m(2, 15))
    assert report.verdict == "needs-data"
    assert report.discrepancy == (3, 5)
    assert report.unknown_split == (3, 5)
    assert not report.passed


def test_hyperbolicity_conditional_pass_with_certificates():
    fd = CMFieldData.from_m(2, 15, nonsplit_witness=3, split_table={5: False})
    report = hyperbolicity_check(NEEDS_DATA_SPACE, fd)
    assert report.verdict == "conditional-pass"
    assert report.certified_nonsplit == (3, 5)
    assert report.unknown_split == ()
    assert report.passed


def test_hyperbolicity_fail_on_split_conflict():
    fd = CMFieldData.from_m(2, 15, split_table={3: True})
    report = hyperbolicity_check(NEEDS_DATA_SPACE, fd)
    assert report.verdict == "fail"
    assert report.split_conflicts == (3,)
    assert not report.passed


def test_hyperbolicity_dimension_mismatch():
    with pytest.raises(ValueError):
        hyperbolicity_check(hyperbolic(3), CMFieldData.from_m(2, 1))


def test_hyperbolicity_json_shape():
    doc = hyperbolicity_check(NEEDS_DATA_SPACE, CMFieldData.from_m(2, 15)).to_json()
    assert doc == {
        "verdict": "needs-data",
        "discrepancy": [3, 5],
        "certified_nonsplit": [],
        "unknown_split": [3, 5],
        "split_conflicts": [],
    }


# ---------------------------------------------------------------------------
# full embedding criterion


def test_embedding_criterion_passes_on_hyperbolic_match():
    report = embedding_criterion(hyperbolic(4), CMFieldData.from_m(4, 1))
    assert report.verdict == "pass"
    assert report.det_matches
    assert report.signature_even
    assert report.passed


def test_embedding_criterion_fails_on_odd_signature_and_det():
    report = embedding_criterion(hyperbolic(3), CMFieldData.from_m(3, 1))
    assert report.verdict == "fail"
    assert not report.det_matches  # det(U^3) = -1, expected class of 1
    assert not report.signature_even


def test_embedding_criterion_fails_on_det_mismatch_alone():
    report = embedding_criterion(hyperbolic(2), CMFieldData.from_m(2, 3))
    assert report.verdict == "fail"
    assert not report.det_matches
    assert report.signature_even


def test_embedding_criterion_needs_data_propagates():
    report = embedding_criterion(NEEDS_DATA_SPACE, CMFieldData.from_m(2, 15))
    assert report.verdict == "needs-data"
    assert report.det_matches and report.signature_even
    assert report.hyperbolicity.verdict == "needs-data"


def test_embedding_criterion_conditional_data_gives_pass_verdict():
    fd = CMFieldData.from_m(2, 15, nonsplit_witness=3, split_table={5: False})
    report = embedding_criterion(NEEDS_DATA_SPACE, fd)
    assert report.verdict == "pass"
    assert report.hyperbolicity.verdict == "conditional-pass"


def test_embedding_criterion_json_mentions_every_layer():
    doc = embedding_criterion(hyperbolic(4), CMFieldData.from_m(4, 1)).to_json()
    assert set(doc) >= {"verdict", "det", "signature", "hyperbolicity"}
    assert doc["verdict"] == "pass"

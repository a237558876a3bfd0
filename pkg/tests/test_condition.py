"""The six-part candidate check, witness construction, and feasibility queries."""

import math
from fractions import Fraction

import pytest

from k3cert.condition import (
    MAX_M,
    WitnessSearchError,
    check_candidate,
    check_names,
    construct_witness,
    construct_witness_even_h,
    feasibility,
    seed_polynomial,
)
from k3cert.weilpoly import (
    RatPoly,
    cyclotomic,
    format_poly,
    parse_poly,
    poly_gcd,
    sturm_count,
)

WORKED = parse_poly("1,1/7,1,1/7,1")

ALL_CHECKS = (
    "unit_circle",
    "no_root_of_unity",
    "integral_away_from_p",
    "slope_profile",
    "prime_power_shape",
    "local_factor_irreducible",
)


def test_check_names_catalogue():
    assert check_names() == ALL_CHECKS


# ---------------------------------------------------------------------------
# the candidate check on known inputs


def test_worked_example_passes_every_check():
    report = check_candidate(WORKED, 7)
    assert report.verdict == "pass"
    assert report.passed
    assert (report.m, report.h, report.a, report.e) == (2, 1, 1, 1)
    assert report.q == 7
    assert [(str(s), l) for s, l in report.slope_profile.segments] == [
        ("-1", 1),
        ("0", 2),
        ("1", 1),
    ]
    assert all(report.checks[name].status == "pass" for name in ALL_CHECKS)
    assert report.failed_checks == ()
    assert report.unknown_checks == ()


def test_report_json_worked_example():
    doc = check_candidate(WORKED, 7).to_json()
    assert doc["verdict"] == "pass"
    assert doc["m"] == 2 and doc["h"] == 1 and doc["a"] == 1 and doc["e"] == 1
    assert doc["q"] == 7
    assert doc["slope_profile"] == [["-1", 1], ["0", 2], ["1", 1]]
    assert set(doc["checks"]) == set(ALL_CHECKS)


def test_cyclotomic_multiple_fails_root_of_unity_check():
    report = check_candidate(WORKED * cyclotomic(4), 7)
    assert report.verdict == "fail"
    assert "no_root_of_unity" in report.failed_checks
    assert report.checks["no_root_of_unity"].detail.get("cyclotomic_index") == 4
    # the roots still lie on the unit circle, so that check keeps passing
    assert report.checks["unit_circle"].status == "pass"


def test_off_p_denominator_fails_integrality_check():
    bent = RatPoly.of(1, Fraction(1, 21), 1, Fraction(1, 7), 1)
    report = check_candidate(bent, 7)
    assert report.verdict == "fail"
    assert "integral_away_from_p" in report.failed_checks
    assert 1 in report.checks["integral_away_from_p"].detail["offending_indices"]


def test_real_quadratic_fails_circle_check():
    # T^2 + T - 1 transformed... plainly: palindrome with off-circle roots
    report = check_candidate(parse_poly("1,-3,1"), 7)
    assert report.verdict == "fail"
    assert "unit_circle" in report.failed_checks


def test_asymmetric_slope_profile_fails():
    # valuations 0, -2, -1, 0, 0: polygon not symmetric
    bent = RatPoly.of(1, Fraction(1, 49), Fraction(1, 7), Fraction(2), 1)
    report = check_candidate(bent, 7)
    assert report.verdict == "fail"
    assert "slope_profile" in report.failed_checks


def test_split_negative_slope_fails_local_factor_check():
    # slopes -2 and -1: the p-adic negative part cannot be a single factor
    bent = RatPoly.of(1, Fraction(1, 49), Fraction(1, 343), Fraction(1, 49), 1)
    report = check_candidate(bent, 7)
    assert report.verdict == "fail"
    assert "local_factor_irreducible" in report.failed_checks


def test_squared_witness_passes_with_e_two():
    report = check_candidate(WORKED * WORKED, 7)
    assert report.verdict == "pass"
    assert (report.m, report.h, report.a, report.e) == (4, 2, 2, 2)
    assert report.q == 49
    assert report.checks["prime_power_shape"].detail["e"] == 2


def test_check_candidate_input_guards():
    with pytest.raises(ValueError):
        check_candidate(WORKED, 6)  # composite p
    with pytest.raises(ValueError):
        check_candidate(parse_poly("2,1,2"), 7)  # constant term != 1
    with pytest.raises(ValueError):
        check_candidate(parse_poly("1,1,1,1"), 7)  # odd degree
    with pytest.raises(ValueError):
        check_candidate(RatPoly.one(), 7)  # degree 0
    too_big = RatPoly.monomial(22, 1) + RatPoly.one()
    with pytest.raises(ValueError):
        check_candidate(too_big, 7)


def test_flat_candidate_has_height_zero_profile():
    # all roots of valuation 0: no negative segment, so no h to report
    report = check_candidate(parse_poly("1,1,1"), 7)  # sixth roots of unity
    assert report.verdict == "fail"  # cyclotomic
    assert report.checks["slope_profile"].status == "fail"


# ---------------------------------------------------------------------------
# seed polynomials


def test_seed_degrees_and_normalization():
    for m in range(1, MAX_M + 1):
        seed = seed_polynomial(m)
        assert seed.degree == m
        assert seed.leading == 1
        assert all(c.denominator == 1 for c in seed.coeffs)
        assert seed.constant != 0


def test_seed_roots_are_real_distinct_and_small():
    for m in range(1, MAX_M + 1):
        seed = seed_polynomial(m)
        assert poly_gcd(seed, seed.derivative()).degree == 0
        lo, hi = Fraction(-2), Fraction(2)
        inside = sturm_count(seed, lo, hi) - (1 if seed.evaluate(hi) == 0 else 0)
        if seed.evaluate(lo) == 0:
            inside -= 0  # half-open interval already excludes the left end
        assert inside == m


def test_seed_frozen_factorizations():
    assert seed_polynomial(1) == parse_poly("-1,1")
    assert seed_polynomial(2) == parse_poly("-1,0,1")
    assert seed_polynomial(5) == parse_poly("-1,0,1") * parse_poly("1,-3,0,1")
    assert seed_polynomial(10) == (
        parse_poly("-1,0,1")
        * parse_poly("-2,0,1")
        * parse_poly("-3,0,1")
        * parse_poly("1,0,-4,0,1")
    )
    with pytest.raises(ValueError):
        seed_polynomial(11)
    with pytest.raises(ValueError):
        seed_polynomial(0)


# ---------------------------------------------------------------------------
# witness construction


def test_construct_witness_reproduces_worked_example():
    L, report = construct_witness(7, 2, 1)
    assert L == WORKED
    assert report.a == 1 and report.q == 7


def test_construct_witness_frozen_small_cases():
    L, report = construct_witness(5, 1, 1)
    assert format_poly(L) == "1,-4/5,1"
    assert report.a == 1
    L, report = construct_witness(7, 3, 2)
    assert format_poly(L) == "1,0,1/7,1,1/7,0,1"
    assert report.a == 1


def test_construct_witness_h_equals_m():
    L, report = construct_witness(7, 2, 2)
    assert report.h == 2 and report.e == 1
    assert math.gcd(report.a, 2) == 1  # even a would collapse the slope


def test_construct_witness_respects_coprimality():
    for h in (2, 4, 6):
        m = max(h, 5)
        if m > MAX_M:
            continue
        _, report = construct_witness(7, m, h)
        assert math.gcd(report.a, h) == 1


def test_construct_witness_rejects_bad_ranges():
    with pytest.raises(ValueError):
        construct_witness(7, 4, 5)  # h > m
    with pytest.raises(ValueError):
        construct_witness(7, 11, 1)
    with pytest.raises(ValueError):
        construct_witness(8, 2, 1)  # composite p
    with pytest.raises(ValueError):
        construct_witness(7, 2, 1, a_start=0)


def test_construct_witness_unreachable_cap():
    with pytest.raises(WitnessSearchError):
        construct_witness(7, 2, 2, a_start=2, a_cap=2)  # gcd(2, 2) > 1, nothing to try


def test_even_height_route_squares_a_degree_ten_witness():
    L, report = construct_witness_even_h(7, 2)
    assert (report.m, report.h, report.e) == (10, 2, 2)
    assert L.degree == 20
    assert report.q == 7**report.a
    # the base exponent doubles under squaring, so q is a perfect square
    assert report.a % 2 == 0
    assert math.isqrt(report.q) ** 2 == report.q


def test_even_height_route_rejects_odd_h():
    with pytest.raises(ValueError):
        construct_witness_even_h(7, 3)
    with pytest.raises(ValueError):
        construct_witness_even_h(7, 12)


def test_witness_reports_are_internally_consistent():
    for p, m, h in [(7, 2, 1), (7, 5, 3), (5, 4, 1), (5, 3, 3), (7, 6, 5)]:
        L, report = construct_witness(p, m, h)
        assert report.passed
        assert L.degree == 2 * m
        assert L.constant == 1
        assert L.coeffs == tuple(reversed(L.coeffs))
        assert report.q == p**report.a
        assert math.gcd(report.a, report.h) == 1
        fresh = check_candidate(L, p)
        assert fresh.to_json() == report.to_json()


# ---------------------------------------------------------------------------
# feasibility of (rho, h) pairs


def test_feasibility_square_of_rank_bound():
    verdict = feasibility(7, 4, 9)
    assert verdict.feasible
    assert verdict.m == 9
    verdict = feasibility(7, 6, 9)
    assert not verdict.feasible
    assert verdict.reason == "artin_violation"
    assert verdict.m is None


def test_feasibility_grid_matches_rank_bound():
    for p in (5, 7):
        for rho in range(2, 21, 2):
            for h in range(1, 11):
                verdict = feasibility(p, rho, h)
                assert verdict.feasible == (rho <= 22 - 2 * h)


def test_feasibility_m_formula():
    assert feasibility(7, 10, 1).m == 6
    assert feasibility(7, 2, 1).m == 10
    assert feasibility(7, 20, 1).m == 1


def test_feasibility_witness_direct_route():
    verdict = feasibility(7, 4, 9, want_witness=True)
    assert verdict.witness is not None
    assert verdict.report.h == 9 and verdict.report.m == 9
    assert verdict.witness_status == "computed"


def test_feasibility_witness_even_h_square_route():
    verdict = feasibility(7, 2, 10, want_witness=True)
    assert verdict.report.m == 10 and verdict.report.h == 10
    assert verdict.report.e == 2
    assert math.isqrt(verdict.report.q) ** 2 == verdict.report.q


def test_feasibility_unsupported_pocket():
    verdict = feasibility(5, 2, 9, want_witness=True)
    assert verdict.feasible
    assert verdict.witness is None
    assert verdict.witness_status == "unsupported_case"
    # the same pocket with even h is fully supported
    verdict = feasibility(5, 2, 8, want_witness=True)
    assert verdict.witness is not None
    assert verdict.report.e == 2


def test_feasibility_input_guards():
    with pytest.raises(ValueError):
        feasibility(3, 2, 1)
    with pytest.raises(ValueError):
        feasibility(4, 2, 1)
    with pytest.raises(ValueError):
        feasibility(7, 3, 1)
    with pytest.raises(ValueError):
        feasibility(7, 0, 1)
    with pytest.raises(ValueError):
        feasibility(7, 2, 0)


def test_feasibility_json_carries_witness_text():
    doc = feasibility(7, 4, 9, want_witness=True).to_json()
    assert doc["feasible"] is True
    assert isinstance(doc["witness"], str) and doc["witness"].startswith("1,")
    assert doc["report"]["verdict"] == "pass"
    doc = feasibility(7, 20, 10).to_json()
    assert doc["feasible"] is False
    assert doc["witness"] is None

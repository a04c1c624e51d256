from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from surface_census.signatures import (
    NonIntegralGenus,
    Signature,
    SignatureError,
    bound_constants,
    enumerate_sigma,
    family_constraints,
    format_fraction,
    normalized_measure,
    parse_signature,
    q_fraction,
    rh_genus,
)


def sig(text):
    return parse_signature(text)


def measure_oracle(genus, periods):
    # direct evaluation, written independently of the library
    total = Fraction(2 * genus - 2)
    for m in periods:
        total += 1 - Fraction(1, m)
    return total


# -- measure, q, genus --------------------------------------------------------


def test_measure_examples():
    assert normalized_measure(sig("(2,6,6)")) == Fraction(1, 6)
    assert normalized_measure(sig("(1; -)")) == 0
    assert normalized_measure(sig("(2,2,2,3)")) == Fraction(1, 6)


def test_measure_can_be_negative():
    assert normalized_measure(sig("(2,2,2)")) == Fraction(-1, 2)


def test_q_examples():
    assert str(q_fraction(sig("(2,3,7)"))) == "1/84"
    q = q_fraction(sig("(2,5,7)"))
    assert (q.r, q.s) == (11, 140)
    assert str(q_fraction(sig("(2,8,8)"))) == "1/8"


def test_q_rejects_non_hyperbolic():
    with pytest.raises(SignatureError, match="not cocompact hyperbolic"):
        q_fraction(sig("(2,3,6)"))
    with pytest.raises(SignatureError):
        q_fraction(sig("(1; -)"))


def test_rh_genus_examples():
    assert rh_genus(sig("(2,6,6)"), 84) == 8
    assert rh_genus(sig("(2,4,8)"), 16) == 2


def test_rh_genus_non_integral_carries_value():
    with pytest.raises(NonIntegralGenus) as info:
        rh_genus(sig("(2,3,7)"), 83)
    assert info.value.value == Fraction(167, 84)


def test_rh_genus_too_small():
    with pytest.raises(SignatureError, match="not a surface group quotient"):
        rh_genus(sig("(2,3,7)"), 0)


# -- parsing and rendering ------------------------------------------------------


@pytest.mark.parametrize("text", ["(2,3,7)", "(1; 2,2)", "(2; -)", "(0; 3,3,4)", "( 2 , 3 , 7 )"])
def test_parse_round_trip(text):
    s = parse_signature(text)
    assert parse_signature(str(s)) == s


def test_render_forms():
    assert str(Signature(0, (7, 2, 3))) == "(2,3,7)"
    assert str(Signature(1, (2, 2))) == "(1; 2,2)"
    assert str(Signature(2, ())) == "(2; -)"


def test_bad_periods_rejected():
    with pytest.raises(SignatureError):
        Signature(0, (1, 3, 7))
    with pytest.raises(SignatureError):
        parse_signature("2,3,7")


def test_format_fraction():
    assert format_fraction(Fraction(8)) == "8"
    assert format_fraction(Fraction(140, 11)) == "140/11"


periods_st = st.lists(st.integers(2, 60), min_size=0, max_size=5)


@given(st.integers(0, 3), periods_st)
def test_measure_matches_oracle(genus, periods):
    assert normalized_measure(Signature(genus, tuple(periods))) == measure_oracle(genus, periods)


@given(st.integers(0, 2), periods_st, st.integers(1, 5000))
def test_genus_round_trip_is_exact(genus, periods, order):
    s = Signature(genus, tuple(periods))
    if measure_oracle(genus, periods) <= 0:
        return
    q = q_fraction(s)
    assert Fraction(q.r, q.s) == measure_oracle(genus, periods) / 2
    g = 1 + order * Fraction(q.r, q.s)
    if g.denominator == 1 and g >= 2:
        assert rh_genus(s, order) == g
    else:
        with pytest.raises(SignatureError):
            rh_genus(s, order)


# -- Sigma_lambda ---------------------------------------------------------------


def brute_sigma(lam, max_period):
    """Every genus-0 signature with k <= 4 and periods <= max_period meeting the bound."""
    bound = 2 / Fraction(lam)
    out = set()

    def rec(prefix, k, lo):
        if len(prefix) == k:
            mu = measure_oracle(0, prefix)
            if 0 < mu <= bound:
                out.add(tuple(prefix))
            return
        for m in range(lo, max_period + 1):
            # measure grows with every period, so stop once even the rest at m overshoots
            rest = k - len(prefix)
            if measure_oracle(0, prefix + [m] * rest) > bound and measure_oracle(0, prefix + [m] + [2] * (rest - 1)) > bound:
                break
            rec(prefix + [m], k, m)

    for k in range(3, 5):
        rec([], k, 2)
    return out


def test_sigma8_shape():
    s8 = enumerate_sigma(8)
    assert len(s8.finite_members) == 146
    type_i = [m for m in s8.finite_members if m.periods[:2] not in ((2, 3), (2, 4)) or m.k != 3]
    assert len(type_i) == 42  # the printed list of 41 plus (4,4,4)
    assert Signature(0, (4, 4, 4)) in s8
    assert sig("(2,5,20)") in s8 and sig("(2,5,21)") not in s8
    assert sig("(2,3,78)") in s8 and sig("(2,3,79)") not in s8
    assert sig("(2,4,36)") in s8 and sig("(2,4,37)") not in s8
    assert [str(t) for t in s8.infinite_families] == ["(2,3,n), n >= 79", "(2,4,n), n >= 37"]
    assert s8.in_tail(sig("(2,3,500)")) is not None


def test_sigma8_against_brute_force():
    s8 = enumerate_sigma(8)
    finite = {m.periods for m in s8.finite_members}
    brute = brute_sigma(8, 400)
    in_tails = {t for t in brute if s8.in_tail(Signature(0, t))}
    assert brute - in_tails == finite


def test_sigma12_against_brute_force():
    s12 = enumerate_sigma(12)
    assert sig("(2,4,12)") in s12  # measure exactly 2/lambda
    finite = {m.periods for m in s12.finite_members}
    brute = brute_sigma(12, 1000)
    in_tails = {t for t in brute if s12.in_tail(Signature(0, t))}
    assert brute - in_tails == finite
    assert [t.prefix for t in s12.infinite_families] == [(2, 3)]


def test_tail_limits_respect_bound():
    for lam in (Fraction(13, 2), 7, 8, 10, 12, 20):
        s = enumerate_sigma(lam)
        for fam in s.infinite_families:
            assert fam.limit_measure() <= 2 / Fraction(lam)
            nxt = fam.member(fam.n_min)
            assert normalized_measure(nxt) <= 2 / Fraction(lam)


def test_sigma_rejects_small_lambda():
    with pytest.raises(SignatureError, match="must exceed 6"):
        enumerate_sigma(6)


def test_sigma_empty_for_large_lambda():
    assert enumerate_sigma(100).finite_members == ()


@pytest.mark.parametrize("lam", [Fraction(13, 2), 7, 8, 9, 12, 42])
def test_no_positive_genus_members(lam):
    s = enumerate_sigma(lam)
    assert all(m.genus == 0 for m in s.finite_members)
    assert all(f.genus == 0 for f in s.infinite_families)


def test_canonical_order():
    members = enumerate_sigma(8).finite_members
    assert list(members) == sorted(members, key=lambda m: (m.k, m.periods))


def test_family_25_tail_appears_below_20_thirds():
    s = enumerate_sigma(Fraction(13, 2))
    assert any(f.prefix == (2, 5) and f.n_min == 71 for f in s.infinite_families)


# -- constants and family pruning ---------------------------------------------


def test_bound_constants_sigma8():
    bc = bound_constants(enumerate_sigma(8))
    assert (bc.p_max_r, bc.p_max_period, bc.s_max) == (71, 13, 84)
    assert bc.threshold() == 85


def test_family_constraint_candidates():
    assert family_constraints((2, 3), 29).candidates == (35, 64)
    assert family_constraints((2, 4), 29).candidates == (33,)
    fc = family_constraints((2, 3), 7)
    assert fc.divisor_condition == "n-6 | 72" and fc.ceiling == 78


def test_family_constraint_excludes_n80_at_p7():
    fc = family_constraints((2, 3), 7, n=80)
    assert fc.admissible is False
    assert "7 does not divide 74" in fc.reason


def test_family_constraint_rejects_other_family():
    with pytest.raises(SignatureError):
        family_constraints((2, 6), 7)
    with pytest.raises(SignatureError):
        family_constraints((2, 3), 9)


@pytest.mark.parametrize("p", [17, 19, 23, 29, 31, 37, 41])
def test_family_candidates_are_r_equal_p(p):
    # independent oracle: scan the finite range directly
    for prefix, hi in (((2, 3), 78), ((2, 4), 36), ((2, 5), 70)):
        lo = 7 if prefix == (2, 3) else 5
        expected = tuple(
            n for n in range(lo, hi + 1)
            if (measure_oracle(0, list(prefix) + [n]) / 2).numerator == p
        )
        assert family_constraints(prefix, p).candidates == expected


@pytest.mark.parametrize("lam", [Fraction(13, 2), 7, 8, 9, 10, 12, 18])
def test_2_6_n_range_matches_closed_form(lam):
    members = [m.periods[2] for m in enumerate_sigma(lam).finite_members if m.periods[:2] == (2, 6) and m.k == 3]
    top = (3 * lam) // (lam - 6)
    assert members == list(range(6, int(top) + 1))

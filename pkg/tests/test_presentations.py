import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from surface_census.presentations import (
    CosetLimitExceeded,
    Presentation,
    PresentationSyntaxError,
    UnknownGenerator,
    abelian_invariants,
    commutator,
    coset_enumerate,
    invert_word,
    parse_presentation,
    permutation_group,
    reduce_word,
    smith_diagonal,
    triangle_presentation,
    word_power,
)


def det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def determinantal_divisors(matrix):
    """Invariant factors via gcds of k x k minors: d_k = D_k / D_(k-1)."""
    m, n = len(matrix), len(matrix[0])
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, det([[matrix[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# -- words ----------------------------------------------------------------------


def test_word_helpers():
    w = ((0, 1), (1, 2))
    assert reduce_word(w + invert_word(w)) == ()
    assert word_power(w, -1) == invert_word(w)
    assert reduce_word(((0, 2), (0, -2), (1, 1))) == ((1, 1),)
    assert commutator(((0, 1),), ((0, 1),)) == ()


# -- parsing --------------------------------------------------------------------


def test_parse_and_render():
    p = parse_presentation("< a, b | a^2, b^3, (a b)^7 >")
    assert p.generators == ("a", "b")
    assert p == Presentation(("a", "b"), (((0, 2),), ((1, 3),), ((0, 1), (1, 1)) * 7))
    assert str(p) == "< a, b | a^2, b^3, (a b)^7 >"
    assert parse_presentation(str(p)) == p


def test_parse_commutator_and_inverse():
    p = parse_presentation("< x, y | [x, y], x^-1 y >")
    assert p.relators[0] == ((0, -1), (1, -1), (0, 1), (1, 1))
    assert p.relators[1] == ((0, -1), (1, 1))


@pytest.mark.parametrize(
    "text, position",
    [("< a | a^ >", 9), ("< a, b a^2 >", 7), ("< a | a^2", 9), ("a | a^2 >", 0)],
)
def test_syntax_errors_report_position(text, position):
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation(text)
    assert info.value.position == position
    assert f"at position {position}" in str(info.value)


def test_unknown_generator():
    with pytest.raises(UnknownGenerator, match="'c'"):
        parse_presentation("< a, b | c^2 >")


# -- coset enumeration ----------------------------------------------------------


@pytest.mark.parametrize(
    "text, order",
    [
        ("< x | x^1 >", 1),
        ("< x | x^12 >", 12),
        ("< r, s | r^5, s^2, s r s r >", 10),
        ("< a, b | a^2, b^3, (a b)^5 >", 60),
        ("< a, b | a^2, b^3, (a b)^7, [a, b]^4 >", 168),
    ],
)
def test_coset_counts(text, order):
    assert coset_enumerate(parse_presentation(text)).n_cosets == order


def test_coset_counts_against_sympy():
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    F, a, b = free_group("a, b")
    cases = [
        ([a**2, b**3, (a * b) ** 4], "< a, b | a^2, b^3, (a b)^4 >"),
        ([a**3, b**3, (a * b) ** 3, (a * b**-1) ** 3], "< a, b | a^3, b^3, (a b)^3, (a b^-1)^3 >"),
        ([a**4, b**2, (a * b) ** 2], "< a, b | a^4, b^2, (a b)^2 >"),
    ]
    for rels, text in cases:
        assert coset_enumerate(parse_presentation(text)).n_cosets == FpGroup(F, rels).order()


def test_subgroup_index():
    pres = parse_presentation("< x, y | x^2, y^3, (x y)^7, [x, y]^4 >")
    assert coset_enumerate(pres, [((1, 1),)]).n_cosets == 56
    assert coset_enumerate(triangle_presentation(2, 3, 7), [((0, 1),), ((1, 1),)]).n_cosets == 1


def test_limit_reports_undecided():
    with pytest.raises(CosetLimitExceeded, match=r"undecided \(limit 500\)") as info:
        coset_enumerate(triangle_presentation(2, 3, 7), limit=500)
    assert info.value.limit == 500


def test_coset_table_is_consistent():
    pres = parse_presentation("< a, b | a^2, b^3, (a b)^5 >")
    table = coset_enumerate(pres)
    for rel in pres.relators:
        assert all(table.act(c, rel) == c for c in range(table.n_cosets))


# -- permutation groups ---------------------------------------------------------


def test_permutation_group_satisfies_relators():
    pres = parse_presentation("< a, b | a^2, b^3, (a b)^7, [a, b]^4 >")
    G = permutation_group(pres)
    assert G.order == 168
    a, b = G.gen("a"), G.gen("b")
    assert G.power(a, 2) == 0 and G.power(b, 3) == 0
    assert G.power(G.mul(a, b), 7) == 0
    assert G.check_axioms()


def test_trivial_presentation_group():
    assert permutation_group(parse_presentation("< x | x^1 >")).order == 1


# -- abelianization -------------------------------------------------------------


@pytest.mark.parametrize(
    "text, invariants",
    [
        ("< a, b | a^2, b^3, (a b)^7 >", []),
        ("< a, b | a^2, b^4, (a b)^8 >", [2, 4]),
        ("< a, b | [a, b] >", [0, 0]),
        ("< a, b | a^6, b^4, [a, b] >", [2, 12]),
        ("< x | x^1 >", []),
    ],
)
def test_abelian_invariants_examples(text, invariants):
    assert abelian_invariants(parse_presentation(text)) == invariants


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@given(matrices)
@settings(max_examples=150)
def test_smith_diagonal_matches_determinantal_divisors(matrix):
    diag = [d for d in smith_diagonal(matrix) if d]
    assert diag == determinantal_divisors(matrix)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))


def test_smith_diagonal_matches_sympy():
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    rng = random.Random(7)
    for _ in range(40):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        matrix = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        snf = smith_normal_form(Matrix(matrix), domain=ZZ)
        theirs = sorted(abs(snf[i, i]) for i in range(min(m, n)) if snf[i, i])
        ours = sorted(d for d in smith_diagonal(matrix) if d)
        assert ours == theirs


@given(st.lists(st.integers(2, 30), min_size=3, max_size=3), st.randoms(use_true_random=False))
def test_abelian_invariants_permutation_invariant(periods, rng):
    # relators of a polygonal presentation x1^m1, ..., xk^mk, x1...xk
    def pres(ms):
        k = len(ms)
        rels = tuple(((i, m),) for i, m in enumerate(ms)) + (tuple((i, 1) for i in range(k)),)
        return Presentation(tuple(f"x{i}" for i in range(k)), rels)

    shuffled = list(periods)
    rng.shuffle(shuffled)
    assert abelian_invariants(pres(periods)) == abelian_invariants(pres(shuffled))
    # relator order does not matter either
    p = pres(periods)
    q = Presentation(p.generators, tuple(reversed(p.relators)))
    assert abelian_invariants(p) == abelian_invariants(q)


@given(st.integers(2, 40), st.integers(2, 40), st.integers(2, 40))
def test_pairwise_coprime_periods_give_perfect_group(l, m, n):
    if math.gcd(l, m) == 1 and math.gcd(m, n) == 1 and math.gcd(l, n) == 1:
        assert abelian_invariants(triangle_presentation(l, m, n)) == []

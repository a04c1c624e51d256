import numpy as np
import pytest

from surface_census.groups import (
    AccolaMaclachlanIV,
    AccolaMaclachlanV,
    Cyclic,
    Dihedral,
    ExampleI,
    SearchCapExceeded,
    Semidihedral,
    SplitMetacyclic,
    Symmetric,
    automorphisms,
    construct,
)
from surface_census.signatures import SignatureError, parse_signature
from surface_census.ske import (
    GeneratingTuple,
    SKEError,
    braid_swap,
    eigen_label,
    enumerate_tuples,
    orbit_action,
    orbits,
    reflect,
    ske_report,
    surface_genus,
    tuple_array,
)


def sig(text):
    return parse_signature(text)


def brute_tuples(G, periods):
    """Triples (a, b, c) with the given orders, abc = 1 and <a, b> = G, by direct search."""
    l, m, n = periods
    out = set()
    for a in range(G.order):
        if G.orders[a] != l:
            continue
        for b in range(G.order):
            if G.orders[b] != m:
                continue
            c = G.inverse(G.mul(a, b))
            if G.orders[c] != n:
                continue
            seen, frontier = {0}, [0]
            while frontier:
                frontier = [y for x in frontier for y in (G.mul(x, a), G.mul(x, b)) if y not in seen and not seen.add(y)]
            if len(seen) == G.order:
                out.add((a, b, c))
    return out


def brute_orbit_count(G, tuples):
    maps = automorphisms(G).maps
    remaining = set(tuples)
    count = 0
    while remaining:
        t = remaining.pop()
        remaining -= {tuple(int(phi[x]) for x in t) for phi in maps}
        count += 1
    return count


# -- tuple enumeration ----------------------------------------------------------


@pytest.mark.parametrize(
    "desc, text",
    [
        (Semidihedral(8), "(2,4,8)"),
        (AccolaMaclachlanV(10), "(2,4,10)"),
        (SplitMetacyclic(11, 10, 2), "(2,5,10)"),
        (ExampleI(7), "(2,6,6)"),
        (Symmetric(5), "(2,4,5)"),
        (Dihedral(6), "(2,2,6)"),
    ],
)
def test_tuples_match_brute_force(desc, text):
    G = construct(desc)
    s = sig(text)
    ours = {tuple(t) for t in enumerate_tuples(G, s)}
    assert ours == brute_tuples(G, s.periods)
    assert all(t.is_valid() for t in enumerate_tuples(G, s))
    if ours:
        assert len(orbits(G, s)) == brute_orbit_count(G, ours)


def test_tuples_are_lexicographic():
    T = tuple_array(construct(ExampleI(7)), sig("(2,6,6)"))
    assert [tuple(r) for r in T.tolist()] == sorted(tuple(r) for r in T.tolist())


def test_four_period_signature():
    G = construct(Dihedral(4))
    tuples = enumerate_tuples(G, sig("(2,2,2,2)"))
    assert tuples and all(t.is_valid() for t in tuples)
    # measure zero: a torus quotient, not a hyperbolic surface
    with pytest.raises(SignatureError):
        surface_genus(G, sig("(2,2,2,2)"))


def test_four_period_hyperbolic():
    G = construct(Dihedral(6))
    tuples = enumerate_tuples(G, sig("(2,2,2,3)"))
    assert tuples and all(t.is_valid() for t in tuples)
    assert surface_genus(G, sig("(2,2,2,3)")) == 2  # 1 + 12 * 1/12


def test_abelian_target_has_no_2_6_6_tuples():
    assert len(tuple_array(construct(Cyclic(12)), sig("(2,6,6)"))) == 0
    assert ske_report(construct(Cyclic(12)), sig("(2,6,6)"))["orbit_count"] == 0


def test_tuple_search_errors():
    G = construct(Symmetric(5))
    with pytest.raises(SKEError, match="genus-0"):
        tuple_array(G, sig("(1; 2)"))
    with pytest.raises(SearchCapExceeded):
        tuple_array(G, sig("(2,4,5)"), cap=100)


# -- orbits and semiregularity --------------------------------------------------


@pytest.mark.parametrize(
    "desc, text, tuples, orbit_count, genus",
    [
        (SplitMetacyclic(11, 10, 2), "(2,5,10)", 440, 4, 12),
        (ExampleI(7), "(2,6,6)", 336, 4, 8),
        (SplitMetacyclic(17, 8), "(2,8,8)", 1088, 4, 18),
        (Semidihedral(8), "(2,4,8)", None, 1, 2),
        (AccolaMaclachlanIV(9), "(2,4,9)", None, 1, 6),
        (AccolaMaclachlanV(10), "(2,4,10)", None, 1, 4),
    ],
)
def test_orbit_counts(desc, text, tuples, orbit_count, genus):
    G = construct(desc)
    s = sig(text)
    orbs = orbits(G, s)
    T = tuple_array(G, s)
    if tuples is not None:
        assert len(T) == tuples
    assert len(orbs) == orbit_count
    assert surface_genus(G, s) == genus
    # semiregular: every orbit has full size
    assert all(o.size == automorphisms(G).order for o in orbs)
    assert len(T) == orbit_count * automorphisms(G).order


@pytest.mark.parametrize("p", [11, 31])
def test_example_ii_count_formula(p):
    G = construct(SplitMetacyclic(p, 10))
    s = sig("(2,5,10)")
    assert len(tuple_array(G, s)) == 4 * p * (p - 1)
    assert len(orbits(G, s)) == 4
    assert surface_genus(G, s) == p + 1


@pytest.mark.parametrize("p", [7, 13, 19])
def test_example_i_count_formula(p):
    G = construct(ExampleI(p))
    s = sig("(2,6,6)")
    assert automorphisms(G).order == 2 * p * (p - 1)
    assert len(orbits(G, s)) == 4
    assert surface_genus(G, s) == p + 1


def test_orbit_representatives_are_least():
    G = construct(ExampleI(7))
    s = sig("(2,6,6)")
    T = [tuple(r) for r in tuple_array(G, s).tolist()]
    reps = [tuple(o.representative) for o in orbits(G, s)]
    assert reps == sorted(reps)
    assert reps[0] == T[0]


# -- eigen labels ---------------------------------------------------------------


def test_labels_example_ii():
    G = construct(SplitMetacyclic(11, 10, 2))
    labels = [o.label.j for o in orbits(G, sig("(2,5,10)"), p=11)]
    assert sorted(labels) == [-2, -1, 1, 2]


def test_label_oracle_example_i():
    # label j of a kernel: its second entry acts on <x> by x -> x^(u^j)
    G = construct(ExampleI(7))
    u = G.descriptor.u
    x = G.gen("x")
    for o in orbits(G, sig("(2,6,6)"), p=7):
        b = o.representative.entries[1]
        e = next(e for e in range(1, 7) if G.conj(x, b) == G.power(x, e))
        assert pow(u, o.label.j, 7) == e


def test_label_not_power_of_step():
    G = construct(SplitMetacyclic(11, 10, 2))
    y = G.gen("y")
    bad = GeneratingTuple(G, (0, y, 0), sig("(2,5,10)"))
    with pytest.raises(SKEError, match="not a power"):
        eigen_label(bad, 11)


def test_label_needs_unique_subgroup():
    with pytest.raises(SKEError, match="unique subgroup"):
        orbits(construct(Symmetric(5)), sig("(2,4,5)"), p=5, base=2)


# -- moves ----------------------------------------------------------------------


def test_moves_preserve_validity():
    G = construct(SplitMetacyclic(17, 8))
    for t in enumerate_tuples(G, sig("(2,8,8)"))[:50]:
        assert braid_swap(t).is_valid()
        assert reflect(t).is_valid()


def test_reflect_twice_returns_to_orbit():
    for desc, text in [(ExampleI(7), "(2,6,6)"), (SplitMetacyclic(11, 10, 2), "(2,5,10)")]:
        act = orbit_action(construct(desc), sig(text), "reflect")
        perm = act.permutation
        assert all(perm[perm[i]] == i for i in range(len(perm)))


@pytest.mark.parametrize(
    "desc, text, p, move, pairing",
    [
        (SplitMetacyclic(11, 10, 2), "(2,5,10)", 11, "reflect", "{1<->-1, 2<->-2}"),
        (ExampleI(7), "(2,6,6)", 7, "braid_swap", "{1<->2, -1<->-2}"),
        (ExampleI(7), "(2,6,6)", 7, "reflect", "{1<->-1, 2<->-2}"),
        (SplitMetacyclic(17, 8), "(2,8,8)", 17, "braid_swap", "{1<->3, -1<->-3}"),
    ],
)
def test_pairings(desc, text, p, move, pairing):
    assert orbit_action(construct(desc), sig(text), move, p).pairing_text() == pairing


def test_braid_swap_needs_equal_periods():
    G = construct(SplitMetacyclic(11, 10, 2))
    with pytest.raises(SKEError, match="differ"):
        orbit_action(G, sig("(2,5,10)"), "braid_swap")
    t = enumerate_tuples(G, sig("(2,5,10)"))[0]
    with pytest.raises(SKEError):
        braid_swap(t)
    with pytest.raises(SKEError, match="unknown move"):
        orbit_action(G, sig("(2,5,10)"), "twist")


def test_report_is_json_ready():
    import json

    r = ske_report(construct(ExampleI(7)), sig("(2,6,6)"), 7, moves=["braid_swap", "reflect"])
    assert json.loads(json.dumps(r)) == r
    assert r["tuple_count"] == 336 and r["aut_order"] == 84 and r["genus"] == 8
    assert np.all(np.array(r["representatives"]) >= 0)

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from minram import intpoly
from minram.arith import PrimeSet, factorize, prms_S
from minram.forms import (
    GL2Z,
    IDENTITY,
    BinaryForm,
    Irreducibility,
    NeighborhoodVN,
    ProjPoint,
    SearchBudget,
    SearchExhausted,
    act,
    act_form,
    beta_sieve_bound,
    empirical_B,
    eval_form,
    gtz_search,
    is_irreducible,
    local_obstruction_primes,
    obstruction_shift,
    parse_form,
    parse_forms,
    verify_gtz_witness,
)

INF = PrimeSet(infinity=True)


def test_eval_examples():
    assert eval_form(parse_form("t*s*(256t + 27s)"), ProjPoint(1, 1)) == 283
    assert eval_form(parse_form("t"), ProjPoint(0, 1)) == 0
    assert eval_form(parse_form("t^2 + s^2"), ProjPoint(3, 4)) == 25


def test_point_normalization():
    assert ProjPoint(2, -4) == ProjPoint(-1, 2)
    assert ProjPoint(-3, 0) == ProjPoint(1, 0)
    with pytest.raises(ValueError):
        ProjPoint(0, 0)


def test_act_examples():
    assert act(GL2Z(1, 1, 0, 1), ProjPoint(2, 3)) == ProjPoint(5, 3)
    assert act(IDENTITY, ProjPoint(7, 5)) == ProjPoint(7, 5)
    assert act_form(GL2Z(0, 1, 1, 0), parse_form("t")) == parse_form("s")


def test_gl2_rejects_non_units():
    with pytest.raises(ValueError):
        GL2Z(2, 0, 0, 1)


ELEMENTARY = [GL2Z(1, 1, 0, 1), GL2Z(1, -1, 0, 1), GL2Z(1, 0, 1, 1), GL2Z(1, 0, -1, 1), GL2Z(0, 1, 1, 0), GL2Z(-1, 0, 0, 1)]


def _product(word):
    g = IDENTITY
    for x in word:
        g = g @ x
    return (g.x1, g.x2, g.y1, g.y2)


unimodular = st.lists(st.sampled_from(ELEMENTARY), max_size=8).map(_product)
points = st.tuples(st.integers(-50, 50), st.integers(-50, 50)).filter(lambda p: p != (0, 0))
forms = st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(any)


@settings(max_examples=300, deadline=None)
@given(unimodular, points)
def test_act_inverse(m, pt):
    g = GL2Z(*m)
    P = ProjPoint(*pt)
    assert act(g, act(g.inverse(), P)) == P


@settings(max_examples=300, deadline=None)
@given(unimodular, forms, points)
def test_act_form_compatibility(m, coeffs, pt):
    # (g.F)(g v) = F(v) on raw pairs; normalizing g v costs (-1)^deg at most
    g, F = GL2Z(*m), BinaryForm(coeffs)
    a, b = pt
    assert act_form(g, F)(*g.apply(a, b)) == F(a, b)
    P = ProjPoint(a, b)
    lhs = eval_form(act_form(g, F), act(g, P))
    assert lhs in (eval_form(F, P), (-1) ** F.degree * eval_form(F, P))


def test_parse_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        parse_form("t^2 + s")
    with pytest.raises(ValueError):
        parse_form("t + ")


def test_parse_and_print_round_trip():
    for text in ["t", "t - 2s", "3t^2 - t*s + 5s^2", "-(t + s)^3", "t*s*(256t + 27s)"]:
        F = parse_form(text)
        assert parse_form(str(F)) == F


def test_irreducibility_examples():
    assert is_irreducible(parse_form("t - 2s")) is Irreducibility.IRREDUCIBLE
    assert is_irreducible(parse_form("t^2 - s^2")) is Irreducibility.REDUCIBLE
    assert is_irreducible(parse_form("t^2 + s^2")) is Irreducibility.IRREDUCIBLE
    assert is_irreducible(parse_form("t^3 - 2s^3")) is Irreducibility.IRREDUCIBLE
    assert is_irreducible(parse_form("t^3 - t*s^2")) is Irreducibility.REDUCIBLE
    assert is_irreducible(parse_form("t^4 - t^3*s - s^4")) is Irreducibility.IRREDUCIBLE
    assert is_irreducible(parse_form("t^4 + s^4")) is Irreducibility.UNDETERMINED
    with pytest.raises(ValueError):
        is_irreducible(parse_form("2t + 2s"))


def test_irreducibility_against_sympy():
    import sympy

    t = sympy.symbols("t")
    rng = random.Random(4)
    for _ in range(300):
        d = rng.randint(1, 3)
        c = [rng.randint(-6, 6) for _ in range(d + 1)]
        if not any(c):
            continue
        F = BinaryForm(c)
        if not F.primitive:
            continue
        expected = sympy.Poly(sum(ci * t ** (d - i) for i, ci in enumerate(c)), t)
        # the form also carries s-factors when leading coefficients vanish
        s_power = next(i for i, ci in enumerate(c) if ci)
        irreducible = (s_power == 0 and expected.is_irreducible) or (d == 1)
        if s_power > 0 and d > 1:
            irreducible = False
        got = is_irreducible(F)
        assert got is (Irreducibility.IRREDUCIBLE if irreducible else Irreducibility.REDUCIBLE), c


def test_local_obstruction_examples():
    assert local_obstruction_primes(parse_form("t*s*(t + s)")) == PrimeSet.of(2)
    assert local_obstruction_primes(parse_form("t")) == PrimeSet()
    assert local_obstruction_primes(parse_form("t^2 + t*s + s^2")) == PrimeSet()


def _brute_obstructions(F, bound):
    out = set()
    for p in range(2, bound + 1):
        if all(p % q for q in range(2, p)):
            pts = [(1, 0)] + [(x, 1) for x in range(p)]
            if all(F(a, b) % p == 0 for a, b in pts):
                out.add(p)
    return out


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-12, 12), min_size=2, max_size=7).filter(lambda c: math.gcd(*c) == 1))
def test_obstructions_are_small_primes(coeffs):
    F = BinaryForm(coeffs)
    found = local_obstruction_primes(F)
    assert all(p <= F.degree for p in found.primes)
    assert found.primes == _brute_obstructions(F, 3 * F.degree + 5)


def test_obstruction_shift_examples():
    N, a, g = obstruction_shift([2, 1, 1], PrimeSet.of(2))
    assert (N, a, g) == (2, 0, [1, 1, 2])
    assert obstruction_shift([0, 1]) == (1, 0, [0, 1])
    with pytest.raises(ValueError, match="p=2"):
        obstruction_shift([2, 1, 1])


def _has_obstruction(g):
    deg = intpoly.degree(g)
    for p in range(2, deg + 1):
        if all(p % q for q in range(2, p)) and all(intpoly.evaluate(g, n) % p == 0 for n in range(p)):
            return True
    return False


@pytest.mark.parametrize(
    "f, S",
    [
        ([2, 1, 1], [2]),
        ([0, -1, 0, 1], [2, 3]),  # x^3 - x, always divisible by 6
        ([0, 1, 1, 0, 0, 1, 1], [2]),
        ([6, 5, 1], [2]),  # (x+2)(x+3)
        ([0, 0, 1, 2, 1], [2]),  # x^2 (x+1)^2
    ],
)
def test_obstruction_shift_removes_obstructions(f, S):
    Sset = PrimeSet(frozenset(S), True)
    N, a, g = obstruction_shift(f, Sset)
    assert not _has_obstruction(g)
    assert intpoly.content(g) % 2 and intpoly.content(g) % 3
    for n in range(-20, 20):
        lhs = intpoly.evaluate(f, N * n + a)
        if lhs == 0:
            continue
        assert lhs == N * intpoly.evaluate(g, n)
        assert prms_S(lhs, Sset) == prms_S(N * intpoly.evaluate(g, n), Sset)


def test_beta_bounds():
    assert beta_sieve_bound([1]) == 2
    assert beta_sieve_bound([1, 1, 1]) == 10
    assert beta_sieve_bound([2]) == 4
    with pytest.raises(ValueError):
        beta_sieve_bound([])


def test_neighborhood_membership():
    V = NeighborhoodVN(2)
    assert V.contains(ProjPoint(5, 2))
    assert V.contains(ProjPoint(4, 2)) is False  # not primitive after normalization: [2:1]
    assert V.contains(ProjPoint(1, 0))
    assert not V.contains(ProjPoint(3, 2))
    assert not V.contains(ProjPoint(5, 3))


@pytest.mark.parametrize("N", [1, 2, 6])
def test_candidates_lie_in_neighborhood(N):
    V = NeighborhoodVN(N)
    seen = []
    for _, P in zip(range(300), V.candidates()):
        assert V.contains(P)
        seen.append(P)
    heights = [max(abs(P.a), abs(P.b)) for P in seen]
    assert heights == sorted(heights)
    assert len(set(seen)) == len(seen)


def test_gtz_examples():
    S = PrimeSet.of(2, infinity=True)
    assert gtz_search(parse_forms("t; t - 2s"), S, NeighborhoodVN(2)) == ProjPoint(5, 2)
    assert gtz_search(parse_forms("t"), INF, NeighborhoodVN(1)) == ProjPoint(2, 1)


def test_gtz_three_forms():
    S = PrimeSet.of(2, 3, infinity=True)
    Ls = parse_forms("t; t - 2s; t - 6s")
    P = gtz_search(Ls, S, NeighborhoodVN(6), SearchBudget(10**6))
    assert NeighborhoodVN(6).contains(P)
    values = verify_gtz_witness(Ls, S, P)
    assert len(values) == 3


def test_gtz_preconditions():
    with pytest.raises(ValueError):
        gtz_search(parse_forms("t; t - 2s"), INF)  # 2 <= r must lie in S
    with pytest.raises(ValueError):
        gtz_search(parse_forms("t; 2t"), PrimeSet.of(2, infinity=True))
    with pytest.raises(SearchExhausted):
        gtz_search(parse_forms("t"), INF, NeighborhoodVN(1), SearchBudget(0))


def test_empirical_examples():
    P, c = empirical_B(parse_forms("t; s"), INF)
    assert c <= 2 and P.b == 1
    P, c = empirical_B(parse_forms("t - 2s"), PrimeSet.of(2, infinity=True), NeighborhoodVN(2))
    assert c <= 1
    S = PrimeSet.of(2, 3, infinity=True)
    P, c = empirical_B(parse_forms("t; s; 256t + 27s"), S, budget=SearchBudget(500))
    assert c <= 3
    value = P.a * P.b * (256 * P.a + 27 * P.b)
    assert c == len(prms_S(value, S))


def test_empirical_rejects_bad_input():
    with pytest.raises(ValueError):
        empirical_B(parse_forms("t^2 - s^2"), INF)
    with pytest.raises(ValueError):
        empirical_B(parse_forms("t; -t"), INF)
    with pytest.raises(ValueError):
        empirical_B(parse_forms("t"), PrimeSet())


def test_search_independent_of_jobs():
    S = PrimeSet.of(2, 3, infinity=True)
    Ls = parse_forms("t; t - 2s; t - 6s")
    assert gtz_search(Ls, S, NeighborhoodVN(6), jobs=1) == gtz_search(Ls, S, NeighborhoodVN(6), jobs=2)

import random

import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.subresultants_qq_zz import sylvester

from minram import intpoly

x = sympy.symbols("x")


def _sym(f):
    return sympy.Poly(list(reversed(f)), x)


def _sylvester_res(f, g):
    return int(sylvester(_sym(f).as_expr(), _sym(g).as_expr(), x).det())


def test_discriminant_examples():
    assert intpoly.discriminant([-2, 0, 1]) == 8
    assert intpoly.discriminant([-1, -1, 0, 1]) == -23
    assert intpoly.discriminant([-1, 0, 0, -1, 1]) == -283


polys = st.lists(st.integers(-30, 30), min_size=2, max_size=7).filter(lambda f: f[-1] != 0)


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_resultant_matches_sylvester_determinant(f, g):
    assert intpoly.resultant(f, g) == _sylvester_res(f, g)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=3, max_size=8).filter(lambda f: f[-1] != 0))
def test_discriminant_matches_sympy(f):
    assert intpoly.discriminant(f) == int(sympy.discriminant(_sym(f).as_expr(), x))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=2, max_size=8).filter(lambda f: f[-1] != 0))
def test_sturm_matches_sympy(f):
    expected = len(set(sympy.real_roots(_sym(f))))
    assert intpoly.sturm_real_roots(f) == expected


def test_sturm_examples():
    assert intpoly.sturm_real_roots([1, 0, 1]) == 0
    assert intpoly.sturm_real_roots([-2, 0, 1]) == 2
    assert intpoly.sturm_real_roots([-1, 0, 0, -1, 1]) == 2
    assert intpoly.sturm_real_roots([1, -2, 1]) == 1
    assert intpoly.sturm_real_roots([-1, 0, -1, 0, 0, 1]) == 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4), st.lists(st.integers(-9, 9), min_size=1, max_size=3))
def test_integer_roots_of_products(roots, extra):
    f = [1]
    for r in roots:
        f = intpoly.mul(f, [-r, 1])
    g = [c for c in extra] + [1]
    h = intpoly.mul(f, g)
    found = intpoly.integer_roots(h)
    assert set(roots) <= set(found)
    assert all(intpoly.evaluate(h, r) == 0 for r in found)


def test_rational_roots():
    from fractions import Fraction

    assert intpoly.rational_roots([-1, 2]) == [Fraction(1, 2)]
    assert intpoly.rational_roots([0, -3, 2]) == [Fraction(0), Fraction(3, 2)]
    assert intpoly.rational_roots([-2, 0, 1]) == []


def test_compose_linear():
    rng = random.Random(3)
    for _ in range(50):
        f = [rng.randint(-9, 9) for _ in range(rng.randint(1, 6))]
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        g = intpoly.compose_linear(f, a, b)
        for y in range(-3, 4):
            assert intpoly.evaluate(g, y) == intpoly.evaluate(f, a * y + b)

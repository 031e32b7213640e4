"""Acceptance criteria 1-11, one test each.

Every test prints ``criterion N: PASS`` or ``FAIL`` with its wall time; the
lines are repeated in the terminal summary. Run with ``-s`` to see them inline.
"""

import contextlib
import itertools
import json
import math
import random
import time

import pytest
import sympy
from sympy.combinatorics import Permutation, PermutationGroup

from conftest import ACCEPTANCE_LINES
from minram import cli, forms, groups as gr, intpoly, specfield as sf, tower
from minram.arith import PrimeSet
from minram.forms import NeighborhoodVN, ProjPoint, SearchBudget


@contextlib.contextmanager
def criterion(n: int, label: str):
    start = time.monotonic()
    ok = False
    try:
        yield
        ok = True
    finally:
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({time.monotonic() - start:.2f}s) {label}"
        print(line)
        ACCEPTANCE_LINES.append(line)


def _admissible_points(m, count, height, rng):
    out = []
    while len(out) < count:
        a, b = rng.randint(-height, height), rng.randint(-height, height)
        if b == 0 or math.gcd(a, b) != 1:
            continue
        P = ProjPoint(a, b)
        if sf.is_admissible(m, P):
            out.append(P)
    return out


def _run_cli(argv, tmp_path, name):
    out = tmp_path / name
    code, report = cli.run(argv + ["-o", str(out)])
    assert code == cli.EXIT_OK
    vcode, vrep = cli.run(["verify", str(out)])
    assert vcode == cli.EXIT_OK, vrep["result"]["errors"]
    return report


def test_criterion_1(tmp_path, capsys):
    with criterion(1, "m(S_4) witness z^4 - z^3 - 1 ramified at {283, inf}"):
        start = time.monotonic()
        report = _run_cli(["realize-sm", "--m", "4"], tmp_path, "sm4.json")
        elapsed = time.monotonic() - start
        F = sf.SpecializedField.from_json(report["result"]["field"])
        assert list(F.h) == [-1, 0, 0, -1, 1]
        # independent oracles: sympy discriminant and factor patterns
        x = sympy.Symbol("x")
        assert sympy.discriminant(x**4 - x**3 - 1, x) == -283 == F.disc.value
        assert F.ram_set == PrimeSet.of(283, infinity=True) and F.total == 2
        assert F.ram_status[283] is sf.RamStatus.RAMIFIED and F.disc.exponent(283) == 1
        assert not F.unknown and F.real_roots == 2
        assert len(sympy.real_roots(x**4 - x**3 - 1)) == 2
        cert = F.galois_cert
        assert cert is not None and cert.verify(F.h)

        def degs_mod(p):
            return sorted(f.degree() for f, _ in sympy.Poly(x**4 - x**3 - 1, x, modulus=p).factor_list()[1])

        assert degs_mod(cert.p_irred) == [4] and degs_mod(cert.p_cycle) == [1, 3]
        degs = degs_mod(cert.p_transposition)
        assert degs.count(2) == 1 and all(d % 2 for d in degs if d != 2)
        assert elapsed < 1.0, elapsed
    capsys.readouterr()


@pytest.mark.parametrize("m", range(4, 13))
def test_criterion_2(m, tmp_path, capsys):
    with criterion(2, f"m = {m}: S_m witness with <= 3 finite primes plus inf"):
        start = time.monotonic()
        report = _run_cli(["realize-sm", "--m", str(m)], tmp_path, f"sm{m}.json")
        elapsed = time.monotonic() - start
        F = sf.SpecializedField.from_json(report["result"]["field"])
        assert F.infinity_ramified
        assert len(F.ram_set.finite()) <= 3 and F.total <= 4
        assert F.galois_cert.verify(F.h)
        assert elapsed < 60, elapsed
    capsys.readouterr()


@pytest.mark.parametrize("m,n", [(4, 2), (4, 3), (5, 2)])
def test_criterion_3(m, n, tmp_path, capsys):
    with criterion(3, f"(m, n) = ({m}, {n}): certified S_m^n tower, total <= n + 4"):
        start = time.monotonic()
        report = _run_cli(["realize-smn", "--m", str(m), "--n", str(n)], tmp_path, f"t{m}{n}.json")
        elapsed = time.monotonic() - start
        R = tower.TowerReport.from_json(report["result"]["tower"])
        assert R.certified is True and len(R.factors) == n
        assert R.total <= n + 4
        assert all(F.galois_cert.verify(F.h) for F in R.factors)
        assert elapsed < 300, elapsed
    capsys.readouterr()


def test_criterion_4():
    with criterion(4, "disc_formula vs subresultant and sympy, 200 cases"):
        rng = random.Random(4)
        x = sympy.Symbol("x")
        mismatches = 0
        done = 0
        while done < 200:
            m = rng.randint(4, 10)
            (P,) = _admissible_points(m, 1, 10**3, rng)
            h = sf.specialize(m, P)
            scaled = sf.disc_formula(m, P) * P.b ** (m * (m - 1))
            oracle = sf.disc_resultant(h)
            other = sympy.discriminant(sympy.Poly(list(reversed(h)), x))
            mismatches += not (scaled == oracle == other)
            done += 1
        assert mismatches == 0


def test_criterion_5():
    with criterion(5, "at most 3 real roots, m = 4..10, 500 points each"):
        rng = random.Random(5)
        violations = 0
        for m in range(4, 11):
            for P in _admissible_points(m, 500, 10**4, rng):
                h = sf.specialize(m, P)
                r = sf.sturm_real_roots(h)
                violations += r > 3 or not sf.infinite_ramified(h)
        assert violations == 0


def test_criterion_6():
    with criterion(6, "universal_ram_upper(m, 50) = {inf}, m = 4..10"):
        for m in range(4, 11):
            assert sf.universal_ram_upper(m, 50) == PrimeSet(frozenset(), True), m


def test_criterion_7():
    with criterion(7, "Ram minus T inside Prms_T(a b L), 100 points per m = 4..8"):
        rng = random.Random(7)
        violations = 0
        for m in range(4, 9):
            T = sf.contain_T(m)
            for P in _admissible_points(m, 100, 10**3, rng):
                h = sf.specialize(m, P)
                disc = sf.disc_factorization(m, P)
                D = P.a * P.b * (m**m * P.a + (m - 1) ** (m - 1) * P.b)
                for p in disc.primes():
                    bad = sf.ram_status(h, p, disc.value) is not sf.RamStatus.UNRAMIFIED
                    if bad and p not in T and D % p:
                        violations += 1
        assert violations == 0


def _max_normal_quotient_orders(G):
    return sorted(G.order // N.order for N in gr.maximal_normal_subgroups(G))


def test_criterion_8():
    with criterion(8, "E(p) catalog and closure"):
        for m in range(3, 7):
            assert gr.is_Ep(gr.symmetric_group(m), 2)
        for m in range(3, 9):
            v2 = (m & -m).bit_length() - 1
            assert gr.is_Ep(gr.dihedral_group(m), 2) == (v2 <= 1)
        assert gr.is_Ep(gr.load_group("A4"), 3)
        catalog = ["S3", "S4", "S5", "A4", "Z2", "Z3", "K4"] + [f"D{m}" for m in range(3, 9)]
        for p in (2, 3):
            members = [n for n in catalog if gr.is_Ep(gr.load_group(n), p)]
            for a, b in itertools.combinations_with_replacement(members, 2):
                assert gr.is_Ep(gr.direct_product(gr.load_group(a), gr.load_group(b)), p), (a, b)
            for name in members:
                G = gr.load_group(name)
                for N in gr.normal_subgroups(G):
                    if N.order < G.order:
                        assert gr.is_Ep(gr.quotient(G, N), p), (name, N.order)


def _sign(perm):
    return sum(len(c) - 1 for c in gr.cycles(perm)) % 2


def _oracle_lemma(G, gens):
    # sympy orders and sign characters; Phi_2(S_m) = A_m
    n = G.degree
    Hs = PermutationGroup([Permutation(list(g)) for g in gens])
    projs = [PermutationGroup([Permutation([x - i * n for x in g[i * n:(i + 1) * n]]) for g in gens]) for i in range(2)]
    onto = all(P.order() == G.order for P in projs)
    rows = {(_sign(g[:n]), _sign(tuple(x - n for x in g[n:]))) for g in gens}
    span = {(0, 0)}
    for r in rows:
        span |= {((s[0] + r[0]) % 2, (s[1] + r[1]) % 2) for s in span}
    hyp = onto and len(span) == 4
    return hyp, Hs.order() == G.order**2


@pytest.mark.parametrize("name", ["S3", "S4"])
def test_criterion_9(name):
    with criterion(9, f"product lemma on 1000 subgroups of {name} x {name}"):
        G = gr.load_group(name)
        Gs = (G, G)
        rng = random.Random(9)
        counterexamples = disagreements = satisfied = 0
        for _ in range(1000):
            gens = [gr.combine(Gs, [rng.choice(G.sorted_elements) for _ in Gs]) for _ in range(rng.randint(1, 3))]
            try:
                verdict = gr.product_lemma_check(Gs, gens, 2)
            except AssertionError:
                counterexamples += 1
                continue
            hyp, full = _oracle_lemma(G, gens)
            disagreements += hyp != (verdict == "Equal")
            if hyp:
                satisfied += 1
                counterexamples += not full
        assert counterexamples == 0 and disagreements == 0
        assert satisfied >= 50


def test_criterion_10():
    with criterion(10, "rational rigidity, product tuple, corollary sizes"):
        S3 = gr.load_group("S3")
        t = gr.find_tuple(S3, ["2", "2", "3"])
        assert gr.is_rationally_rigid(t)
        for m in (4, 5):
            u = gr.find_tuple(gr.symmetric_group(m), ["2", str(m - 1), str(m)])
            rep = gr.rigidity_report(u)
            assert rep["rationally_rigid"] and rep["semi_conjugate_count"] == math.factorial(m)
        T = gr.build_product_tuple(t, t, 2)
        assert len(T) == 4 == 1 + 1 + max(3 - 1, 3 - 1)
        assert gr.is_rationally_rigid(T) and T.group.order == 36
        d = gr.frattini_rank(S3, 2)
        assert d == 1
        for n in (1, 2, 3):
            U = gr.power_tuple(t, n, 2)
            assert len(U) == (n - 1) * d + 3
            assert gr.is_rationally_rigid(U)


def _obstructed(g):
    deg = intpoly.degree(g)
    return [p for p in sympy.primerange(2, deg + 1) if all(intpoly.evaluate(g, k) % p == 0 for k in range(p))]


def test_criterion_11():
    with criterion(11, "beta bounds, three-form gtz search, obstruction shift"):
        assert forms.beta_sieve_bound([1]) == 2
        assert forms.beta_sieve_bound([1, 1, 1]) == 10
        assert forms.beta_sieve_bound([2]) == 4
        S = PrimeSet.of(2, 3, infinity=True)
        Ls = forms.parse_forms("t; t - 2s; t - 6s")
        P = forms.gtz_search(Ls, S, NeighborhoodVN(6), SearchBudget(10**6))
        assert NeighborhoodVN(6).contains(P)
        for L in Ls:
            v = abs(L(P.a, P.b))
            core = v
            for q in (2, 3):
                while core % q == 0:
                    core //= q
            assert core == 1 or sympy.isprime(core)
        N, a, g = forms.obstruction_shift([2, 1, 1], PrimeSet.of(2))
        assert _obstructed([2, 1, 1]) == [2] and _obstructed(g) == []

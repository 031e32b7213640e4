"""Binary forms over Z, the projective line, and prime-value searches.

A :class:`BinaryForm` of degree ``d`` stores the coefficients of
``t**d, t**(d-1)*s, ..., s**d`` in that order. Points ``[a:b]`` of the
projective line are kept primitive with ``b > 0`` (or ``[1:0]``).

GL2(Z) acts on points by ``[[x1, x2], [y1, y2]] [a:b] = [x1 a + x2 b : y1 a + y2 b]``
and on forms by ``(g.F)(v) = F(g^-1 v)`` on column vectors ``v``. Hence
``act_form(g, F)(g v) == F(v)`` exactly on raw integer pairs; after
re-normalizing the image point the two sides agree up to ``(-1)**deg F``.

The searches walk the neighbourhood ``V_N`` of ``[1:0]``. They return
witnesses (upper bounds); they say nothing about the true minimum.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial, reduce
from typing import Iterator, Sequence

from . import intpoly
from ._parallel import ordered_map
from .arith import PrimeSet, crt, factorize, is_prime, primes_upto, strip_primes, v_p
from .ffpoly import is_irreducible_mod_p


class SearchExhausted(RuntimeError):
    """The candidate budget ran out before an admissible point was found."""


# --------------------------------------------------------------------------
# points and matrices

@dataclass(frozen=True, order=True)
class ProjPoint:
    """A point ``[a:b]`` of P^1(Q) with ``gcd(a, b) = 1`` and ``b > 0`` (or ``[1:0]``)."""

    a: int
    b: int

    def __post_init__(self):
        a, b = int(self.a), int(self.b)
        if a == 0 and b == 0:
            raise ValueError("[0:0] is not a point")
        g = math.gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __iter__(self):
        yield self.a
        yield self.b

    def __str__(self) -> str:
        return f"[{self.a}:{self.b}]"

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    @classmethod
    def from_json(cls, pair) -> "ProjPoint":
        return cls(int(pair[0]), int(pair[1]))

    def as_fraction(self) -> Fraction | None:
        """The affine coordinate ``a/b``, or None at ``[1:0]``."""
        return Fraction(self.a, self.b) if self.b else None


@dataclass(frozen=True)
class GL2Z:
    x1: int
    x2: int
    y1: int
    y2: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"determinant {self.det} is not a unit")

    @property
    def det(self) -> int:
        return self.x1 * self.y2 - self.x2 * self.y1

    def inverse(self) -> "GL2Z":
        d = self.det
        return GL2Z(d * self.y2, -d * self.x2, -d * self.y1, d * self.x1)

    def __matmul__(self, other: "GL2Z") -> "GL2Z":
        return GL2Z(
            self.x1 * other.x1 + self.x2 * other.y1,
            self.x1 * other.x2 + self.x2 * other.y2,
            self.y1 * other.x1 + self.y2 * other.y1,
            self.y1 * other.x2 + self.y2 * other.y2,
        )

    def apply(self, a: int, b: int) -> tuple[int, int]:
        return self.x1 * a + self.x2 * b, self.y1 * a + self.y2 * b


IDENTITY = GL2Z(1, 0, 0, 1)


def act(g: GL2Z, P: ProjPoint) -> ProjPoint:
    return ProjPoint(*g.apply(P.a, P.b))


# --------------------------------------------------------------------------
# binary forms

@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous ``sum c[i] * t**(d-i) * s**i`` with integer coefficients."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) < 2:
            raise ValueError("a binary form needs degree >= 1")
        if not any(coeffs):
            raise ValueError("the zero form has no degree")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def content(self) -> int:
        return reduce(math.gcd, (abs(c) for c in self.coeffs))

    @property
    def primitive(self) -> bool:
        return self.content == 1

    def __call__(self, a: int, b: int) -> int:
        d = self.degree
        return sum(c * a ** (d - i) * b**i for i, c in enumerate(self.coeffs))

    def dehomogenize(self) -> list[int]:
        """``F(x, 1)`` as a little-endian univariate list."""
        return intpoly.trim(reversed(self.coeffs))

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(out)

    def __str__(self) -> str:
        d = self.degree
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(
                x for x in (_power("t", d - i), _power("s", i)) if x
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, coeffs) -> "BinaryForm":
        return cls([int(c) for c in coeffs])


def _power(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


def eval_form(F: BinaryForm, P: ProjPoint) -> int:
    return F(P.a, P.b)


def act_form(g: GL2Z, F: BinaryForm) -> BinaryForm:
    """The form ``v -> F(g^-1 v)``."""
    h = g.inverse()
    # s-polynomials: index j holds the coefficient of t^(deg-j) s^j
    lin_t = [h.x1, h.x2]
    lin_s = [h.y1, h.y2]
    d = F.degree
    out = [0] * (d + 1)
    for i, c in enumerate(F.coeffs):
        if not c:
            continue
        term = [c]
        for _ in range(d - i):
            term = intpoly.mul(term, lin_t) or [0]
        for _ in range(i):
            term = intpoly.mul(term, lin_s) or [0]
        for j, x in enumerate(term):
            out[j] += x
    return BinaryForm(out)


# form parsing: expr := term (('+'|'-') term)* ; term := factor ('*'? factor)* ;
#               factor := atom ('^' INT)? ; atom := INT | 't' | 's' | '(' expr ')'
_TOKEN = re.compile(r"\s*(?:(\d+)|([ts])|(.))")


def _tokenize(text: str) -> list[str]:
    out = []
    for num, var, op in _TOKEN.findall(text):
        tok = num or var or op
        if tok.strip():
            out.append(tok)
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected!r} at token {self.i}, got {tok!r}")
        self.i += 1
        return tok

    # polynomials are dicts {(deg_t, deg_s): coeff}
    def expr(self):
        sign = -1 if self.peek() == "-" else 1
        if self.peek() in ("+", "-"):
            self.take()
        acc = _pscale(self.term(), sign)
        while self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
            acc = _padd(acc, _pscale(self.term(), sign))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() is not None and self.peek() not in ("+", "-", ")"):
            if self.peek() == "*":
                self.take()
            acc = _pmul(acc, self.factor())
        return acc

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            k = int(self.take())
            out = {(0, 0): 1}
            for _ in range(k):
                out = _pmul(out, base)
            return out
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return {(0, 0): int(tok)}
        if tok == "t":
            return {(1, 0): 1}
        if tok == "s":
            return {(0, 1): 1}
        if tok == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ValueError(f"unexpected token {tok!r}")


def _padd(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _pscale(p, c):
    return {k: c * v for k, v in p.items()}


def _pmul(p, q):
    out: dict = {}
    for (i1, j1), a in p.items():
        for (i2, j2), b in q.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + a * b
    return {k: v for k, v in out.items() if v}


def parse_form(text: str) -> BinaryForm:
    """Parse a homogeneous polynomial in ``t`` and ``s``, e.g. ``"t*s*(256t+27s)"``."""
    parser = _Parser(text)
    poly = parser.expr()
    if parser.peek() is not None:
        raise ValueError(f"trailing input in form {text!r}")
    degrees = {i + j for i, j in poly}
    if len(degrees) != 1:
        raise ValueError(f"form {text!r} is not homogeneous")
    d = degrees.pop()
    return BinaryForm([poly.get((d - j, j), 0) for j in range(d + 1)])


def parse_forms(text: str) -> list[BinaryForm]:
    return [parse_form(part) for part in text.split(";") if part.strip()]


# --------------------------------------------------------------------------
# irreducibility and local obstructions

class Irreducibility(enum.Enum):
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    UNDETERMINED = "undetermined"


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_irreducible(F: BinaryForm, *, prime_limit: int = 500) -> Irreducibility:
    """Irreducibility of a primitive form over Q.

    Exact up to degree 3. In higher degree a prime with an irreducible
    reduction proves irreducibility and a rational linear factor proves
    reducibility; otherwise the answer is UNDETERMINED.
    """
    if not F.primitive:
        raise ValueError("form must be primitive")
    d = F.degree
    if d == 1:
        return Irreducibility.IRREDUCIBLE
    # s | F or t | F
    if F.coeffs[0] == 0 or F.coeffs[-1] == 0:
        return Irreducibility.REDUCIBLE
    f = F.dehomogenize()
    if d == 2:
        c, b, a = f
        return Irreducibility.REDUCIBLE if _is_square(b * b - 4 * a * c) else Irreducibility.IRREDUCIBLE
    if intpoly.rational_roots(f):
        return Irreducibility.REDUCIBLE
    if d == 3:
        return Irreducibility.IRREDUCIBLE
    for p in primes_upto(prime_limit):
        if f[-1] % p and is_irreducible_mod_p(f, p):
            return Irreducibility.IRREDUCIBLE
    return Irreducibility.UNDETERMINED


def _p1_points(p: int) -> Iterator[tuple[int, int]]:
    yield 1, 0
    for x in range(p):
        yield x, 1


def local_obstruction_primes(F: BinaryForm) -> PrimeSet:
    """Primes ``p <= deg F`` at which ``F`` vanishes on all of P^1(F_p)."""
    if not F.primitive:
        raise ValueError("form must be primitive")
    bad = [p for p in primes_upto(F.degree) if all(F(a, b) % p == 0 for a, b in _p1_points(p))]
    return PrimeSet(frozenset(bad))


def _univariate_obstructions(f: Sequence[int]) -> list[int]:
    c = intpoly.content(f)
    out = set(factorize(c).primes()) if c > 1 else set()
    for p in primes_upto(max(len(f) - 1, 1)):
        if all(intpoly.evaluate(f, n) % p == 0 for n in range(p)):
            out.add(p)
    return sorted(out)


def _obstruction_depth(f: Sequence[int], p: int) -> tuple[int, int]:
    """Largest ``alpha`` with ``p**alpha | f(n)`` for all n, and an ``n`` attaining it."""
    k = 1
    while True:
        mod = p**k
        best, where = k, None
        for n in range(mod):
            val = intpoly.evaluate(f, n) % mod
            e = 0 if val % p else (v_p(val, p) if val else k)
            e = min(e, k)
            if e < best:
                best, where = e, n
                if e == 0:
                    break
        if where is not None:
            return best, where
        k += 1


def obstruction_shift(f: Sequence[int], S: PrimeSet = PrimeSet()) -> tuple[int, int, list[int]]:
    """Remove the local obstructions of ``f`` at the primes of ``S``.

    Returns ``(N, a, g)`` with ``g(y) = f(N*y + a) / N`` integral and free of
    local obstructions. ``f`` is little-endian.
    """
    f = intpoly.trim(f)
    if not f:
        raise ValueError("f must be nonzero")
    outside = [p for p in _univariate_obstructions(f) if p not in S.primes]
    if outside:
        raise ValueError(f"local obstruction at p={outside[0]} outside S")
    N = 1
    residues = []
    for p in sorted(S.primes):
        alpha, ap = _obstruction_depth(f, p)
        N *= p**alpha
        residues.append((ap % p ** (alpha + 1), p ** (alpha + 1)))
    a, _ = crt(residues) if residues else (0, 1)
    g = intpoly.exact_div_scalar(intpoly.compose_linear(f, N, a), N)
    return N, a, g


# --------------------------------------------------------------------------
# sieve-side bounds and searches

def beta_sieve_bound(d_vec: Sequence[int]) -> int:
    """Least integer exceeding ``d - 1 + r H_r + r log(2d/r + 1/(r+1))``."""
    if not d_vec:
        raise ValueError("need at least one degree")
    if any(x < 1 for x in d_vec):
        raise ValueError("degrees must be positive")
    r, d = len(d_vec), sum(d_vec)
    harmonic = sum(Fraction(1, j) for j in range(1, r + 1))
    exact_part = d - 1 + r * harmonic
    rhs = float(exact_part) + r * math.log(2 * d / r + 1 / (r + 1))
    return math.floor(rhs) + 1


@dataclass(frozen=True)
class NeighborhoodVN:
    """``V_N = {[a : bN] : |bN / a| <= 1/N}``, a neighbourhood of ``[1:0]``
    for the primes of ``N`` together with the infinite prime."""

    N: int = 1

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")

    def contains(self, P: ProjPoint) -> bool:
        return P.a != 0 and P.b % self.N == 0 and self.N * P.b <= abs(P.a)

    def adic_primes(self) -> PrimeSet:
        return PrimeSet(frozenset(factorize(self.N).primes()) if self.N > 1 else frozenset(), True)

    def candidates(self) -> Iterator[ProjPoint]:
        """Points of the open cone ``0 < bN``, ``N * bN < a`` inside ``V_N``.

        Ordered by height ``max(|a|, |bN|) = a``, then by ``b``.
        """
        N = self.N
        a = 1
        while True:
            b = 1
            while b * N * N < a:
                if math.gcd(a, b * N) == 1:
                    yield ProjPoint(a, b * N)
                b += 1
            a += 1


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int = 10**6


def _check_search_forms(forms: Sequence[BinaryForm]) -> None:
    for F in forms:
        if is_irreducible(F) is Irreducibility.REDUCIBLE:
            raise ValueError(f"form {F} is reducible")
    for i, F in enumerate(forms):
        for G in forms[i + 1 :]:
            if F.degree == G.degree and (F.coeffs == G.coeffs or F.coeffs == tuple(-c for c in G.coeffs)):
                raise ValueError(f"forms {F} and {G} are associate")


def _count_outside(forms: tuple[BinaryForm, ...], S: PrimeSet, P: ProjPoint):
    primes: set[int] = set()
    for F in forms:
        val = F(P.a, P.b)
        if val == 0:
            return None
        primes.update(p for p in factorize(val).primes() if p not in S.primes)
    return len(primes)


def empirical_B(
    forms: Sequence[BinaryForm],
    S: PrimeSet,
    V: NeighborhoodVN = NeighborhoodVN(1),
    budget: SearchBudget = SearchBudget(),
    jobs: int | None = None,
) -> tuple[ProjPoint, int]:
    """Point of ``V`` minimizing ``#Prms_S(prod F_i(a, b))`` over the budget.

    This is an upper witness for ``B(F_1, ..., F_r)``, not its value.
    """
    if not S.infinity:
        raise ValueError("S must contain the infinite prime")
    forms = tuple(forms)
    _check_search_forms(forms)
    best: tuple[ProjPoint, int] | None = None
    cands = (P for _, P in zip(range(budget.max_candidates), V.candidates()))
    for P, count in ordered_map(partial(_count_outside, forms, S), cands, jobs):
        if count is None:
            continue
        if best is None or count < best[1]:
            best = (P, count)
            if count == 0:
                break
    if best is None:
        raise SearchExhausted(f"no admissible point among {budget.max_candidates} candidates")
    return best


def _prime_or_unit(value: int, S: PrimeSet) -> bool:
    if value == 0:
        return False
    rest = abs(strip_primes(value, S.primes))
    return rest == 1 or is_prime(rest)


def _gtz_check(forms: tuple[BinaryForm, ...], S: PrimeSet, P: ProjPoint) -> bool:
    return all(_prime_or_unit(L(P.a, P.b), S) for L in forms)


def gtz_search(
    lin_forms: Sequence[BinaryForm],
    S: PrimeSet,
    V: NeighborhoodVN = NeighborhoodVN(1),
    budget: SearchBudget = SearchBudget(),
    jobs: int | None = None,
) -> ProjPoint:
    """First point of ``V`` where every linear form is a prime or a unit of Z[1/S]."""
    forms = tuple(lin_forms)
    r = len(forms)
    if not S.infinity or any(p not in S.primes for p in primes_upto(r)):
        raise ValueError("S must contain infinity and every prime p <= r")
    for L in forms:
        if L.degree != 1 or not L.primitive:
            raise ValueError(f"{L} is not a primitive linear form")
    for i, L in enumerate(forms):
        for M in forms[i + 1 :]:
            if L.coeffs[0] * M.coeffs[1] == L.coeffs[1] * M.coeffs[0]:
                raise ValueError(f"forms {L} and {M} are proportional")
    cands = (P for _, P in zip(range(budget.max_candidates), V.candidates()))
    for P, ok in ordered_map(partial(_gtz_check, forms, S), cands, jobs):
        if ok:
            verify_gtz_witness(forms, S, P)
            return P
    raise SearchExhausted(f"no prime-or-unit point among {budget.max_candidates} candidates")


def verify_gtz_witness(forms: Sequence[BinaryForm], S: PrimeSet, P: ProjPoint) -> list[int]:
    """Re-check a witness by full factorization; returns the values."""
    values = []
    for L in forms:
        val = L(P.a, P.b)
        if val == 0:
            raise AssertionError(f"{L} vanishes at {P}")
        outside = [p for p in factorize(val).primes() if p not in S.primes]
        if len(outside) > 1 or any(factorize(val).exponent(p) > 1 for p in outside):
            raise AssertionError(f"value {val} of {L} at {P} is neither prime nor unit")
        values.append(val)
    return values

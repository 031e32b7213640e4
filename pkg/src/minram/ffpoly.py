"""Polynomials over prime fields and their complete factorization.

Coefficient lists are little-endian: ``c[i]`` is the coefficient of ``x**i``.
The zero polynomial is ``[]``. All helpers take and return plain lists of
residues in ``range(p)``; :class:`PolyModP` is the checked public wrapper.

Factorization is the usual pipeline: squarefree decomposition (with p-th
roots for the inseparable part), distinct-degree splitting, then
Cantor-Zassenhaus equal-degree splitting. The random choices of the last step
come from a generator seeded by ``(p, coefficients)``, so a given input always
yields the same output.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Sequence

Poly = list[int]


# --------------------------------------------------------------------------
# raw list arithmetic

def trim(f: Sequence[int], p: int) -> Poly:
    out = [c % p for c in f]
    while out and out[-1] == 0:
        out.pop()
    return out


def deg(f: Poly) -> int:
    return len(f) - 1


def add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def sub(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], p)


def mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out, p)


def scale(f: Poly, c: int, p: int) -> Poly:
    return trim([a * c for a in f], p)


def divmod_(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    if len(r) <= dg:
        return [], r
    q = [0] * (len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] * inv % p
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % p
    return trim(q, p), trim(r[:dg], p)


def rem(f: Poly, g: Poly, p: int) -> Poly:
    return divmod_(f, g, p)[1]


def quo(f: Poly, g: Poly, p: int) -> Poly:
    return divmod_(f, g, p)[0]


def monic(f: Poly, p: int) -> Poly:
    if not f:
        return []
    return scale(f, pow(f[-1], -1, p), p)


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, rem(f, g, p)
    return monic(f, p)


def derivative(f: Poly, p: int) -> Poly:
    return trim([i * f[i] for i in range(1, len(f))], p)


def powmod(base: Poly, e: int, mod: Poly, p: int) -> Poly:
    result: Poly = [1]
    base = rem(base, mod, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), mod, p)
    return result


def evaluate(f: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _pth_root(f: Poly, p: int) -> Poly:
    # over F_p the Frobenius fixes coefficients, so only exponents shrink
    return [f[i] for i in range(0, len(f), p)]


# --------------------------------------------------------------------------
# factorization stages

def squarefree_decomposition(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """Monic ``f`` as ``prod g_i**e_i`` with ``g_i`` squarefree and coprime."""
    out: list[tuple[Poly, int]] = []
    c = gcd(f, derivative(f, p), p)
    w = quo(f, c, p)
    i = 1
    while deg(w) > 0:
        y = gcd(w, c, p)
        fac = quo(w, y, p)
        if deg(fac) > 0:
            out.append((fac, i))
        w = y
        c = quo(c, y, p)
        i += 1
    if deg(c) > 0:
        for g, e in squarefree_decomposition(_pth_root(c, p), p):
            out.append((g, e * p))
    return out


def distinct_degree(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """Split squarefree monic ``f`` into products of equal-degree irreducibles."""
    out = []
    x = [0, 1]
    h = x
    rest = f
    i = 1
    while deg(rest) >= 2 * i:
        h = powmod(h, p, rest, p)
        g = gcd(rest, sub(h, x, p), p)
        if deg(g) > 0:
            out.append((g, i))
            rest = quo(rest, g, p)
            h = rem(h, rest, p)
        i += 1
    if deg(rest) > 0:
        out.append((rest, deg(rest)))
    return out


def equal_degree(f: Poly, d: int, p: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus: irreducible degree-``d`` factors of ``f``."""
    n = deg(f)
    if n == d:
        return [f]
    while True:
        a = trim([rng.randrange(p) for _ in range(n)], p)
        if deg(a) < 1:
            continue
        g = gcd(a, f, p)
        if 0 < deg(g) < n:
            break
        if p == 2:
            t, b = a, a
            for _ in range(d - 1):
                t = rem(mul(t, t, p), f, p)
                b = add(b, t, p)
        else:
            b = sub(powmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = gcd(b, f, p)
        if 0 < deg(g) < n:
            break
    return equal_degree(g, d, p, rng) + equal_degree(quo(f, g, p), d, p, rng)


def _seed(p: int, f: Poly) -> int:
    digest = hashlib.sha256(repr((p, tuple(f))).encode()).digest()
    return int.from_bytes(digest[:8], "big")


# --------------------------------------------------------------------------
# public surface

@dataclass(frozen=True)
class PolyModP:
    """A polynomial over F_p with normalized little-endian coefficients."""

    p: int
    coeffs: tuple[int, ...]

    def __init__(self, p: int, coeffs: Sequence[int]):
        if p < 2:
            raise ValueError("p must be prime")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(trim(coeffs, p)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __mul__(self, other: "PolyModP") -> "PolyModP":
        return PolyModP(self.p, mul(list(self.coeffs), list(other.coeffs), self.p))

    def __pow__(self, k: int) -> "PolyModP":
        out = PolyModP(self.p, [1])
        for _ in range(k):
            out = out * self
        return out

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"{c}{'*' if mono else ''}{mono}" if c != 1 or not mono else mono)
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class FactorizationModP:
    unit: int
    factors: tuple[tuple[PolyModP, int], ...]

    def recompose(self, p: int) -> PolyModP:
        out = PolyModP(p, [self.unit])
        for g, e in self.factors:
            out = out * g**e
        return out

    def degrees(self) -> list[int]:
        return sorted(g.degree for g, e in self.factors for _ in range(e))


def factor_mod_p(f: PolyModP) -> FactorizationModP:
    """Complete factorization into monic irreducibles with multiplicities."""
    p = f.p
    raw = list(f.coeffs)
    if not raw:
        raise ValueError("cannot factor the zero polynomial")
    unit = raw[-1]
    rng = random.Random(_seed(p, raw))
    pieces: list[tuple[Poly, int]] = []
    for sqf, e in squarefree_decomposition(monic(raw, p), p):
        for g, d in distinct_degree(sqf, p):
            for h in equal_degree(g, d, p, rng):
                pieces.append((h, e))
    pieces.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return FactorizationModP(unit, tuple((PolyModP(p, g), e) for g, e in pieces))


def is_squarefree(f: Poly, p: int) -> bool:
    return deg(gcd(f, derivative(f, p), p)) == 0


def factor_type(f: PolyModP) -> tuple[int, ...]:
    """Sorted degrees of the irreducible factors of a squarefree polynomial.

    Only distinct-degree splitting is needed: a block of total degree ``k*d``
    found at stage ``d`` holds exactly ``k`` factors.
    """
    p = f.p
    raw = monic(list(f.coeffs), p)
    if not raw:
        raise ValueError("zero polynomial")
    if not is_squarefree(raw, p):
        raise ValueError(f"polynomial is not squarefree mod {p}")
    degs: list[int] = []
    for g, d in distinct_degree(raw, p):
        degs.extend([d] * (deg(g) // d))
    return tuple(sorted(degs))


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    raw = monic(trim(f, p), p)
    if deg(raw) < 1:
        return False
    if not is_squarefree(raw, p):
        return False
    return factor_type(PolyModP(p, raw)) == (deg(raw),)

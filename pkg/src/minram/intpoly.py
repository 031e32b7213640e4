"""Univariate polynomials over Z as little-endian coefficient lists.

``f[i]`` is the coefficient of ``x**i``; ``[]`` is zero. Everything here is
exact integer arithmetic.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Sequence

Poly = list[int]


def trim(f: Sequence[int]) -> Poly:
    out = [int(c) for c in f]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(f: Sequence[int]) -> int:
    return len(trim(f)) - 1


def lc(f: Sequence[int]) -> int:
    return f[-1] if f else 0


def add(f: Sequence[int], g: Sequence[int]) -> Poly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def neg(f: Sequence[int]) -> Poly:
    return [-c for c in f]


def mul(f: Sequence[int], g: Sequence[int]) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def derivative(f: Sequence[int]) -> Poly:
    return trim([i * f[i] for i in range(1, len(f))])


def evaluate(f: Sequence[int], x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def content(f: Sequence[int]) -> int:
    return reduce(math.gcd, (abs(c) for c in f), 0)


def primitive_part(f: Sequence[int]) -> Poly:
    c = content(f)
    if c == 0:
        return []
    s = 1 if f[-1] > 0 else -1
    return [s * (a // c) for a in f]


def compose_linear(f: Sequence[int], scale: int, shift: int) -> Poly:
    """Coefficients of ``f(scale*y + shift)`` via Horner in the ring Z[y]."""
    out: Poly = []
    lin = trim([shift, scale])
    for c in reversed(f):
        out = add(mul(out, lin), [c])
    return out


def exact_div_scalar(f: Sequence[int], c: int) -> Poly:
    out = []
    for a in f:
        q, r = divmod(a, c)
        if r:
            raise ValueError(f"{c} does not divide every coefficient")
        out.append(q)
    return trim(out)


def prem(a: Sequence[int], b: Sequence[int]) -> Poly:
    """Pseudo-remainder: ``lc(b)**(deg a - deg b + 1) * a mod b``."""
    r = trim(a)
    b = trim(b)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    delta = len(r) - 1 - db
    if delta < 0:
        return r
    lb = b[-1]
    e = delta + 1
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = r[-1]
        r = [lb * x for x in r]
        for j in range(db + 1):
            r[shift + j] -= c * b[j]
        r = trim(r)
        e -= 1
    return [x * lb**e for x in r]


def resultant(a: Sequence[int], b: Sequence[int]) -> int:
    """Resultant by the subresultant pseudo-remainder sequence."""
    A, B = trim(a), trim(b)
    if not A or not B:
        return 0
    ca, cb = content(A), content(B)
    A = [x // ca for x in A]
    B = [x // cb for x in B]
    dA, dB = len(A) - 1, len(B) - 1
    t = ca**dB * cb**dA
    s = 1
    if dA < dB:
        A, B = B, A
        dA, dB = dB, dA
        if dA % 2 and dB % 2:
            s = -1
    g, h = 1, 1
    while dB > 0:
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = prem(A, B)
        A = B
        divisor = g * h**delta
        B = [x // divisor for x in R]
        dA, dB = len(A) - 1, len(B) - 1
        g = A[-1]
        h = g**delta // h ** (delta - 1) if delta else h
        if not B:
            return 0
    if dA == 0:
        return s * t
    h = B[-1] ** dA // h ** (dA - 1)
    return s * t * h


def discriminant(f: Sequence[int]) -> int:
    """``(-1)**(n(n-1)/2) * Res(f, f') / lc(f)``."""
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    r = resultant(f, derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rr = divmod(sign * r, f[-1])
    assert rr == 0
    return q


def exact_quotient(a: Sequence[int], b: Sequence[int]) -> Poly:
    """``a / b`` scaled to a primitive integer polynomial, when ``b`` divides ``a`` over Q."""
    from fractions import Fraction

    r = [Fraction(c) for c in trim(a)]
    b = trim(b)
    db = len(b) - 1
    q = [Fraction(0)] * max(len(r) - db, 1)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] / b[-1]
        q[i - db] = c
        for j in range(db + 1):
            r[i - db + j] -= c * b[j]
    if any(r):
        raise ValueError("division is not exact")
    den = math.lcm(*(c.denominator for c in q))
    out = trim([int(c * den) for c in q])
    g = content(out)
    return [c // g for c in out]


def squarefree_part(f: Sequence[int]) -> Poly:
    """``f / gcd(f, f')``, with the same roots but all of multiplicity one."""
    f = trim(f)
    if len(f) <= 2:
        return f
    g = sturm_sequence(f)[-1]
    if len(g) == 1:
        return f
    return exact_quotient(f, g)


# --------------------------------------------------------------------------
# real roots

def sturm_sequence(f: Sequence[int]) -> list[Poly]:
    """Sturm chain with every term rescaled by a positive rational."""
    f = trim(f)
    d = derivative(f)
    seq = [s for s in ([x // content(f) for x in f], [x // content(d) for x in d] if d else []) if s]
    while len(seq) >= 2 and len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        delta = len(a) - len(b)
        r = prem(a, b)
        if not r:
            break
        # prem multiplies by lc(b)**(delta+1); undo its sign, then negate
        mult_sign = 1 if (b[-1] > 0 or (delta + 1) % 2 == 0) else -1
        r = [-mult_sign * x for x in r]
        c = content(r)
        seq.append([x // c for x in r])
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _variations_at(seq: list[Poly], x) -> int:
    return _variations(_sign(evaluate(p, x)) for p in seq)


def _variations_at_infinity(seq: list[Poly], positive: bool) -> int:
    signs = []
    for p in seq:
        s = _sign(p[-1])
        if not positive and (len(p) - 1) % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def sturm_real_roots(f: Sequence[int]) -> int:
    """Number of distinct real roots of a nonzero polynomial."""
    seq = sturm_sequence(f)
    return _variations_at_infinity(seq, False) - _variations_at_infinity(seq, True)


def count_roots_in(seq: list[Poly], lo, hi) -> int:
    """Distinct real roots in the half-open interval ``(lo, hi]``."""
    return _variations_at(seq, lo) - _variations_at(seq, hi)


def root_bound(f: Sequence[int]) -> int:
    """Cauchy bound: every complex root has absolute value below it."""
    f = trim(f)
    return 1 + max((abs(c) for c in f[:-1]), default=0) // abs(f[-1]) + 1


def integer_roots(f: Sequence[int]) -> list[int]:
    """All integer roots, found by Sturm bisection on integer endpoints."""
    f = trim(f)
    if len(f) < 2:
        return []
    roots: list[int] = []
    g = f
    while g and g[0] == 0:
        roots.append(0)
        g = g[1:]
    if len(g) < 2:
        return sorted(set(roots))
    g = squarefree_part(g)
    seq = sturm_sequence(g)
    B = root_bound(g)
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        k = count_roots_in(seq, lo, hi)
        if k == 0:
            continue
        if hi - lo == 1:
            if evaluate(g, hi) == 0:
                roots.append(hi)
            continue
        mid = (lo + hi) // 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(set(roots))


def rational_roots(f: Sequence[int]) -> list:
    """Rational roots of an integer polynomial, as Fractions."""
    from fractions import Fraction

    f = trim(f)
    out = []
    if f and f[0] == 0:
        out.append(Fraction(0))
        while f and f[0] == 0:
            f = f[1:]
    n = len(f) - 1
    if n < 1:
        return out
    c = f[-1]
    # monic transform g(y) = c**(n-1) f(y/c)
    g = [f[i] * c ** (n - 1 - i) for i in range(n)] + [1]
    out.extend(Fraction(r, c) for r in integer_roots(g))
    return sorted(set(out))

"""Exact integer arithmetic: primality, factorization, valuations, prime sets.

Primality below 2**64 is decided by deterministic Miller-Rabin witnesses and
flagged ``certified``. Above that a Baillie-PSW test (strong base-2 plus strong
Lucas) runs and the factor is flagged as probable.

Factorization trial-divides by every prime below 10**6 and then runs Brent's
variant of Pollard rho under a wall-clock budget. An unsplit composite raises
:class:`FactorizationError`; it is never reported as a factor.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Mapping

TRIAL_BOUND = 10**6
DEFAULT_RHO_BUDGET = 30.0  # seconds per factorize call
CACHE_ENV = "MINRAM_CACHE_DIR"

_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FactorizationError(ArithmeticError):
    """Raised when a composite cofactor could not be split within budget."""

    def __init__(self, n: int, cofactor: int):
        super().__init__(f"could not split composite cofactor {cofactor} of {n} within budget")
        self.n = n
        self.cofactor = cofactor


# --------------------------------------------------------------------------
# sieving

@lru_cache(maxsize=None)
def _sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_upto(limit: int) -> list[int]:
    """All primes ``p <= limit``."""
    if limit < 2:
        return []
    if limit <= TRIAL_BOUND:
        base = _sieve(TRIAL_BOUND)
        import bisect

        return list(base[: bisect.bisect_right(base, limit)])
    return list(_sieve(limit))


def iter_primes(start: int = 2) -> Iterator[int]:
    """Primes ``>= start`` in increasing order, without bound."""
    n = max(start, 2)
    if n == 2:
        yield 2
        n = 3
    if n % 2 == 0:
        n += 1
    while True:
        if is_prime(n):
            yield n
        n += 2


@lru_cache(maxsize=None)
def _trial_blocks() -> tuple[tuple[int, tuple[int, ...]], ...]:
    # primorial blocks let a single gcd rule out a thousand primes at once
    ps = _sieve(TRIAL_BOUND)
    blocks = []
    for i in range(0, len(ps), 512):
        chunk = ps[i : i + 512]
        blocks.append((math.prod(chunk), chunk))
    return tuple(blocks)


# --------------------------------------------------------------------------
# primality

def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    if math.isqrt(n) ** 2 == n:
        return False
    # Selfridge's method A
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def half(v: int) -> int:
        return (v + n) // 2 % n if v % 2 else v // 2 % n

    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = half(P * U + V), half(D * U + P * V)
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def prime_test(n: int) -> tuple[bool, bool]:
    """Return ``(is_prime, certified)``.

    ``certified`` is True when the answer is a proof (deterministic witnesses
    below 2**64, or any composite verdict) and False for a BPSW probable prime.
    """
    if n < 2:
        return False, True
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p, True
    if n < 41 * 41:
        return True, True
    if n < 1 << 64:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES_64), True
    if not _strong_probable_prime(n, 2):
        return False, True
    if not _strong_lucas_probable_prime(n):
        return False, True
    return True, False


def is_prime(n: int) -> bool:
    return prime_test(n)[0]


# --------------------------------------------------------------------------
# prime sets

@dataclass(frozen=True)
class PrimeSet:
    """A finite set of rational primes, optionally including the infinite one."""

    primes: frozenset[int] = frozenset()
    infinity: bool = False

    def __post_init__(self):
        object.__setattr__(self, "primes", frozenset(int(p) for p in self.primes))
        for p in self.primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")

    @classmethod
    def of(cls, *primes: int, infinity: bool = False) -> "PrimeSet":
        return cls(frozenset(primes), infinity)

    @classmethod
    def parse(cls, text: str, *, infinity: bool = True) -> "PrimeSet":
        """Parse ``"2,3,inf"``; the infinite prime is added unless disabled."""
        primes = set()
        for tok in text.replace(" ", "").split(","):
            if not tok:
                continue
            if tok.lower() in ("inf", "oo", "infinity"):
                infinity = True
            else:
                primes.add(int(tok))
        return cls(frozenset(primes), infinity)

    def __contains__(self, p) -> bool:
        if p == "inf" or p == math.inf:
            return self.infinity
        return p in self.primes

    def __len__(self) -> int:
        return len(self.primes) + int(self.infinity)

    def __iter__(self):
        yield from sorted(self.primes)
        if self.infinity:
            yield "inf"

    def __or__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(self.primes | other.primes, self.infinity or other.infinity)

    def __and__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(self.primes & other.primes, self.infinity and other.infinity)

    def __sub__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(self.primes - other.primes, self.infinity and not other.infinity)

    def finite(self) -> list[int]:
        return sorted(self.primes)

    def to_json(self) -> list[str]:
        return [str(p) for p in self]

    @classmethod
    def from_json(cls, items: Iterable[str]) -> "PrimeSet":
        return cls.parse(",".join(items), infinity=False)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(p) for p in self) + "}"


# --------------------------------------------------------------------------
# factorization

@dataclass(frozen=True)
class Factorization:
    """``value = sign * prod(p**e)`` with every ``p`` passing :func:`is_prime`."""

    value: int
    sign: int
    factors: Mapping[int, int] = field(default_factory=dict)
    certified: Mapping[int, bool] = field(default_factory=dict)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if any(e < 1 for e in self.factors.values()):
            raise ValueError("exponents must be positive")
        if self.recompose() != self.value:
            raise ValueError("factors do not recompose to value")

    def recompose(self) -> int:
        return self.sign * math.prod(p**e for p, e in self.factors.items())

    def primes(self) -> list[int]:
        return sorted(self.factors)

    def exponent(self, p: int) -> int:
        return self.factors.get(p, 0)

    def squarefree_class(self) -> tuple[int, tuple[int, ...]]:
        """Sign and odd-exponent primes: the image in Q^x/(Q^x)^2."""
        return self.sign, tuple(p for p in self.primes() if self.factors[p] % 2)

    def __mul__(self, other: "Factorization") -> "Factorization":
        f = dict(self.factors)
        c = dict(self.certified)
        for p, e in other.factors.items():
            f[p] = f.get(p, 0) + e
            c[p] = other.certified.get(p, False) or c.get(p, False)
        return Factorization(self.value * other.value, self.sign * other.sign, f, c)

    def __pow__(self, k: int) -> "Factorization":
        if k < 0:
            raise ValueError("negative power")
        if k == 0:
            return Factorization(1, 1, {}, {})
        return Factorization(
            self.value**k,
            self.sign**k,
            {p: e * k for p, e in self.factors.items()},
            dict(self.certified),
        )

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "sign": self.sign,
            "factors": [[str(p), e, bool(self.certified.get(p, False))] for p, e in sorted(self.factors.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Factorization":
        factors = {int(p): int(e) for p, e, _ in data["factors"]}
        cert = {int(p): bool(c) for p, _, c in data["factors"]}
        return cls(int(data["value"]), int(data["sign"]), factors, cert)

    def __str__(self) -> str:
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(self.factors.items()))
        return ("-" if self.sign < 0 else "") + (body or "1")


def _brent_rho(n: int, deadline: float, rng: random.Random) -> int | None:
    """A nontrivial factor of composite odd ``n``, or None past the deadline."""
    while time.monotonic() < deadline:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            if time.monotonic() > deadline:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def _split_large(n: int, deadline: float, origin: int) -> dict[int, int]:
    if is_prime(n):
        return {n: 1}
    r = math.isqrt(n)
    if r * r == n:
        sub = _split_large(r, deadline, origin)
        return {p: 2 * e for p, e in sub.items()}
    rng = random.Random(n)  # deterministic per cofactor
    d = _brent_rho(n, deadline, rng)
    if d is None:
        raise FactorizationError(origin, n)
    out: dict[int, int] = {}
    for part in (d, n // d):
        for p, e in _split_large(part, deadline, origin).items():
            out[p] = out.get(p, 0) + e
    return out


def _cache_path(n: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = hashlib.sha256(str(n).encode()).hexdigest()
    return Path(root) / key[:2] / f"{key}.json"


def _cache_load(n: int) -> dict[int, int] | None:
    path = _cache_path(n)
    if path is None or not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        factors = {int(p): int(e) for p, e in data["factors"]}
    except (OSError, ValueError, KeyError, TypeError):
        return None
    # a cached entry is trusted only if it re-verifies
    if int(data.get("n", -1)) != n or math.prod(p**e for p, e in factors.items()) != n:
        return None
    if not all(is_prime(p) for p in factors):
        return None
    return factors


def _cache_store(n: int, factors: dict[int, int]) -> None:
    path = _cache_path(n)
    if path is None:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"n": str(n), "factors": [[str(p), e] for p, e in sorted(factors.items())]}))
        tmp.replace(path)
    except OSError:
        pass


@lru_cache(maxsize=1 << 16)
def _factor_abs(n: int, budget: float) -> tuple[tuple[int, int], ...]:
    factors: dict[int, int] = {}
    m = n
    for p in (2, 3, 5, 7, 11, 13):
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
    if m > 1 and m >= TRIAL_BOUND**2 and is_prime(m):
        pass
    elif m > 1:
        for block, chunk in _trial_blocks():
            if m == 1 or chunk[0] * chunk[0] > m:
                break
            if math.gcd(m, block) == 1:
                continue
            for p in chunk:
                while m % p == 0:
                    factors[p] = factors.get(p, 0) + 1
                    m //= p
    if m > 1:
        if m < TRIAL_BOUND**2:
            factors[m] = factors.get(m, 0) + 1
        else:
            cached = _cache_load(m)
            if cached is None:
                cached = _split_large(m, time.monotonic() + budget, n)
                _cache_store(m, cached)
            for p, e in cached.items():
                factors[p] = factors.get(p, 0) + e
    return tuple(sorted(factors.items()))


def factorize(n: int, *, budget: float = DEFAULT_RHO_BUDGET) -> Factorization:
    """Complete factorization of a nonzero integer.

    >>> str(factorize(3381))
    '3 * 7^2 * 23'
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    items = _factor_abs(abs(n), float(budget))
    factors = dict(items)
    certified = {p: prime_test(p)[1] for p in factors}
    return Factorization(n, 1 if n > 0 else -1, factors, certified)


def factorize_product(parts: Iterable[int], **kw) -> Factorization:
    """Factor a product by factoring each part; cheaper than factoring the product."""
    out = Factorization(1, 1, {}, {})
    for part in parts:
        out = out * factorize(part, **kw)
    return out


def v_p(n: int, p: int) -> int:
    """The p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("v_p(0) is infinite")
    if p < 2:
        raise ValueError("p must be prime")
    e = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        e += 1
    return e


def prime_divisors(n: int) -> list[int]:
    return factorize(n).primes()


def prms_S(n: int, S: PrimeSet = PrimeSet()) -> PrimeSet:
    """Finite primes dividing ``n`` that are not in ``S``."""
    return PrimeSet(frozenset(p for p in prime_divisors(n) if p not in S.primes))


def strip_primes(n: int, primes: Iterable[int]) -> int:
    """Remove every factor of the given primes from ``n`` (sign kept)."""
    for p in primes:
        if n == 0:
            break
        while n % p == 0:
            n //= p
    return n


def crt(residues: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Solve ``x = r_i mod m_i`` for pairwise coprime moduli; returns ``(x, M)``."""
    x, M = 0, 1
    for r, m in residues:
        g = math.gcd(M, m)
        if g != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = (r - x) * pow(M, -1, m) % m
        x += M * t
        M *= m
    return x % M, M

"""Specializations of the trinomial cover ``X^m - X^(m-1) = Y``.

At a point ``[a:b]`` with ``b >= 1`` the fibre is the field cut out by
``x^m - x^(m-1) - a/b``. Setting ``z = b*x`` gives the monic integral model

    h(z) = z^m - b z^(m-1) - a b^(m-1),

whose discriminant factors as

    disc(h) = s_m * a^(m-2) * b^((m-1)^2) * (m^m a + (m-1)^(m-1) b),
    s_m = (-1)^(m(m-1)/2 + m - 1).

Over Q(y) the discriminant is ``s_m y^(m-2) ((m-1)^(m-1) + m^m y)``, so
the finite branch points are ``y = 0`` and ``y = -(m-1)^(m-1)/m^m``.

Ramification at a finite prime is three-valued. A prime not dividing
``disc(h)`` is unramified; a prime with ``v_p(disc h) = 1`` or at which
Dedekind's criterion shows ``Z[z]`` to be p-maximal is ramified; anything
else is reported as unknown and counted as ramified by callers.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Iterator, Sequence

from . import ffpoly, intpoly
from ._parallel import ordered_map
from .arith import (
    DEFAULT_RHO_BUDGET,
    Factorization,
    PrimeSet,
    factorize,
    iter_primes,
    v_p,
)
from .forms import BinaryForm, ProjPoint, SearchExhausted

DEFAULT_PRIME_BUDGET = 10**4


class BranchPointError(ValueError):
    """The parameter lies on the branch locus of the cover."""


class ReducibleError(ValueError):
    """The specialized polynomial is reducible over Q."""


def disc_sign(m: int) -> int:
    return -1 if (m * (m - 1) // 2 + m - 1) % 2 else 1


@dataclass(frozen=True)
class TrinomialCover:
    m: int

    def __post_init__(self):
        if self.m < 4:
            raise ValueError("the trinomial family needs m >= 4")

    @property
    def branch_form(self) -> BinaryForm:
        m = self.m
        return BinaryForm([0, m**m, (m - 1) ** (m - 1), 0])

    @property
    def universal_ram(self) -> PrimeSet:
        return PrimeSet(infinity=True)

    def branch_points(self) -> list[ProjPoint]:
        m = self.m
        return [ProjPoint(0, 1), ProjPoint(1, 0), ProjPoint(-((m - 1) ** (m - 1)), m**m)]

    def linear_term(self, a: int, b: int) -> int:
        m = self.m
        return m**m * a + (m - 1) ** (m - 1) * b


def _check_admissible(m: int, P: ProjPoint) -> None:
    if P.a == 0:
        raise BranchPointError(f"{P} is the branch point y=0")
    if P.b == 0:
        raise BranchPointError(f"{P} is the branch point y=infinity")
    if TrinomialCover(m).linear_term(P.a, P.b) == 0:
        raise BranchPointError(f"{P} is the branch point y=-{m - 1}^{m - 1}/{m}^{m}")


def is_admissible(m: int, P: ProjPoint) -> bool:
    try:
        _check_admissible(m, P)
    except BranchPointError:
        return False
    return True


def specialize(m: int, P: ProjPoint) -> list[int]:
    """Little-endian coefficients of ``z^m - b z^(m-1) - a b^(m-1)``."""
    TrinomialCover(m)
    _check_admissible(m, P)
    a, b = P.a, P.b
    h = [0] * (m + 1)
    h[0] = -a * b ** (m - 1)
    h[m - 1] = -b
    h[m] = 1
    return h


def disc_formula(m: int, P: ProjPoint) -> Fraction:
    """``s_m y^(m-2) ((m-1)^(m-1) + m^m y)`` at ``y = a/b``."""
    if P.b == 0:
        raise ValueError("the formula is affine; [1:0] has no finite value")
    y = Fraction(P.a, P.b)
    return disc_sign(m) * y ** (m - 2) * ((m - 1) ** (m - 1) + m**m * y)


def disc_resultant(h: Sequence[int]) -> int:
    if intpoly.degree(h) < 2:
        raise ValueError("need degree >= 2")
    return intpoly.discriminant(h)


# --------------------------------------------------------------------------
# local ramification

class RamStatus(enum.Enum):
    RAMIFIED = "ramified"
    UNRAMIFIED = "unramified"
    UNKNOWN = "unknown"


def dedekind_p_maximal(h: Sequence[int], p: int, disc: int | None = None) -> bool:
    """Is ``Z[x]/(h)`` maximal at ``p``? ``h`` must be monic."""
    h = intpoly.trim(h)
    if h[-1] != 1:
        raise ValueError("h must be monic")
    d = disc_resultant(h) if disc is None else disc
    if d % p or v_p(d, p) == 1:
        return True
    fac = ffpoly.factor_mod_p(ffpoly.PolyModP(p, h))
    g: list[int] = [1]
    rest: list[int] = [1]
    for gi, e in fac.factors:
        g = intpoly.mul(g, list(gi.coeffs))
        for _ in range(e - 1):
            rest = intpoly.mul(rest, list(gi.coeffs))
    F = intpoly.exact_div_scalar(intpoly.add(intpoly.mul(g, rest), intpoly.neg(h)), p)
    Fbar = ffpoly.trim(F, p)
    for gi, e in fac.factors:
        if e >= 2 and not ffpoly.rem(Fbar, list(gi.coeffs), p):
            return False
    return True


def ram_status(h: Sequence[int], p: int, disc: int | None = None) -> RamStatus:
    d = disc_resultant(h) if disc is None else disc
    if d % p:
        return RamStatus.UNRAMIFIED
    if v_p(d, p) == 1 or dedekind_p_maximal(h, p, d):
        return RamStatus.RAMIFIED
    return RamStatus.UNKNOWN


def sturm_real_roots(h: Sequence[int]) -> int:
    return intpoly.sturm_real_roots(h)


def infinite_ramified(h: Sequence[int]) -> bool:
    """A field is ramified at infinity iff it is not totally real."""
    return sturm_real_roots(h) < intpoly.degree(h)


# --------------------------------------------------------------------------
# Galois certificates

def _transposition_type(t: tuple[int, ...]) -> bool:
    # an odd power of such a Frobenius is a transposition
    return t.count(2) == 1 and all(x % 2 for x in t if x != 2)


@dataclass(frozen=True)
class SmCertificate:
    """Three unramified primes whose Frobenius cycle types force ``S_m``.

    ``p_irred`` gives an m-cycle (transitive), ``p_cycle`` an (m-1)-cycle
    (so doubly transitive, hence primitive), and ``p_transposition`` a type
    with a single 2-cycle and otherwise odd cycles, whose odd power is a
    transposition. A primitive group containing a transposition is ``S_m``.
    """

    m: int
    p_irred: int
    p_cycle: int
    p_transposition: int
    transposition_type: tuple[int, ...]

    def verify(self, h: Sequence[int]) -> bool:
        m = self.m
        if intpoly.degree(h) != m:
            return False
        disc = disc_resultant(h)
        checks = [
            (self.p_irred, lambda t: t == (m,)),
            (self.p_cycle, lambda t: t == (1, m - 1)),
            (self.p_transposition, lambda t: t == self.transposition_type and _transposition_type(t)),
        ]
        for p, ok in checks:
            if disc % p:
                t = ffpoly.factor_type(ffpoly.PolyModP(p, h))
                if ok(t):
                    continue
            return False
        return True

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "p_irred": str(self.p_irred),
            "p_cycle": str(self.p_cycle),
            "p_transposition": str(self.p_transposition),
            "transposition_type": list(self.transposition_type),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SmCertificate":
        return cls(
            int(data["m"]),
            int(data["p_irred"]),
            int(data["p_cycle"]),
            int(data["p_transposition"]),
            tuple(int(x) for x in data["transposition_type"]),
        )


def certify_sm(h: Sequence[int], prime_budget: int = DEFAULT_PRIME_BUDGET, disc: int | None = None):
    """Scan primes up to ``prime_budget``; an :class:`SmCertificate` or None."""
    h = intpoly.trim(h)
    m = len(h) - 1
    if m < 4:
        raise ValueError("certify_sm needs degree >= 4")
    if intpoly.rational_roots(h):
        raise ReducibleError("polynomial has a rational root")
    d = disc_resultant(h) if disc is None else disc
    if d == 0:
        raise ReducibleError("polynomial is not squarefree")
    found: dict[str, tuple[int, tuple[int, ...]]] = {}
    for p in iter_primes():
        if p > prime_budget:
            return None
        if d % p == 0 or h[-1] % p == 0:
            continue
        t = ffpoly.factor_type(ffpoly.PolyModP(p, h))
        if "irred" not in found and t == (m,):
            found["irred"] = (p, t)
        elif "cycle" not in found and t == (1, m - 1):
            found["cycle"] = (p, t)
        elif "transp" not in found and _transposition_type(t):
            found["transp"] = (p, t)
        if len(found) == 3:
            return SmCertificate(m, found["irred"][0], found["cycle"][0], found["transp"][0], found["transp"][1])
    return None


# --------------------------------------------------------------------------
# specialized fields

def contain_T(m: int) -> PrimeSet:
    """The fixed exceptional set ``{inf} u Prms(m(m-1)) u {2, 3}``."""
    return PrimeSet(frozenset(factorize(m * (m - 1)).primes()) | {2, 3}, True)


@dataclass(frozen=True)
class SpecializedField:
    m: int
    parameter: ProjPoint
    h: tuple[int, ...]
    disc: Factorization
    ram_status: dict = field(hash=False, compare=True)
    real_roots: int = 0
    galois_cert: SmCertificate | None = None
    t_violations: tuple[int, ...] = ()

    @property
    def infinity_ramified(self) -> bool:
        return self.real_roots < self.m

    @property
    def ram_set(self) -> PrimeSet:
        """Primes that are ramified or unknown, plus infinity when ramified."""
        bad = frozenset(p for p, s in self.ram_status.items() if s is not RamStatus.UNRAMIFIED)
        return PrimeSet(bad, self.infinity_ramified)

    @property
    def certified_ramified(self) -> PrimeSet:
        return PrimeSet(frozenset(p for p, s in self.ram_status.items() if s is RamStatus.RAMIFIED), self.infinity_ramified)

    @property
    def unknown(self) -> list[int]:
        return sorted(p for p, s in self.ram_status.items() if s is RamStatus.UNKNOWN)

    @property
    def total(self) -> int:
        return len(self.ram_set)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "point": self.parameter.to_json(),
            "polynomial": [str(c) for c in self.h],
            "disc": self.disc.to_json(),
            "ram_status": {str(p): self.ram_status[p].value for p in sorted(self.ram_status)},
            "real_roots": self.real_roots,
            "infinity_ramified": self.infinity_ramified,
            "galois_cert": self.galois_cert.to_json() if self.galois_cert else None,
            "ram_set": self.ram_set.to_json(),
            "total": self.total,
            "t_violations": [str(p) for p in self.t_violations],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SpecializedField":
        cert = data.get("galois_cert")
        return cls(
            int(data["m"]),
            ProjPoint.from_json(data["point"]),
            tuple(int(c) for c in data["polynomial"]),
            Factorization.from_json(data["disc"]),
            {int(p): RamStatus(s) for p, s in data["ram_status"].items()},
            int(data["real_roots"]),
            SmCertificate.from_json(cert) if cert else None,
            tuple(int(p) for p in data.get("t_violations", [])),
        )


def disc_factorization(m: int, P: ProjPoint, *, rho_budget: float = DEFAULT_RHO_BUDGET) -> Factorization:
    """Factor ``disc(h)`` through its product formula, without factoring it whole."""
    a, b = P.a, P.b
    L = TrinomialCover(m).linear_term(a, b)
    fac = factorize(a, budget=rho_budget) ** (m - 2) * factorize(b, budget=rho_budget) ** ((m - 1) ** 2)
    fac = fac * factorize(L, budget=rho_budget)
    s = disc_sign(m)
    return Factorization(s * fac.value, s * fac.sign, fac.factors, fac.certified)


def ram_report(
    m: int,
    P: ProjPoint,
    *,
    prime_budget: int = DEFAULT_PRIME_BUDGET,
    rho_budget: float = DEFAULT_RHO_BUDGET,
) -> SpecializedField:
    h = specialize(m, P)
    disc = disc_factorization(m, P, rho_budget=rho_budget)
    d = disc.value
    oracle = disc_resultant(h)
    if oracle != d or disc_formula(m, P) * P.b ** (m * (m - 1)) != d:
        raise AssertionError(f"discriminant mismatch at {P}: {d} vs {oracle}")
    cert = certify_sm(h, prime_budget, d)
    statuses = {p: ram_status(h, p, d) for p in disc.primes()}
    roots = sturm_real_roots(h)
    T = contain_T(m)
    D = P.a * P.b * TrinomialCover(m).linear_term(P.a, P.b)
    violations = tuple(
        p for p, s in sorted(statuses.items()) if s is not RamStatus.UNRAMIFIED and p not in T and D % p
    )
    return SpecializedField(m, P, tuple(h), disc, statuses, roots, cert, violations)


def universal_ram_upper(m: int, sample_count: int, seed: int = 0, height: int = 1000) -> PrimeSet:
    """Intersect the ramified-or-unknown sets of random specializations."""
    if sample_count < 2:
        raise ValueError("need at least two samples")
    rng = random.Random(seed)
    out: PrimeSet | None = None
    taken = 0
    while taken < sample_count:
        a = rng.randint(-height, height)
        b = rng.randint(1, height)
        if math.gcd(a, b) != 1:
            continue
        P = ProjPoint(a, b)
        if not is_admissible(m, P):
            continue
        h = specialize(m, P)
        disc = disc_factorization(m, P)
        bad = frozenset(p for p in disc.primes() if ram_status(h, p, disc.value) is not RamStatus.UNRAMIFIED)
        here = PrimeSet(bad, infinite_ramified(h))
        out = here if out is None else out & here
        taken += 1
    assert out is not None
    return out


# --------------------------------------------------------------------------
# searching for S_m witnesses

def base_points() -> Iterator[ProjPoint]:
    """``[a:b]`` with ``b >= 1`` and ``a != 0``, by ``max(|a|, b)``, then ``b``, then ``-a``."""
    H = 1
    while True:
        layer = []
        for b in range(1, H + 1):
            for a in range(-H, H + 1):
                if a and max(abs(a), b) == H and math.gcd(a, b) == 1:
                    layer.append(ProjPoint(a, b))
        layer.sort(key=lambda P: (P.b, -P.a))
        yield from layer
        H += 1


def ramification_lower_bound(disc: Factorization) -> int:
    """Finite primes certainly ramified (``v_p = 1``); infinity is added by callers."""
    return sum(1 for e in disc.factors.values() if e == 1)


def _try_sm(m: int, target: int, prime_budget: int, P: ProjPoint):
    if not is_admissible(m, P):
        return None
    try:
        disc = disc_factorization(m, P)
    except ArithmeticError:
        return None
    if ramification_lower_bound(disc) + 1 > target:
        return None
    try:
        F = ram_report(m, P, prime_budget=prime_budget)
    except ReducibleError:
        return None
    if F.galois_cert is None or F.total > target or F.t_violations:
        return None
    return F


def realize_sm(
    m: int,
    *,
    target: int = 4,
    max_points: int = 10**5,
    prime_budget: int = DEFAULT_PRIME_BUDGET,
    jobs: int | None = None,
) -> SpecializedField:
    """First base point giving a certified ``S_m`` field with ``total <= target``."""
    TrinomialCover(m)
    cands = (P for _, P in zip(range(max_points), base_points()))
    for _, F in ordered_map(partial(_try_sm, m, target, prime_budget), cands, jobs):
        if F is not None:
            return F
    raise SearchExhausted(f"no S_{m} witness with at most {target} ramified primes among {max_points} points")

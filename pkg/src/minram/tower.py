"""S_m^n towers from twisted copies of the trinomial cover.

Factor ``i`` specializes the cover at a transform of one base point:

* multiplicative mode, prime ``q``: parameter ``a / (b q^k_i)``;
* additive mode: parameter ``(a - k_i b) / b``.

The compositum has group ``S_m^n`` once every factor is certified ``S_m``
and the discriminant square classes are independent over F_2. The sign
character cuts ``S_m`` down to ``A_m = S_m^2 [S_m, S_m]``, so independent
quadratic subfields make the map onto ``(Z/2)^n`` surjective, and the
product-subgroup lemma for E(2) groups does the rest.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Iterator, Sequence

from ._parallel import ordered_map
from .arith import Factorization, PrimeSet
from .forms import ProjPoint, SearchExhausted
from .specfield import (
    DEFAULT_PRIME_BUDGET,
    BranchPointError,
    ReducibleError,
    SpecializedField,
    base_points,
    disc_factorization,
    is_admissible,
    ram_report,
)

log = logging.getLogger(__name__)

MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"


@dataclass(frozen=True)
class TowerSpec:
    m: int
    n: int
    mode: str
    ks: tuple[int, ...]
    base_point: ProjPoint
    q: int = 2
    step: int = 1

    def __post_init__(self):
        if self.m < 4 or self.n < 1:
            raise ValueError("need m >= 4 and n >= 1")
        if self.mode not in (MULTIPLICATIVE, ADDITIVE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.ks) != self.n or any(x >= y for x, y in zip(self.ks, self.ks[1:])):
            raise ValueError("schedule must have n strictly increasing entries")

    def parameters(self) -> list[ProjPoint]:
        a, b = self.base_point.a, self.base_point.b
        if self.mode == MULTIPLICATIVE:
            return [ProjPoint(a, b * self.q**k) for k in self.ks]
        return [ProjPoint(a - k * b, b) for k in self.ks]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "mode": self.mode,
            "q": str(self.q),
            "step": self.step,
            "ks": [str(k) for k in self.ks],
            "base_point": self.base_point.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "TowerSpec":
        return cls(
            int(d["m"]),
            int(d["n"]),
            d["mode"],
            tuple(int(k) for k in d["ks"]),
            ProjPoint.from_json(d["base_point"]),
            int(d["q"]),
            int(d["step"]),
        )


def _u(m: int) -> Fraction:
    return Fraction(-((m - 1) ** (m - 1)), m**m)


def branch_points_y(m: int, mode: str, ks: Sequence[int], q: int = 2) -> list[set]:
    """Finite nonzero branch points of each factor, in the base coordinate y."""
    u = _u(m)
    if mode == MULTIPLICATIVE:
        return [{q**k * u} for k in ks]
    return [{Fraction(k), k + u} for k in ks]


def schedule(m: int, n: int, mode: str = MULTIPLICATIVE, q: int = 2, step: int = 1) -> tuple[int, ...]:
    """``k_i = i * step`` for ``i = 1..n``; a single factor uses ``k = 0``."""
    if n < 1:
        raise ValueError("n must be positive")
    if step < 1:
        raise ValueError("step must be positive")
    ks = (0,) if n == 1 else tuple(i * step for i in range(1, n + 1))
    sets = branch_points_y(m, mode, ks, q)
    for i in range(n):
        for j in range(i + 1, n):
            if sets[i] & sets[j]:
                raise ValueError(f"factors {i} and {j} share a branch point")
    return ks


def specialize_tower(spec: TowerSpec, prime_budget: int = DEFAULT_PRIME_BUDGET) -> list[SpecializedField]:
    out = []
    for i, P in enumerate(spec.parameters()):
        try:
            out.append(ram_report(spec.m, P, prime_budget=prime_budget))
        except BranchPointError as exc:
            raise BranchPointError(f"factor {i}: {exc}") from None
    return out


# --------------------------------------------------------------------------
# square classes over F_2

def _rank_f2(rows: list[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def disc_independence(discs: Sequence[Factorization]) -> tuple[bool, dict]:
    """Are the square classes of ``discs`` independent in Q^x / (Q^x)^2?"""
    classes = [d.squarefree_class() for d in discs]
    primes = sorted({p for _, ps in classes for p in ps})
    coords = ["-1"] + [str(p) for p in primes]
    vectors = []
    for sign, ps in classes:
        vec = [1 if sign < 0 else 0] + [1 if p in ps else 0 for p in primes]
        vectors.append(vec)
    rank = _rank_f2([int("".join(map(str, v)), 2) for v in vectors])
    return rank == len(discs), {"coordinates": coords, "vectors": vectors, "rank": rank}


def verify_independence(cert: dict, discs: Sequence[Factorization]) -> bool:
    ok, fresh = disc_independence(discs)
    return fresh == cert and ok


def certify_tower(factors: Sequence[SpecializedField], independent: bool) -> bool | None:
    """True certifies ``S_m^n``; None when some factor is uncertified."""
    if any(F.galois_cert is None for F in factors):
        return None
    return bool(independent)


# --------------------------------------------------------------------------
# reports and search

@dataclass(frozen=True)
class TowerReport:
    spec: TowerSpec
    factors: tuple[SpecializedField, ...]
    independence: dict = field(hash=False)
    certified: bool | None = None

    @property
    def ram_union(self) -> PrimeSet:
        out = PrimeSet()
        for F in self.factors:
            out = out | F.ram_set
        return out

    @property
    def total(self) -> int:
        return len(self.ram_union)

    @property
    def target(self) -> int:
        return self.spec.n + 4

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "factors": [F.to_json() for F in self.factors],
            "independence": self.independence,
            "certified": self.certified,
            "ram_union": self.ram_union.to_json(),
            "total": self.total,
            "target": self.target,
        }

    @classmethod
    def from_json(cls, d: dict) -> "TowerReport":
        return cls(
            TowerSpec.from_json(d["spec"]),
            tuple(SpecializedField.from_json(F) for F in d["factors"]),
            d["independence"],
            d["certified"],
        )


def build_report(spec: TowerSpec, prime_budget: int = DEFAULT_PRIME_BUDGET) -> TowerReport:
    factors = specialize_tower(spec, prime_budget)
    ok, cert = disc_independence([F.disc for F in factors])
    return TowerReport(spec, tuple(factors), cert, certify_tower(factors, ok))


def _lower_bound(m: int, params: Sequence[ProjPoint]) -> int:
    # primes with v_p(disc) = 1 in some factor are surely ramified
    sure: set[int] = set()
    for P in params:
        d = disc_factorization(m, P)
        sure.update(p for p, e in d.factors.items() if e == 1)
    return len(sure) + 1


def _try_tower(m, n, mode, q, target, prime_budget, job):
    P, step = job
    try:
        ks = schedule(m, n, mode, q, step)
        spec = TowerSpec(m, n, mode, ks, P, q, step)
    except ValueError as exc:
        return None, f"schedule: {exc}"
    params = spec.parameters()
    if not all(is_admissible(m, X) for X in params):
        return None, "branch point"
    try:
        if _lower_bound(m, params) > target:
            return None, "too many ramified primes"
        report = build_report(spec, prime_budget)
    except ReducibleError:
        return None, "reducible factor"
    except ArithmeticError as exc:
        return None, f"factorization: {exc}"
    if report.certified is not True:
        return None, "certification failed"
    if report.total > target:
        return None, "too many ramified primes"
    if any(F.t_violations for F in report.factors):
        return None, "containment violation"
    return report, "ok"


def _jobs(n: int, max_step: int, max_points: int) -> Iterator[tuple[ProjPoint, int]]:
    steps = [1] if n == 1 else list(range(1, max_step + 1))
    for _, P in zip(range(max_points), base_points()):
        for A in steps:
            yield P, A


def realize_smn(
    m: int,
    n: int,
    *,
    mode: str = MULTIPLICATIVE,
    q: int = 2,
    max_points: int = 10**4,
    max_step: int = 3,
    prime_budget: int = DEFAULT_PRIME_BUDGET,
    jobs: int | None = None,
) -> TowerReport:
    """First (base point, step) whose tower is certified with ``total <= n + 4``.

    Base points follow :func:`specfield.base_points`; for each point the step
    ``A`` is escalated from 1 to ``max_step`` when certification fails.
    """
    target = n + 4
    fn = partial(_try_tower, m, n, mode, q, target, prime_budget)
    for (P, A), (report, reason) in ordered_map(fn, _jobs(n, max_step, max_points), jobs):
        if report is not None:
            return report
        if reason == "certification failed" and A < max_step:
            log.info("escalating step at %s: A=%d -> %d", P, A, A + 1)
    raise SearchExhausted(f"no certified S_{m}^{n} tower within {max_points} base points")

"""Finite permutation groups held as explicit element sets.

Permutations are tuples of 0-based images; cycle notation for input and
output is 1-based. Products compose left to right: ``mul(g, h)`` applies
``g`` first, so ``mul(g, h)[i] == h[g[i]]``, and a tuple ``(g_1, ..., g_k)``
has product ``g_1 g_2 ... g_k`` in that sense. Conjugation is
``x^g = g^-1 x g``.

Every group is materialized (default cap 10**5 elements). That is slow for
large groups but makes exhaustive rigidity checks and normal-subgroup
enumeration exact and easy to audit.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Sequence

from .arith import factorize, primes_upto

Perm = tuple[int, ...]
DEFAULT_CAP = 10**5
DEFAULT_ENUM_BUDGET = 10**7


class GroupCapExceeded(RuntimeError):
    pass


class UndeterminedError(RuntimeError):
    """An enumeration budget ran out; no verdict is given."""


# --------------------------------------------------------------------------
# permutations

def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(g: Perm, h: Perm) -> Perm:
    return tuple([h[x] for x in g])


def inv(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def power(g: Perm, k: int) -> Perm:
    if k < 0:
        g, k = inv(g), -k
    out = identity(len(g))
    base = g
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def conj(x: Perm, g: Perm) -> Perm:
    return mul(mul(inv(g), x), g)


def commutator(x: Perm, y: Perm) -> Perm:
    return mul(mul(inv(x), inv(y)), mul(x, y))


def cycles(g: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(g)
    out = []
    for i in range(len(g)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = g[j]
        out.append(tuple(cyc))
    return out


def cycle_type(g: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(g)), reverse=True))


def order(g: Perm) -> int:
    return math.lcm(*(len(c) for c in cycles(g))) if g else 1


def format_cycles(g: Perm) -> str:
    body = "".join("(" + ",".join(str(i + 1) for i in c) + ")" for c in cycles(g) if len(c) > 1)
    return body or "()"


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, degree: int) -> Perm:
    """Parse 1-based cycle notation like ``(1,2)(3,4)``; ``()`` or ``e`` is the identity."""
    text = text.strip()
    img = list(range(degree))
    if text in ("", "e", "()", "1"):
        return tuple(img)
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"bad cycle notation {text!r}")
    seen: set[int] = set()
    for body in _CYCLE.findall(text):
        body = body.strip()
        if not body:
            continue
        pts = [int(x) for x in body.split(",")] if "," in body else [int(ch) for ch in body.replace(" ", "")]
        for x in pts:
            if not 1 <= x <= degree or x in seen:
                raise ValueError(f"point {x} invalid or repeated in {text!r}")
            seen.add(x)
        for x, y in zip(pts, pts[1:] + pts[:1]):
            img[x - 1] = y - 1
    return tuple(img)


# --------------------------------------------------------------------------
# groups

def _closure(gens: Sequence[Perm], degree: int, cap: int) -> frozenset:
    e = identity(degree)
    elements = {e}
    useful: list[Perm] = []
    for g in gens:
        if g in elements:
            continue
        useful.append(g)
        frontier = list(elements)
        while frontier:
            new = []
            for x in frontier:
                for s in useful:
                    y = mul(x, s)
                    if y not in elements:
                        elements.add(y)
                        new.append(y)
            if len(elements) > cap:
                raise GroupCapExceeded(f"group order exceeds cap {cap}")
            frontier = new
    return frozenset(elements)


@dataclass(frozen=True, eq=False)
class PermGroup:
    degree: int
    gens: tuple[Perm, ...]
    elements: frozenset = field(repr=False)
    name: str = ""

    def __eq__(self, other) -> bool:
        return isinstance(other, PermGroup) and self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, len(self.elements)))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def is_abelian(self) -> bool:
        return all(mul(x, y) == mul(y, x) for x, y in itertools.combinations(self.gens, 2))

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.elements <= other.elements

    def is_normal_in(self, other: "PermGroup") -> bool:
        return all(conj(x, g) in self.elements for x in self.gens for g in other.gens)

    @cached_property
    def sorted_elements(self) -> list[Perm]:
        return sorted(self.elements)

    @cached_property
    def conjugacy_classes(self) -> list[frozenset]:
        seen: set = set()
        out = []
        for x in self.sorted_elements:
            if x in seen:
                continue
            cls = {x}
            frontier = [x]
            while frontier:
                new = []
                for y in frontier:
                    for g in self.gens:
                        z = conj(y, g)
                        if z not in cls:
                            cls.add(z)
                            new.append(z)
                frontier = new
            seen |= cls
            out.append(frozenset(cls))
        out.sort(key=lambda c: (order(min(c)), len(c), min(c)))
        return out

    def class_of(self, x: Perm) -> frozenset:
        for c in self.conjugacy_classes:
            if x in c:
                return c
        raise ValueError("element not in group")

    @cached_property
    def center(self) -> "PermGroup":
        z = [x for x in self.sorted_elements if all(mul(x, g) == mul(g, x) for g in self.gens)]
        return close(z, self.degree)

    def __str__(self) -> str:
        return self.name or f"<{', '.join(format_cycles(g) for g in self.gens)}>"


def close(gens: Iterable[Perm], degree: int | None = None, cap: int = DEFAULT_CAP, name: str = "") -> PermGroup:
    gens = tuple(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree is required when there are no generators")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generators must share one degree")
    nontrivial = tuple(g for g in gens if g != identity(degree))
    return PermGroup(degree, nontrivial, _closure(nontrivial, degree, cap), name)


def subgroup(G: PermGroup, gens: Iterable[Perm]) -> PermGroup:
    return close(gens, G.degree)


def normal_closure(G: PermGroup, gens: Iterable[Perm]) -> PermGroup:
    gens = list(gens)
    H = close(gens, G.degree)
    while True:
        extra = [conj(x, g) for x in H.gens for g in G.gens]
        extra = [y for y in extra if y not in H.elements]
        if not extra:
            return H
        H = close(list(H.gens) + extra, G.degree)


def derived_subgroup(G: PermGroup) -> PermGroup:
    comms = [commutator(x, y) for x, y in itertools.combinations(G.gens, 2)]
    return normal_closure(G, comms)


def power_commutator(G: PermGroup, p: int) -> PermGroup:
    """``G^p [G, G]``, the smallest normal subgroup with elementary abelian p-quotient."""
    D = derived_subgroup(G)
    powers = {power(x, p) for x in G.sorted_elements}
    return close(list(D.gens) + sorted(powers), G.degree)


def _quotient_order_counts(G: PermGroup, N: PermGroup, q: int) -> list[int]:
    """For k = 0, 1, ...: cosets of N whose order in G/N divides q**k."""
    counts = []
    k = 0
    while True:
        e = q**k
        c = sum(1 for x in G.elements if power(x, e) in N.elements) // N.order
        counts.append(c)
        if k and counts[-1] == counts[-2]:
            return counts
        k += 1


def abelianization(G: PermGroup) -> list[int]:
    """Invariant factors ``n_1 | n_2 | ...`` of ``G/[G,G]``."""
    D = derived_subgroup(G)
    n = G.order // D.order
    if n == 1:
        return []
    per_prime: dict[int, list[int]] = {}
    for q in factorize(n).primes():
        counts = _quotient_order_counts(G, D, q)
        # log_q counts[k] = sum_i min(k, e_i); successive differences count e_i >= k
        logs = [round(math.log(c, q)) for c in counts]
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        exps = []
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            exps.extend([k + 1] * (ge[k] - nxt))
        per_prime[q] = sorted(exps, reverse=True)
    width = max(len(v) for v in per_prime.values())
    factors = []
    for i in range(width):
        f = 1
        for q, exps in per_prime.items():
            if i < len(exps):
                f *= q ** exps[i]
        factors.append(f)
    return sorted(factors)


def d_ab(G: PermGroup) -> int:
    """Rank of the abelianization, with ``d(1) = 1``."""
    return max(1, len(abelianization(G)))


def normal_subgroups(G: PermGroup) -> list[PermGroup]:
    """All normal subgroups, as joins of normal closures of conjugacy classes."""
    found: dict[frozenset, PermGroup] = {}
    for c in G.conjugacy_classes:
        N = close(sorted(c), G.degree)
        found.setdefault(N.elements, N)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for A in frontier:
            for B in current:
                if A.elements <= B.elements or B.elements <= A.elements:
                    continue
                J = close(list(A.gens) + list(B.gens), G.degree)
                if J.elements not in found:
                    found[J.elements] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda N: (N.order, min(N.elements - {G.identity}, default=())))


def maximal_normal_subgroups(G: PermGroup) -> list[PermGroup]:
    proper = [N for N in normal_subgroups(G) if N.order < G.order]
    return [N for N in proper if not any(N.order < M.order and N.elements < M.elements for M in proper)]


def maximal_normal_indices(G: PermGroup) -> list[int]:
    return sorted(G.order // N.order for N in maximal_normal_subgroups(G))


def is_Ep(G: PermGroup, p: int) -> bool:
    """Simple quotients of G all have order p; [G,G] has none of order p."""
    if G.is_trivial():
        raise ValueError("E(p) is defined for nontrivial groups")
    if any(i != p for i in maximal_normal_indices(G)):
        return False
    D = derived_subgroup(G)
    return D.is_trivial() or all(f % p for f in abelianization(D))


def quotient(G: PermGroup, N: PermGroup) -> PermGroup:
    """``G/N`` acting on the right cosets of a normal subgroup ``N``."""
    if not N.is_normal_in(G):
        raise ValueError("N is not normal in G")
    index: dict[Perm, int] = {}
    reps = []
    for x in G.sorted_elements:
        if x in index:
            continue
        k = len(reps)
        reps.append(x)
        for n in N.elements:
            index[mul(n, x)] = k
    gens = [tuple(index[mul(r, g)] for r in reps) for g in G.gens]
    return close(gens, len(reps))


# --------------------------------------------------------------------------
# direct products

def direct_product(*Gs: PermGroup, cap: int = DEFAULT_CAP) -> PermGroup:
    """Product acting on the disjoint union of the point sets."""
    total = sum(G.degree for G in Gs)
    gens = []
    for i in range(len(Gs)):
        for g in Gs[i].gens:
            gens.append(embed(Gs, i, g))
    name = "x".join(G.name for G in Gs) if all(G.name for G in Gs) else ""
    return close(gens, total, cap, name)


def embed(Gs: Sequence[PermGroup], i: int, g: Perm) -> Perm:
    parts = [identity(G.degree) for G in Gs]
    parts[i] = g
    return combine(Gs, parts)


def combine(Gs: Sequence[PermGroup], parts: Sequence[Perm]) -> Perm:
    out = []
    offset = 0
    for G, g in zip(Gs, parts):
        out.extend(x + offset for x in g)
        offset += G.degree
    return tuple(out)


def project(Gs: Sequence[PermGroup], i: int, g: Perm) -> Perm:
    offset = sum(G.degree for G in Gs[:i])
    n = Gs[i].degree
    return tuple(x - offset for x in g[offset : offset + n])


def product_lemma_check(Gs: Sequence[PermGroup], H_gens: Sequence[Perm], p: int) -> str:
    """``"HypothesesFail"`` or ``"Equal"``.

    Hypotheses: every projection of ``H`` is onto, and ``H`` maps onto
    ``prod G_i / G_i^p[G_i, G_i]``. When they hold, ``H`` must be the full
    product; a proper ``H`` raises ``AssertionError``.
    """
    for G in Gs:
        if not is_Ep(G, p):
            raise ValueError(f"{G} is not E({p})")
    deg = sum(G.degree for G in Gs)
    for i, G in enumerate(Gs):
        if close([project(Gs, i, h) for h in H_gens], G.degree).order != G.order:
            return "HypothesesFail"
    phi_gens = [embed(Gs, i, x) for i, G in enumerate(Gs) for x in power_commutator(G, p).gens]
    full = math.prod(G.order for G in Gs)
    if close(list(H_gens) + phi_gens, deg).order != full:
        return "HypothesesFail"
    if close(H_gens, deg).order != full:
        raise AssertionError("hypotheses hold but H is a proper subgroup")
    return "Equal"


# --------------------------------------------------------------------------
# rigid tuples

@dataclass(frozen=True)
class GeneratingTuple:
    group: PermGroup
    entries: tuple[Perm, ...]

    def product(self) -> Perm:
        out = self.group.identity
        for g in self.entries:
            out = mul(out, g)
        return out

    def generates(self) -> bool:
        return close(self.entries, self.group.degree).order == self.group.order

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(format_cycles(g) for g in self.entries) + ")"


def is_good_tuple(t: GeneratingTuple) -> bool:
    return t.product() == t.group.identity and t.generates()


def _is_rational(G: PermGroup, g: Perm) -> bool:
    n = order(g)
    c = G.class_of(g)
    return all(power(g, k) in c for k in range(1, n) if math.gcd(k, n) == 1)


def rigidity_report(t: GeneratingTuple, budget: int = DEFAULT_ENUM_BUDGET) -> dict:
    """Counts behind the rigidity verdict.

    The semi-conjugate good generating tuples are enumerated exhaustively.
    With trivial center and a generating tuple, conjugation acts freely on
    them, so rigidity means there are exactly ``|G|`` of them.
    """
    G = t.group
    good = is_good_tuple(t)
    center_trivial = G.center.is_trivial()
    classes = [G.class_of(g) for g in t.entries]
    count = None
    if good and center_trivial:
        work = math.prod(len(c) for c in classes[:-1])
        if work > budget:
            raise UndeterminedError(f"{work} candidates exceed the budget {budget}")
        last = classes[-1]
        count = 0
        pools = [sorted(c) for c in classes[:-1]]
        for combo in itertools.product(*pools):
            prod = G.identity
            for g in combo:
                prod = mul(prod, g)
            final = inv(prod)
            if final not in last:
                continue
            if close(combo + (final,), G.degree).order == G.order:
                count += 1
    rational = all(_is_rational(G, g) for g in t.entries)
    rigid = bool(good and center_trivial and count == G.order)
    return {
        "good": good,
        "center_trivial": center_trivial,
        "class_sizes": [len(c) for c in classes],
        "semi_conjugate_count": count,
        "group_order": G.order,
        "rigid": rigid,
        "rational": rational,
        "rationally_rigid": rigid and rational,
    }


def is_rigid(t: GeneratingTuple, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    return rigidity_report(t, budget)["rigid"]


def is_rationally_rigid(t: GeneratingTuple, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    return rigidity_report(t, budget)["rationally_rigid"]


def dilute(t: GeneratingTuple, position: int) -> GeneratingTuple:
    """Insert the identity at ``position`` (0-based; ``len(t)`` appends)."""
    if not 0 <= position <= len(t):
        raise IndexError("position out of range")
    e = list(t.entries)
    e.insert(position, t.group.identity)
    return GeneratingTuple(t.group, tuple(e))


def frattini_rank(G: PermGroup, p: int) -> int:
    """``d`` with ``G / G^p[G,G] = (Z/p)^d``."""
    idx = G.order // power_commutator(G, p).order
    d = round(math.log(idx, p)) if idx > 1 else 0
    assert p**d == idx
    return d


def _spanning_subset(t: GeneratingTuple, p: int) -> list[int]:
    G = t.group
    phi = power_commutator(G, p)
    d = frattini_rank(G, p)
    for A in itertools.combinations(range(len(t)), d):
        if close(list(phi.gens) + [t.entries[i] for i in A], G.degree).order == G.order:
            return list(A)
    raise ValueError("no subset of the tuple spans the Frattini quotient")


def build_product_tuple(t1: GeneratingTuple, t2: GeneratingTuple, p: int, verify: bool = True) -> GeneratingTuple:
    """A tuple for ``G_1 x G_2`` of length ``d_1 + d_2 + max(k_1 - d_1, k_2 - d_2)``.

    Entries ``(g_a, 1)`` and ``(1, h_a)`` for spanning index sets ``A_1``,
    ``A_2`` and paired entries ``(g_b, h_b')`` for the rest, the shorter
    remainder padded with identities. They are merged so that each
    coordinate reads its original tuple in order, which keeps the product
    equal to 1.
    """
    G1, G2 = t1.group, t2.group
    if G1.is_trivial() or G2.is_trivial():
        raise ValueError("both factors must be nontrivial")
    for G in (G1, G2):
        if not is_Ep(G, p):
            raise ValueError(f"{G} is not E({p})")
    for t in (t1, t2):
        if not is_good_tuple(t):
            raise ValueError(f"{t} is not a good generating tuple")
    A1, A2 = _spanning_subset(t1, p), _spanning_subset(t2, p)
    B1 = [i for i in range(len(t1)) if i not in A1]
    B2 = [i for i in range(len(t2)) if i not in A2]
    width = max(len(B1), len(B2))
    e1, e2 = list(t1.entries), list(t2.entries)
    while len(B1) < width:
        B1.append(len(e1))
        e1.append(G1.identity)
    while len(B2) < width:
        B2.append(len(e2))
        e2.append(G2.identity)
    Gs = (G1, G2)
    out: list[Perm] = []
    q1 = [i for i in A1]
    q2 = [i for i in A2]

    def flush(bound1: int, bound2: int):
        while q1 and q1[0] < bound1:
            out.append(combine(Gs, [e1[q1.pop(0)], G2.identity]))
        while q2 and q2[0] < bound2:
            out.append(combine(Gs, [G1.identity, e2[q2.pop(0)]]))

    for b1, b2 in zip(B1, B2):
        flush(b1, b2)
        out.append(combine(Gs, [e1[b1], e2[b2]]))
    flush(len(e1), len(e2))
    P = direct_product(G1, G2)
    result = GeneratingTuple(P, tuple(out))
    assert len(result) == len(A1) + len(A2) + width
    if not is_good_tuple(result):
        raise AssertionError("constructed tuple is not good and generating")
    if verify and not is_rationally_rigid(result):
        raise AssertionError("constructed tuple is not rationally rigid")
    return result


def corollary_length(n: int, d: int, r: int) -> int:
    return (n - 1) * d + r


def power_tuple(t: GeneratingTuple, n: int, p: int, verify: bool = False) -> GeneratingTuple:
    """Iterate :func:`build_product_tuple` to get a tuple for ``G^n``."""
    out = t
    for _ in range(n - 1):
        out = build_product_tuple(out, t, p, verify=verify)
    return out


def rigid_bound(r: int, group_order: int) -> int:
    """``r + #(Prms(|G|) u {p <= r})``."""
    if r < 1 or group_order < 2:
        raise ValueError("need r >= 1 and |G| >= 2")
    return r + len(set(factorize(group_order).primes()) | set(primes_upto(r)))


# --------------------------------------------------------------------------
# class labels and tuple search

def class_label(g: Perm) -> str:
    """Nontrivial cycle lengths joined by '.', e.g. ``2.2``; ``1`` for the identity."""
    parts = [str(x) for x in cycle_type(g) if x > 1]
    return ".".join(parts) or "1"


def find_tuple(G: PermGroup, labels: Sequence[str]) -> GeneratingTuple:
    """First good generating tuple whose entries have the given class labels."""
    by_label: dict[str, list[frozenset]] = {}
    for c in G.conjugacy_classes:
        by_label.setdefault(class_label(min(c)), []).append(c)
    try:
        choices = [by_label[lab] for lab in labels]
    except KeyError as exc:
        raise ValueError(f"no class labelled {exc.args[0]!r} in {G}") from None
    for classes in itertools.product(*choices):
        first = [min(classes[0])]
        pools = [first] + [sorted(c) for c in classes[1:-1]]
        for combo in itertools.product(*pools):
            prod = G.identity
            for g in combo:
                prod = mul(prod, g)
            final = inv(prod)
            if final not in classes[-1]:
                continue
            t = GeneratingTuple(G, tuple(combo) + (final,))
            if t.generates():
                return t
    raise ValueError(f"no good generating tuple with classes {list(labels)}")


# --------------------------------------------------------------------------
# catalog

def _load_catalog() -> dict[str, tuple[int, list[str]]]:
    text = resources.files("minram").joinpath("data/groups.txt").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, degree, gens = (x.strip() for x in line.split("|"))
        out[name] = (int(degree), [g.strip() for g in gens.split(";") if g.strip()])
    return out


_CATALOG: dict | None = None


def catalog_names() -> list[str]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _load_catalog()
    return list(_CATALOG)


def from_generators(text: str, degree: int, name: str = "") -> PermGroup:
    gens = [parse_perm(g, degree) for g in text.split(";") if g.strip()]
    return close(gens, degree, name=name)


def load_group(name: str) -> PermGroup:
    """A catalog group by name; ``AxB`` builds the direct product."""
    catalog_names()
    assert _CATALOG is not None
    parts = name.split("x")
    if len(parts) > 1:
        return direct_product(*(load_group(p) for p in parts))
    if name not in _CATALOG:
        raise KeyError(f"unknown group {name!r}; known: {', '.join(_CATALOG)}")
    degree, gens = _CATALOG[name]
    return close([parse_perm(g, degree) for g in gens], degree, name=name)


def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return close([], max(n, 1), name=f"S{n}")
    gens = [parse_perm("(1,2)", n), parse_perm("(" + ",".join(map(str, range(1, n + 1))) + ")", n)]
    return close(gens, n, name=f"S{n}")


def dihedral_group(n: int) -> PermGroup:
    """The symmetries of an n-gon, of order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple(n - 1 - i for i in range(n))
    return close([rot, ref], n, name=f"D{n}")

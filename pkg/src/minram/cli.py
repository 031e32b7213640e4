"""Command-line front end writing versioned JSON reports.

Exit codes: 0 success, 1 a ``verify`` check failed, 2 usage error,
3 search budget exhausted, 4 undetermined certificate.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from importlib import metadata

from . import arith, forms, groups, specfield, tower
from ._parallel import set_default_jobs
from .arith import PrimeSet

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_UNDETERMINED = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


# --------------------------------------------------------------------------
# commands; each returns (inputs, payload)

def cmd_realize_sm(args) -> tuple[dict, dict]:
    if args.m < 4:
        raise UsageError("the trinomial family needs m >= 4")
    F = specfield.realize_sm(args.m, max_points=args.max_points, prime_budget=args.prime_budget)
    assert F.total <= 4
    inputs = {"m": args.m, "max_points": args.max_points, "prime_budget": args.prime_budget}
    return inputs, {"field": F.to_json(), "bound": 4}


def cmd_realize_smn(args) -> tuple[dict, dict]:
    if args.m < 4 or args.n < 1:
        raise UsageError("need m >= 4 and n >= 1")
    R = tower.realize_smn(
        args.m,
        args.n,
        mode=args.mode,
        q=args.q,
        max_points=args.max_points,
        max_step=args.max_step,
        prime_budget=args.prime_budget,
    )
    assert R.total <= R.target
    inputs = {
        "m": args.m,
        "n": args.n,
        "mode": args.mode,
        "q": args.q,
        "max_points": args.max_points,
        "max_step": args.max_step,
        "prime_budget": args.prime_budget,
    }
    return inputs, {"tower": R.to_json()}


def _group_from_args(args, suffix: str = "") -> groups.PermGroup:
    name = getattr(args, "group" + suffix, None)
    gens = getattr(args, "gens" + suffix, None)
    if gens:
        degree = getattr(args, "degree" + suffix, None)
        if not degree:
            raise UsageError("--gens needs --degree")
        return groups.from_generators(gens, degree)
    if not name:
        raise UsageError("give --group or --gens")
    try:
        return groups.load_group(name)
    except KeyError as exc:
        raise UsageError(str(exc)) from None


def _group_inputs(args, suffix: str = "") -> dict:
    return {
        "group": getattr(args, "group" + suffix, None),
        "gens": getattr(args, "gens" + suffix, None),
        "degree": getattr(args, "degree" + suffix, None),
    }


def _check_ep_payload(G: groups.PermGroup, p: int) -> dict:
    D = groups.derived_subgroup(G)
    return {
        "order": G.order,
        "maximal_normal_indices": groups.maximal_normal_indices(G),
        "derived_order": D.order,
        "derived_abelianization": groups.abelianization(D),
        "is_Ep": groups.is_Ep(G, p),
    }


def cmd_check_ep(args) -> tuple[dict, dict]:
    G = _group_from_args(args)
    if G.is_trivial():
        raise UsageError("E(p) needs a nontrivial group")
    return {**_group_inputs(args), "p": args.p}, _check_ep_payload(G, args.p)


def _tuple_payload(t: groups.GeneratingTuple, budget: int) -> dict:
    rep = groups.rigidity_report(t, budget)
    return {"tuple": [groups.format_cycles(g) for g in t.entries], "degree": t.group.degree, **rep}


def cmd_check_rigid(args) -> tuple[dict, dict]:
    G = _group_from_args(args)
    labels = args.classes.replace(" ", "").split(",")
    try:
        t = groups.find_tuple(G, labels)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    inputs = {**_group_inputs(args), "classes": labels, "budget": args.budget}
    return inputs, _tuple_payload(t, args.budget)


def cmd_product_tuple(args) -> tuple[dict, dict]:
    G = _group_from_args(args)
    labels = args.classes.replace(" ", "").split(",")
    t1 = groups.find_tuple(G, labels)
    if args.group2 or args.gens2:
        G2 = _group_from_args(args, "2")
        t2 = groups.find_tuple(G2, (args.classes2 or args.classes).replace(" ", "").split(","))
    else:
        G2, t2 = G, t1
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if G2 is G:
        out = groups.power_tuple(t1, args.n, args.p)
    elif args.n == 2:
        out = groups.build_product_tuple(t1, t2, args.p, verify=False)
    else:
        raise UsageError("--n > 2 needs a single group")
    d = groups.frattini_rank(G, args.p)
    inputs = {**_group_inputs(args), "classes": labels, "p": args.p, "n": args.n, "budget": args.budget}
    if G2 is not G:
        inputs.update({k + "2": v for k, v in _group_inputs(args, "2").items()})
        inputs["classes2"] = (args.classes2 or args.classes).replace(" ", "").split(",")
    payload = _tuple_payload(out, args.budget)
    payload["length"] = len(out)
    payload["predicted_length"] = groups.corollary_length(args.n, d, len(t1)) if G2 is G else None
    return inputs, payload


def cmd_rigid_bound(args) -> tuple[dict, dict]:
    return {"r": args.r, "order": args.order}, {"bound": groups.rigid_bound(args.r, args.order)}


def cmd_beta_bound(args) -> tuple[dict, dict]:
    d = _int_list(args.degrees)
    return {"degrees": d}, {"bound": forms.beta_sieve_bound(d)}


def _S(args) -> PrimeSet:
    return PrimeSet.parse(args.S or "", infinity=True)


def cmd_gtz(args) -> tuple[dict, dict]:
    Ls = forms.parse_forms(args.forms)
    S = _S(args)
    P = forms.gtz_search(Ls, S, forms.NeighborhoodVN(args.N), forms.SearchBudget(args.max_candidates))
    values = forms.verify_gtz_witness(Ls, S, P)
    inputs = {"forms": [str(L) for L in Ls], "S": S.to_json(), "N": args.N, "max_candidates": args.max_candidates}
    return inputs, {"point": P.to_json(), "values": [str(v) for v in values]}


def cmd_empirical_b(args) -> tuple[dict, dict]:
    if args.forms:
        Fs = forms.parse_forms(args.forms)
    elif args.m:
        m = args.m
        Fs = forms.parse_forms(f"t; s; {m**m}t + {(m - 1) ** (m - 1)}s")
    else:
        raise UsageError("give --forms or --m")
    S = _S(args)
    P, count = forms.empirical_B(Fs, S, forms.NeighborhoodVN(args.N), forms.SearchBudget(args.max_candidates))
    inputs = {"forms": [str(F) for F in Fs], "S": S.to_json(), "N": args.N, "max_candidates": args.max_candidates}
    return inputs, {"point": P.to_json(), "count": count, "note": "upper witness, not the minimum"}


def cmd_universal_ram(args) -> tuple[dict, dict]:
    if args.m < 4:
        raise UsageError("the trinomial family needs m >= 4")
    U = specfield.universal_ram_upper(args.m, args.samples, args.seed)
    return {"m": args.m, "samples": args.samples}, {"upper_bound": U.to_json()}


# --------------------------------------------------------------------------
# verification

def _verify_field(d: dict) -> list[str]:
    F = specfield.SpecializedField.from_json(d)
    errs = []
    h = specfield.specialize(F.m, F.parameter)
    if list(F.h) != h:
        errs.append("polynomial does not match the point")
    disc = specfield.disc_resultant(h)
    if F.disc.value != disc:
        errs.append("discriminant mismatch")
    if any(not arith.is_prime(p) for p in F.disc.factors):
        errs.append("non-prime in discriminant factorization")
    for p in F.disc.primes():
        if specfield.ram_status(h, p, disc) is not F.ram_status.get(p):
            errs.append(f"status mismatch at {p}")
    if set(F.ram_status) != set(F.disc.primes()):
        errs.append("statuses do not cover the discriminant")
    if specfield.sturm_real_roots(h) != F.real_roots:
        errs.append("real root count mismatch")
    if F.galois_cert is None or not F.galois_cert.verify(h):
        errs.append("Galois certificate does not verify")
    if d["total"] != F.total or d["ram_set"] != F.ram_set.to_json():
        errs.append("ramified set mismatch")
    return errs


def _verify_payload(command: str, inputs: dict, payload: dict, seed: int = 0) -> list[str]:
    if command == "realize-sm":
        errs = _verify_field(payload["field"])
        if payload["field"]["total"] > 4:
            errs.append("total exceeds 4")
        return errs
    if command == "realize-smn":
        R = tower.TowerReport.from_json(payload["tower"])
        errs = []
        params = R.spec.parameters()
        for i, (F, raw) in enumerate(zip(R.factors, payload["tower"]["factors"])):
            if F.parameter != params[i]:
                errs.append(f"factor {i} parameter mismatch")
            errs.extend(f"factor {i}: {e}" for e in _verify_field(raw))
        if not tower.verify_independence(R.independence, [F.disc for F in R.factors]):
            errs.append("independence certificate does not verify")
        if R.total > R.target or payload["tower"]["total"] != R.total:
            errs.append("total mismatch or above target")
        return errs
    if command == "search gtz":
        Ls = forms.parse_forms(";".join(inputs["forms"]))
        S = PrimeSet.from_json(inputs["S"])
        try:
            forms.verify_gtz_witness(Ls, S, forms.ProjPoint.from_json(payload["point"]))
        except AssertionError as exc:
            return [str(exc)]
        if not forms.NeighborhoodVN(inputs["N"]).contains(forms.ProjPoint.from_json(payload["point"])):
            return ["witness outside V_N"]
        return []
    if command == "search empirical-B":
        Fs = forms.parse_forms(";".join(inputs["forms"]))
        S = PrimeSet.from_json(inputs["S"])
        P = forms.ProjPoint.from_json(payload["point"])
        count = forms._count_outside(tuple(Fs), S, P)
        return [] if count == payload["count"] else ["count mismatch"]
    # the remaining commands are cheap: recompute and compare
    if command not in _RECOMPUTE:
        return [f"unknown command {command!r}"]
    fresh = _RECOMPUTE[command](_namespace(inputs, seed=seed))[1]
    return [] if fresh == payload else ["recomputed payload differs"]


def cmd_verify(args) -> tuple[dict, dict]:
    try:
        with open(args.report) as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    if report.get("schema_version") != SCHEMA_VERSION:
        raise UsageError("unsupported schema version")
    errs = _verify_payload(report["command"], report["inputs"], report["result"], report.get("seed", 0))
    return {"report": args.report}, {"verified": not errs, "errors": errs, "command": report["command"]}


def _namespace(inputs: dict, **extra) -> argparse.Namespace:
    d = {"group2": None, "gens2": None, "degree2": None, "classes2": None, **inputs, **extra}
    for key in ("classes", "classes2", "degrees"):
        if isinstance(d.get(key), list):
            d[key] = ",".join(map(str, d[key]))
    return argparse.Namespace(**d)


_RECOMPUTE = {
    "groups check-ep": cmd_check_ep,
    "groups check-rigid": cmd_check_rigid,
    "groups product-tuple": cmd_product_tuple,
    "groups rigid-bound": cmd_rigid_bound,
    "search beta-bound": cmd_beta_bound,
    "universal-ram": cmd_universal_ram,
}


# --------------------------------------------------------------------------
# parser

class _Sub:
    """Subparser action that gives every leaf command the shared flags."""

    def __init__(self, action, common):
        self.action, self.common = action, common

    def add_parser(self, name, **kw):
        return self.action.add_parser(name, parents=[self.common], **kw)


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (default: all CPUs)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled commands")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="write the JSON report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(
        prog="minram",
        description="Witnesses for small ramification of S_m and S_m^n fields.",
        parents=[common],
    )
    ap.set_defaults(jobs=None, seed=0, output=None, verbose=False)
    sub = _Sub(ap.add_subparsers(dest="command", required=True), common)

    p = sub.add_parser("realize-sm", help="a field with group S_m ramified at <= 4 places")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-points", type=int, default=10**5)
    p.add_argument("--prime-budget", type=int, default=specfield.DEFAULT_PRIME_BUDGET)
    p.set_defaults(func=cmd_realize_sm, name="realize-sm")

    p = sub.add_parser("realize-smn", help="an S_m^n tower ramified at <= n+4 places")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=[tower.MULTIPLICATIVE, tower.ADDITIVE], default=tower.MULTIPLICATIVE)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--max-points", type=int, default=10**4)
    p.add_argument("--max-step", type=int, default=3)
    p.add_argument("--prime-budget", type=int, default=specfield.DEFAULT_PRIME_BUDGET)
    p.set_defaults(func=cmd_realize_smn, name="realize-smn")

    p = sub.add_parser("universal-ram", help="sampled upper bound for universally ramified primes")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(func=cmd_universal_ram, name="universal-ram")

    g = _Sub(sub.add_parser("groups", help="finite group checks").add_subparsers(dest="group_command", required=True), common)

    def group_args(q, suffix=""):
        q.add_argument(f"--group{suffix}", help="catalog name, products as S3xS3")
        q.add_argument(f"--gens{suffix}", help="generators in cycle notation, ';'-separated")
        q.add_argument(f"--degree{suffix}", type=int)

    q = g.add_parser("check-ep")
    group_args(q)
    q.add_argument("--p", type=int, required=True)
    q.set_defaults(func=cmd_check_ep, name="groups check-ep")

    q = g.add_parser("check-rigid")
    group_args(q)
    q.add_argument("--classes", required=True, help="class labels by cycle type, e.g. 2,2,3")
    q.add_argument("--budget", type=int, default=groups.DEFAULT_ENUM_BUDGET)
    q.set_defaults(func=cmd_check_rigid, name="groups check-rigid")

    q = g.add_parser("product-tuple")
    group_args(q)
    group_args(q, "2")
    q.add_argument("--classes", required=True)
    q.add_argument("--classes2")
    q.add_argument("--p", type=int, default=2)
    q.add_argument("--n", type=int, default=2)
    q.add_argument("--budget", type=int, default=groups.DEFAULT_ENUM_BUDGET)
    q.set_defaults(func=cmd_product_tuple, name="groups product-tuple")

    q = g.add_parser("rigid-bound")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--order", type=int, required=True)
    q.set_defaults(func=cmd_rigid_bound, name="groups rigid-bound")

    s = _Sub(
        sub.add_parser("search", help="prime-value searches and sieve bounds").add_subparsers(
            dest="search_command", required=True
        ),
        common,
    )
    q = s.add_parser("beta-bound")
    q.add_argument("--degrees", required=True, help="comma-separated degrees")
    q.set_defaults(func=cmd_beta_bound, name="search beta-bound")

    q = s.add_parser("gtz")
    q.add_argument("--forms", required=True, help="';'-separated linear forms in t, s")
    q.add_argument("--S", default="", help="finite primes of S; infinity is always included")
    q.add_argument("--N", type=int, default=1)
    q.add_argument("--max-candidates", type=int, default=10**6)
    q.set_defaults(func=cmd_gtz, name="search gtz")

    q = s.add_parser("empirical-B")
    q.add_argument("--forms")
    q.add_argument("--m", type=int, help="use the branch forms t, s, m^m t + (m-1)^(m-1) s")
    q.add_argument("--S", default="")
    q.add_argument("--N", type=int, default=1)
    q.add_argument("--max-candidates", type=int, default=10**4)
    q.set_defaults(func=cmd_empirical_b, name="search empirical-B")

    p = sub.add_parser("verify", help="re-check every certificate in a report")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify, name="verify")
    return ap


def run(argv: list[str] | None = None) -> tuple[int, dict | None]:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    set_default_jobs(args.jobs)
    start = time.monotonic()
    try:
        inputs, payload = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except forms.SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED, None
    except (groups.UndeterminedError, groups.GroupCapExceeded, arith.FactorizationError) as exc:
        print(f"undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED, None
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.name,
        "inputs": inputs,
        "seed": args.seed,
        "version": _version(),
        "wall_time": round(time.monotonic() - start, 6),
        "result": payload,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.name == "verify" and not payload["verified"]:
        return EXIT_VERIFY, report
    return EXIT_OK, report


def main(argv: list[str] | None = None) -> int:
    try:
        code, _ = run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return code


if __name__ == "__main__":
    sys.exit(main())

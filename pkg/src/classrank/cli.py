"""Command-line front end: classgroup, verify-certificate, search, tally, levin."""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import statistics
import sys
from fractions import Fraction
from pathlib import Path

from . import arith
from .arith import FactorizationBudgetExceeded
from .classgroup import ClassGroupBudgetExceeded, class_group, m_rank
from .families import CurveFamily, levin_family, toy_family, yamamoto_family
from .jacobian import (
    BadPrimeError,
    BudgetExceeded,
    HyperCurve,
    TorsionCertificate,
    certificate_bad_primes,
    divisor_from_certificate,
    divisor_order,
    independence_check,
    random_divisor,
    scalar_mul,
    to_odd_model,
    verify_certificate,
    zeta,
)
from .specialize import records_from_jsonl, records_to_csv, records_to_jsonl, run_search, tally

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

DEFAULTS = {
    "factor_budget": arith.DEFAULT_BUDGET,
    "classgroup_budget": 10**8,
    "measure_budget": 10**7,
    "zeta_budget": 10**7,
    "workers": 1,
    "seed": 0,
}


class UsageError(Exception):
    pass


def load_config(path: str | None) -> dict:
    cfg = dict(DEFAULTS)
    env = arith.default_budget()
    if env != arith.DEFAULT_BUDGET:
        cfg["factor_budget"] = env
    if path:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        flat = dict(data.get("budgets", {}))
        flat.update({k: v for k, v in data.items() if not isinstance(v, dict)})
        for key, value in flat.items():
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            cfg[key] = value
    return cfg


def _apply_overrides(cfg: dict, args) -> dict:
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    for key in ("factor_budget", "classgroup_budget", "measure_budget", "zeta_budget", "workers"):
        if cfg[key] <= 0:
            raise UsageError(f"{key} must be positive")
    return cfg


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- subcommands -----------------------------------------------------------


def cmd_classgroup(args, cfg) -> int:
    if not arith.is_fundamental_discriminant(args.D):
        raise UsageError(f"{args.D} is not a fundamental discriminant")
    S = class_group(args.D, budget=cfg["classgroup_budget"])
    report = S.to_json()
    report["m_ranks"] = {str(m): m_rank(S, m) for m in args.m}
    _emit(_dump(report), args.output)
    return 0


def _load_certificates(path: str) -> tuple[list[TorsionCertificate], Fraction | None]:
    obj = json.loads(Path(path).read_text())
    wp = None
    if isinstance(obj, dict) and "certificates" in obj:
        wp = obj.get("weierstrass_point")
        wp = None if wp is None else Fraction(wp)
        obj = obj["certificates"]
    if isinstance(obj, dict):
        obj = [obj]
    certs = [TorsionCertificate.from_json(c) for c in obj]
    if not certs:
        raise UsageError("no certificates in file")
    if len({(tuple(c.h.c), c.m) for c in certs}) != 1:
        raise UsageError("certificates must share the curve h and the integer m")
    return certs, wp


def cmd_verify_certificate(args, cfg) -> int:
    certs, wp = _load_certificates(args.path)
    m = certs[0].m
    report = {"m": m, "certificates": [], "primes": []}
    ok = True
    for cert in certs:
        good = verify_certificate(cert)
        report["certificates"].append({"identity_and_support": good})
        ok &= good
    if not ok:
        report["verdict"] = False
        _emit(_dump(report), args.output)
        return 1 if args.strict else 0
    C = HyperCurve(certs[0].h)
    if not C.is_odd:
        if wp is None and args.weierstrass is None:
            raise UsageError("even model: pass --weierstrass a (a rational root of h)")
        a = Fraction(args.weierstrass) if args.weierstrass is not None else wp
        C, cmap = to_odd_model(C, a)
        certs = [cmap.transport_certificate(c) for c in certs]
        report["odd_model"] = {"a": str(a), "h": C.h.to_strings()}
    rng = random.Random(cfg["seed"])
    bad = set().union(*(certificate_bad_primes(c) for c in certs))
    for p in args.primes:
        entry = {"p": p}
        if p in bad or (2 * m) % p == 0:
            entry["skipped"] = "bad prime for the curve or certificate, or p divides 2m"
            report["primes"].append(entry)
            continue
        try:
            Cp = C.reduce(p)
            divs = [divisor_from_certificate(c, p) for c in certs]
        except BadPrimeError as exc:
            entry["skipped"] = str(exc)
            report["primes"].append(entry)
            continue
        orders = [divisor_order(D, Cp, m) for D in divs]
        entry["divisors"] = [{"u": [str(a) for a in D.u.c], "v": [str(a) for a in D.v.c]} for D in divs]
        entry["orders"] = orders
        entry["exact_order_m"] = all(o == m for o in orders)
        entry["independent"] = independence_check(divs, m, Cp)
        entry["subgroup_checked"] = m ** len(divs)
        try:
            z = zeta(Cp, cfg["zeta_budget"])
            entry["jacobian_order"] = z.jacobian_order
            entry["weil_annihilates"] = all(
                scalar_mul(z.jacobian_order, random_divisor(Cp, rng), Cp).is_identity() for _ in range(args.samples)
            )
        except BudgetExceeded as exc:
            entry["jacobian_order"] = None
            entry["note"] = str(exc)
        ok &= entry["exact_order_m"] and entry["independent"]
        report["primes"].append(entry)
    checked = [e for e in report["primes"] if "skipped" not in e]
    report["verdict"] = ok and bool(checked)
    _emit(_dump(report), args.output)
    return 0 if report["verdict"] or not args.strict else 1


def _family_from_args(args) -> CurveFamily:
    if args.family == "toy":
        return toy_family(args.m)
    if args.family == "yamamoto":
        return yamamoto_family(args.m, Fraction(args.lam), args.N)
    if args.family_file:
        return CurveFamily.from_json(json.loads(Path(args.family_file).read_text()))
    raise UsageError("choose --family toy|yamamoto or --family-file")


def _run_records(args, cfg):
    family = _family_from_args(args)
    if args.t_max < args.t_min:
        return family, []
    records = run_search(
        family,
        family.m,
        range(args.t_min, args.t_max + 1),
        measure_budget=cfg["measure_budget"],
        workers=cfg["workers"],
        factor_budget=cfg["factor_budget"],
    )
    return family, records


def cmd_search(args, cfg) -> int:
    _, records = _run_records(args, cfg)
    if args.format == "csv":
        text = records_to_csv(records)
    elif args.format == "json":
        text = _dump([r.to_json() for r in records])
    else:
        text = records_to_jsonl(records)
    _emit(text, args.output)
    return 0


def cmd_tally(args, cfg) -> int:
    if args.records:
        records = records_from_jsonl(Path(args.records).read_text())
        genus = args.genus
    else:
        family, records = _run_records(args, cfg)
        genus = family.genus
    reports = [tally(records, X, args.target_rank, genus).to_json() for X in args.X]
    _emit(_dump({"reports": reports, "records": len(records)}), args.output)
    return 0


def cmd_levin(args, cfg) -> int:
    fam, L = levin_family(args.m, args.d, args.a, args.c0)
    samples = []
    logs_t, logs_d = [], []
    for t in range(args.t_min, args.t_max + 1):
        F = L.fibre_polynomial(t)
        _, prim = F.content_primitive()
        disc = prim.discriminant()
        samples.append({"t": t, "polynomial": prim.to_strings(), "discriminant": str(disc)})
        if t > 0 and disc != 0:
            logs_t.append(math.log(t))
            logs_d.append(math.log(abs(disc.numerator)))
    slope = statistics.linear_regression(logs_t, logs_d).slope if len(logs_t) >= 2 else None
    report = {
        "m": L.m,
        "d": L.d,
        "r": L.r,
        "a": list(L.a),
        "h": L.h.to_strings(),
        "f": L.f.to_strings(),
        "b": L.b,
        "ord_x(f^m - h)": (L.f**L.m - L.h).ord_x(),
        "psi": L.psi_expression(),
        "phi": L.phi_expression(),
        "c0": L.c0,
        "Delta0": L.delta0,
        "deg_phi": fam.phi_degree,
        "claimed_rank": fam.claimed_rank,
        "discriminant_exponent": (L.m + 1) * L.d - 1,
        "fitted_slope": slope,
        "samples": samples if args.emit_polynomials else len(samples),
        "note": "polynomial discriminants bound the field discriminants; class groups of these fields are not computed",
    }
    _emit(_dump(report), args.output)
    return 0


# --- parser ----------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="classrank", description="Class-group rank lower bounds from Jacobian torsion.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with budgets, workers and seed")
    common.add_argument("--output", "-o", help="write output to this file instead of stdout")
    common.add_argument("--factor-budget", dest="factor_budget", type=int)
    common.add_argument("--classgroup-budget", dest="classgroup_budget", type=int)
    common.add_argument("--measure-budget", dest="measure_budget", type=int)
    common.add_argument("--zeta-budget", dest="zeta_budget", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--seed", type=int)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", parents=[common], help="class group structure and m-ranks")
    p.add_argument("-D", type=int, required=True, help="fundamental discriminant")
    p.add_argument("-m", type=int, action="append", default=[], help="report the m-rank (repeatable)")
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("verify-certificate", parents=[common], help="check torsion certificates modulo primes")
    p.add_argument("path", help="certificate JSON (one object, a list, or {certificates, weierstrass_point})")
    p.add_argument("--primes", type=_int_list, default=[5, 7])
    p.add_argument("--weierstrass", help="rational root of h used to reach an odd model")
    p.add_argument("--samples", type=int, default=10, help="random divisors for the #J spot check")
    p.add_argument("--strict", action="store_true", help="exit 1 when the verdict is negative")
    p.set_defaults(func=cmd_verify_certificate)

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", choices=["toy", "yamamoto"])
    fam.add_argument("--family-file", help="family description JSON")
    fam.add_argument("-m", type=int, default=3)
    fam.add_argument("--lambda", dest="lam", default="2")
    fam.add_argument("-N", type=int, default=1, help="Yamamoto fibres approach x = 1 at rate Delta^N")
    fam.add_argument("--t-min", type=int, default=1)
    fam.add_argument("--t-max", type=int, default=49)

    p = sub.add_parser("search", parents=[common, fam], help="specialize a family over a range of t")
    p.add_argument("--format", choices=["jsonl", "json", "csv"], default="jsonl")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("tally", parents=[common, fam], help="count distinct fields with certified rank")
    p.add_argument("--records", help="JSONL records from a previous search")
    p.add_argument("--genus", type=int, default=1, help="genus for the reference curve when reading records")
    p.add_argument("-X", type=int, action="append", required=True, help="discriminant bound (repeatable)")
    p.add_argument("--target-rank", type=int, default=1)
    p.set_defaults(func=cmd_tally)

    p = sub.add_parser("levin", parents=[common], help="higher-degree construction report")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--a", type=_int_list, help="comma separated a_1..a_r (default 1..r)")
    p.add_argument("--c0", type=int, default=0)
    p.add_argument("--t-min", type=int, default=1)
    p.add_argument("--t-max", type=int, default=30)
    p.add_argument("--emit-polynomials", action="store_true")
    p.set_defaults(func=cmd_levin)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        # factorization reads its budget from the environment, which worker processes inherit
        os.environ["CLASSRANK_BUDGET"] = str(cfg["factor_budget"])
        return args.func(args, cfg)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FactorizationBudgetExceeded, ClassGroupBudgetExceeded, BudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Specialization of a family at integer parameters and certified class-rank bounds.

A fibre P_t gives a quadratic field K_t = Q(y(P_t)) and values gamma_i(P_t).
When these are m-Selmer elements, the sequence

    1 -> O^x / (O^x)^m -> Sel^m(K) -> Cl(K)[m] -> 0

bounds the m-rank of the class group from below by the m-rank of the
subgroup they span minus the number of generators of the unit quotient.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_form

from .arith import squarefree_part
from .classgroup import (
    DEFAULT_CLASSGROUP_BUDGET,
    QuadForm,
    class_group,
    class_number,
    class_of_ideal,
    form_order,
    m_rank,
)
from .families import CurveFamily
from .quadfield import (
    PrimeIdealFactor,
    QuadElt,
    QuadField,
    ideal_factorization,
    is_mth_power,
    kummer_degree,
    linearly_disjoint_from_cyclotomic,
    make_field,
    selmer_member,
)

SCHEMA_VERSION = 1
DEFAULT_MEASURE_BUDGET = 10**7


@dataclass
class SpecRecord:
    t: int
    x: Fraction | None = None
    value: Fraction | None = None
    K: QuadField | None = None
    gammas: list[QuadElt] = field(default_factory=list)
    degenerate: bool = False
    note: str = ""
    selmer: list[bool] = field(default_factory=list)
    kummer: list[int] = field(default_factory=list)
    cond_i: bool | None = None
    cond_ii: bool | None = None
    cond_iii: bool | None = None
    selmer_rank_witness: int | None = None
    certified_bound: int | None = None
    measured_rank: int | None = None
    class_invariants: tuple[int, ...] | None = None
    error: str | None = None

    @property
    def D(self) -> int | None:
        return None if self.K is None else self.K.D

    def to_json(self) -> dict:
        K = self.K
        return {
            "schema": SCHEMA_VERSION,
            "t": self.t,
            "x": None if self.x is None else str(self.x),
            "value": None if self.value is None else str(self.value),
            "D": None if K is None else K.D,
            "signature": None if K is None else K.signature,
            "gammas": [g.to_json() for g in self.gammas],
            "degenerate": self.degenerate,
            "note": self.note,
            "selmer": self.selmer,
            "kummer": self.kummer,
            "cond_i": self.cond_i,
            "cond_ii": self.cond_ii,
            "cond_iii": self.cond_iii,
            "selmer_rank_witness": self.selmer_rank_witness,
            "certified_bound": self.certified_bound,
            "measured_rank": self.measured_rank,
            "class_invariants": None if self.class_invariants is None else list(self.class_invariants),
            "class_group": None if K is None else ("narrow" if K.D > 0 else "ordinary"),
            "error": self.error,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SpecRecord":
        from .quadfield import field_from_discriminant

        K = None if obj.get("D") is None else field_from_discriminant(obj["D"])
        gammas = [K(Fraction(a), Fraction(b)) for a, b in obj.get("gammas", [])] if K else []
        inv = obj.get("class_invariants")
        return cls(
            t=obj["t"],
            x=None if obj.get("x") is None else Fraction(obj["x"]),
            value=None if obj.get("value") is None else Fraction(obj["value"]),
            K=K,
            gammas=gammas,
            degenerate=obj.get("degenerate", False),
            note=obj.get("note", ""),
            selmer=obj.get("selmer", []),
            kummer=obj.get("kummer", []),
            cond_i=obj.get("cond_i"),
            cond_ii=obj.get("cond_ii"),
            cond_iii=obj.get("cond_iii"),
            selmer_rank_witness=obj.get("selmer_rank_witness"),
            certified_bound=obj.get("certified_bound"),
            measured_rank=obj.get("measured_rank"),
            class_invariants=None if inv is None else tuple(inv),
            error=obj.get("error"),
        )


def specialize_fiber(family: CurveFamily, t: int) -> SpecRecord:
    """Field K_t and gamma values at the fibre over t (conditions unchecked)."""
    if family.cover_degree != 2:
        raise ValueError("specialization into quadratic fields needs a hyperelliptic family")
    if family.fibre_map is None:
        raise ValueError("family has no fibre map")
    rec = SpecRecord(t=t)
    x = family.fibre_map(t)
    if x is None:
        rec.degenerate, rec.note = True, "fibre map has a pole"
        return rec
    rec.x = x
    value = family.h(x)
    rec.value = value
    if value == 0:
        rec.degenerate, rec.note = True, "defining value is zero"
        return rec
    # value = num/den = num*den / den^2
    s, f = squarefree_part(value.numerator * value.denominator)
    if s == 1:
        rec.degenerate, rec.note = True, "defining value is a square"
        return rec
    K = make_field(s)
    rec.K = K
    y = K(0, Fraction(f, value.denominator))
    rec.gammas = [g.evaluate(x, y) for g in family.gammas]
    if any(not g for g in rec.gammas):
        rec.degenerate, rec.note = True, "a gamma function vanishes at the fibre"
    return rec


def check_conditions(rec: SpecRecord, m: int, budget: int | None = None) -> SpecRecord:
    """(i) Selmer membership, (ii) full Kummer degree, (iii) disjointness from Q(zeta_m)."""
    if rec.degenerate or rec.K is None:
        raise ValueError("conditions are only defined for non-degenerate fibres")
    rec.selmer = [selmer_member(g, m, budget) for g in rec.gammas]
    rec.kummer = [kummer_degree(g, m) for g in rec.gammas]
    rec.cond_i = all(rec.selmer)
    rec.cond_ii = all(k == m for k in rec.kummer)
    rec.cond_iii = linearly_disjoint_from_cyclotomic(rec.K, m)
    return rec


def _quotient_invariants(gens: list[QuadElt], m: int) -> list[int]:
    """Invariant factors of the subgroup of K^x/(K^x)^m spanned by gens."""
    s = len(gens)
    if s == 0:
        return []
    relations = [[m if i == j else 0 for j in range(s)] for i in range(s)]
    for exps in itertools.product(range(m), repeat=s):
        if not any(exps):
            continue
        prod = gens[0].field(1)
        for g, e in zip(gens, exps):
            prod = prod * g**e
        if is_mth_power(prod, m):
            relations.append(list(exps))
    snf = smith_normal_form(sympy.Matrix(relations), domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return sorted(d for d in diag if d != 1)


def witness_rank(gens: list[QuadElt], m: int) -> int:
    """m-rank of the subgroup spanned by gens modulo m-th powers."""
    return sum(1 for d in _quotient_invariants(gens, m) if d == m)


def unit_quotient_generators(K: QuadField, m: int) -> int:
    """Number of generators of O^x / (O^x)^m: the unit rank, plus one if roots of unity survive."""
    return K.unit_rank + (1 if math.gcd(K.roots_of_unity(), m) > 1 else 0)


def certified_bound(rec: SpecRecord, m: int) -> int:
    """Lower bound for rank_m Cl(K_t) from the witnesses passing (i) and (ii); needs (iii)."""
    if rec.cond_iii is None:
        raise ValueError("conditions not checked")
    passing = [g for g, sel, kd in zip(rec.gammas, rec.selmer, rec.kummer) if sel and kd == m]
    rec.selmer_rank_witness = witness_rank(passing, m)
    if not rec.cond_iii:
        rec.certified_bound = 0
    else:
        rec.certified_bound = max(0, rec.selmer_rank_witness - unit_quotient_generators(rec.K, m))
    return rec.certified_bound


def selmer_to_class(g: QuadElt, m: int) -> tuple[QuadForm, int]:
    """Class of the ideal a with (g) = a^m, and its exact order (narrow order when D > 0)."""
    factors = ideal_factorization(g)
    if any(f.exponent % m for f in factors):
        raise ValueError("element is not in the m-Selmer group")
    root = [PrimeIdealFactor(f.p, f.kind, f.root, f.exponent // m) for f in factors]
    K = g.field
    form = class_of_ideal(root, K)
    return form, form_order(form, class_number(K.D))


def process_fiber(
    family: CurveFamily,
    t: int,
    m: int | None = None,
    measure_budget: int = DEFAULT_MEASURE_BUDGET,
    factor_budget: int | None = None,
) -> SpecRecord:
    """Full pipeline for one fibre; failures are stored on the record."""
    m = family.m if m is None else m
    rec = SpecRecord(t=t)
    try:
        rec = specialize_fiber(family, t)
        if rec.degenerate:
            return rec
        check_conditions(rec, m, factor_budget)
        certified_bound(rec, m)
        if abs(rec.K.D) <= min(measure_budget, DEFAULT_CLASSGROUP_BUDGET):
            S = class_group(rec.K.D)
            rec.class_invariants = S.invariants
            rec.measured_rank = m_rank(S, m)
    except Exception as exc:  # one bad fibre must not stop the sweep
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _worker(args):
    return process_fiber(*args)


def run_search(
    family: CurveFamily,
    m: int | None = None,
    t_range=range(0),
    measure_budget: int = DEFAULT_MEASURE_BUDGET,
    workers: int = 1,
    factor_budget: int | None = None,
) -> list[SpecRecord]:
    """Records for every t in t_range, in increasing t regardless of worker count."""
    ts = sorted(t_range)
    jobs = [(family, t, m, measure_budget, factor_budget) for t in ts]
    if workers <= 1 or len(jobs) < 2:
        return [_worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_worker, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


@dataclass(frozen=True)
class TallyReport:
    X: int
    target_rank: int
    count: int
    discriminants: tuple[int, ...]
    reference: float
    exponent: Fraction
    histogram: dict[int, int]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "X": self.X,
            "target_rank": self.target_rank,
            "count": self.count,
            "discriminants": list(self.discriminants),
            "reference_exponent": str(self.exponent),
            "reference": self.reference,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def tally(records: list[SpecRecord], X: int, target_rank: int = 1, genus: int = 1, exponent=None) -> TallyReport:
    """Distinct fundamental discriminants |D| <= X with certified bound >= target_rank.

    The reference curve is X^e / log X with e = 1/(2g+1) unless another
    exponent is given; no implied constant is asserted.
    """
    exponent = Fraction(1, 2 * genus + 1) if exponent is None else Fraction(exponent)
    found = sorted(
        {
            r.D
            for r in records
            if r.D is not None and r.certified_bound is not None and r.certified_bound >= target_rank and abs(r.D) <= X
        },
        key=lambda D: (abs(D), D),
    )
    hist: dict[int, int] = {}
    for D in found:
        decade = len(str(abs(D))) - 1
        hist[decade] = hist.get(decade, 0) + 1
    ref = X ** float(exponent) / math.log(X) if X > 1 else 0.0
    return TallyReport(X, target_rank, len(found), tuple(found), ref, exponent, hist)


CSV_FIELDS = ["t", "D", "degenerate", "cond_i", "cond_ii", "cond_iii", "certified_bound", "measured_rank", "error"]


def records_to_jsonl(records: list[SpecRecord]) -> str:
    return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in records)


def records_from_jsonl(text: str) -> list[SpecRecord]:
    return [SpecRecord.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]


def records_to_csv(records: list[SpecRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = r.to_json()
        writer.writerow({k: "" if row[k] is None else row[k] for k in CSV_FIELDS})
    return buf.getvalue()

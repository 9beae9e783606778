"""Component decomposition of the order-p^k subgroup count under splitting.

After splitting off an etale part of rank h = n - t, the scheme counting
order-p^k subgroups decomposes into components indexed by the isotypic
classes of actions of (Z/p^k)^h, each component labelled by a subgroup
L <= (Z/p^k)^h (the dual image) and carrying a fiber rank: the number of
order-p^k subgroups of (Z/p^k)^t + (Z/p^k)^h projecting exactly onto L.

Triviality of each class's transfer ideal is decided twice, through the
transfer-orbit indices and through the diagonal-factorization test, and a
disagreement is a hard error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import abelian, classfun, homclass
from .abelian import Ambient, AbSubgroup
from .errors import BadParameters, InternalMismatch, ResourceLimit
from .perm import block_subgroup, symmetric_group

FIBER_AMBIENT_CAP = 10 ** 4

CONVENTION = "geometric-point-count"


@dataclass(frozen=True)
class ComponentRecord:
    hom_class: homclass.HomClass
    isotypic: bool
    m: int
    dual_image: AbSubgroup
    ideal_trivial: bool
    fiber_rank: object  # int for surviving components, None otherwise
    centralizer_order: int

    @property
    def class_id(self) -> str:
        return self.hom_class.class_id()


@dataclass(frozen=True)
class DecompositionReport:
    p: int
    n: int
    t: int
    k: int
    records: tuple
    total_degree: int
    rank_sum: int
    convention: str = CONVENTION

    @property
    def nontrivial(self):
        return [r for r in self.records if not r.ideal_trivial]


def fiber_rank(L: AbSubgroup, p: int, n: int, t: int, k: int) -> int:
    """Order-p^k subgroups of (Z/p^k)^t + (Z/p^k)^{n-t} projecting onto L.

    Counted by brute force over the split model, with the formal part the
    first t coordinates and the etale part the last n-t.
    """
    h = n - t
    if L.ambient != Ambient(p, k, h):
        raise BadParameters("L lives in the wrong ambient group")
    if L.order > p ** k:
        raise BadParameters("label subgroup has order above p^k")
    full = Ambient(p, k, n)
    if full.order > FIBER_AMBIENT_CAP:
        raise ResourceLimit("split model of order %d exceeds cap" % full.order)
    target = set(L.elements)
    count = 0
    for sub in abelian.subgroups_of_ambient(full, order=p ** k):
        proj = {vec[t:] for vec in sub.elements}
        if proj == target:
            count += 1
    return count


def _validate_params(p, n, t, k):
    abelian.check_prime(p)
    if not 0 <= t < n:
        raise BadParameters("need 0 <= t < n")
    if k < 1:
        raise BadParameters("need k >= 1")
    if p ** k > 9:
        raise ResourceLimit("p^k = %d exceeds the desk-scale cap of 9" % p ** k)
    if n - t > 3:
        raise ResourceLimit("etale rank n - t exceeds 3")


def decompose(p: int, n: int, t: int, k: int) -> DecompositionReport:
    """One record per class; triviality cross-validated; ranks attached."""
    _validate_params(p, n, t, k)
    h = n - t
    classes = homclass.enumerate_hom_classes(p, h, k)
    G = symmetric_group(p ** k)
    H = block_subgroup(p ** (k - 1), p)
    records = []
    for hc in classes:
        datum = classfun.transfer_datum(G, H, hc)
        if t == 0:
            trivial = datum.fixed_count > 0
            # with p inverted, only classes with no stable coset survive;
            # for the p-block subgroup those are exactly the transitive ones
            transitive = len(hc.orbit_types) == 1 and hc.orbit_types[0][1] == 1
            if trivial != (not transitive):
                raise InternalMismatch(
                    "p-inverted triviality disagrees with transitivity on %s"
                    % hc.class_id()
                )
        else:
            trivial = any(rec.index % p != 0 for rec in datum.records)
            iso = homclass.is_isotypic(hc)
            if trivial != (not iso):
                raise InternalMismatch(
                    "transfer-orbit criterion and diagonal criterion disagree on %s"
                    % hc.class_id()
                )
        iso = homclass.is_isotypic(hc)
        m = homclass.minimal_level(hc)
        L = homclass.dual_image(hc)
        if iso and L.order != p ** m:
            raise InternalMismatch("isotypic class with |L| != p^m: %s" % hc.class_id())
        rank = None if trivial else fiber_rank(L, p, n, t, k)
        records.append(
            ComponentRecord(
                hom_class=hc,
                isotypic=iso,
                m=m,
                dual_image=L,
                ideal_trivial=trivial,
                fiber_rank=rank,
                centralizer_order=homclass.centralizer_order(hc),
            )
        )
    degree = abelian.count_sublattices(n, p, k)
    rank_sum = sum(r.fiber_rank for r in records if r.fiber_rank is not None)
    report = DecompositionReport(
        p=p, n=n, t=t, k=k,
        records=tuple(records),
        total_degree=degree,
        rank_sum=rank_sum,
    )
    _validate_report(report)
    return report


def _validate_report(report: DecompositionReport):
    p, t, k = report.p, report.t, report.k
    h = report.n - report.t
    survivors = report.nontrivial
    if t > 0:
        expected = abelian.sub_leq_count(h, p, k)
    else:
        expected = abelian.count_sublattices(h, p, k)
    if len(survivors) != expected:
        raise InternalMismatch(
            "%d surviving components, expected %d" % (len(survivors), expected)
        )
    if report.rank_sum != report.total_degree:
        raise InternalMismatch(
            "rank sum %d != degree %d" % (report.rank_sum, report.total_degree)
        )


def triangle_failures(report: DecompositionReport):
    """Diagnostics for the commutative-triangle check; empty means it holds.

    (a) the surviving components map bijectively onto the subgroups of
        order <= p^k via the dual image, (b) the fiber ranks add up to the
        total degree, (c) per order the component count matches the closed
        form.  For a p-inverted report clause (a) restricts to order p^k.
    """
    p, k = report.p, report.k
    h = report.n - report.t
    failures = []
    survivors = report.nontrivial
    labels = [r.dual_image.elements for r in survivors]
    orders = range(k + 1) if report.t > 0 else [k]
    expected = []
    for m in orders:
        expected.extend(
            s.elements for s in abelian.enumerate_subgroups(h, p, k, p ** m)
        )
    if sorted(labels) != sorted(expected):
        failures.append(
            "(a) dual images are not a bijective labelling by subgroups of order <= p^k"
        )
    total = sum(r.fiber_rank for r in survivors if r.fiber_rank is not None)
    if total != report.total_degree:
        failures.append(
            "(b) fiber ranks add to %d, degree is %d" % (total, report.total_degree)
        )
    if report.t > 0:
        for m in range(k + 1):
            got = sum(1 for r in survivors if r.dual_image.order == p ** m)
            want = abelian.count_sublattices(h, p, m)
            if got != want:
                failures.append(
                    "(c) %d components of label order p^%d, expected %d" % (got, m, want)
                )
    return failures


def verify_triangle(report: DecompositionReport) -> bool:
    return not triangle_failures(report)


# ---------------------------------------------------------------------------
# serialization


def report_to_dict(report: DecompositionReport) -> dict:
    return {
        "p": report.p,
        "n": report.n,
        "t": report.t,
        "k": report.k,
        "degree": report.total_degree,
        "rank_sum": report.rank_sum,
        "convention": report.convention,
        "components": [
            {
                "class_id": r.class_id,
                "isotypic": r.isotypic,
                "m": r.m,
                "L": {
                    "order": r.dual_image.order,
                    "generators": [list(g) for g in r.dual_image.generators()],
                },
                "ideal_trivial": r.ideal_trivial,
                "fiber_rank": r.fiber_rank,
                "centralizer_order": r.centralizer_order,
            }
            for r in report.records
        ],
    }


def report_from_dict(data: dict) -> DecompositionReport:
    p, n, t, k = data["p"], data["n"], data["t"], data["k"]
    h = n - t
    lam = homclass.lam_group(p, h, k)
    classes = {hc.class_id(): hc for hc in homclass.enumerate_hom_classes(p, h, k)}
    records = []
    for comp in data["components"]:
        hc = classes[comp["class_id"]]
        L = AbSubgroup.span(lam, [tuple(g) for g in comp["L"]["generators"]])
        if L.order != comp["L"]["order"]:
            raise ValueError("inconsistent dual image in report")
        records.append(
            ComponentRecord(
                hom_class=hc,
                isotypic=comp["isotypic"],
                m=comp["m"],
                dual_image=L,
                ideal_trivial=comp["ideal_trivial"],
                fiber_rank=comp["fiber_rank"],
                centralizer_order=comp["centralizer_order"],
            )
        )
    return DecompositionReport(
        p=p, n=n, t=t, k=k,
        records=tuple(records),
        total_degree=data["degree"],
        rank_sum=data["rank_sum"],
        convention=data.get("convention", CONVENTION),
    )


def report_to_json(report: DecompositionReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> DecompositionReport:
    return report_from_dict(json.loads(text))


def render_table(report: DecompositionReport) -> str:
    head = "decomposition p=%d n=%d t=%d k=%d  degree=%d  convention=%s" % (
        report.p, report.n, report.t, report.k,
        report.total_degree, report.convention,
    )
    rows = [["class", "isotypic", "m", "|L|", "trivial", "fiber", "|C|"]]
    for r in report.records:
        rows.append(
            [
                r.class_id,
                "yes" if r.isotypic else "no",
                str(r.m),
                str(r.dual_image.order),
                "yes" if r.ideal_trivial else "no",
                "-" if r.fiber_rank is None else str(r.fiber_rank),
                str(r.centralizer_order),
            ]
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = [head, ""]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    lines.append("")
    lines.append("rank sum = %d" % report.rank_sum)
    return "\n".join(lines)

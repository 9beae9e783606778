import math

import pytest

from transchrome import decomp
from transchrome.abelian import (
    AbSubgroup,
    count_sublattices,
    enumerate_subgroups,
    sub_leq_count,
)
from transchrome.errors import BadParameters, ResourceLimit
from transchrome.homclass import enumerate_hom_classes, lam_group


def by_label_order(report):
    return sorted((r.dual_image.order, r.fiber_rank) for r in report.nontrivial)


def test_decompose_2_2_1_1():
    report = decomp.decompose(2, 2, 1, 1)
    assert report.total_degree == 3
    assert by_label_order(report) == [(1, 1), (2, 2)]
    assert decomp.verify_triangle(report)


def test_decompose_2_2_1_2():
    report = decomp.decompose(2, 2, 1, 2)
    assert report.total_degree == 7
    assert by_label_order(report) == [(1, 1), (2, 2), (4, 4)]
    surviving = {r.class_id for r in report.nontrivial}
    assert surviving == {
        "p2.k2.h1:[(U<1>:idx1,m4)]",
        "p2.k2.h1:[(U<2>:idx2,m2)]",
        "p2.k2.h1:[(U<0>:idx4,m1)]",
    }
    assert decomp.verify_triangle(report)


def test_decompose_p_inverted():
    report = decomp.decompose(3, 1, 0, 1)
    assert len(report.nontrivial) == 1
    assert report.nontrivial[0].dual_image.order == 3
    assert report.total_degree == 1
    assert decomp.verify_triangle(report)


def test_decompose_rejects_bad_parameters():
    with pytest.raises(BadParameters):
        decomp.decompose(2, 2, 2, 1)
    with pytest.raises(BadParameters):
        decomp.decompose(2, 2, 1, 0)
    with pytest.raises(ResourceLimit):
        decomp.decompose(2, 2, 1, 4)
    with pytest.raises(ResourceLimit):
        decomp.decompose(2, 5, 1, 1)


def test_fiber_rank_examples():
    lam = lam_group(2, 1, 2)
    full = AbSubgroup.full(lam)
    triv = AbSubgroup.trivial(lam)
    half = AbSubgroup.span(lam, [(2,)])
    assert decomp.fiber_rank(full, 2, 2, 1, 2) == 4  # p^{kt}
    assert decomp.fiber_rank(triv, 2, 2, 1, 2) == 1  # height-1 count of order-4 subgroups
    assert decomp.fiber_rank(half, 2, 2, 1, 2) == 2


def test_fiber_rank_partitions_total_degree():
    # every order-p^k subgroup projects onto exactly one label
    for p, n, t, k in [(2, 2, 1, 2), (2, 3, 1, 1), (2, 3, 2, 1), (3, 2, 1, 1)]:
        h = n - t
        total = 0
        for m in range(k + 1):
            for L in enumerate_subgroups(h, p, k, p ** m):
                total += decomp.fiber_rank(L, p, n, t, k)
        assert total == count_sublattices(n, p, k)


def test_fiber_rank_extremes_match_closed_forms():
    for p, n, t, k in [(2, 2, 1, 1), (2, 2, 1, 2), (3, 2, 1, 1), (2, 3, 2, 1)]:
        h = n - t
        lam = lam_group(p, h, k)
        assert decomp.fiber_rank(AbSubgroup.trivial(lam), p, n, t, k) == count_sublattices(t, p, k)
        cyclic = AbSubgroup.span(lam, [(1,) + (0,) * (h - 1)])
        assert cyclic.order == p ** k
        assert decomp.fiber_rank(cyclic, p, n, t, k) == p ** (k * t)


def test_component_counts_match_closed_form():
    for p, h, k in [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1)]:
        report = decomp.decompose(p, h + 1, 1, k)
        assert len(report.nontrivial) == sub_leq_count(h, p, k)
        assert len(report.records) == len(enumerate_hom_classes(p, h, k))


def test_isotypic_iff_surviving():
    for p, n, t, k in [(2, 2, 1, 2), (2, 3, 1, 1), (3, 2, 1, 2)]:
        report = decomp.decompose(p, n, t, k)
        for rec in report.records:
            assert rec.ideal_trivial == (not rec.isotypic)
            if not rec.ideal_trivial:
                assert rec.dual_image.order == p ** rec.m


def test_wreath_centralizer_order_identity():
    # height boundary t = n-1, rank one: surviving classes have centralizers
    # of wreath-product order (p^i)^(p^j) * (p^j)! with i + j = k
    for p, k in [(2, 2), (2, 3), (3, 2)]:
        report = decomp.decompose(p, 2, 1, k)
        for rec in report.nontrivial:
            i = rec.m
            j = k - i
            assert rec.centralizer_order == (p ** i) ** (p ** j) * math.factorial(p ** j)


def test_verify_triangle_fault_injection():
    report = decomp.decompose(2, 2, 1, 2)
    assert decomp.verify_triangle(report)

    bad_records = []
    for rec in report.records:
        if rec.fiber_rank is not None and not bad_records:
            bad_records.append(
                decomp.ComponentRecord(
                    hom_class=rec.hom_class,
                    isotypic=rec.isotypic,
                    m=rec.m,
                    dual_image=rec.dual_image,
                    ideal_trivial=rec.ideal_trivial,
                    fiber_rank=rec.fiber_rank + 1,
                    centralizer_order=rec.centralizer_order,
                )
            )
        else:
            bad_records.append(rec)
    tampered = decomp.DecompositionReport(
        p=report.p, n=report.n, t=report.t, k=report.k,
        records=tuple(bad_records),
        total_degree=report.total_degree,
        rank_sum=report.rank_sum,
    )
    failures = decomp.triangle_failures(tampered)
    assert not decomp.verify_triangle(tampered)
    assert any("(b)" in f for f in failures)


def test_verify_triangle_detects_bad_labelling():
    report = decomp.decompose(2, 2, 1, 1)
    lam = lam_group(2, 1, 1)
    full = AbSubgroup.full(lam)
    bad_records = tuple(
        decomp.ComponentRecord(
            hom_class=rec.hom_class,
            isotypic=rec.isotypic,
            m=rec.m,
            dual_image=full,
            ideal_trivial=rec.ideal_trivial,
            fiber_rank=rec.fiber_rank,
            centralizer_order=rec.centralizer_order,
        )
        for rec in report.records
    )
    tampered = decomp.DecompositionReport(
        p=report.p, n=report.n, t=report.t, k=report.k,
        records=bad_records,
        total_degree=report.total_degree,
        rank_sum=report.rank_sum,
    )
    failures = decomp.triangle_failures(tampered)
    assert any("(a)" in f for f in failures)


def test_report_json_round_trip():
    report = decomp.decompose(2, 2, 1, 2)
    text = decomp.report_to_json(report)
    parsed = decomp.report_from_json(text)
    assert parsed == report
    assert decomp.report_to_json(parsed) == text


def test_report_table_rendering():
    report = decomp.decompose(2, 2, 1, 1)
    table = decomp.render_table(report)
    assert "degree=3" in table
    assert "rank sum = 3" in table
    assert table.count("\n") >= 4


def test_decompose_raises_on_criteria_disagreement(monkeypatch):
    # force the diagonal test to lie: the transfer-orbit criterion must
    # catch it as a hard, build-failing error
    from transchrome.errors import InternalMismatch

    monkeypatch.setattr(decomp.homclass, "is_isotypic", lambda hc: False)
    with pytest.raises(InternalMismatch):
        decomp.decompose(2, 2, 1, 1)


def test_decompose_is_safe_under_concurrent_calls():
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=4) as pool:
        reports = list(pool.map(lambda _: decomp.decompose(2, 2, 1, 2), range(4)))
    assert all(r == reports[0] for r in reports)
    assert all(decomp.report_to_json(r) == decomp.report_to_json(reports[0]) for r in reports)


@pytest.mark.parametrize("p,n,t,k", [(5, 1, 0, 1), (5, 2, 1, 1), (7, 2, 1, 1),
                                     (2, 4, 1, 1), (3, 3, 2, 1), (2, 4, 3, 2)])
def test_decompose_other_primes_and_ranks(p, n, t, k):
    report = decomp.decompose(p, n, t, k)
    assert decomp.verify_triangle(report)
    h = n - t
    want = sub_leq_count(h, p, k) if t > 0 else count_sublattices(h, p, k)
    assert len(report.nontrivial) == want
    assert report.rank_sum == count_sublattices(n, p, k)


def test_larger_instances_clean():
    # the two desk-scale heavyweights: blocks of 4 in Sym(8), blocks of 3 in Sym(9)
    report8 = decomp.decompose(2, 2, 1, 3)
    assert report8.total_degree == 15
    assert len(report8.nontrivial) == sub_leq_count(1, 2, 3)
    assert decomp.verify_triangle(report8)

    report9 = decomp.decompose(3, 2, 1, 2)
    assert report9.total_degree == 13
    assert len(report9.nontrivial) == sub_leq_count(1, 3, 2)
    assert decomp.verify_triangle(report9)

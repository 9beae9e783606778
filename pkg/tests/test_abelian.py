import itertools

import pytest
from hypothesis import given, settings, strategies as st

from transchrome.abelian import (
    Ambient,
    AbSubgroup,
    annihilator,
    count_sublattices,
    enumerate_subgroups,
    sub_leq_count,
    subgroups_of_ambient,
)
from transchrome.errors import BadParameters, NotPrime, ResourceLimit


def brute_force_subgroups(ambient, order):
    """Oracle: closures of all generating pairs/triples, deduplicated."""
    elems = ambient.elements()
    found = set()
    for r in range(1, 4):
        for gens in itertools.combinations(elems, r):
            sub = AbSubgroup.span(ambient, gens)
            if sub.order == order:
                found.add(sub.elements)
    return found


def test_enumerate_subgroups_z4_squared():
    subs = enumerate_subgroups(2, 2, 2, 4)
    assert len(subs) == 7
    # oracle: independent closure enumeration over generating pairs
    assert {s.elements for s in subs} == brute_force_subgroups(Ambient(2, 2, 2), 4)


def test_enumerate_subgroups_small():
    assert len(enumerate_subgroups(1, 3, 1, 3)) == 1
    assert len(enumerate_subgroups(2, 2, 1, 2)) == 3


def test_enumerate_subgroups_all_closed():
    for sub in subgroups_of_ambient(Ambient(2, 2, 2)):
        assert sub.is_closed()
    for sub in subgroups_of_ambient(Ambient(3, 2, 1)):
        assert sub.is_closed()


def test_enumerate_subgroups_bad_inputs():
    with pytest.raises(NotPrime):
        enumerate_subgroups(2, 6, 1, 2)
    with pytest.raises(BadParameters):
        enumerate_subgroups(2, 2, 2, 6)
    with pytest.raises(ResourceLimit):
        enumerate_subgroups(4, 5, 4, 5)


def test_annihilator_examples():
    amb = Ambient(2, 2, 2)
    full = AbSubgroup.full(amb)
    triv = AbSubgroup.trivial(amb)
    assert annihilator(full) == triv
    assert annihilator(triv) == full
    u = AbSubgroup.span(amb, [(2, 0)])
    ann = annihilator(u)
    assert ann.order == 8
    assert ann == AbSubgroup.span(amb, [(2, 0), (0, 1)])


@pytest.mark.parametrize("p,k,h", [(2, 2, 2), (2, 1, 3), (3, 2, 1)])
def test_annihilator_involution_exhaustive(p, k, h):
    amb = Ambient(p, k, h)
    for sub in subgroups_of_ambient(amb):
        ann = sub.annihilator()
        assert sub.order * ann.order == amb.order
        assert ann.annihilator() == sub


def test_count_sublattices_values():
    assert count_sublattices(2, 2, 2) == 7
    assert count_sublattices(1, 2, 5) == 1
    assert count_sublattices(1, 7, 3) == 1
    for n in (1, 2, 3):
        for p in (2, 3):
            assert count_sublattices(n, p, 1) == sum(p ** i for i in range(n))


def test_count_sublattices_matches_enumeration():
    for h, p, m in [(1, 2, 3), (2, 2, 2), (2, 3, 1), (3, 2, 1), (2, 2, 3), (1, 5, 2)]:
        assert count_sublattices(h, p, m) == len(enumerate_subgroups(h, p, m, p ** m))


def test_sub_leq_count_values():
    assert sub_leq_count(1, 2, 2) == 3
    for p in (2, 3, 5):
        assert sub_leq_count(1, p, 1) == 2
    assert sub_leq_count(2, 2, 1) == 4
    assert sub_leq_count(2, 2, 2) == 11


def test_monotone_consistency_in_exponent():
    # the count of order-p^m subgroups is independent of the ambient exponent
    for K in (1, 2, 3):
        assert len(enumerate_subgroups(2, 2, K, 2)) == 3
    for K in (2, 3):
        assert len(enumerate_subgroups(1, 2, K, 4)) == 1
    assert len(enumerate_subgroups(2, 2, 2, 4)) == len(
        [s for s in subgroups_of_ambient(Ambient(2, 3, 2)) if s.order == 4]
    )


@settings(deadline=None, max_examples=30)
@given(st.sampled_from([(2, 2, 2), (3, 1, 2), (2, 1, 3)]), st.data())
def test_pairing_is_bilinear(params, data):
    p, k, h = params
    amb = Ambient(p, k, h)
    pick = st.sampled_from(amb.elements())
    x, y, z = data.draw(pick), data.draw(pick), data.draw(pick)
    assert amb.pairing(amb.add(x, y), z) == (amb.pairing(x, z) + amb.pairing(y, z)) % amb.modulus
    assert amb.pairing(x, y) == amb.pairing(y, x)


def test_span_is_minimal_closure():
    amb = Ambient(2, 2, 2)
    sub = AbSubgroup.span(amb, [(1, 2)])
    assert sub.order == 4
    assert (2, 0) in sub
    assert sub.generators() == [(1, 2)]


def test_element_order():
    amb = Ambient(2, 2, 2)
    assert amb.element_order((0, 0)) == 1
    assert amb.element_order((2, 0)) == 2
    assert amb.element_order((1, 2)) == 4

import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from ekrcheck.domains import (
    DomainDescriptor,
    Kind,
    PerfectMatching,
    Permutation,
    coset_elements,
    double_factorial,
    enumerate_domain,
    get_domain,
    intersection_size,
    is_t_intersecting,
    is_t_intersecting_family,
)
from ekrcheck.errors import CapacityError, UsageError


def pm(*edges):
    return PerfectMatching.from_edges(edges)


@pytest.mark.parametrize("kind,n,size", [("sym", 3, 6), ("pm", 3, 15), ("pm", 7, 135135)])
def test_enumeration_sizes(kind, n, size):
    assert len(enumerate_domain(kind, n)) == size


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_counts_match_closed_forms(n):
    sym, match = get_domain("sym", n), get_domain("pm", n)
    assert sym.size == factorial(n) == len(set(sym.elements))
    # (2n-1)!! written out as a product of odd numbers
    odd_product = 1
    for k in range(1, 2 * n, 2):
        odd_product *= k
    assert match.size == odd_product == len(set(match.elements))


@pytest.mark.parametrize("kind", ["sym", "pm"])
@pytest.mark.parametrize("n", range(1, 6))
def test_rank_unrank_round_trip_and_order(kind, n):
    d = get_domain(kind, n)
    for k in range(d.size):
        assert d.rank(d.unrank(k)) == k
    keys = [x.images if d.kind is Kind.SYM else x.partner for x in d.elements]
    assert keys == sorted(keys)


def test_unrank_out_of_range():
    with pytest.raises(UsageError):
        get_domain("sym", 3).unrank(6)


def test_capacity_error_for_huge_domain():
    with pytest.raises(CapacityError):
        get_domain("sym", 10)


def test_descriptor_and_double_factorial():
    assert DomainDescriptor("pm", 4).size == 105
    assert double_factorial(-1) == double_factorial(0) == 1
    assert DomainDescriptor("sym", 5).ground == 5 and DomainDescriptor("pm", 5).ground == 10


def test_invalid_elements_rejected():
    with pytest.raises(UsageError):
        Permutation((1, 1, 2))
    with pytest.raises(UsageError):
        PerfectMatching((2, 1, 3, 3))
    with pytest.raises(UsageError):
        PerfectMatching.from_edges([(1, 2), (2, 3)])


def test_intersection_examples():
    ident = Permutation.identity(5)
    assert intersection_size(ident, Permutation.from_cycles(5, (1, 2, 3))) == 2
    assert intersection_size(pm((1, 2), (3, 4), (5, 6)), pm((1, 2), (3, 5), (4, 6))) == 1
    assert is_t_intersecting(Permutation.identity(4), Permutation.from_cycles(4, (1, 2)), 2)
    assert not is_t_intersecting(Permutation.identity(4), Permutation.from_cycles(4, (1, 2, 3, 4)), 1)
    m = PerfectMatching.standard(4)
    assert is_t_intersecting(m, m, 4)


def test_intersection_domain_mismatch():
    with pytest.raises(UsageError):
        intersection_size(Permutation.identity(3), Permutation.identity(4))
    with pytest.raises(UsageError):
        intersection_size(Permutation.identity(2), PerfectMatching.standard(1))


@pytest.mark.parametrize("kind,n", [("sym", 4), ("pm", 4)])
def test_intersection_symmetric_and_self(kind, n):
    d = get_domain(kind, n)
    for a, b in itertools.combinations(d.elements, 2):
        assert intersection_size(a, b) == intersection_size(b, a) < n
    assert all(intersection_size(a, a) == n for a in d.elements)


def test_coset_examples():
    assert len(coset_elements(DomainDescriptor("sym", 4), [(1, 1), (2, 2)])) == 2
    assert coset_elements(DomainDescriptor("sym", 4), [(1, 1), (2, 1)]) == []
    assert len(coset_elements(DomainDescriptor("pm", 3), [(1, 2)])) == 3


@pytest.mark.parametrize("kind,n", [("sym", 4), ("pm", 4)])
def test_cosets_are_t_intersecting(kind, n):
    d = get_domain(kind, n)
    variables = d.variables
    for t in range(0, n + 1):
        for cert in itertools.combinations(variables, t):
            members = coset_elements(d, cert)
            if members:
                assert is_t_intersecting_family(members, t)
                expected = factorial(n - t) if kind == "sym" else double_factorial(2 * (n - t) - 1)
                assert len(members) == expected


def test_pm_pair_normalisation():
    d = get_domain("pm", 3)
    assert d.variable_mask((2, 1)) == d.variable_mask((1, 2))
    with pytest.raises(UsageError):
        d.variable_mask((3, 3))


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(1, 7)), st.permutations(range(1, 7)))
def test_sym_intersection_counts_fixed_points_of_quotient(a, b):
    # |a & b| = number of fixed points of b^{-1} a
    a, b = Permutation(tuple(a)), Permutation(tuple(b))
    quotient = [b.inverse()(a(i)) for i in range(1, 7)]
    assert intersection_size(a, b) == sum(q == i for i, q in enumerate(quotient, start=1))

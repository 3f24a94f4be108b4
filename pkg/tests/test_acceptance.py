"""Acceptance gate: criteria 1-9, each a single test marked ``criterion``.

Every test runs the same suite the ``properties`` subcommand runs and
compares its evidence against values fixed in advance.  The terminal
summary prints one PASS/FAIL line per criterion; ``python
tests/test_acceptance.py`` runs only this file.
"""

import itertools
import sys
from math import comb, factorial

import pytest

from ekrcheck import boolfn, suites
from ekrcheck.domains import Kind, double_factorial, get_domain
from ekrcheck.linalg import fraction_rank


def check(result):
    print(f"\n{result.name}: {'pass' if result.passed else 'fail'} in {result.elapsed:.2f}s")
    assert result.passed, result.evidence
    return result.evidence


@pytest.mark.criterion(1, "degree-2 span on the 4-cube has dimension 11; no sensitivity 4 at the origin")
def test_criterion_1_sensitivity_scan():
    ev = check(suites.suite_sensitivity())
    assert ev["span_dimension"] == 11
    assert ev["witness_at_origin"] is None
    assert ev["strategies_agree"] and max(ev["max_sensitivity_by_point"]) == 3


@pytest.mark.criterion(2, "permutations n=4..7: clique numbers 2,6,24,120, counts 6,10,15,21, all 2-cosets")
def test_criterion_2_sym_cliques():
    ev = check(suites.suite_cliques(Kind.SYM, (4, 5, 6, 7)))
    assert ev["clique_numbers"] == [factorial(n - 2) for n in (4, 5, 6, 7)] == [2, 6, 24, 120]
    assert ev["maximum_clique_counts"] == [comb(n, 2) for n in (4, 5, 6, 7)] == [6, 10, 15, 21]
    assert ev["vertices"] == [7, 31, 191, 1331]
    assert all(r["passed"] and len(r["cosets"]) == r["maximum_clique_count"] for r in ev["per_n"])


@pytest.mark.slow
@pytest.mark.criterion(3, "matchings n=4..7: clique numbers 3,15,105,945, counts 6,10,15,21, all 2-cosets")
def test_criterion_3_pm_cliques():
    result = suites.suite_cliques(Kind.PM, (4, 5, 6, 7))
    print("per-n solve seconds:", result.timings)
    ev = check(result)
    formula = [factorial(2 * n - 4) // (2 ** (n - 2) * factorial(n - 2)) for n in (4, 5, 6, 7)]
    assert ev["clique_numbers"] == formula == [double_factorial(2 * n - 5) for n in (4, 5, 6, 7)]
    assert ev["clique_numbers"] == [3, 15, 105, 945]
    assert ev["maximum_clique_counts"] == [6, 10, 15, 21]
    assert ev["vertices"] == [13, 101, 1091, 13847]
    assert all(r["passed"] for r in ev["per_n"])


@pytest.mark.criterion(4, "spectral degree equals polynomial degree on S_3, S_4, M_6, M_8 (100 each)")
def test_criterion_4_degree_equivalence():
    ev = check(suites.suite_degree_equivalence())
    for key in ("sym3", "sym4", "pm3", "pm4"):
        assert ev[key]["functions"] == 100 and ev[key]["mismatches"] == 0


@pytest.mark.criterion(5, "isotypic decomposition: completeness, orthogonality, Parseval, dimension sums")
def test_criterion_5_decomposition():
    ev = check(suites.suite_decomposition())
    for key in ("sym3", "sym4", "pm3", "pm4"):
        assert ev[key]["functions"] == 100
        assert ev[key]["failures"] == {"complete": 0, "orthogonal": 0, "parseval": 0}
    for n in range(1, 5):
        assert ev["dimensions"][f"sym{n}"]["sum"] == factorial(n)
        assert ev["dimensions"][f"pm{n}"]["sum"] == double_factorial(2 * n - 1)
    assert ev["dimensions"]["sym4"]["dimensions"] == [1, 9, 4, 9, 1]


def _degree_at_most_one_count(kind, n):
    """Independent count: rank membership over Fractions, function by function."""
    d = get_domain(kind, n)
    cols = [list(c) for c in boolfn.monomial_basis(kind, n, 1).matrix.T]
    base = fraction_rank(cols)
    total = 0
    for bits in itertools.product((0, 1), repeat=d.size):
        total += fraction_rank(cols + [list(bits)]) == base
    return total


@pytest.mark.criterion(6, "degree-1 functions on S_3 and M_6 match the listed forms with C(f) <= 1, <= 2")
def test_criterion_6_degree_one():
    ev = check(suites.suite_degree_one())
    assert ev["sym3"]["functions_scanned"] == 2 ** 6 and ev["pm3"]["functions_scanned"] == 2 ** 15
    assert ev["sym3"]["max_certificate_complexity"] <= 1
    assert ev["pm3"]["max_certificate_complexity"] <= 2
    assert ev["sym3"]["degree_at_most_1"] == 20 == _degree_at_most_one_count("sym", 3)
    assert ev["pm3"]["degree_at_most_1"] == 172
    assert ev["pm3"]["forms"] == {"anti-triangle": 10, "dictator": 152, "triangle": 10}


@pytest.mark.criterion(7, "complete_avoiding, pairwise certificate intersection, extended reduction")
def test_criterion_7_constructive():
    ev = check(suites.suite_constructive())
    assert set(ev["complete_avoiding_failures"].values()) == {0}
    assert len(ev["complete_avoiding_failures"]) == 8
    for key, expected in (("sym4", 6), ("sym5", 10), ("pm4", 6), ("pm5", 10)):
        assert ev["pairwise_certificate_intersection"][key] == {"cliques": expected, "passed": expected}
    for key in ("pm4", "pm5"):
        red = ev["extended_reduction"][key]
        assert red["instances"] == red["implication_held"] == 200


@pytest.mark.criterion(8, "degree drops under restriction to a coset; the permutation proof identity holds")
def test_criterion_8_degree_reduction():
    ev = check(suites.suite_degree_reduction())
    for key in ("sym4", "sym5", "pm4", "pm5"):
        assert ev[key]["functions"] == 100 and ev[key]["failures"] == 0
        for pair in ev[key]["degree_pairs"]:
            before, after = map(int, pair.split("->"))
            assert after <= max(before - 1, 0)
    assert ev["sym_identity"]["instances"] == ev["sym_identity"]["held"] == 50


@pytest.mark.criterion(9, "bound T is 1, 2, 6 at C = 2, 3, 4 and matches the product forms up to C = 10")
def test_criterion_9_bounds():
    ev = check(suites.suite_bounds())
    assert [ev["T"][str(c)] for c in (2, 3, 4)] == [1, 2, 6]
    assert ev["forms_agree"]
    for c in range(2, 11):
        assert ev["T"][str(c)] == ev["product_form"][str(c)] == int(ev["proof_closed_form"][str(c)].split("/")[0])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))

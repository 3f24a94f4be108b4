"""Verification suites shared by the ``properties``/``verify`` commands and the tests.

Each suite returns a SuiteResult whose evidence is plain JSON data.  All
randomness flows from an explicit seed through ``random.Random``.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

import numpy as np

from . import boolfn, cert, clique, representation as rep
from .boolfn import BooleanFunction, embed_in_coset, indicator_of_family
from .domains import Kind, double_factorial, get_domain, is_t_intersecting_family
from .io import fraction_text

DEFAULT_SEED = 20240611


@dataclass
class SuiteResult:
    name: str
    parameters: dict
    passed: bool
    evidence: dict
    elapsed: float = 0.0
    timings: dict = field(default_factory=dict)

    def as_dict(self, timings: bool = False) -> dict:
        out = {"suite": self.name, "parameters": self.parameters,
               "status": "pass" if self.passed else "fail", "evidence": self.evidence}
        if timings:
            out["elapsed_s"] = round(self.elapsed, 3)
            if self.timings:
                out["timings_s"] = self.timings
        return out


def _timed(name: str, parameters: dict, body: Callable[[], tuple[bool, dict]]) -> SuiteResult:
    start = time.perf_counter()
    passed, evidence = body()
    return SuiteResult(name, parameters, bool(passed), evidence, time.perf_counter() - start)


# -- random instances -------------------------------------------------------------

def random_function(kind, n: int, rng: random.Random) -> BooleanFunction:
    """Mixture: uniform truth tables and unions of random cosets (low degree)."""
    domain = get_domain(kind, n)
    if rng.random() < 0.5:
        return BooleanFunction(domain.descriptor, [rng.randint(0, 1) for _ in range(domain.size)])
    mask = 0
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(1, max(n - 1, 1))
        mask |= domain.coset_mask(cert.random_certificate(kind, n, size, rng))
    if rng.random() < 0.3:
        mask = domain.full_mask & ~mask
    return BooleanFunction.from_mask(domain, mask)


def random_low_degree_function(kind, n: int, rng: random.Random) -> BooleanFunction:
    """Coset unions, classified degree-1 forms, constants and uniform noise."""
    domain = get_domain(kind, n)
    choice = rng.randrange(5)
    if choice == 0:
        return BooleanFunction.constant(domain, rng.randint(0, 1))
    if choice == 1:
        g = domain.descriptor.ground
        if Kind(kind) is Kind.SYM:
            form = rng.choice(["row", "column"])
            members = frozenset(rng.sample(range(1, g + 1), rng.randint(0, g)))
            return boolfn.Degree1Form(Kind(kind), n, form, rng.randint(1, g), members).evaluate()
        if rng.random() < 0.5 and g >= 3:
            form = rng.choice(["triangle", "anti-triangle"])
            return boolfn.Degree1Form(Kind(kind), n, form, None, frozenset(rng.sample(range(1, g + 1), 3))).evaluate()
        i = rng.randint(1, g)
        others = [v for v in range(1, g + 1) if v != i]
        members = frozenset(rng.sample(others, rng.randint(0, len(others))))
        return boolfn.Degree1Form(Kind(kind), n, "dictator", i, members).evaluate()
    if choice == 4:
        return BooleanFunction(domain.descriptor, [rng.randint(0, 1) for _ in range(domain.size)])
    mask = 0
    for _ in range(choice):
        mask |= domain.coset_mask(cert.random_certificate(kind, n, rng.randint(1, min(2, n)), rng))
    return BooleanFunction.from_mask(domain, mask)


def random_tableau(shape, rng: random.Random) -> rep.Tableau:
    entries = list(range(1, sum(shape) + 1))
    rng.shuffle(entries)
    rows, k = [], 0
    for length in shape:
        rows.append(tuple(entries[k:k + length]))
        k += length
    return rep.Tableau(tuple(rows))


# -- 1: the cube scan ------------------------------------------------------------------

def suite_sensitivity() -> SuiteResult:
    def body():
        dim = boolfn.cube_span_dimension(4, 2)
        by_table = boolfn.low_degree_boolean_tables(4, 2, "truth-table")
        by_span = boolfn.low_degree_boolean_tables(4, 2, "span")
        witness = boolfn.degree2_sensitivity_scan(4, 4)
        per_point = boolfn.max_sensitivity_by_point(4, 2)
        agree = by_table.shape == by_span.shape and bool((by_table == by_span).all())
        evidence = {
            "span_dimension": dim,
            "degree2_boolean_functions": int(by_table.shape[0]),
            "strategies_agree": agree,
            "witness_at_origin": None if witness is None else list(witness.truth),
            "max_sensitivity_by_point": per_point,
        }
        passed = dim == 11 and witness is None and agree and max(per_point) < 4
        return passed, evidence

    return _timed("sensitivity-scan", {"k": 4, "s": 4, "degree": 2}, body)


# -- 2, 3: clique verification ----------------------------------------------------------

def _verify_one(args) -> dict:
    kind, n, emit = args
    report = clique.verify_uniqueness(kind, n)
    out = report.as_dict(with_cliques=emit)
    out["elapsed_s"] = round(report.clique.elapsed, 3)
    return out


def run_verifications(kind, ns, threads: int = 1, emit: bool = False) -> list[dict]:
    jobs = [(Kind(kind).value, n, emit) for n in ns]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_verify_one, jobs))
    return [_verify_one(job) for job in jobs]


def suite_cliques(kind, ns=(4, 5, 6, 7), threads: int = 1) -> SuiteResult:
    kind = Kind(kind)
    timings = {}

    def body():
        results = run_verifications(kind, ns, threads)
        timings.update((str(r["n"]), r.pop("elapsed_s")) for r in results)
        evidence = {
            "clique_numbers": [r["clique_number"] for r in results],
            "maximum_clique_counts": [r["maximum_clique_count"] for r in results],
            "vertices": [r["vertices"] for r in results],
            "per_n": results,
        }
        return all(r["passed"] for r in results), evidence

    result = _timed(f"{kind.value}-uniqueness", {"kind": kind.value, "n": list(ns), "t": 2}, body)
    result.timings = timings
    return result


# -- 4, 5: degree equivalence and the decomposition -------------------------------------------

EQUIVALENCE_DOMAINS = ((Kind.SYM, 3), (Kind.SYM, 4), (Kind.PM, 3), (Kind.PM, 4))


def _instances(seed: int, count: int, domains):
    for kind, n in domains:
        rng = random.Random(f"{seed}:{kind.value}:{n}")
        yield kind, n, [random_function(kind, n, rng) for _ in range(count)]


def suite_degree_equivalence(seed: int = DEFAULT_SEED, count: int = 100, domains=EQUIVALENCE_DOMAINS) -> SuiteResult:
    def body():
        evidence, passed = {}, True
        for kind, n, fs in _instances(seed, count, domains):
            mismatches, histogram = 0, {}
            for f in fs:
                d_poly = boolfn.polynomial_degree(f)
                d_spec = rep.spectral_degree(f)
                mismatches += d_poly != d_spec
                histogram[str(d_poly)] = histogram.get(str(d_poly), 0) + 1
            evidence[f"{kind.value}{n}"] = {"functions": len(fs), "mismatches": mismatches,
                                           "degree_histogram": dict(sorted(histogram.items()))}
            passed &= mismatches == 0
        return passed, evidence

    return _timed("degree-equivalence", {"seed": seed, "count": count}, body)


def check_decomposition(f: BooleanFunction) -> dict:
    comps = rep.decompose(f)
    size = f.domain.size
    total = [sum((c.vector[k] for c in comps), Fraction(0)) for k in range(size)]
    complete = total == [Fraction(int(v)) for v in f.truth]
    orthogonal = all(
        sum((a * b for a, b in zip(c1.vector, c2.vector)), Fraction(0)) == 0
        for c1, c2 in itertools.combinations(comps, 2))
    parseval = sum((c.norm_sq for c in comps), Fraction(0)) == f.weight
    return {"complete": complete, "orthogonal": orthogonal, "parseval": parseval}


def suite_decomposition(seed: int = DEFAULT_SEED, count: int = 100, domains=EQUIVALENCE_DOMAINS) -> SuiteResult:
    def body():
        evidence, passed = {}, True
        for kind, n, fs in _instances(seed, count, domains):
            failures = {"complete": 0, "orthogonal": 0, "parseval": 0}
            for f in fs:
                for key, ok in check_decomposition(f).items():
                    failures[key] += not ok
            evidence[f"{kind.value}{n}"] = {"functions": len(fs), "failures": failures}
            passed &= not any(failures.values())
        dims = {}
        for kind in Kind:
            for n in range(1, 5):
                values = [rep.component_dimension(kind, lam) for lam in rep.partitions_of(n)]
                expected = factorial(n) if kind is Kind.SYM else double_factorial(2 * n - 1)
                dims[f"{kind.value}{n}"] = {"dimensions": values, "sum": sum(values), "domain_size": expected}
                passed &= sum(values) == expected
        evidence["dimensions"] = dims
        return passed, evidence

    return _timed("decomposition", {"seed": seed, "count": count}, body)


# -- 6: degree-1 structure ------------------------------------------------------------------

def degree_one_functions(kind, n: int, chunk: int = 1 << 16) -> list[BooleanFunction]:
    """Every Boolean function of degree <= 1 on the domain, by exhaustive filtering."""
    domain = get_domain(kind, n)
    size = domain.size
    if size > 24:
        raise cert.CapacityError("exhaustive degree-1 filtering needs a domain of at most 24 elements")
    span = boolfn._degree_span(Kind(kind), n, 1)
    shifts = np.arange(size, dtype=np.int64)
    out = []
    for start in range(0, 1 << size, chunk):
        ints = np.arange(start, min(start + chunk, 1 << size), dtype=np.int64)
        tables = (ints[:, None] >> shifts) & 1
        for row in tables[span.contains_many(tables)]:
            out.append(BooleanFunction(domain.descriptor, row))
    return out


def suite_degree_one(domains=((Kind.SYM, 3), (Kind.PM, 3))) -> SuiteResult:
    bounds = {Kind.SYM: 1, Kind.PM: 2}

    def body():
        evidence, passed = {}, True
        for kind, n in domains:
            fs = degree_one_functions(kind, n)
            forms, bad_form, worst = {}, 0, 0
            for f in fs:
                form = boolfn.classify_degree1(f)
                forms[form.form] = forms.get(form.form, 0) + 1
                bad_form += form.evaluate() != f
                worst = max(worst, cert.certificate_complexity(f))
            evidence[f"{kind.value}{n}"] = {
                "functions_scanned": 1 << get_domain(kind, n).size,
                "degree_at_most_1": len(fs),
                "forms": dict(sorted(forms.items())),
                "roundtrip_failures": bad_form,
                "max_certificate_complexity": worst,
                "bound": bounds[kind],
            }
            passed &= bad_form == 0 and worst <= bounds[kind]
        return passed, evidence

    return _timed("degree-one", {"domains": [f"{k.value}{n}" for k, n in domains]}, body)


# -- 7: constructive checks ----------------------------------------------------------------------

def complete_avoiding_holds(c_a, c_b, kind, n) -> bool:
    x = cert.complete_avoiding(c_a, c_b, kind, n)
    c_a = cert.make_certificate(kind, c_a)
    c_b = cert.make_certificate(kind, c_b)
    # recomputed from the element itself, not from the construction
    rep_pairs = {tuple(sorted(p)) if Kind(kind) is Kind.PM else p for p in x.ordered_pairs()}
    return c_a <= rep_pairs and (rep_pairs & c_b) == (c_a & c_b)


def random_extended(n: int, size: int, rng: random.Random, with_triangle: bool) -> cert.ExtendedCertificate:
    base_size = size - 1 if with_triangle else size
    pts = list(range(1, 2 * n + 1))
    rng.shuffle(pts)
    base = [tuple(sorted(pts[2 * k:2 * k + 2])) for k in range(base_size)]
    forbidden = frozenset(pts[2 * base_size:2 * base_size + 3]) if with_triangle else None
    return cert.ExtendedCertificate(frozenset(base), forbidden)


def suite_constructive(seed: int = DEFAULT_SEED, avoiding: int = 500, reductions: int = 200) -> SuiteResult:
    def body():
        evidence, passed = {}, True
        rng = random.Random(f"{seed}:avoid")
        avoid = {}
        for kind in Kind:
            for n in (3, 4, 5, 6):
                failures = 0
                for _ in range(avoiding):
                    c_a = cert.random_certificate(kind, n, rng.randint(0, n - 2), rng)
                    if rng.random() < 0.5:
                        c_b = cert.random_certificate(kind, n, rng.randint(0, n), rng)
                    else:
                        # overlap c_a on purpose
                        c_b = frozenset(p for p in c_a if rng.random() < 0.5)
                        extra = cert.random_certificate(kind, n, rng.randint(0, n), rng)
                        if cert.is_consistent(kind, c_b | extra):
                            c_b |= extra
                    failures += not complete_avoiding_holds(c_a, c_b, kind, n)
                avoid[f"{kind.value}{n}"] = failures
                passed &= failures == 0
        evidence["complete_avoiding_failures"] = avoid

        pairwise = {}
        for kind in Kind:
            for n in (4, 5):
                graph = clique.build_graph(kind, n, 2)
                report = clique.enumerate_maximum_cliques(graph)
                ok = 0
                for ranks in report.cliques:
                    members = clique.clique_family(kind, n, ranks)
                    f = indicator_of_family(get_domain(kind, n), members)
                    check = cert.check_pairwise_certificate_intersection(f)
                    ok += check.passed and is_t_intersecting_family(members, 2)
                pairwise[f"{kind.value}{n}"] = {"cliques": len(report.cliques), "passed": ok}
                passed &= ok == len(report.cliques)
        evidence["pairwise_certificate_intersection"] = pairwise

        red_rng = random.Random(f"{seed}:extended")
        reductions_out = {}
        for n in (4, 5):
            held = hypotheses = 0
            for _ in range(reductions):
                s1 = red_rng.randint(1, n - 2)
                c1 = random_extended(n, s1, red_rng, True)
                if red_rng.random() < 0.3:
                    c2 = cert.ExtendedCertificate(c1.base)
                else:
                    c2 = _correlated(c1, n, red_rng)
                outcome = cert.extended_reduction(c1, c2, n)
                hypotheses += outcome.hypothesis
                held += outcome.holds
            reductions_out[f"pm{n}"] = {"instances": reductions, "hypothesis_held": hypotheses,
                                        "implication_held": held}
            passed &= held == reductions
        evidence["extended_reduction"] = reductions_out
        return passed, evidence

    return _timed("constructive", {"seed": seed, "avoiding": avoiding, "reductions": reductions}, body)


def _correlated(c1: cert.ExtendedCertificate, n: int, rng: random.Random) -> cert.ExtendedCertificate:
    """A second extended certificate sharing some base edges with c1, so the hypothesis can hold."""
    keep = [p for p in sorted(c1.base) if rng.random() < 0.8]
    used = {v for p in keep for v in p}
    free = [v for v in range(1, 2 * n + 1) if v not in used]
    rng.shuffle(free)
    room = n - 2 - len(keep)
    extra = rng.randint(0, max(room, 0))
    with_triangle = room - extra >= 1 and rng.random() < 0.5 and len(free) >= 2 * extra + 3
    base = keep + [tuple(sorted(free[2 * k:2 * k + 2])) for k in range(extra)]
    forbidden = frozenset(free[2 * extra:2 * extra + 3]) if with_triangle else None
    return cert.ExtendedCertificate(frozenset(base), forbidden)


# -- 8: degree reduction ----------------------------------------------------------------------------

def coset_pair(kind, n: int) -> tuple[int, int]:
    return (n, n) if Kind(kind) is Kind.SYM else (2 * n - 1, 2 * n)


def suite_degree_reduction(seed: int = DEFAULT_SEED, count: int = 100, identities: int = 50) -> SuiteResult:
    def body():
        evidence, passed = {}, True
        for kind in Kind:
            for n in (4, 5):
                rng = random.Random(f"{seed}:reduce:{kind.value}:{n}")
                pair = coset_pair(kind, n)
                accepted = rejected = failures = 0
                histogram = {}
                while accepted < count:
                    h = random_low_degree_function(kind, n - 1, rng)
                    f = embed_in_coset(h, pair)
                    if not boolfn.degree_at_most(f, 2):
                        rejected += 1
                        continue
                    accepted += 1
                    d_f = boolfn.polynomial_degree(f)
                    restricted = boolfn.restrict_to_coset(f, pair)
                    d_r = boolfn.polynomial_degree(restricted)
                    key = f"{d_f}->{d_r}"
                    histogram[key] = histogram.get(key, 0) + 1
                    failures += d_r > max(d_f - 1, 0) or restricted != h
                evidence[f"{kind.value}{n}"] = {"functions": accepted, "rejected_degree_above_2": rejected,
                                               "failures": failures,
                                               "degree_pairs": dict(sorted(histogram.items()))}
                passed &= failures == 0

        rng = random.Random(f"{seed}:sym-identity")
        held = nonzero = 0
        for k in range(identities):
            n = 3 + k % 3
            h = random_function(Kind.SYM, n - 1, rng)
            f = embed_in_coset(h, (n, n))
            lam = rng.choice(rep.partitions_of(n - 1))
            s, t = random_tableau(lam, rng), random_tableau(lam, rng)
            lhs, rhs = rep.sym_extension_identity(f, s, t)
            held += lhs == rhs
            nonzero += lhs != 0
        evidence["sym_identity"] = {"instances": identities, "held": held, "nonzero": nonzero}
        passed &= held == identities
        return passed, evidence

    return _timed("degree-reduction", {"seed": seed, "count": count, "identities": identities}, body)


# -- 9: bound arithmetic ------------------------------------------------------------------------------

def suite_bounds(max_c: int = 10) -> SuiteResult:
    def body():
        values = {str(c): cert.bound_T(c) for c in range(2, max_c + 1)}
        products = {str(c): cert.bound_T_product_form(c) for c in range(2, max_c + 1)}
        closed = {str(c): fraction_text(cert.bound_T_closed_product(c)) for c in range(2, max_c + 1)}
        agree = all(values[c] == products[c] == Fraction(closed[c]) for c in values)
        head = [values["2"], values["3"], values["4"]]
        return head == [1, 2, 6] and agree, {"T": values, "product_form": products,
                                             "proof_closed_form": closed, "forms_agree": agree}

    return _timed("bound-arithmetic", {"max_C": max_c}, body)


SUITES = {
    "sensitivity-scan": lambda seed, opts: suite_sensitivity(),
    "sym-uniqueness": lambda seed, opts: suite_cliques(Kind.SYM, (4, 5, 6, 7), opts.get("threads", 1)),
    "pm-uniqueness": lambda seed, opts: suite_cliques(Kind.PM, tuple(range(4, opts.get("pm_max_n", 6) + 1)),
                                                      opts.get("threads", 1)),
    "degree-equivalence": lambda seed, opts: suite_degree_equivalence(seed),
    "decomposition": lambda seed, opts: suite_decomposition(seed),
    "degree-one": lambda seed, opts: suite_degree_one(),
    "constructive": lambda seed, opts: suite_constructive(seed),
    "degree-reduction": lambda seed, opts: suite_degree_reduction(seed),
    "bound-arithmetic": lambda seed, opts: suite_bounds(),
}

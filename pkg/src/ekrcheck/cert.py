"""Certificates, certificate complexity and the covering arguments.

A certificate is a frozenset of pairs: ordered (i, j) meaning alpha(i) = j on
S_n, sorted (i, j) meaning the edge {i, j} on M_2n.  Coset computations run
on the per-variable bitmasks of ``Domain``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Optional, Sequence

import numpy as np

from .boolfn import BooleanFunction
from .domains import (
    Domain,
    Element,
    Kind,
    PerfectMatching,
    Permutation,
    domain_of,
    get_domain,
    int_to_indices,
    normalize_pair,
)
from .errors import CapacityError, PreconditionError, UsageError

Certificate = frozenset

# full-domain exhaustion limits for certificate complexity
CERT_LIMITS = {Kind.SYM: 6, Kind.PM: 6}


def make_certificate(kind, pairs: Iterable) -> Certificate:
    return frozenset(normalize_pair(Kind(kind), p) for p in pairs)


def is_consistent(kind, certificate: Iterable) -> bool:
    """No two pairs share a source or a target (S_n), or a point (M_2n)."""
    pairs = list(certificate)
    if Kind(kind) is Kind.SYM:
        return len({i for i, _ in pairs}) == len(pairs) and len({j for _, j in pairs}) == len(pairs)
    points = [v for p in pairs for v in p]
    return len(set(points)) == len(points)


def _check_wellformed(domain: Domain, certificate) -> Certificate:
    cert = make_certificate(domain.kind, certificate)
    g = domain.descriptor.ground
    if any(not (1 <= a <= g and 1 <= b <= g) for a, b in cert):
        raise UsageError(f"certificate {sorted(cert)} out of range for {domain!r}")
    return cert


def satisfies(x: Element, certificate: Iterable) -> bool:
    domain = domain_of(x)
    cert = _check_wellformed(domain, certificate)
    return all(x(i) == j for i, j in cert)


@dataclass(frozen=True)
class ExtendedCertificate:
    """A certificate plus a forbidden triangle {i, j, k} on matchings."""

    base: Certificate
    forbidden: Optional[frozenset] = None

    def __post_init__(self):
        base = make_certificate(Kind.PM, self.base)
        object.__setattr__(self, "base", base)
        if self.forbidden is not None:
            tri = frozenset(int(v) for v in self.forbidden)
            if len(tri) != 3:
                raise UsageError("forbidden triangle needs three distinct points")
            if tri & {v for p in base for v in p}:
                raise UsageError("forbidden points must not appear in the base certificate")
            object.__setattr__(self, "forbidden", tri)

    @property
    def size(self) -> int:
        return len(self.base) + (self.forbidden is not None)

    def triangle_edges(self) -> list[tuple[int, int]]:
        if self.forbidden is None:
            return []
        return list(itertools.combinations(sorted(self.forbidden), 2))

    def as_dict(self) -> dict:
        out = {"pairs": [list(p) for p in sorted(self.base)]}
        if self.forbidden is not None:
            out["forbidden"] = sorted(self.forbidden)
        return out


def extended_satisfies(m: PerfectMatching, ec: ExtendedCertificate) -> bool:
    if not satisfies(m, ec.base):
        return False
    return not any(m(i) == j for i, j in ec.triangle_edges())


def extended_mask(domain: Domain, ec: ExtendedCertificate) -> int:
    mask = domain.coset_mask(ec.base)
    for e in ec.triangle_edges():
        mask &= ~domain.variable_mask(e)
    return mask


# -- minimum certificates -----------------------------------------------------

def _certifies(mask: int, value: int, ones: int) -> bool:
    return not (mask & ~ones) if value else not (mask & ones)


def min_certificate(f: BooleanFunction, x: Element) -> tuple[int, Certificate]:
    """Smallest subset of x's pair representation forcing f's value.

    Subsets are tried by size, then lexicographically by position in the
    sorted pair representation; the first hit is returned.
    """
    domain = f.domain
    domain.check(x)
    value = f(x)
    ones = f.mask
    pairs = x.ordered_pairs()
    masks = [domain.variable_mask(p) for p in pairs]
    full = domain.full_mask
    for size in range(len(pairs) + 1):
        for combo in itertools.combinations(range(len(pairs)), size):
            mask = full
            for k in combo:
                mask &= masks[k]
            if _certifies(mask, value, ones):
                return size, frozenset(pairs[k] for k in combo)
    raise AssertionError("the full representation always certifies")


def is_certificate_for(f: BooleanFunction, x: Element, certificate) -> bool:
    """x satisfies ``certificate`` and every element satisfying it shares f(x)."""
    domain = f.domain
    if not satisfies(x, certificate):
        return False
    return _certifies(domain.coset_mask(certificate), f(x), f.mask)


def _check_capacity(f: BooleanFunction, limit: Optional[int]):
    limit = CERT_LIMITS[f.kind] if limit is None else limit
    if f.n > limit:
        raise CapacityError(
            f"certificate complexity over all of {f.kind.value} n={f.n} exceeds the limit n <= {limit}")


def certificate_complexity(f: BooleanFunction, limit: Optional[int] = None) -> int:
    """C(f) = max over all inputs of the minimum certificate size."""
    _check_capacity(f, limit)
    return max((min_certificate(f, x)[0] for x in f.domain), default=0)


def one_side_certificate_complexity(f: BooleanFunction, limit: Optional[int] = None) -> int:
    """C_1(f): the same maximum over the 1-inputs only (0 for the zero function).

    Only the 1-inputs are scanned, so the default limit is one size larger
    than for ``certificate_complexity``.
    """
    _check_capacity(f, (CERT_LIMITS[f.kind] + 1) if limit is None else limit)
    return max((min_certificate(f, x)[0] for x in f.ones()), default=0)


def min_certificates_of_ones(f: BooleanFunction) -> dict[Element, Certificate]:
    return {x: min_certificate(f, x)[1] for x in f.ones()}


# -- complete_avoiding ---------------------------------------------------------

def complete_avoiding(c_a: Iterable, c_b: Iterable, kind, n: int) -> Element:
    """An element satisfying c_a whose representation meets c_b exactly in c_a & c_b.

    Requires |c_a| <= n - 2; both certificates must be consistent.
    """
    kind = Kind(kind)
    c_a = make_certificate(kind, c_a)
    c_b = make_certificate(kind, c_b)
    if not (is_consistent(kind, c_a) and is_consistent(kind, c_b)):
        raise UsageError("complete_avoiding needs consistent certificates")
    if len(c_a) > n - 2:
        raise PreconditionError(f"|c_a| = {len(c_a)} exceeds n - 2 = {n - 2}")
    g = n if kind is Kind.SYM else 2 * n
    if any(not (1 <= v <= g) for p in c_a | c_b for v in p):
        raise UsageError("certificate out of range")
    if kind is Kind.SYM:
        return _complete_sym(c_a, c_b, n)
    return _complete_pm(c_a, c_b, n)


def _complete_sym(c_a, c_b, n) -> Permutation:
    free_i = [i for i in range(1, n + 1) if i not in {p[0] for p in c_a}]
    free_j = [j for j in range(1, n + 1) if j not in {p[1] for p in c_a}]
    # line up c_b-pairs among the free indices on a common slot
    b_of = {i: j for i, j in c_b if i in free_i and j in free_j}
    paired_i = [i for i in free_i if i in b_of]
    order_i = paired_i + [i for i in free_i if i not in b_of]
    used_j = [b_of[i] for i in paired_i]
    order_j = used_j + [j for j in free_j if j not in set(used_j)]
    images = [0] * n
    for i, j in c_a:
        images[i - 1] = j
    k = len(order_i)
    for s in range(k):
        # cyclic shift: slot s gets the target of slot s + 1
        images[order_i[s] - 1] = order_j[(s + 1) % k]
    return Permutation(tuple(images))


def _complete_pm(c_a, c_b, n) -> PerfectMatching:
    used = {v for p in c_a for v in p}
    free = [v for v in range(1, 2 * n + 1) if v not in used]
    inner = [p for p in sorted(c_b) if p[0] not in used and p[1] not in used]
    covered = {v for p in inner for v in p}
    slots = [v for p in inner for v in p] + [v for v in free if v not in covered]
    half = len(slots) // 2
    edges = list(c_a) + [(slots[s], slots[half + s]) for s in range(half)]
    return PerfectMatching.from_edges(edges, n)


def representation_overlap(x: Element, certificate: Iterable) -> Certificate:
    """Pairs of ``certificate`` that belong to x's own representation."""
    cert = make_certificate(x.kind, certificate)
    return frozenset(p for p in cert if p in x.pairs)


# -- pairwise certificate intersection ----------------------------------------

@dataclass
class PairwiseReport:
    precondition: bool
    complexity: int
    n: int
    checked_pairs: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.precondition and not self.violations

    def as_dict(self) -> dict:
        return {
            "precondition": self.precondition,
            "certificate_complexity": self.complexity,
            "n": self.n,
            "checked_pairs": self.checked_pairs,
            "violations": [
                {"a": list(a), "b": list(b), "overlap": len(o)} for a, b, o in self.violations[:10]
            ],
            "passed": self.passed,
        }


def check_pairwise_certificate_intersection(f: BooleanFunction, limit: Optional[int] = None) -> PairwiseReport:
    """Minimum certificates of any two 1-inputs share at least two pairs.

    The hypothesis is C(f) <= n - 2 (and a 2-intersecting family); a failed
    hypothesis is reported with ``precondition=False``, violations listed
    regardless.
    """
    from .domains import is_t_intersecting_family

    cf = certificate_complexity(f, limit)
    members = f.ones()
    precondition = cf <= f.n - 2 and is_t_intersecting_family(members, 2)
    report = PairwiseReport(precondition, cf, f.n)
    certs = [min_certificate(f, x)[1] for x in members]
    for (x, cx), (y, cy) in itertools.combinations_with_replacement(list(zip(members, certs)), 2):
        report.checked_pairs += 1
        overlap = cx & cy
        if len(overlap) < 2:
            report.violations.append((_label(x), _label(y), overlap))
    return report


def _label(x: Element) -> tuple:
    return x.images if x.kind is Kind.SYM else x.edges


# -- extended certificates -----------------------------------------------------

def _all_two_intersecting(domain: Domain, mask_a: int, mask_b: int) -> bool:
    """Every element of coset a shares at least two pairs with every element of coset b."""
    rows_a = int_to_indices(mask_a, domain.size)
    rows_b = int_to_indices(mask_b, domain.size)
    if not rows_a or not rows_b:
        return True
    inc = domain.incidence.astype(np.float32)
    counts = inc[rows_a] @ inc[rows_b].T
    return bool((counts >= 2).all())


@dataclass(frozen=True)
class ReductionOutcome:
    hypothesis: bool
    conclusion: bool

    @property
    def holds(self) -> bool:
        return (not self.hypothesis) or self.conclusion


def extended_reduction(c1: ExtendedCertificate, c2, n: int) -> ReductionOutcome:
    domain = get_domain(Kind.PM, n)
    if not isinstance(c2, ExtendedCertificate):
        c2 = ExtendedCertificate(c2)
    m1 = extended_mask(domain, c1)
    m2 = extended_mask(domain, c2)
    hyp = _all_two_intersecting(domain, m1, m2)
    if not hyp:
        return ReductionOutcome(False, False)
    return ReductionOutcome(True, _all_two_intersecting(domain, domain.coset_mask(c1.base), m2))


def check_extended_reduction(c1: ExtendedCertificate, c2, n: int) -> bool:
    """If everything satisfying c1 2-intersects everything satisfying c2, the same
    holds with c1 replaced by its base; returns whether that implication held.
    """
    if c1.forbidden is None:
        raise UsageError("c1 must carry a forbidden triangle")
    size2 = c2.size if isinstance(c2, ExtendedCertificate) else len(c2)
    if max(c1.size, size2) > n - 2:
        raise PreconditionError("extended certificates must have size at most n - 2")
    return extended_reduction(c1, c2, n).holds


# -- covers --------------------------------------------------------------------

def compatible_pairs(kind, p, q) -> bool:
    """Cosets U_p, U_q intersect: equal, or disjoint in both coordinates / points."""
    p, q = normalize_pair(kind, p), normalize_pair(kind, q)
    if p == q:
        return True
    if Kind(kind) is Kind.SYM:
        return p[0] != q[0] and p[1] != q[1]
    return not set(p) & set(q)


@dataclass(frozen=True)
class Cover:
    cosets: tuple[tuple[int, int], ...]

    @property
    def r(self) -> int:
        return len(self.cosets)


def find_cover(f: BooleanFunction, r: int) -> Optional[Cover]:
    """r pairwise compatible cosets whose union contains every 1-input, if any.

    Backtracking: the first uncovered member must lie in one of the cosets
    still to be chosen, so only its own pairs are tried.
    """
    if r < 1:
        raise UsageError("r must be at least 1")
    domain = f.domain
    kind = f.kind
    ones = f.mask

    def search(chosen, uncovered):
        if not uncovered:
            return chosen
        if len(chosen) == r:
            return None
        low = uncovered & -uncovered
        x = domain.elements[low.bit_length() - 1]
        for p in x.ordered_pairs():
            if p in chosen or not all(compatible_pairs(kind, p, q) for q in chosen):
                continue
            found = search(chosen + (p,), uncovered & ~domain.variable_mask(p))
            if found is not None:
                return found
        return None

    found = search((), ones)
    if found is None:
        return None
    # pad to exactly r cosets is unnecessary: fewer cosets already cover
    return Cover(tuple(found))


def is_r_covered(f: BooleanFunction, r: int) -> bool:
    return find_cover(f, r) is not None


def is_cover(f: BooleanFunction, cosets: Sequence) -> bool:
    kind = f.kind
    cosets = [normalize_pair(kind, p) for p in cosets]
    if not all(compatible_pairs(kind, p, q) for p, q in itertools.combinations(cosets, 2)):
        return False
    union = 0
    for p in cosets:
        union |= f.domain.variable_mask(p)
    return not (f.mask & ~union)


def covering_from_certificate(f: BooleanFunction, x: Element) -> tuple[tuple[int, int], ...]:
    """Candidate cover: x's minimum certificate with its last pair dropped."""
    _, cert = min_certificate(f, x)
    pairs = sorted(cert)
    return tuple(pairs[:-1])


# -- the T bound ---------------------------------------------------------------

def bound_T(c: int) -> int:
    """T = 2 floor(C/2) (C-1)! / 2^floor(C/2)."""
    if c < 2:
        raise UsageError("bound_T needs C >= 2")
    h = c // 2
    value = Fraction(2 * h * factorial(c - 1), 2 ** h)
    if value.denominator != 1:
        raise AssertionError("T is not an integer")
    return int(value)


def bound_T_product_form(c: int) -> int:
    """The counting product: prod C(C-2s, 2) for even C, (C-1) prod C(C-2s-1, 2) for odd C."""
    if c < 2:
        raise UsageError("bound_T needs C >= 2")
    r = c // 2
    if c % 2 == 0:
        return _prod(comb(c - 2 * s, 2) for s in range(r))
    return (c - 1) * _prod(comb(c - 2 * s - 1, 2) for s in range(r))


def bound_T_closed_product(c: int) -> Fraction:
    """C!/2^r for even C = 2r, (C-1)(C-1)!/2^r for odd C = 2r + 1."""
    r = c // 2
    if c % 2 == 0:
        return Fraction(factorial(c), 2 ** r)
    return Fraction((c - 1) * factorial(c - 1), 2 ** r)


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def count_min_certificate_classes(f: BooleanFunction) -> int:
    """Number of distinct minimum certificates returned across the 1-inputs."""
    return len({min_certificate(f, x)[1] for x in f.ones()})


# -- random instances ----------------------------------------------------------

def random_certificate(kind, n: int, size: int, rng: random.Random) -> Certificate:
    """A uniformly drawn consistent certificate of the given size."""
    kind = Kind(kind)
    if kind is Kind.SYM:
        src = rng.sample(range(1, n + 1), size)
        tgt = rng.sample(range(1, n + 1), size)
        return frozenset(zip(src, tgt))
    pts = rng.sample(range(1, 2 * n + 1), 2 * size)
    return make_certificate(kind, zip(pts[0::2], pts[1::2]))

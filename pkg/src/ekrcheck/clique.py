"""Intersection graphs and exact maximum-clique search.

Cliques of the graph anchored at x are exactly the t-intersecting families
containing x (the anchor itself is a vertex).  The solver is a bitset
branch-and-bound with a greedy sequential colouring bound; candidate sets
are Python ints with bit k standing for vertex k.
"""

from __future__ import annotations

import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Optional, Sequence

import numpy as np

from .domains import (
    Domain,
    Element,
    Kind,
    PerfectMatching,
    Permutation,
    bits_to_int,
    double_factorial,
    get_domain,
)
from .errors import CapacityError, UsageError, VerificationFailure

# largest n per kind accepted by build_graph
MAX_N = {Kind.SYM: 8, Kind.PM: 7}
_BLOCK = 2048


def default_anchor(kind, n: int) -> Element:
    if Kind(kind) is Kind.SYM:
        return Permutation.identity(n)
    return PerfectMatching.cross(n)


@dataclass
class IntersectionGraph:
    kind: Kind
    n: int
    t: int
    anchor: Element
    ranks: list[int]  # domain rank of each vertex, ascending
    adjacency: list[int]

    @property
    def order(self) -> int:
        return len(self.ranks)

    @property
    def domain(self) -> Domain:
        return get_domain(self.kind, self.n)

    @property
    def vertices(self) -> list[Element]:
        elements = self.domain.elements
        return [elements[r] for r in self.ranks]

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adjacency) // 2

    def edges(self):
        for u, a in enumerate(self.adjacency):
            a >>= u + 1
            v = u + 1
            while a:
                if a & 1:
                    yield u, v
                skip = (a & -a).bit_length() - 1 if not a & 1 else 1
                a >>= skip
                v += skip

    def is_clique(self, vertices: Sequence[int]) -> bool:
        return all(self.adjacency[u] >> v & 1 for u, v in itertools.combinations(vertices, 2))

    def dimacs(self) -> str:
        anchor = self.anchor.images if self.kind is Kind.SYM else self.anchor.edges
        anchor_txt = json.dumps(anchor, separators=(",", ":")).replace("(", "[").replace(")", "]")
        lines = [
            f"c kind={self.kind.value} n={self.n} t={self.t} anchor={anchor_txt}",
            "c vertex k (1-based) is the domain element of rank ranks[k-1]",
            "c ranks " + " ".join(map(str, self.ranks)),
            f"p edge {self.order} {self.edge_count()}",
        ]
        lines += [f"e {u + 1} {v + 1}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


def build_graph(kind, n: int, t: int = 2, anchor: Optional[Element] = None) -> IntersectionGraph:
    """Vertices: elements t-intersecting the anchor; edges: t <= |a & b| < n."""
    kind = Kind(kind)
    if t < 1:
        raise UsageError("t must be at least 1")
    if n > MAX_N[kind]:
        raise CapacityError(f"build_graph supports {kind.value} n <= {MAX_N[kind]}")
    domain = get_domain(kind, n)
    anchor = default_anchor(kind, n) if anchor is None else anchor
    domain.check(anchor)
    inc = domain.incidence
    a_row = inc[domain.rank(anchor)].astype(np.int32)
    ranks = np.flatnonzero(inc.astype(np.int32) @ a_row >= t)
    sub = inc[ranks].astype(np.float32)
    size = len(ranks)
    adjacency = []
    for start in range(0, size, _BLOCK):
        # BLAS float product is exact here: counts never exceed n
        counts = sub[start:start + _BLOCK] @ sub.T
        mask = (counts >= t) & (counts < n)
        for row in mask:
            adjacency.append(bits_to_int(row))
    return IntersectionGraph(kind, n, t, anchor, ranks.tolist(), adjacency)


# -- branch and bound -----------------------------------------------------------

def _colour_sort(candidates: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring in ascending vertex order; colours ascend."""
    order, colours = [], []
    colour = 0
    uncoloured = candidates
    while uncoloured:
        colour += 1
        q = uncoloured
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~low & ~adj[v]
            uncoloured &= ~low
            order.append(v)
            colours.append(colour)
    return order, colours


class CliqueSolver:
    """Exact maximum clique on a graph given as a list of bitset rows.

    Vertices are relabelled by descending degree (ties by index) before the
    search; results are reported in the original labels.
    """

    def __init__(self, adjacency: Sequence[int]):
        size = len(adjacency)
        self.size = size
        degrees = [a.bit_count() for a in adjacency]
        self.order = sorted(range(size), key=lambda v: (-degrees[v], v))
        position = {v: k for k, v in enumerate(self.order)}
        self.adj = []
        for v in self.order:
            row = 0
            a = adjacency[v]
            while a:
                low = a & -a
                row |= 1 << position[low.bit_length() - 1]
                a ^= low
            self.adj.append(row)
        self.nodes = 0

    def _search(self, target: int, collect: bool, limit: Optional[int]):
        """Strict improvement when not collecting; all cliques of size target otherwise."""
        adj = self.adj
        best: list[int] = []
        found: list[tuple[int, ...]] = []
        count = 0

        def expand(clique: list[int], candidates: int):
            nonlocal best, target, count
            self.nodes += 1
            order, colours = _colour_sort(candidates, adj)
            for k in range(len(order) - 1, -1, -1):
                bound = len(clique) + colours[k]
                if (bound < target) if collect else (bound <= target):
                    return
                v = order[k]
                clique.append(v)
                if collect and len(clique) == target:
                    count += 1
                    if limit is None or len(found) < limit:
                        found.append(tuple(clique))
                else:
                    sub = candidates & adj[v]
                    if sub:
                        expand(clique, sub)
                    elif not collect and len(clique) > target:
                        target = len(clique)
                        best = list(clique)
                clique.pop()
                candidates &= ~(1 << v)

        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, self.size + 1000))
        try:
            if self.size:
                expand([], (1 << self.size) - 1)
        finally:
            sys.setrecursionlimit(old)
        if collect:
            return count, found
        return best

    def max_clique(self) -> list[int]:
        best = self._search(0, collect=False, limit=None)
        return sorted(self.order[v] for v in best)

    def maximum_cliques(self, size: int, limit: Optional[int] = None) -> tuple[int, list[tuple[int, ...]]]:
        """Exact count and (up to ``limit``) the cliques of the given size, sorted."""
        if size == 0:
            return 1, [()]
        count, found = self._search(size, collect=True, limit=None)
        cliques = sorted(tuple(sorted(self.order[v] for v in c)) for c in found)
        if limit is not None:
            cliques = cliques[:limit]
        return count, cliques


def naive_clique_number(adjacency: Sequence[int]) -> int:
    """Exponential reference: largest vertex subset that is pairwise adjacent."""
    size = len(adjacency)
    for k in range(size, 0, -1):
        for combo in itertools.combinations(range(size), k):
            if all(adjacency[u] >> v & 1 for u, v in itertools.combinations(combo, 2)):
                return k
    return 0


def naive_maximum_cliques(adjacency: Sequence[int]) -> list[tuple[int, ...]]:
    size = len(adjacency)
    for k in range(size, 0, -1):
        found = [combo for combo in itertools.combinations(range(size), k)
                 if all(adjacency[u] >> v & 1 for u, v in itertools.combinations(combo, 2))]
        if found:
            return found
    return [()]


# -- reports ----------------------------------------------------------------------

@dataclass
class CliqueReport:
    clique_number: int
    maximum_clique_count: int
    cliques: Optional[list[tuple[int, ...]]] = None  # domain ranks
    elapsed: float = 0.0
    nodes: int = 0

    def as_dict(self, with_cliques: bool = False) -> dict:
        out = {"clique_number": self.clique_number, "maximum_clique_count": self.maximum_clique_count}
        if with_cliques and self.cliques is not None:
            out["cliques"] = [list(c) for c in self.cliques]
        return out


def max_clique_size(graph: IntersectionGraph) -> int:
    return len(CliqueSolver(graph.adjacency).max_clique())


def enumerate_maximum_cliques(graph: IntersectionGraph, limit: Optional[int] = None) -> CliqueReport:
    """All maximum cliques as sorted tuples of domain ranks, in canonical order."""
    start = time.perf_counter()
    solver = CliqueSolver(graph.adjacency)
    omega = len(solver.max_clique())
    count, cliques = solver.maximum_cliques(omega, limit)
    cliques = sorted(tuple(graph.ranks[v] for v in c) for c in cliques)
    return CliqueReport(omega, count, cliques, time.perf_counter() - start, solver.nodes)


# -- the uniqueness check ----------------------------------------------------------

def expected_clique_number(kind, n: int) -> int:
    """(n-2)! for permutations, (2n-5)!! for matchings."""
    if Kind(kind) is Kind.SYM:
        return factorial(n - 2)
    return double_factorial(2 * n - 5)


def anchor_cosets(graph: IntersectionGraph) -> dict[int, tuple]:
    """Vertex-set bitmask of each 2-coset through the anchor, keyed to its first pair of pairs."""
    domain = graph.domain
    position = {r: k for k, r in enumerate(graph.ranks)}
    out: dict[int, tuple] = {}
    for p, q in itertools.combinations(graph.anchor.ordered_pairs(), 2):
        mask = 0
        for r in domain.elements_of(domain.coset_mask([p, q])):
            mask |= 1 << position[domain.rank(r)]
        out.setdefault(mask, (p, q))
    return out


@dataclass
class UniquenessReport:
    kind: Kind
    n: int
    passed: bool
    clique: CliqueReport
    expected_clique_number: int
    expected_count: int
    cosets: list = field(default_factory=list)
    vertices: int = 0
    failure: Optional[str] = None
    direct: bool = False

    def as_dict(self, with_cliques: bool = False) -> dict:
        out = {
            "kind": self.kind.value,
            "n": self.n,
            "vertices": self.vertices,
            **self.clique.as_dict(with_cliques),
            "expected_clique_number": self.expected_clique_number,
            "expected_count": self.expected_count,
            "cosets": [[list(p), list(q)] for p, q in self.cosets],
            "direct_check": self.direct,
            "passed": self.passed,
        }
        if self.failure:
            out["failure"] = self.failure
        return out


def verify_uniqueness(kind, n: int, anchor: Optional[Element] = None, raise_on_failure: bool = False,
                      limit: Optional[int] = None) -> UniquenessReport:
    """Maximum 2-intersecting families through the anchor are exactly its 2-cosets.

    Checks the clique number, the number of maximum cliques (the number of
    distinct 2-cosets through the anchor, which is C(n,2) for n >= 4) and
    that every maximum clique is the vertex set of one of those cosets.
    """
    kind = Kind(kind)
    if n < 2:
        raise UsageError("verify_uniqueness needs n >= 2")
    graph = build_graph(kind, n, 2, anchor)
    report = enumerate_maximum_cliques(graph)
    cosets = anchor_cosets(graph)
    expected_omega = expected_clique_number(kind, n)
    expected_count = len(cosets)
    if n >= 4 and expected_count != comb(n, 2):
        raise AssertionError("distinct anchor cosets should number C(n, 2)")
    position = {r: k for k, r in enumerate(graph.ranks)}
    failure = None
    matched = []
    if report.clique_number != expected_omega:
        failure = f"clique number {report.clique_number} != {expected_omega}"
    elif report.maximum_clique_count != expected_count:
        failure = f"maximum clique count {report.maximum_clique_count} != {expected_count}"
    else:
        for c in report.cliques:
            mask = 0
            for r in c:
                mask |= 1 << position[r]
            if mask not in cosets:
                failure = f"maximum clique {list(c)} is not a 2-coset through the anchor"
                break
            matched.append(cosets[mask])
    out = UniquenessReport(kind, n, failure is None, report, expected_omega, expected_count,
                           matched, graph.order, failure, direct=n < 4)
    if failure and raise_on_failure:
        offending = None
        if report.cliques:
            offending = report.cliques[len(matched)] if len(matched) < len(report.cliques) else report.cliques[0]
        raise VerificationFailure(failure, offending)
    return out


def clique_family(kind, n: int, ranks: Sequence[int]) -> list[Element]:
    domain = get_domain(kind, n)
    return [domain.elements[r] for r in ranks]

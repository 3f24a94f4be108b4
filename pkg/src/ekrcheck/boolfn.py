"""Boolean functions on S_n, M_2n and the cube {0,1}^k.

Degree on S_n / M_2n is the polynomial degree in the indicator variables
x_ij, decided by exact span membership against a monomial evaluation
matrix.  Cube functions carry the sensitivity machinery used to rule out
certificate complexity n - 1 for degree-2 functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .domains import (
    Domain,
    DomainDescriptor,
    Element,
    Kind,
    PerfectMatching,
    Permutation,
    bits_to_int,
    get_domain,
    normalize_pair,
)
from .errors import CapacityError, ClassificationError, InternalInconsistencyError, UsageError
from .linalg import SpanMembership, exact_rank


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """0/1 truth vector indexed by canonical rank."""

    descriptor: DomainDescriptor
    truth: np.ndarray = field(repr=False)

    def __post_init__(self):
        truth = np.array(self.truth, dtype=np.uint8)
        if truth.shape != (self.descriptor.size,):
            raise UsageError(
                f"truth vector has length {truth.size}, expected {self.descriptor.size}")
        if truth.size and truth.max() > 1:
            raise UsageError("truth vector must be 0/1")
        truth.setflags(write=False)
        object.__setattr__(self, "truth", truth)

    @classmethod
    def from_mask(cls, domain: Domain, mask: int) -> "BooleanFunction":
        from .domains import int_to_bits
        return cls(domain.descriptor, int_to_bits(mask, domain.size))

    @classmethod
    def constant(cls, domain: Domain, value: int) -> "BooleanFunction":
        return cls(domain.descriptor, np.full(domain.size, int(bool(value)), dtype=np.uint8))

    @classmethod
    def from_callable(cls, domain: Domain, fn: Callable[[Element], int]) -> "BooleanFunction":
        return cls(domain.descriptor, np.array([int(bool(fn(x))) for x in domain], dtype=np.uint8))

    @property
    def domain(self) -> Domain:
        return get_domain(self.descriptor.kind, self.descriptor.n)

    @property
    def kind(self) -> Kind:
        return self.descriptor.kind

    @property
    def n(self) -> int:
        return self.descriptor.n

    def __call__(self, x: Element) -> int:
        return int(self.truth[self.domain.rank(x)])

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.descriptor == other.descriptor and np.array_equal(self.truth, other.truth)

    def __hash__(self):
        return hash((self.descriptor, self.truth.tobytes()))

    @cached_property
    def mask(self) -> int:
        return bits_to_int(self.truth)

    @property
    def weight(self) -> int:
        return int(self.truth.sum())

    def is_constant(self) -> bool:
        return self.truth.size == 0 or bool(self.truth.min() == self.truth.max())

    def ones(self) -> list[Element]:
        d = self.domain
        return [d.elements[k] for k in np.flatnonzero(self.truth)]

    def complement(self) -> "BooleanFunction":
        return BooleanFunction(self.descriptor, 1 - self.truth)


def indicator_of_family(domain: Domain | DomainDescriptor, members: Iterable[Element]) -> BooleanFunction:
    if isinstance(domain, DomainDescriptor):
        domain = get_domain(domain.kind, domain.n)
    truth = np.zeros(domain.size, dtype=np.uint8)
    for x in members:
        truth[domain.rank(x)] = 1
    return BooleanFunction(domain.descriptor, truth)


# -- polynomial degree ---------------------------------------------------------

def compatible(kind: Kind, u: tuple[int, int], v: tuple[int, int]) -> bool:
    """Whether x_u * x_v can be nonzero somewhere on the domain."""
    if u == v:
        return True
    if kind is Kind.SYM:
        return u[0] != v[0] and u[1] != v[1]
    return not set(u) & set(v)


@dataclass(frozen=True, eq=False)
class MonomialBasis:
    """Products of at most ``degree_cap`` pairwise compatible variables.

    Products containing two clashing variables vanish identically and are
    left out.  ``matrix[x, k]`` is the value of monomial k at element x.
    """

    descriptor: DomainDescriptor
    degree_cap: int
    monomials: tuple[tuple[tuple[int, int], ...], ...]
    matrix: np.ndarray = field(repr=False)


@lru_cache(maxsize=None)
def monomial_basis(kind, n: int, d: int) -> MonomialBasis:
    kind = Kind(kind)
    domain = get_domain(kind, n)
    variables = domain.variables
    inc = domain.incidence
    monomials: list[tuple] = [()]
    columns = [np.ones((domain.size, 1), dtype=np.uint8)]
    for size in range(1, d + 1):
        combos = [c for c in itertools.combinations(range(len(variables)), size)
                  if all(compatible(kind, variables[a], variables[b])
                         for a, b in itertools.combinations(c, 2))]
        if not combos:
            break
        idx = np.array(combos, dtype=np.int64)
        block = np.ones((domain.size, len(combos)), dtype=np.uint8)
        for k in range(size):
            block &= inc[:, idx[:, k]]
        monomials.extend(tuple(variables[a] for a in c) for c in combos)
        columns.append(block)
    matrix = np.concatenate(columns, axis=1)
    matrix.setflags(write=False)
    return MonomialBasis(domain.descriptor, d, tuple(monomials), matrix)


# largest domain for the exact span tests (M_10)
MAX_DEGREE_DOMAIN = 945


@lru_cache(maxsize=None)
def _degree_span(kind, n: int, d: int) -> SpanMembership:
    size = get_domain(kind, n).size
    if size > MAX_DEGREE_DOMAIN:
        raise CapacityError(f"degree test on {Kind(kind).value} n={n} ({size} elements) exceeds {MAX_DEGREE_DOMAIN}")
    return SpanMembership(monomial_basis(kind, n, d).matrix)


def degree_at_most(f: BooleanFunction, d: int) -> bool:
    if d >= max(f.n - 1, 0):
        return True
    return _degree_span(f.kind, f.n, d).contains(f.truth)


def polynomial_degree(f: BooleanFunction) -> int:
    """Least d with f in the rational span of monomials of degree <= d."""
    if f.is_constant():
        return 0
    top = max(f.n - 1, 0)
    for d in range(top):
        if _degree_span(f.kind, f.n, d).contains(f.truth):
            return d
    # every function on S_n or M_2n has degree at most n - 1
    return top


def degree_span_rank(kind, n: int, d: int) -> int:
    return _degree_span(Kind(kind), n, d).rank


# -- the cube {0,1}^k ----------------------------------------------------------

@dataclass(frozen=True)
class CubeFunction:
    """g: {0,1}^k -> {0,1}; ``truth[x]`` is g at the point whose bit i is y_{i+1}."""

    k: int
    truth: tuple[int, ...]

    def __post_init__(self):
        truth = tuple(int(v) for v in self.truth)
        if len(truth) != 1 << self.k:
            raise UsageError(f"cube truth table needs {1 << self.k} entries")
        if any(v not in (0, 1) for v in truth):
            raise UsageError("cube truth table must be 0/1")
        object.__setattr__(self, "truth", truth)

    @classmethod
    def from_callable(cls, k: int, fn: Callable[..., int]) -> "CubeFunction":
        return cls(k, tuple(int(bool(fn(*point_bits(x, k)))) for x in range(1 << k)))

    @classmethod
    def from_int(cls, k: int, table: int) -> "CubeFunction":
        return cls(k, tuple((table >> x) & 1 for x in range(1 << k)))

    def __call__(self, *y) -> int:
        if len(y) == 1 and not isinstance(y[0], (int, np.integer)):
            y = tuple(y[0])
        if len(y) != self.k:
            raise UsageError(f"expected {self.k} bits, got {len(y)}")
        return self.truth[point_index(y)]

    def as_int(self) -> int:
        return sum(v << x for x, v in enumerate(self.truth))


def point_bits(x: int, k: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(k))


def point_index(y: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(y))


def cube_coefficients(g: CubeFunction) -> list[int]:
    """Multilinear coefficients by Moebius inversion: c_S = sum_{T <= S} (-1)^|S-T| g(T)."""
    c = list(g.truth)
    for i in range(g.k):
        bit = 1 << i
        for x in range(1 << g.k):
            if x & bit:
                c[x] -= c[x ^ bit]
    return c


def cube_degree(g: CubeFunction) -> int:
    return max((bin(S).count("1") for S, c in enumerate(cube_coefficients(g)) if c), default=0)


def sensitivity_at(g: CubeFunction, point) -> int:
    x = point if isinstance(point, int) else point_index(point)
    return sum(g.truth[x] != g.truth[x ^ (1 << i)] for i in range(g.k))


def cube_span_masks(k: int, d: int) -> list[int]:
    """Subset masks of size <= d, ordered by size then value."""
    return sorted((m for m in range(1 << k) if bin(m).count("1") <= d),
                  key=lambda m: (bin(m).count("1"), m))


def cube_span_matrix(k: int, d: int) -> np.ndarray:
    """Columns are the monomials y_S (|S| <= d) as truth tables over {0,1}^k."""
    xs = np.arange(1 << k)
    return np.array([[int((x & m) == m) for m in cube_span_masks(k, d)] for x in xs], dtype=np.int64)


def cube_span_dimension(k: int, d: int = 2) -> int:
    return exact_rank(cube_span_matrix(k, d))


MAX_TRUTH_TABLE_SCAN = 4
MAX_SPAN_SCAN = 5


def low_degree_boolean_tables(k: int, d: int = 2, strategy: str = "auto") -> np.ndarray:
    """All Boolean truth tables on {0,1}^k of degree <= d, as an (m, 2^k) array.

    ``truth-table`` walks all 2^(2^k) tables and keeps those in the span;
    ``span`` walks the values on points of weight <= d (which determine a
    degree-<= d multilinear polynomial) and keeps the Boolean extensions.
    Rows are sorted by the table read as an integer (bit x = g(x)).
    """
    if strategy == "auto":
        strategy = "truth-table" if k <= MAX_TRUTH_TABLE_SCAN else "span"
    if strategy == "truth-table":
        if k > MAX_TRUTH_TABLE_SCAN:
            raise CapacityError(f"truth-table scan over 2^(2^{k}) functions is too large")
        size = 1 << k
        ints = np.arange(1 << size, dtype=np.int64)
        tables = ((ints[:, None] >> np.arange(size)) & 1).astype(np.int64)
        span = SpanMembership(cube_span_matrix(k, d))
        return tables[span.contains_many(tables)].astype(np.uint8)
    if strategy == "span":
        if k > MAX_SPAN_SCAN:
            raise CapacityError(f"span scan for k={k} is too large")
        low = cube_span_masks(k, d)
        # interpolation: values on low points -> coefficients -> all points
        inv = np.array([[(-1) ** (bin(S ^ T).count("1")) if (T & S) == T else 0 for T in low]
                        for S in low], dtype=np.int64)
        ev = np.array([[int((x & S) == S) for S in low] for x in range(1 << k)], dtype=np.int64)
        transfer = ev @ inv
        ints = np.arange(1 << len(low), dtype=np.int64)
        vals = ((ints[:, None] >> np.arange(len(low))) & 1).astype(np.int64)
        full = vals @ transfer.T
        keep = np.all((full == 0) | (full == 1), axis=1)
        full = full[keep]
        weights = (np.int64(1) << np.arange(1 << k, dtype=np.int64)) if k <= 5 else None
        order = np.argsort(full @ weights, kind="stable")
        return full[order].astype(np.uint8)
    raise UsageError(f"unknown scan strategy {strategy!r}")


def _sensitivity_table(tables: np.ndarray, k: int, point: int) -> np.ndarray:
    base = tables[:, point]
    return sum((tables[:, point ^ (1 << i)] != base).astype(np.int64) for i in range(k))


def degree2_sensitivity_scan(k: int, s: int, point: int = 0,
                             strategy: str = "auto") -> Optional[CubeFunction]:
    """First degree-<= 2 Boolean g with sensitivity >= s at ``point``, else None.

    With s = k this is g(point) != g(point ^ e_1) = ... = g(point ^ e_k).
    """
    if not 0 <= point < (1 << k):
        raise UsageError("point outside the cube")
    tables = low_degree_boolean_tables(k, 2, strategy)
    hits = np.flatnonzero(_sensitivity_table(tables, k, point) >= s)
    if hits.size == 0:
        return None
    return CubeFunction(k, tuple(tables[hits[0]].tolist()))


def max_sensitivity_by_point(k: int, d: int = 2, strategy: str = "auto") -> list[int]:
    """For each point, the largest sensitivity any degree-<= d Boolean g attains there."""
    tables = low_degree_boolean_tables(k, d, strategy)
    return [int(_sensitivity_table(tables, k, x).max()) for x in range(1 << k)]


# -- lifting and restriction ---------------------------------------------------

def lift_to_cube(f: BooleanFunction, flip_specs: Sequence, base: Element | None = None) -> CubeFunction:
    """g(y) = f(base modified by the specs selected by y).

    S_n: each spec is a transposition (a, b), applied on the right of ``base``
    (so base = id gives the product of the chosen transpositions).
    M_2n: each spec is two edges ((a, b), (c, d)) of ``base``, replaced by
    {a, d}, {c, b}.
    """
    domain = f.domain
    n = f.n
    if f.kind is Kind.SYM:
        base = base or Permutation.identity(n)
        domain.check(base)
        specs = [tuple(int(v) for v in spec) for spec in flip_specs]
        touched = [v for spec in specs for v in spec]
        if any(len(spec) != 2 or spec[0] == spec[1] for spec in specs) or len(set(touched)) != len(touched):
            raise UsageError(f"transpositions must be disjoint: {specs}")
        if not all(1 <= v <= n for v in touched):
            raise UsageError("transposition out of range")

        def element(y):
            images = list(base.images)
            for bit, (a, b) in zip(y, specs):
                if bit:
                    images[a - 1], images[b - 1] = images[b - 1], images[a - 1]
            return Permutation(tuple(images))
    else:
        base = base or PerfectMatching.standard(n)
        domain.check(base)
        specs = []
        for spec in flip_specs:
            (a, b), (c, d) = spec
            specs.append(((int(a), int(b)), (int(c), int(d))))
        used = [normalize_pair(Kind.PM, e) for spec in specs for e in spec]
        if len(set(used)) != len(used):
            raise UsageError(f"edge swaps must use disjoint edges: {specs}")
        if not all(e in base.pairs for e in used):
            raise UsageError("edge swaps must act on edges of the base matching")

        def element(y):
            edges = set(base.pairs)
            for bit, ((a, b), (c, d)) in zip(y, specs):
                if bit:
                    edges -= {normalize_pair(Kind.PM, (a, b)), normalize_pair(Kind.PM, (c, d))}
                    edges |= {normalize_pair(Kind.PM, (a, d)), normalize_pair(Kind.PM, (c, b))}
            return PerfectMatching.from_edges(edges, n)

    k = len(specs)
    return CubeFunction(k, tuple(f(element(point_bits(x, k))) for x in range(1 << k)))


def _renumber(removed: Iterable[int], size: int) -> dict[int, int]:
    removed = set(removed)
    keep = [v for v in range(1, size + 1) if v not in removed]
    return {v: k for k, v in enumerate(keep, start=1)}


def restriction_map(kind, n: int, pair) -> tuple[list[int], list[int]]:
    """Ranks of the coset U_pair in the n-domain and of their images in the (n-1)-domain."""
    kind = Kind(kind)
    pair = normalize_pair(kind, pair)
    big = get_domain(kind, n)
    small = get_domain(kind, n - 1)
    i, j = pair
    src_ranks, dst_ranks = [], []
    members = big.elements_of(big.variable_mask(pair))
    if kind is Kind.SYM:
        tgt = _renumber([j], n)  # sources renumber implicitly by skipping i
        for x in members:
            images = tuple(tgt[x(a)] for a in range(1, n + 1) if a != i)
            src_ranks.append(big.rank(x))
            dst_ranks.append(small.rank(Permutation(images)))
    else:
        ren = _renumber([i, j], 2 * n)
        for x in members:
            edges = [(ren[a], ren[b]) for a, b in x.edges if (a, b) != pair]
            src_ranks.append(big.rank(x))
            dst_ranks.append(small.rank(PerfectMatching.from_edges(edges, n - 1)))
    return src_ranks, dst_ranks


def restrict_to_coset(f: BooleanFunction, pair) -> BooleanFunction:
    """f on the coset U_pair, read as a function on the (n-1)-domain.

    Sources drop i and targets drop j (S_n), or both points are dropped
    (M_2n); the survivors are renumbered in increasing order.
    """
    if f.n < 2:
        raise UsageError("cannot restrict a function on a domain with n < 2")
    pair = normalize_pair(f.kind, pair)
    g = f.descriptor.ground
    if not all(1 <= v <= g for v in pair):
        raise UsageError(f"pair {pair} out of range")
    src, dst = restriction_map(f.kind, f.n, pair)
    small = get_domain(f.kind, f.n - 1)
    truth = np.zeros(small.size, dtype=np.uint8)
    truth[dst] = f.truth[src]
    return BooleanFunction(small.descriptor, truth)


def embed_in_coset(h: BooleanFunction, pair, n: int | None = None) -> BooleanFunction:
    """The function on the n-domain equal to h on U_pair (renumbered) and 0 elsewhere."""
    n = n or h.n + 1
    if n != h.n + 1:
        raise UsageError("embedding goes from n-1 to n")
    src, dst = restriction_map(h.kind, n, normalize_pair(h.kind, pair))
    big = get_domain(h.kind, n)
    truth = np.zeros(big.size, dtype=np.uint8)
    truth[src] = h.truth[dst]
    return BooleanFunction(big.descriptor, truth)


# -- degree-1 classification ---------------------------------------------------

@dataclass(frozen=True)
class Degree1Form:
    """One of the classified degree-1 shapes.

    ``form`` is "row" (f = sum_{j in members} x_{index j}), "column"
    (f = sum_{i in members} x_{i index}), "dictator" (M_2n analogue of row),
    "triangle" or "anti-triangle" (members is the triple {i, j, k}).
    """

    kind: Kind
    n: int
    form: str
    index: Optional[int]
    members: frozenset

    def evaluate(self) -> BooleanFunction:
        domain = get_domain(self.kind, self.n)
        arr = domain.array.astype(np.int64)
        members = sorted(self.members)
        if self.form in ("row", "dictator"):
            truth = np.isin(arr[:, self.index - 1], members)
        elif self.form == "column":
            # alpha^{-1}(j) in I  <=>  alpha(i) = j for some i in I
            truth = np.zeros(domain.size, dtype=bool)
            for i in members:
                truth |= arr[:, i - 1] == self.index
        else:
            i, j, k = members
            tri = (arr[:, i - 1] == j) | (arr[:, i - 1] == k) | (arr[:, j - 1] == k)
            truth = tri if self.form == "triangle" else ~tri
        return BooleanFunction(domain.descriptor, truth.astype(np.uint8))

    def as_dict(self) -> dict:
        out = {"form": self.form, "members": sorted(self.members)}
        if self.index is not None:
            out["index"] = self.index
        return out


def classify_degree1(f: BooleanFunction) -> Degree1Form:
    if not degree_at_most(f, 1):
        raise ClassificationError("classify_degree1 needs a function of degree at most 1")
    return _classify(f)


def _classify(f: BooleanFunction) -> Degree1Form:
    domain = f.domain
    arr = domain.array.astype(np.int64)
    ones = f.truth.astype(bool)
    g = f.descriptor.ground
    if f.kind is Kind.SYM:
        for i in range(1, g + 1):
            J = frozenset(np.unique(arr[ones, i - 1]).tolist())
            form = Degree1Form(f.kind, f.n, "row", i, J)
            if form.evaluate() == f:
                return form
        inv = np.argsort(arr, axis=1) + 1  # inv[:, j-1] = alpha^{-1}(j)
        for j in range(1, g + 1):
            I = frozenset(np.unique(inv[ones, j - 1]).tolist())
            form = Degree1Form(f.kind, f.n, "column", j, I)
            if form.evaluate() == f:
                return form
    else:
        for i in range(1, g + 1):
            J = frozenset(np.unique(arr[ones, i - 1]).tolist())
            form = Degree1Form(f.kind, f.n, "dictator", i, J)
            if form.evaluate() == f:
                return form
        for name in ("triangle", "anti-triangle"):
            for triple in itertools.combinations(range(1, g + 1), 3):
                form = Degree1Form(f.kind, f.n, name, None, frozenset(triple))
                if form.evaluate() == f:
                    return form
    raise InternalInconsistencyError(
        f"degree-<=1 function on {f.kind.value} n={f.n} matches no classified form")

"""Young tableaux, signed column sums and the isotypic decomposition.

For S_n the component of shape lambda is spanned by

    chi_{s,t} = sum over column permutations pi of t of sign(pi) * e_{s, t^pi}

with e_{s,t}(alpha) = 1 iff alpha carries row k of s into row k of t for
every k.  For M_2n the component of lambda is spanned by chi_t over
tableaux t of the doubled shape 2*lambda, with e_t(m) = 1 iff every edge
of m stays inside a row of t.

Projections use an exact rational Gram-Schmidt basis of each span; the
spectral degree is the largest n - lambda_1 over the nonzero components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Optional, Sequence

import numpy as np

from .boolfn import BooleanFunction, restrict_to_coset
from .domains import Domain, Element, Kind, get_domain
from .errors import CapacityError, ChiRangeError, UsageError
from .linalg import OrthogonalBasis, dot

Partition = tuple[int, ...]


def is_partition(parts: Sequence[int]) -> bool:
    return all(p > 0 for p in parts) and all(a >= b for a, b in zip(parts, parts[1:]))


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n in reverse-lexicographic order: (n), (n-1,1), ..."""
    if n < 1:
        raise UsageError("n must be positive")

    def gen(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return list(gen(n, n))


def doubled(partition: Sequence[int]) -> Partition:
    return tuple(2 * p for p in partition)


def conjugate(partition: Sequence[int]) -> Partition:
    return tuple(sum(1 for p in partition if p > c) for c in range(partition[0])) if partition else ()


@dataclass(frozen=True)
class Tableau:
    """Left-justified rows holding 1..N once each.

    Row lengths need not be weakly decreasing here: the row-moving
    construction produces compositions, and the signed sums make sense for
    any left-justified shape.  ``is_young`` tests the partition condition.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        if any(len(r) == 0 for r in rows):
            raise UsageError("tableau rows must be nonempty")
        content = sorted(v for r in rows for v in r)
        if content != list(range(1, len(content) + 1)):
            raise UsageError(f"tableau content must be 1..{len(content)}: {rows}")
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    @property
    def size(self) -> int:
        return sum(self.shape)

    @property
    def is_young(self) -> bool:
        return is_partition(self.shape)

    @property
    def columns(self) -> list[tuple[int, ...]]:
        width = max(self.shape)
        return [tuple(r[c] for r in self.rows if c < len(r)) for c in range(width)]

    def is_standard(self) -> bool:
        rows_ok = all(a < b for r in self.rows for a, b in zip(r, r[1:]))
        return rows_ok and all(a < b for col in self.columns for a, b in zip(col, col[1:]))

    def row_of(self) -> dict[int, int]:
        return {v: k for k, r in enumerate(self.rows) for v in r}

    def apply(self, mapping) -> "Tableau":
        """t^pi: every entry x replaced by pi(x)."""
        mapping = dict(mapping)
        return Tableau(tuple(tuple(mapping.get(v, v) for v in r) for r in self.rows))


def _sign(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


@dataclass(frozen=True)
class SignedColumnPermutation:
    """A permutation of tableau entries preserving each column, with its sign."""

    assignment: tuple[tuple[int, int], ...]
    sign: int

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.assignment)


def column_stabilizer(t: Tableau) -> list[SignedColumnPermutation]:
    """All column-preserving permutations of t; the last column varies fastest."""
    columns = t.columns
    per_column = [list(itertools.permutations(range(len(c)))) for c in columns]
    out = []
    for combo in itertools.product(*per_column):
        sign = 1
        assignment = []
        for col, p in zip(columns, combo):
            sign *= _sign(p)
            assignment.extend((col[r], col[p[r]]) for r in range(len(col)))
        out.append(SignedColumnPermutation(tuple(sorted(assignment)), sign))
    return out


def column_stabilizer_order(t: Tableau) -> int:
    return prod(factorial(len(c)) for c in t.columns)


# -- e and chi ----------------------------------------------------------------

def _check_same_shape(s: Tableau, t: Tableau):
    if s.shape != t.shape:
        raise UsageError(f"tableaux have different shapes {s.shape} and {t.shape}")


def _check_even_rows(t: Tableau):
    if any(r % 2 for r in t.shape):
        raise UsageError(f"matching tableaux need even row lengths, got {t.shape}")


def eval_e_sym(s: Tableau, t: Tableau, alpha) -> int:
    _check_same_shape(s, t)
    if alpha.n != s.size:
        raise UsageError("permutation size does not match the tableaux")
    for row_s, row_t in zip(s.rows, t.rows):
        targets = set(row_t)
        if any(alpha(x) not in targets for x in row_s):
            return 0
    return 1


def eval_e_pm(t: Tableau, m) -> int:
    _check_even_rows(t)
    if 2 * m.n != t.size:
        raise UsageError("matching size does not match the tableau")
    row = t.row_of()
    return int(all(row[a] == row[b] for a, b in m.edges))


def _row_labels(t: Tableau) -> np.ndarray:
    lab = np.zeros(t.size + 1, dtype=np.int64)
    for k, r in enumerate(t.rows):
        lab[list(r)] = k
    return lab


def e_vector_sym(s: Tableau, t: Tableau) -> np.ndarray:
    _check_same_shape(s, t)
    domain = get_domain(Kind.SYM, s.size)
    arr = domain.array.astype(np.int64)
    ls, lt = _row_labels(s), _row_labels(t)
    return np.all(lt[arr] == ls[1:], axis=1).astype(np.int64)


def e_vector_pm(t: Tableau) -> np.ndarray:
    _check_even_rows(t)
    domain = get_domain(Kind.PM, t.size // 2)
    arr = domain.array.astype(np.int64)
    lab = _row_labels(t)
    return np.all(lab[arr] == lab[1:], axis=1).astype(np.int64)


def _range_violation(vec: np.ndarray, domain: Domain):
    bad = np.flatnonzero(np.abs(vec) > 1)
    if bad.size:
        return domain.elements[int(bad[0])], int(vec[bad[0]])
    return None


def chi_vector_sym(s: Tableau, t: Tableau, check_range: bool = True) -> np.ndarray:
    """Integer vector over S_n (canonical order) of the signed sum chi_{s,t}."""
    _check_same_shape(s, t)
    out = np.zeros(factorial(s.size), dtype=np.int64)
    for pi in column_stabilizer(t):
        out += pi.sign * e_vector_sym(s, t.apply(pi.assignment))
    if check_range:
        bad = _range_violation(out, get_domain(Kind.SYM, s.size))
        if bad:
            raise ChiRangeError(f"chi_(s,t) takes value {bad[1]} at {bad[0]}", bad[0], bad[1])
    return out


def chi_vector_pm(t: Tableau, check_range: bool = False) -> np.ndarray:
    """Integer vector over M_2n of chi_t.

    Unlike the S_n case, chi_t can leave {-1, 0, 1} (one matching can sit
    inside the rows of several column-permuted tableaux), so the range check
    is opt-in; ``chi_range_counterexample`` reports a witness.
    """
    _check_even_rows(t)
    domain = get_domain(Kind.PM, t.size // 2)
    out = np.zeros(domain.size, dtype=np.int64)
    for pi in column_stabilizer(t):
        out += pi.sign * e_vector_pm(t.apply(pi.assignment))
    if check_range:
        bad = _range_violation(out, domain)
        if bad:
            raise ChiRangeError(f"chi_t takes value {bad[1]} at {bad[0]}", bad[0], bad[1])
    return out


def chi_range_counterexample(t: Tableau) -> Optional[tuple[Element, int]]:
    """A matching where chi_t is outside {-1, 0, 1}, with the value, or None."""
    vec = chi_vector_pm(t)
    return _range_violation(vec, get_domain(Kind.PM, t.size // 2))


# -- tableau enumeration ------------------------------------------------------

def fillings(shape: Sequence[int]) -> Iterator[Tableau]:
    """Every tableau of ``shape``, in lexicographic row-major order."""
    size = sum(shape)
    cuts = list(itertools.accumulate(shape))
    for perm in itertools.permutations(range(1, size + 1)):
        yield Tableau(tuple(perm[a:b] for a, b in zip([0] + cuts, cuts)))


def standard_tableaux(shape: Sequence[int]) -> list[Tableau]:
    """Standard Young tableaux of a partition shape, in lexicographic row-major order."""
    shape = tuple(shape)
    if not is_partition(shape):
        raise UsageError(f"{shape} is not a partition")
    size = sum(shape)
    out = []

    def place(rows, k):
        if k > size:
            out.append(Tableau(tuple(tuple(r) for r in rows)))
            return
        for r, length in enumerate(shape):
            c = len(rows[r])
            if c < length and (r == 0 or len(rows[r - 1]) > c):
                rows[r].append(k)
                place(rows, k + 1)
                rows[r].pop()

    place([[] for _ in shape], 1)
    out.sort(key=lambda t: tuple(v for r in t.rows for v in r))
    return out


@lru_cache(maxsize=None)
def count_standard_tableaux(shape: tuple[int, ...]) -> int:
    return len(standard_tableaux(shape))


def component_dimension(kind, partition: Sequence[int]) -> int:
    """dim V^lambda: (#SYT(lambda))^2 for S_n, #SYT(2 lambda) for M_2n."""
    partition = tuple(partition)
    if Kind(kind) is Kind.SYM:
        return count_standard_tableaux(partition) ** 2
    return count_standard_tableaux(doubled(partition))


def generators(kind, partition: Sequence[int]) -> Iterator:
    """Spanning functions for one component: standard fillings first, then the rest.

    Yields (label, integer vector); the label is (s, t) for S_n and t for M_2n.
    """
    kind = Kind(kind)
    partition = tuple(partition)
    if kind is Kind.SYM:
        std = standard_tableaux(partition)
        seen = set()
        for s in std:
            for t in std:
                seen.add((s, t))
                yield (s, t), chi_vector_sym(s, t)
        all_fill = list(fillings(partition))
        for s in all_fill:
            for t in all_fill:
                if (s, t) not in seen:
                    yield (s, t), chi_vector_sym(s, t)
    else:
        shape = doubled(partition)
        std = standard_tableaux(shape)
        seen = set(std)
        for t in std:
            yield t, chi_vector_pm(t)
        for t in fillings(shape):
            if t not in seen:
                yield t, chi_vector_pm(t)


@dataclass
class ComponentSpan:
    kind: Kind
    n: int
    partition: Partition
    dimension: int
    basis: OrthogonalBasis = field(repr=False)
    generators_used: int


# exact Gram-Schmidt over Fractions stays fast up to S_5 / M_8
MAX_SPECTRAL_DOMAIN = 120


@lru_cache(maxsize=None)
def component_span(kind, n: int, partition: tuple[int, ...]) -> ComponentSpan:
    """Orthogonal basis of V^lambda, streaming generators until the rank hits its dimension."""
    kind = Kind(kind)
    if sum(partition) != n or not is_partition(partition):
        raise UsageError(f"{partition} is not a partition of {n}")
    domain = get_domain(kind, n)
    if domain.size > MAX_SPECTRAL_DOMAIN:
        raise CapacityError(
            f"isotypic spans on {kind.value} n={n} ({domain.size} elements) exceed {MAX_SPECTRAL_DOMAIN}")
    dim = component_dimension(kind, partition)
    basis = OrthogonalBasis(domain.size)
    used = 0
    for _, vec in generators(kind, partition):
        used += 1
        basis.add(vec.tolist())
        if len(basis) == dim:
            break
    if len(basis) != dim:
        raise AssertionError(f"generators of {partition} span {len(basis)} dimensions, expected {dim}")
    return ComponentSpan(kind, n, partition, dim, basis, used)


def generator_rank(kind, n: int, partition: Sequence[int], limit: Optional[int] = None) -> int:
    """Rank of the full generator set (or its first ``limit`` members)."""
    basis = OrthogonalBasis(get_domain(kind, n).size)
    for k, (_, vec) in enumerate(generators(kind, partition)):
        if limit is not None and k >= limit:
            break
        basis.add(vec.tolist())
    return len(basis)


@dataclass(frozen=True)
class IsotypicComponent:
    partition: Partition
    vector: tuple[Fraction, ...]

    @property
    def norm_sq(self) -> Fraction:
        return sum((v * v for v in self.vector), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.vector)


def _values(f) -> list:
    if isinstance(f, BooleanFunction):
        return f.truth.astype(np.int64).tolist()
    return list(f)


def _domain_of(f, kind=None, n=None) -> tuple[Kind, int]:
    if isinstance(f, BooleanFunction):
        return f.kind, f.n
    if kind is None or n is None:
        raise UsageError("plain vectors need explicit kind and n")
    return Kind(kind), n


def isotypic_project(f, partition: Sequence[int], kind=None, n=None) -> IsotypicComponent:
    """Orthogonal projection of f onto V^lambda (V^{2 lambda} for matchings)."""
    kind, n = _domain_of(f, kind, n)
    partition = tuple(partition)
    span = component_span(kind, n, partition)
    return IsotypicComponent(partition, tuple(span.basis.project(_values(f))))


def decompose(f, kind=None, n=None) -> list[IsotypicComponent]:
    kind, n = _domain_of(f, kind, n)
    return [isotypic_project(f, lam, kind, n) for lam in partitions_of(n)]


def spectral_degree(f, kind=None, n=None) -> int:
    """max(n - lambda_1) over partitions whose component of f is nonzero."""
    kind, n = _domain_of(f, kind, n)
    vals = _values(f)
    best = 0
    for lam in partitions_of(n):
        if n - lam[0] <= best:
            continue
        span = component_span(kind, n, lam)
        # the projection is nonzero iff f is not orthogonal to the span
        if any(dot(vals, b) for b in span.basis.vectors):
            best = n - lam[0]
    return best


def inner(f, g) -> int:
    return int(np.dot(np.asarray(_values(f), dtype=np.int64), np.asarray(_values(g), dtype=np.int64)))


# -- constructions from the degree-reduction arguments -------------------------

def extend_tableau_fixed_row(s: Tableau, t: Tableau) -> tuple[Tableau, Tableau]:
    """Append the singleton row (n) to both tableaux of a pair over n - 1."""
    _check_same_shape(s, t)
    new = s.size + 1
    return Tableau(s.rows + ((new,),)), Tableau(t.rows + ((new,),))


def extend_tableau_pm(t: Tableau) -> Tableau:
    """Append the row (2n - 1, 2n) to a tableau over 2n - 2 points."""
    _check_even_rows(t)
    return Tableau(t.rows + ((t.size + 1, t.size + 2),))


def tableau_move_row(t: Tableau, r: int) -> Tableau:
    """t^r: move the first two entries of row r to a new last row (r = R + 1 gives t)."""
    rows = [list(row) for row in t.rows]
    if r == len(rows) + 1:
        return t
    if not 1 <= r <= len(rows) or len(rows[r - 1]) < 2:
        raise UsageError(f"row {r} cannot be moved in a tableau of shape {t.shape}")
    head, rest = rows[r - 1][:2], rows[r - 1][2:]
    if rest:
        rows[r - 1] = rest
    else:
        del rows[r - 1]
    rows.append(head)
    return Tableau(tuple(tuple(x) for x in rows))


def sym_extension_identity(f: BooleanFunction, s: Tableau, t: Tableau) -> tuple[int, int]:
    """(<f, chi_{s',t'}>, <f|, chi_{s,t}>) for f supported in U_n^n."""
    n = f.n
    if f.kind is not Kind.SYM or s.size != n - 1:
        raise UsageError("need f on S_n and a tableau pair over n - 1")
    s2, t2 = extend_tableau_fixed_row(s, t)
    restricted = restrict_to_coset(f, (n, n))
    return inner(f, chi_vector_sym(s2, t2)), inner(restricted, chi_vector_sym(s, t))


@dataclass(frozen=True)
class PmExtensionIdentity:
    lhs: int                  # <f, chi_{t'}>
    row_terms: tuple[int, ...]  # <f|, chi_{t^r}> for r = 1..R+1
    base: int                 # <f|, chi_t>
    short_rows: int           # number of rows of t of length 2
    side_condition: bool      # row terms vanish for every row longer than 2

    @property
    def scaled_base(self) -> int:
        return (self.short_rows + 1) * self.base


def pm_extension_identity(f: BooleanFunction, t: Tableau) -> PmExtensionIdentity:
    n = f.n
    if f.kind is not Kind.PM or t.size != 2 * n - 2:
        raise UsageError("need f on M_2n and a tableau over 2n - 2 points")
    restricted = restrict_to_coset(f, (2 * n - 1, 2 * n))
    lhs = inner(f, chi_vector_pm(extend_tableau_pm(t)))
    terms = tuple(inner(restricted, chi_vector_pm(tableau_move_row(t, r)))
                  for r in range(1, len(t.rows) + 2))
    side = all(term == 0 for r, term in enumerate(terms[:-1]) if len(t.rows[r]) > 2)
    return PmExtensionIdentity(lhs, terms, inner(restricted, chi_vector_pm(t)),
                               sum(1 for row in t.rows if len(row) == 2), side)


def pm_row_maximal_witnesses(h: BooleanFunction) -> list[Tableau]:
    """Tableaux t of shape 2 lambda, lambda_1 = n - deg h, with <h, chi_t> != 0 and
    the largest number of rows among such t (the choice made in the PM
    degree-reduction argument).  Empty for the zero function.
    """
    if h.kind is not Kind.PM:
        raise UsageError("pm_row_maximal_witnesses needs a function on M_2n")
    if not h.weight:
        return []
    n = h.n
    top = n - spectral_degree(h)
    candidates = []
    for lam in partitions_of(n):
        if lam[0] != top:
            continue
        candidates += [t for t in fillings(doubled(lam)) if inner(h, chi_vector_pm(t))]
    most = max(len(t.rows) for t in candidates)
    return [t for t in candidates if len(t.rows) == most]

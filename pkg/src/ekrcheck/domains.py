"""Ground sets S_n and M_2n: elements, canonical enumeration, cosets.

Everything is 1-indexed like the ground set [n] = {1, ..., n}; ranks are
0-indexed positions in the canonical (lexicographic) enumeration.

>>> d = enumerate_domain("pm", 3)
>>> len(d), d.unrank(0).edges
(15, ((1, 2), (3, 4), (5, 6)))
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterable, Union

import numpy as np

from .errors import CapacityError, UsageError

# largest domain we are willing to materialise (S_9 and M_14 fit)
MAX_DOMAIN_SIZE = 500_000


class Kind(str, Enum):
    SYM = "sym"
    PM = "pm"


def double_factorial(k: int) -> int:
    """k!! with the convention (-1)!! = 0!! = 1."""
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise UsageError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Iterable[int]) -> "Permutation":
        """Build from cycle notation, e.g. ``from_cycles(5, (1, 2, 3))``."""
        images = list(range(1, n + 1))
        for cycle in cycles:
            cycle = list(cycle)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def kind(self) -> Kind:
        return Kind.SYM

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    @property
    def pairs(self) -> frozenset:
        """Certificate representation {(1, a(1)), ..., (n, a(n))}."""
        return frozenset(enumerate(self.images, start=1))

    def ordered_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(enumerate(self.images, start=1))


@dataclass(frozen=True, order=True)
class PerfectMatching:
    partner: tuple[int, ...]

    def __post_init__(self):
        p = self.partner
        size = len(p)
        if size % 2:
            raise UsageError("a perfect matching needs an even ground set")
        for i, j in enumerate(p, start=1):
            if not 1 <= j <= size or j == i or p[j - 1] != i:
                raise UsageError(f"not a fixed-point-free involution: {p}")

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], n: int | None = None) -> "PerfectMatching":
        edges = [tuple(e) for e in edges]
        size = 2 * (n if n is not None else len(edges))
        partner = [0] * size
        for e in edges:
            if len(e) != 2:
                raise UsageError(f"edge must have two endpoints: {e}")
            a, b = e
            if not (1 <= a <= size and 1 <= b <= size) or partner[a - 1] or partner[b - 1]:
                raise UsageError(f"edges do not form a perfect matching of [{size}]: {edges}")
            partner[a - 1], partner[b - 1] = b, a
        return cls(tuple(partner))

    @classmethod
    def standard(cls, n: int) -> "PerfectMatching":
        """{1,2}, {3,4}, ..., {2n-1,2n}."""
        return cls.from_edges([(2 * k - 1, 2 * k) for k in range(1, n + 1)])

    @classmethod
    def cross(cls, n: int) -> "PerfectMatching":
        """{1,n+1}, {2,n+2}, ..., {n,2n}; the default clique anchor."""
        return cls.from_edges([(k, n + k) for k in range(1, n + 1)])

    @property
    def kind(self) -> Kind:
        return Kind.PM

    @property
    def n(self) -> int:
        return len(self.partner) // 2

    def __call__(self, i: int) -> int:
        return self.partner[i - 1]

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j in enumerate(self.partner, start=1) if i < j)

    @property
    def pairs(self) -> frozenset:
        """Pair representation as a set of sorted 2-tuples."""
        return frozenset(self.edges)

    def ordered_pairs(self) -> tuple[tuple[int, int], ...]:
        return self.edges


Element = Union[Permutation, PerfectMatching]


@dataclass(frozen=True)
class DomainDescriptor:
    kind: Kind
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.n < 1:
            raise UsageError("n must be positive")

    @property
    def size(self) -> int:
        if self.kind is Kind.SYM:
            return factorial(self.n)
        return double_factorial(2 * self.n - 1)

    @property
    def ground(self) -> int:
        """Size of the underlying point set: n for S_n, 2n for M_2n."""
        return self.n if self.kind is Kind.SYM else 2 * self.n


def _matchings(points: tuple[int, ...]):
    if not points:
        yield ()
        return
    a = points[0]
    for k in range(1, len(points)):
        rest = points[1:k] + points[k + 1:]
        for m in _matchings(rest):
            yield ((a, points[k]),) + m


def normalize_pair(kind: Kind, pair) -> tuple[int, int]:
    i, j = (int(v) for v in pair)
    if Kind(kind) is Kind.PM:
        if i == j:
            raise UsageError(f"matching pair needs two distinct points: {pair}")
        return (i, j) if i < j else (j, i)
    return (i, j)


class Domain:
    """Canonically ordered S_n or M_2n with rank maps and variable incidence.

    Variables are the indicator functions x_ij: ordered pairs for S_n,
    unordered (sorted) pairs for M_2n.
    """

    def __init__(self, descriptor: DomainDescriptor, max_size: int = MAX_DOMAIN_SIZE):
        if descriptor.size > max_size:
            raise CapacityError(
                f"{descriptor.kind.value} n={descriptor.n} has {descriptor.size} elements "
                f"(limit {max_size})")
        self.descriptor = descriptor
        n = descriptor.n
        if descriptor.kind is Kind.SYM:
            self.elements = [Permutation(p) for p in itertools.permutations(range(1, n + 1))]
            self.variables = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        else:
            ms = [PerfectMatching.from_edges(m, n) for m in _matchings(tuple(range(1, 2 * n + 1)))]
            self.elements = sorted(ms)
            self.variables = list(itertools.combinations(range(1, 2 * n + 1), 2))
        if len(self.elements) != descriptor.size:
            raise AssertionError("enumeration count does not match the closed form")
        self._index = {x: k for k, x in enumerate(self.elements)}
        self.var_index = {v: k for k, v in enumerate(self.variables)}

    @property
    def kind(self) -> Kind:
        return self.descriptor.kind

    @property
    def n(self) -> int:
        return self.descriptor.n

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"Domain({self.kind.value}, n={self.n})"

    def rank(self, x: Element) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UsageError(f"{x} is not an element of {self!r}") from None

    def unrank(self, k: int) -> Element:
        if not 0 <= k < len(self.elements):
            raise UsageError(f"rank {k} out of range for {self!r}")
        return self.elements[k]

    def __contains__(self, x) -> bool:
        return x in self._index

    @cached_property
    def array(self) -> np.ndarray:
        """(size, ground) int8 array of images / partners, 1-indexed."""
        attr = "images" if self.kind is Kind.SYM else "partner"
        return np.array([getattr(x, attr) for x in self.elements], dtype=np.int8)

    @cached_property
    def incidence(self) -> np.ndarray:
        """(size, n_variables) 0/1 matrix: entry (x, v) = x_v(x)."""
        arr = self.array.astype(np.int64)
        g = self.descriptor.ground
        inc = np.zeros((self.size, len(self.variables)), dtype=np.uint8)
        rows = np.arange(self.size)
        for i in range(1, g + 1):
            js = arr[:, i - 1]
            if self.kind is Kind.SYM:
                cols = (i - 1) * g + (js - 1)
                inc[rows, cols] = 1
            else:
                sel = js > i
                cols = np.array([self.var_index[(i, int(j))] for j in js[sel]], dtype=np.int64)
                inc[rows[sel], cols] = 1
        return inc

    @cached_property
    def _masks(self) -> list[int]:
        return [bits_to_int(self.incidence[:, k]) for k in range(len(self.variables))]

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def variable_mask(self, pair) -> int:
        """Bitmask (bit k = element of rank k) of the coset defined by one pair."""
        pair = normalize_pair(self.kind, pair)
        k = self.var_index.get(pair)
        if k is None:
            raise UsageError(f"pair {pair} is out of range for {self!r}")
        return self._masks[k]

    def coset_mask(self, certificate: Iterable) -> int:
        mask = self.full_mask
        for pair in certificate:
            mask &= self.variable_mask(pair)
        return mask

    def elements_of(self, mask: int) -> list[Element]:
        return [self.elements[k] for k in int_to_indices(mask, self.size)]

    def check(self, x) -> None:
        if x.kind is not self.kind or x.n != self.n:
            raise UsageError(f"{x} does not belong to {self!r}")


def bits_to_int(bits: np.ndarray) -> int:
    """Pack a 0/1 vector into a Python int, bit k = entry k."""
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def int_to_bits(mask: int, size: int) -> np.ndarray:
    raw = mask.to_bytes((size + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]


def int_to_indices(mask: int, size: int) -> list[int]:
    return np.flatnonzero(int_to_bits(mask, size)).tolist()


@lru_cache(maxsize=None)
def get_domain(kind, n: int) -> Domain:
    return Domain(DomainDescriptor(Kind(kind), n))


def enumerate_domain(kind, n: int) -> Domain:
    """All of S_n or M_2n in lexicographic order of the image/partner array."""
    return get_domain(Kind(kind), n)


def domain_of(x: Element) -> Domain:
    return get_domain(x.kind, x.n)


def intersection_size(a: Element, b: Element) -> int:
    """Agreements of two permutations, or common edges of two matchings."""
    if a.kind is not b.kind or a.n != b.n:
        raise UsageError("intersection_size needs two elements of the same domain")
    if a.kind is Kind.SYM:
        return sum(x == y for x, y in zip(a.images, b.images))
    return sum(x == y for x, y in zip(a.partner, b.partner)) // 2


def is_t_intersecting(a: Element, b: Element, t: int) -> bool:
    if t < 0:
        raise UsageError("t must be non-negative")
    return intersection_size(a, b) >= t


def is_t_intersecting_family(family: Iterable[Element], t: int) -> bool:
    family = list(family)
    return all(is_t_intersecting(a, b, t) for a, b in itertools.combinations(family, 2))


def coset_elements(domain: Domain | DomainDescriptor, certificate: Iterable) -> list[Element]:
    """Members satisfying every pair of ``certificate``, in canonical order.

    Inconsistent certificates give the empty list.
    """
    if isinstance(domain, DomainDescriptor):
        domain = get_domain(domain.kind, domain.n)
    return domain.elements_of(domain.coset_mask(certificate))

"""Exact linear algebra over the rationals.

Two independent tool sets live here on purpose:

* ``SpanMembership`` / ``exact_rank`` are backed by FLINT integer matrices and
  serve the polynomial (monomial-span) route to degree.
* ``OrthogonalBasis`` is a plain-Python Gram-Schmidt over ``Fraction`` and
  serves the isotypic (spectral) route.

Keeping the two routes on separate arithmetic means the degree cross-check
does not share a code path.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import flint
import numpy as np


def _to_fmpz(rows) -> flint.fmpz_mat:
    rows = np.asarray(rows)
    if rows.size == 0:
        return flint.fmpz_mat(rows.shape[0], rows.shape[1] if rows.ndim == 2 else 0)
    return flint.fmpz_mat([[int(v) for v in row] for row in rows])


def exact_rank(matrix) -> int:
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0
    return _to_fmpz(matrix).rank()


class SpanMembership:
    """Decides membership in the rational column span of an integer matrix.

    The left null space K (K @ A = 0) is computed once, exactly; afterwards
    ``v`` lies in the column span of ``A`` iff ``K @ v == 0``.
    """

    def __init__(self, matrix):
        matrix = np.asarray(matrix, dtype=np.int64)
        self.shape = matrix.shape
        rows, cols = matrix.shape
        if cols == 0:
            self.rank = 0
            kernel = np.eye(rows, dtype=np.int64)
        else:
            x, nullity = _to_fmpz(matrix.T).nullspace()
            self.rank = rows - nullity
            kernel = [[int(x[r, c]) for r in range(rows)] for c in range(nullity)]
            kernel = _primitive_rows(kernel)
        self._kernel = kernel
        self._fits = all(abs(v) < 2**31 for row in kernel for v in row) if len(kernel) else True
        self._np = np.array(kernel, dtype=np.int64 if self._fits else object).reshape(-1, rows)

    @property
    def codimension(self) -> int:
        return self._np.shape[0]

    def contains(self, vector) -> bool:
        v = np.asarray(vector, dtype=np.int64)
        if v.shape != (self.shape[0],):
            raise ValueError("vector length does not match the matrix")
        if self.codimension == 0:
            return True
        if self._fits:
            # |entries| < 2^31 and 0/1 vectors of length < 2^31 cannot overflow int64
            return not np.any(self._np @ v)
        return not any(sum(int(a) * int(b) for a, b in zip(row, v)) for row in self._np)

    def contains_many(self, vectors) -> np.ndarray:
        """Row-wise membership for a (k, rows) array of integer vectors."""
        vs = np.asarray(vectors, dtype=np.int64)
        if self.codimension == 0:
            return np.ones(len(vs), dtype=bool)
        if self._fits:
            return ~np.any(vs @ self._np.T, axis=1)
        return np.array([self.contains(v) for v in vs], dtype=bool)


def _primitive_rows(rows: list[list[int]]) -> list[list[int]]:
    out = []
    for row in rows:
        g = 0
        for v in row:
            g = gcd(g, v)
        out.append([v // g for v in row] if g > 1 else list(row))
    return out


def _exact(v):
    # numpy scalars would silently overflow inside Fraction arithmetic
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    raise TypeError(f"exact arithmetic needs integers or Fractions, got {type(v).__name__}")


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v) if a and b)


class OrthogonalBasis:
    """Incrementally built orthogonal basis of a span, exact over Q.

    Basis vectors are stored as primitive integer vectors, which keeps the
    Gram-Schmidt numbers small; rescaling does not affect orthogonality.
    """

    def __init__(self, length: int):
        self.length = length
        self.vectors: list[list[int]] = []
        self._norms: list[int] = []

    def __len__(self):
        return len(self.vectors)

    def residual(self, vector: Sequence) -> list[Fraction]:
        r = [Fraction(_exact(v)) for v in vector]
        for b, nb in zip(self.vectors, self._norms):
            c = dot(r, b)
            if c:
                c = c / nb
                r = [ri - c * bi for ri, bi in zip(r, b)]
        return r

    def add(self, vector: Sequence) -> bool:
        """Append ``vector`` if independent of the current span; report whether it was."""
        r = self.residual(vector)
        if not any(r):
            return False
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in r]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        self.vectors.append(ints)
        self._norms.append(dot(ints, ints))
        return True

    def project(self, vector: Sequence) -> list[Fraction]:
        vector = [Fraction(_exact(v)) for v in vector]
        out = [Fraction(0)] * self.length
        for b, nb in zip(self.vectors, self._norms):
            c = dot(vector, b)
            if c:
                c = Fraction(c, nb) if isinstance(c, int) else c / nb
                out = [o + c * bi for o, bi in zip(out, b)]
        return out

    def contains(self, vector: Sequence) -> bool:
        return not any(self.residual(vector))


def fraction_rank(vectors: Iterable[Sequence]) -> int:
    """Rank by exact Gram-Schmidt; independent of the FLINT path."""
    vectors = list(vectors)
    if not vectors:
        return 0
    basis = OrthogonalBasis(len(vectors[0]))
    for v in vectors:
        basis.add(v)
    return len(basis)

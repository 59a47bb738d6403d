"""Integer Hermite normal forms and rational Z-lattices."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def hnf(rows: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the Z-span of ``rows``.

    The result is upper triangular with positive pivots; entries above a
    pivot are reduced into [0, pivot). Zero rows are dropped.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    for c in range(ncols):
        live = [r for r in A if r[c] != 0]
        rest = [r for r in A if r[c] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[c] // piv[c]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[c] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            live = nxt
        if live:
            piv = live[0]
            if piv[c] < 0:
                piv = [-x for x in piv]
            out.append(piv)
            pivots.append(c)
        A = rest
    for i, (row, c) in enumerate(zip(out, pivots)):
        for k in range(i):
            q = out[k][c] // row[c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], row)]
    return out


def _lcm(xs: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


class Lattice:
    """A Z-lattice in Q^n, stored as ``H / den`` with H an integer HNF."""

    __slots__ = ("n", "den", "H")

    def __init__(self, n: int, den: int, H: list[list[int]]):
        self.n = n
        self.den = den
        self.H = H

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], n: int | None = None) -> "Lattice":
        gens = [tuple(Fraction(x) for x in g) for g in gens]
        if n is None:
            n = len(gens[0])
        den = _lcm(x.denominator for g in gens for x in g)
        H = hnf([[int(x * den) for x in g] for g in gens])
        return cls(n, den, H)._normalized()

    def _normalized(self) -> "Lattice":
        g = self.den
        for row in self.H:
            for x in row:
                g = math.gcd(g, x)
                if g == 1:
                    return self
        if g > 1:
            return Lattice(self.n, self.den // g, [[x // g for x in r] for r in self.H])
        return self

    @property
    def rank(self) -> int:
        return len(self.H)

    def basis(self) -> list[Vector]:
        return [tuple(Fraction(x, self.den) for x in r) for r in self.H]

    def coordinates(self, v: Sequence) -> list[Fraction] | None:
        """Coordinates of v in the HNF basis, or None if v is not in the Q-span."""
        w = [Fraction(x) * self.den for x in v]
        coords = []
        for row in self.H:
            c = next(i for i, x in enumerate(row) if x)
            q = w[c] / row[c]
            coords.append(q)
            if q:
                w = [a - q * b for a, b in zip(w, row)]
        if any(w):
            return None
        return coords

    def __contains__(self, v: Sequence) -> bool:
        w = [Fraction(x) * self.den for x in v]
        if any(x.denominator != 1 for x in w):
            return False
        w = [int(x) for x in w]
        for row in self.H:
            c = next(i for i, x in enumerate(row) if x)
            if w[c] % row[c]:
                return False
            q = w[c] // row[c]
            if q:
                w = [a - q * b for a, b in zip(w, row)]
        return not any(w)

    def covolume(self) -> Fraction:
        """|det| of a basis (full rank only)."""
        if self.rank != self.n:
            raise ValueError("covolume of a lattice that is not full rank")
        det = Fraction(1)
        for i, row in enumerate(self.H):
            det *= row[i]
        return det / Fraction(self.den) ** self.n

    def issubset(self, other: "Lattice") -> bool:
        return all(v in other for v in self.basis())

    def index_in(self, other: "Lattice") -> int:
        """[other : self] for full-rank self contained in other."""
        if not self.issubset(other):
            raise ValueError("not a sublattice")
        q = self.covolume() / other.covolume()
        assert q.denominator == 1
        return int(q)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(self.basis() + other.basis(), self.n)

    def scaled(self, c) -> "Lattice":
        return Lattice.from_generators([[x * Fraction(c) for x in v] for v in self.basis()], self.n)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and (self.den, self.H) == (other.den, other.H)

    def __hash__(self) -> int:
        return hash((self.den, tuple(map(tuple, self.H))))

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, den={self.den}, H={self.H})"


def kernel_mod(A: Sequence[Sequence[int]], modulus: int) -> list[list[int]]:
    """HNF basis of {c in Z^n : sum_k c_k A[k] == 0 (mod modulus)}."""
    n = len(A)
    m = len(A[0]) if A else 0
    rows = [[1 if i == k else 0 for i in range(n)] + [x % modulus for x in A[k]] for k in range(n)]
    rows += [[0] * n + [modulus if i == k else 0 for i in range(m)] for k in range(m)]
    # eliminate the trailing m columns first by putting them in front
    swapped = [r[n:] + r[:n] for r in rows]
    H = hnf(swapped)
    return [r[m:] for r in H if not any(r[:m])]


def smith_invariants(M: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors of an integer matrix (diagonal of its Smith form)."""
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form
    from sympy.polys.domains import ZZ

    S = smith_normal_form(Matrix(M), domain=ZZ)
    return [abs(int(S[i, i])) for i in range(min(S.shape))]

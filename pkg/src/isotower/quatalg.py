"""Quaternion algebras over real quadratic fields: arithmetic, Hilbert
symbols, ramification and type numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .arith import is_squarefree
from .lattice import hnf
from .quadfield import FieldElem, PrimeIdealK, QuadField, int_coords

Place = Union[int, PrimeIdealK]  # 0 / 1 are the real embeddings


class QuatElem:
    __slots__ = ("B", "c")

    def __init__(self, B: "QuatAlgebra", coords: Sequence):
        self.B = B
        self.c = tuple(B.K(v) if not isinstance(v, FieldElem) else v for v in coords)

    def __add__(self, other):
        other = self.B.coerce(other)
        return QuatElem(self.B, [u + v for u, v in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return QuatElem(self.B, [-u for u in self.c])

    def __sub__(self, other):
        return self + (-self.B.coerce(other))

    def __rsub__(self, other):
        return self.B.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            other = self.B.K(other) if not isinstance(other, FieldElem) else other
            return QuatElem(self.B, [u * other for u in self.c])
        a, b = self.B.a, self.B.b
        w1, x1, y1, z1 = self.c
        w2, x2, y2, z2 = other.c
        ab = a * b
        return QuatElem(self.B, [
            w1 * w2 + a * x1 * x2 + b * y1 * y2 - ab * z1 * z2,
            w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2,
            w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2,
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        ])

    def __rmul__(self, other):
        return self * other  # scalars are central

    def conj(self) -> "QuatElem":
        w, x, y, z = self.c
        return QuatElem(self.B, [w, -x, -y, -z])

    def trace(self) -> FieldElem:
        return self.c[0] * 2

    def norm(self) -> FieldElem:
        w, x, y, z = self.c
        a, b = self.B.a, self.B.b
        return w * w - a * x * x - b * y * y + a * b * z * z

    def inverse(self) -> "QuatElem":
        n = self.norm()
        return self.conj() * n.inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, QuatElem) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def to_rational(self) -> tuple[Fraction, ...]:
        """Coordinates over Q in the basis 1, w, i, wi, j, wj, k, wk (w = omega)."""
        out = []
        for v in self.c:
            out.extend(int_coords(v))
        return tuple(out)

    def __repr__(self) -> str:
        return "Q[" + ", ".join(map(repr, self.c)) + "]"


def reduced_invariants(x: QuatElem) -> tuple[QuatElem, FieldElem, FieldElem]:
    return x.conj(), x.trace(), x.norm()


@dataclass(frozen=True)
class RamSet:
    real: tuple[int, ...]
    finite: tuple[PrimeIdealK, ...]

    def __len__(self) -> int:
        return len(self.real) + len(self.finite)

    @property
    def places(self) -> list[Place]:
        return list(self.real) + list(self.finite)


class QuatAlgebra:
    """(a, b | K): i^2 = a, j^2 = b, ij = -ji."""

    def __init__(self, K: QuadField, a, b):
        self.K = K
        self.a = a if isinstance(a, FieldElem) else K(a)
        self.b = b if isinstance(b, FieldElem) else K(b)
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("structure constants must be nonzero")

    def __repr__(self) -> str:
        return f"QuatAlgebra({self.K.d}; a={self.a}, b={self.b})"

    def coerce(self, v) -> QuatElem:
        if isinstance(v, QuatElem):
            return v
        return QuatElem(self, [v, 0, 0, 0])

    def elem(self, w=0, x=0, y=0, z=0) -> QuatElem:
        return QuatElem(self, [w, x, y, z])

    @property
    def one(self) -> QuatElem:
        return self.elem(1)

    @property
    def i(self) -> QuatElem:
        return self.elem(0, 1)

    @property
    def j(self) -> QuatElem:
        return self.elem(0, 0, 1)

    @property
    def k(self) -> QuatElem:
        return self.elem(0, 0, 0, 1)

    def from_rational(self, v: Sequence) -> QuatElem:
        K = self.K
        return QuatElem(self, [K.from_int_coords(Fraction(v[2 * t]), Fraction(v[2 * t + 1])) for t in range(4)])

    def rational_basis(self) -> list[QuatElem]:
        K = self.K
        out = []
        for t in range(4):
            for e in (K(1), K.omega):
                c = [K(0)] * 4
                c[t] = e
                out.append(QuatElem(self, c))
        return out

    @cached_property
    def ramification(self) -> RamSet:
        return ramification_set(self)


# -- Hilbert symbols ------------------------------------------------------------


def hilbert_symbol(a: FieldElem, b: FieldElem, v: Place) -> int:
    if a.is_zero() or b.is_zero():
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if isinstance(v, int):
        return -1 if a.sign(v) < 0 and b.sign(v) < 0 else 1
    if v.p == 2:
        return _dyadic_hilbert(a, b, v)
    alpha, beta = v.valuation(a), v.valuation(b)
    s = v.chi_minus_one() ** (alpha * beta % 2)
    if beta % 2:
        s *= v.residue_character(a)
    if alpha % 2:
        s *= v.residue_character(b)
    return s


class ResidueRing:
    """O_K / P^N as pairs (A, B) meaning A + B*omega, reduced mod the HNF of P^N."""

    def __init__(self, K: QuadField, P: PrimeIdealK, N: int):
        self.K, self.P, self.N = K, P, N
        self._m = (K.d - 1) // 4 if K.d % 4 == 1 else K.d
        self._odd = K.d % 4 == 1
        g = [int(c) for c in int_coords(P.generator)]
        base = [(P.p, 0), (0, P.p), tuple(g), self.mul(tuple(g), (0, 1), reduce=False)]
        Pl = hnf([list(r) for r in base])
        cur = Pl
        for _ in range(N - 1):
            cur = hnf([list(self.mul(tuple(r), tuple(s), reduce=False)) for r in cur for s in Pl])
        self.H = cur
        self.prime_lattice = Pl

    def mul(self, u, v, reduce: bool = True):
        A1, B1 = u
        A2, B2 = v
        # omega^2 = omega + m (d = 1 mod 4) or m
        bb = B1 * B2
        A = A1 * A2 + bb * self._m
        B = A1 * B2 + B1 * A2 + (bb if self._odd else 0)
        return self.reduce((A, B)) if reduce else (A, B)

    def reduce(self, u):
        A, B = u
        (h00, h01), (_, h11) = self.H
        q = A // h00
        A -= q * h00
        B -= q * h01
        return (A, B % h11)

    def elements(self):
        (h00, _), (_, h11) = self.H
        for A in range(h00):
            for B in range(h11):
                yield (A, B)

    def in_prime(self, u) -> bool:
        (h00, h01), (_, h11) = self.prime_lattice
        A, B = u
        if A % h00:
            return False
        q = A // h00
        return (B - q * h01) % h11 == 0

    def of(self, alpha: FieldElem):
        A, B = int_coords(alpha)
        if A.denominator != 1 or B.denominator != 1:
            raise ValueError("residue of a non-integral element")
        return self.reduce((int(A), int(B)))


def unitize(alpha: FieldElem, P: PrimeIdealK) -> tuple[FieldElem, int]:
    """alpha times a square of K, integral, with P-valuation 0 or 1."""
    A, B = int_coords(alpha)
    den = math.lcm(A.denominator, B.denominator)
    alpha = alpha * (den * den)
    v = P.valuation(alpha)
    k = v // 2
    if k:
        if P.kind == "inert":
            alpha = alpha / (P.p ** (2 * k))
        else:
            gb = P.generator.conj()
            alpha = alpha * gb ** (2 * k) / (P.p ** (2 * k))
    return alpha, v % 2


_dyadic_rings: dict = {}


def _dyadic_ring(K: QuadField, P: PrimeIdealK) -> tuple[ResidueRing, set]:
    key = (K.d, P)
    if key not in _dyadic_rings:
        R = ResidueRing(K, P, 2 * P.e + 3)
        elems = list(R.elements())
        squares = {R.mul(z, z) for z in elems}
        _dyadic_rings[key] = (R, squares, elems)
    return _dyadic_rings[key]


def _dyadic_hilbert(a: FieldElem, b: FieldElem, P: PrimeIdealK) -> int:
    """Primitive solvability of z^2 = a x^2 + b y^2 modulo P^(2e+3).

    With a, b of valuation at most 1 a primitive solution has x or y a
    unit; normalising that coordinate to 1 leaves a one-variable search,
    and the approximate solution lifts because the partial derivative in
    the normalised variable has valuation at most e + 1.
    """
    K = QuadField(a.d)
    a, _ = unitize(a, P)
    b, _ = unitize(b, P)
    R, squares, elems = _dyadic_ring(K, P)
    ra, rb = R.of(a), R.of(b)
    for y in elems:
        w = R.mul(rb, R.mul(y, y))
        if R.reduce((ra[0] + w[0], ra[1] + w[1])) in squares:
            return 1
    for x in elems:
        if not R.in_prime(x):
            continue
        w = R.mul(ra, R.mul(x, x))
        if R.reduce((rb[0] + w[0], rb[1] + w[1])) in squares:
            return 1
    return -1


def is_local_square(alpha: FieldElem, P: PrimeIdealK) -> bool:
    """Whether alpha is a square in the completion K_P."""
    if alpha.is_zero():
        return True
    if P.p != 2:
        return P.valuation(alpha) % 2 == 0 and P.residue_character(alpha) == 1
    u, v = unitize(alpha, P)
    if v:
        return False
    # units: square iff square mod 4*pi
    R, squares, elems = _dyadic_ring(QuadField(alpha.d), P)
    Rs = ResidueRing(R.K, P, 2 * P.e + 1)
    target = Rs.of(u)
    return any(Rs.reduce(Rs.mul(z, z)) == target for z in Rs.elements())


def candidate_primes(B: QuatAlgebra) -> list[PrimeIdealK]:
    """Primes dividing 2ab, the only finite places that can ramify."""
    K = B.K
    cands = set(K.split_prime(2))
    cands.update(K.primes_dividing(B.a, B.b))
    return sorted(cands, key=PrimeIdealK.sort_key)


def ramification_set(B: QuatAlgebra) -> RamSet:
    real = tuple(v for v in (0, 1) if hilbert_symbol(B.a, B.b, v) == -1)
    fin = tuple(P for P in candidate_primes(B) if hilbert_symbol(B.a, B.b, P) == -1)
    if (len(real) + len(fin)) % 2:
        raise ArithmeticError(f"odd ramification set for {B}: {real} {fin}")
    return RamSet(real, fin)


def satisfies_eichler(B: QuatAlgebra) -> bool:
    return len(B.ramification.real) < 2


def type_number(B: QuatAlgebra) -> int:
    if not satisfies_eichler(B):
        raise ValueError("totally definite algebra: type number not handled")
    ram = B.ramification
    return B.K.class_field_group(ram.real, ram.finite).order


def genus_group(B: QuatAlgebra):
    ram = B.ramification
    return B.K.class_field_group(ram.real, ram.finite)


@dataclass(frozen=True)
class AlgebraCandidate:
    d: int
    a: tuple[int, int]  # integral-basis coordinates
    b: tuple[int, int]
    ram: RamSet
    type_number: int

    def algebra(self) -> QuatAlgebra:
        K = QuadField(self.d)
        return QuatAlgebra(K, K.from_int_coords(*self.a), K.from_int_coords(*self.b))


def small_elements(K: QuadField, coord_bound: int = 3, norm_bound: int = 30) -> list[tuple[int, int]]:
    out = []
    for A in range(-coord_bound, coord_bound + 1):
        for B in range(-coord_bound, coord_bound + 1):
            if A == 0 and B == 0:
                continue
            n = K.from_int_coords(A, B).norm()
            if abs(n) <= norm_bound:
                out.append((A, B))
    return sorted(out, key=lambda c: (abs(K.from_int_coords(*c).norm()), abs(c[0]) + abs(c[1]), c))


def search_field(d: int, ell_target: int, coord_bound: int = 3, norm_bound: int = 30) -> list[AlgebraCandidate]:
    """Distinct ramification sets over Q(sqrt d) with exactly one ramified
    real place, nonempty finite ramification and type number 2^ell."""
    K = QuadField(d)
    # type number divides |Cl / Cl^2|, which bounds the attainable rank
    if K.class_field_group((0,), ()).rank < ell_target:
        return []
    elems = small_elements(K, coord_bound, norm_bound)
    seen: set = set()
    hits = []
    for ac in elems:
        a = K.from_int_coords(*ac)
        for bc in elems:
            if bc < ac:
                continue
            b = K.from_int_coords(*bc)
            neg = [a.sign(v) < 0 and b.sign(v) < 0 for v in (0, 1)]
            if sum(neg) != 1:
                continue
            B = QuatAlgebra(K, a, b)
            ram = B.ramification
            if not ram.finite or ram in seen:
                continue
            seen.add(ram)
            t = type_number(B)
            if t == 2**ell_target:
                hits.append(AlgebraCandidate(d, ac, bc, ram, t))
    return hits


def search_algebras(d_max: int, ell_target: int, jobs: int = 1, **kw) -> list[AlgebraCandidate]:
    if ell_target < 1:
        raise ValueError("ell_target must be >= 1")
    ds = [d for d in range(2, d_max + 1) if is_squarefree(d)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_search_one, [(d, ell_target, kw) for d in ds]))
    else:
        results = [search_field(d, ell_target, **kw) for d in ds]
    return [h for r in results for h in r]


def _search_one(args):
    d, ell, kw = args
    return search_field(d, ell, **kw)

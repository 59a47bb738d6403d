"""Real quadratic fields: elements, units, primes, class groups and the
elementary 2-quotients that realise the Galois groups of genus fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .arith import (
    factor, hensel_lift, is_prime, is_squarefree, kronecker, legendre_fraction,
    mod_fraction, primes, rational_sqrt, sqrt_mod, vp,
)
from .lattice import hnf


class FieldElem:
    """x + y*sqrt(d) with rational x, y."""

    __slots__ = ("x", "y", "d")

    def __init__(self, x, y, d: int):
        self.x = Fraction(x)
        self.y = Fraction(y)
        self.d = d

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.d != self.d:
                raise ValueError("elements of different fields")
            return other
        return FieldElem(other, 0, self.d)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.x, -self.y, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(self.x * o.x + self.d * self.y * o.y, self.x * o.y + self.y * o.x, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        return FieldElem(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = FieldElem(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "FieldElem":
        return FieldElem(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return isinstance(other, FieldElem) and (self.x, self.y, self.d) == (other.x, other.y, other.d)

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.d))

    def sign(self, place: int) -> int:
        """Sign under the real embedding ``place`` (0: sqrt(d) > 0, 1: sqrt(d) < 0)."""
        y = self.y if place == 0 else -self.y
        return real_sign(self.x, y, self.d)

    def __repr__(self) -> str:
        return f"({self.x} + {self.y}*sqrt({self.d}))"


def real_sign(x: Fraction, y: Fraction, d: int) -> int:
    """Exact sign of x + y*sqrt(d)."""
    sx = (x > 0) - (x < 0)
    sy = (y > 0) - (y < 0)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    return sx if x * x > d * y * y else sy


@dataclass(frozen=True)
class BinaryForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        return iter((self.a, self.b, self.c))


def _gt_sqrt(x: int, D: int) -> bool:
    return x > 0 and x * x > D


def _lt_sqrt(x: int, D: int) -> bool:
    return x < 0 or x * x < D


def is_reduced(f: BinaryForm) -> bool:
    a, b, _ = f
    D = f.disc
    return 0 < b and _lt_sqrt(b, D) and _lt_sqrt(2 * abs(a) - b, D) and _gt_sqrt(2 * abs(a) + b, D)


def rho(f: BinaryForm) -> BinaryForm:
    """One step of the reduction operator for indefinite forms."""
    a, b, c = f
    D = f.disc
    m = 2 * abs(c)
    r = (-b) % m
    s = math.isqrt(D)
    if abs(c) <= s:
        # largest b' = -b mod 2|c| with b' < sqrt(D)
        bp = r + ((s - r) // m) * m
        while not _lt_sqrt(bp, D):
            bp -= m
    else:
        bp = r if r <= abs(c) else r - m
    return BinaryForm(c, bp, (bp * bp - D) // (4 * c))


def reduce_form(f: BinaryForm) -> BinaryForm:
    seen = 0
    while not is_reduced(f):
        f = rho(f)
        seen += 1
        if seen > 10_000:
            raise RuntimeError(f"form reduction did not terminate for {f}")
    return f


def form_cycle(f: BinaryForm) -> list[BinaryForm]:
    f = reduce_form(f)
    cyc = [f]
    g = rho(f)
    while g != f:
        cyc.append(g)
        g = rho(g)
    return cyc


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Dirichlet composition of primitive forms of equal discriminant."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = f.disc
    if g.disc != D:
        raise ValueError("discriminants differ")
    s = (b1 + b2) // 2
    n = b2 - s
    e, u, v = _xgcd(a1, a2)
    d1, x, y = _xgcd(e, s)
    # d1 = x*(u*a1 + v*a2) + y*s
    A = a1 * a2 // (d1 * d1)
    # B = b2 + 2*(a2/d1)*k with k chosen so B^2 = D mod 4A
    k = (x * v * (s - b2) - y * c2) % (a1 // d1) if a1 // d1 else 0
    B = b2 + 2 * (a2 // d1) * k
    B %= 2 * A if A > 0 else -2 * A
    C = (B * B - D) // (4 * A)
    out = BinaryForm(A, B, C)
    assert out.disc == D and (B * B - D) % (4 * A) == 0
    return out


class FiniteAbelianGroup:
    """Finite abelian group given by a multiplication table on 0..n-1."""

    def __init__(self, table: list[list[int]], identity: int, labels: list):
        self.table = table
        self.identity = identity
        self.labels = labels

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def power(self, x: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def subgroup(self, gens: Iterable[int]) -> set[int]:
        H = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    x = self.mul(h, g)
                    if x not in H:
                        H.add(x)
                        nxt.append(x)
            frontier = nxt
        return H

    def invariants(self) -> list[int]:
        """Abelian invariants (elementary divisors) from element-order counts."""
        from collections import Counter

        n = self.order
        out: list[int] = []
        for p, e in factor(n).items() if n > 1 else []:
            # number of elements killed by p^k determines the p-part
            killed = []
            for k in range(e + 1):
                killed.append(sum(1 for x in range(n) if self.power(x, p**k) == self.identity))
            ranks = [round(math.log(killed[k + 1] / killed[k], p)) for k in range(e) if killed[k + 1] > killed[k]]
            parts = Counter()
            for k in range(len(ranks)):
                nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
                if ranks[k] - nxt:
                    parts[p ** (k + 1)] = ranks[k] - nxt
            for q, mult in sorted(parts.items()):
                out += [q] * mult
        return sorted(out)


@dataclass(frozen=True)
class PrimeIdealK:
    """A prime of Q(sqrt d) given by the pair (p, g), g = (b + sqrt D)/2 unless inert."""

    p: int
    kind: str  # "split", "inert" or "ramified"
    b: int | None
    d: int
    D: int

    @property
    def f(self) -> int:
        return 2 if self.kind == "inert" else 1

    @property
    def e(self) -> int:
        return 2 if self.kind == "ramified" else 1

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def norm(self) -> int:
        return self.q

    @property
    def generator(self) -> FieldElem:
        if self.kind == "inert":
            return FieldElem(self.p, 0, self.d)
        y = Fraction(1, 2) if self.D == self.d else Fraction(1)
        return FieldElem(Fraction(self.b, 2), y, self.d)

    @property
    def form(self) -> BinaryForm:
        if self.kind == "inert":
            raise ValueError("inert primes are principal")
        return BinaryForm(self.p, self.b, (self.b * self.b - self.D) // (4 * self.p))

    @property
    def dyadic(self) -> bool:
        return self.p == 2

    @property
    def omega_root(self) -> int:
        """Image of omega in the residue field (degree one primes)."""
        if self.kind == "inert":
            raise ValueError("inert prime has residue degree 2")
        if self.D % 4 == 1:
            return -Fraction(self.b - 1, 2).numerator % self.p
        return (-(self.b // 2)) % self.p

    def label(self) -> str:
        return f"({self.p}, {self.kind}, b={self.b})"

    def sort_key(self):
        return (self.q, self.p, self.b if self.b is not None else -1)

    # -- valuations and residues -------------------------------------------------

    def _int_parts(self, alpha: FieldElem) -> tuple[int, int, int]:
        """alpha = (A + B*omega) / den with A, B, den integers."""
        A, B = int_coords(alpha)
        den = math.lcm(A.denominator, B.denominator)
        return int(A * den), int(B * den), den

    def valuation(self, alpha: FieldElem) -> int:
        if alpha.is_zero():
            raise ValueError("valuation of 0")
        A, B, den = self._int_parts(alpha)
        p = self.p
        k = min(vp(A, p) if A else 10**9, vp(B, p) if B else 10**9)
        A //= p**k
        B //= p**k
        v = self.e * (k - vp(den, p))
        if self.kind == "inert":
            return v
        nb = omega_norm(A, B, self.d)
        if self.kind == "ramified":
            return v + vp(nb, p)
        if (A + B * self.omega_root) % p == 0:
            return v + vp(nb, p)
        return v

    def residue_character(self, alpha: FieldElem) -> int:
        """Quadratic character of the unit part of alpha (odd p).

        The unit part is taken with respect to the uniformiser p (split,
        inert) or sqrt(d) (ramified); the tame symbol formula only needs
        one consistent choice per prime.
        """
        p = self.p
        if p == 2:
            raise ValueError("residue character at a dyadic prime")
        v = self.valuation(alpha)
        if self.kind == "inert":
            return legendre_fraction(alpha.norm() / Fraction(p) ** (2 * v), p)
        if self.kind == "ramified":
            k, r = divmod(v, 2)
            part = alpha.x if r == 0 else alpha.y
            return legendre_fraction(part / Fraction(self.d) ** k, p)
        A, B, den = self._int_parts(alpha)
        prec = v + vp(den, p) + 3 + max(0, vp(omega_norm(A, B, self.d), p) if (A or B) else 0)
        mod = p**prec
        rho_ = self.omega_padic(prec)
        num = (A + B * rho_) % mod
        w = vp(num, p) if num else prec
        den_p = vp(den, p)
        assert w - den_p == v, "insufficient precision in residue computation"
        unit_num = (num // p**w) % p
        unit_den = (den // p**den_p) % p
        return kronecker(unit_num, p) * kronecker(unit_den, p)

    def omega_padic(self, prec: int) -> int:
        """Image of omega in Z_p mod p**prec for degree-one primes."""
        return _omega_padic(self, prec)

    def chi_minus_one(self) -> int:
        return 1 if (self.q - 1) // 2 % 2 == 0 else -1


_omega_cache: dict = {}


def _omega_padic(P: PrimeIdealK, prec: int) -> int:
    key = (P, prec)
    if key in _omega_cache:
        return _omega_cache[key]
    p = P.p
    if P.kind == "ramified":
        raise ValueError("no unramified p-adic image of omega at a ramified prime")
    if P.D % 4 == 1:
        coeffs = [-(P.d - 1) // 4, -1, 1]
    else:
        coeffs = [-P.d, 0, 1]
    val = hensel_lift(coeffs, P.omega_root, p, prec)
    _omega_cache[key] = val
    return val


def omega_norm(A: int, B: int, d: int) -> int:
    """Norm of A + B*omega."""
    if d % 4 == 1:
        return A * A + A * B - B * B * ((d - 1) // 4)
    return A * A - d * B * B


def int_coords(alpha: FieldElem) -> tuple[Fraction, Fraction]:
    """Coordinates of alpha in the integral basis (1, omega)."""
    if alpha.d % 4 == 1:
        B = 2 * alpha.y
        return alpha.x - alpha.y, B
    return alpha.x, alpha.y


class QuadField:
    """Q(sqrt d) for squarefree d > 1, with cached arithmetic invariants."""

    def __init__(self, d: int):
        if d <= 1 or not is_squarefree(d):
            raise ValueError(f"d must be a squarefree integer > 1, got {d}")
        self.d = d
        self.D = d if d % 4 == 1 else 4 * d

    def __repr__(self) -> str:
        return f"QuadField({self.d})"

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("QuadField", self.d))

    def __call__(self, x, y=0) -> FieldElem:
        return FieldElem(x, y, self.d)

    @property
    def omega(self) -> FieldElem:
        if self.d % 4 == 1:
            return FieldElem(Fraction(1, 2), Fraction(1, 2), self.d)
        return FieldElem(0, 1, self.d)

    def from_int_coords(self, A, B) -> FieldElem:
        return A + B * self.omega if B else FieldElem(A, 0, self.d)

    def int_coords(self, alpha: FieldElem) -> tuple[Fraction, Fraction]:
        return int_coords(alpha)

    def is_integral(self, alpha: FieldElem) -> bool:
        return all(c.denominator == 1 for c in int_coords(alpha))

    def is_square(self, alpha: FieldElem) -> bool:
        return self.sqrt(alpha) is not None

    def sqrt(self, alpha: FieldElem) -> FieldElem | None:
        """A square root of alpha in K, or None."""
        if alpha.is_zero():
            return self(0)
        n = rational_sqrt(alpha.norm())
        if n is None:
            return None
        for s in ((alpha.x + n) / 2, (alpha.x - n) / 2):
            u = rational_sqrt(s)
            if u is not None and u != 0:
                cand = FieldElem(u, alpha.y / (2 * u), self.d)
                if cand * cand == alpha:
                    return cand
        if alpha.y == 0:
            v = rational_sqrt(alpha.x / self.d)
            if v is not None:
                return FieldElem(0, v, self.d)
        return None

    # -- units ---------------------------------------------------------------

    @cached_property
    def fundamental_unit(self) -> tuple[FieldElem, int]:
        """(eps, N(eps)) with eps > 1 under the first embedding.

        Runs the continued fraction of omega and stops at the first
        convergent p/q for which p - q*omega is a unit.
        """
        d = self.d
        D_, P, Q = (d, 1, 2) if d % 4 == 1 else (d, 0, 1)
        s = math.isqrt(D_)
        p0, p1, q0, q1 = 0, 1, 1, 0
        for _ in range(100_000):
            a = (P + s) // Q
            p0, p1 = p1, a * p1 + p0
            q0, q1 = q1, a * q1 + q0
            P = a * Q - P
            Q = (D_ - P * P) // Q
            e = p1 - q1 * self.omega
            n = e.norm()
            if n in (1, -1):
                eps = e.inverse()
                if eps.sign(0) < 0:
                    eps = -eps
                if (eps - 1).sign(0) < 0:
                    eps = eps.conj() * int(n)
                    if eps.sign(0) < 0:
                        eps = -eps
                return eps, int(n)
        raise RuntimeError("continued fraction did not produce a unit")

    # -- primes ----------------------------------------------------------------

    def split_prime(self, p: int) -> list[PrimeIdealK]:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        D, d = self.D, self.d
        k = kronecker(D, p)
        if p == 2:
            if D % 2 == 0:
                return [PrimeIdealK(2, "ramified", 0 if d % 2 == 0 else 2, d, D)]
            if D % 8 == 5:
                return [PrimeIdealK(2, "inert", None, d, D)]
            return [PrimeIdealK(2, "split", 1, d, D), PrimeIdealK(2, "split", -1, d, D)]
        if k == -1:
            return [PrimeIdealK(p, "inert", None, d, D)]
        r = sqrt_mod(D, p)
        if k == 0:
            b = 0 if D % 2 == 0 else p
            return [PrimeIdealK(p, "ramified", b, d, D)]
        bs = []
        for rr in (r, p - r):
            b = rr if rr % 2 == D % 2 else rr + p
            bs.append(b)
        return [PrimeIdealK(p, "split", b, d, D) for b in sorted(bs)]

    def primes_above(self, n: int) -> list[PrimeIdealK]:
        out = []
        for p in factor(n):
            out += self.split_prime(p)
        return out

    def primes_dividing(self, *elems: FieldElem) -> list[PrimeIdealK]:
        """Primes of K at which some of the given elements has nonzero valuation."""
        rational = 1
        for a in elems:
            n = a.norm()
            rational *= n.numerator * n.denominator
            A, B = int_coords(a)
            rational *= A.denominator * B.denominator
        cands = self.primes_above(abs(rational)) if abs(rational) > 1 else []
        return [P for P in cands if any(P.valuation(a) != 0 for a in elems)]

    def degree_one_primes(self, start: int = 3) -> Iterable[PrimeIdealK]:
        for p in primes(start):
            for P in self.split_prime(p):
                if P.kind == "split":
                    yield P

    # -- class groups ------------------------------------------------------------

    @cached_property
    def reduced_forms(self) -> list[BinaryForm]:
        D = self.D
        s = math.isqrt(D)
        out = []
        for b in range(1, s + 1):
            if (b - D) % 2 or b * b >= D:
                continue
            ac = (b * b - D) // 4
            for a in range(1, -ac + 1):
                if ac % a:
                    continue
                for sa in (a, -a):
                    f = BinaryForm(sa, b, ac // sa)
                    if math.gcd(math.gcd(f.a, f.b), f.c) == 1 and is_reduced(f):
                        out.append(f)
        return sorted(out, key=lambda f: (f.a, f.b))

    @cached_property
    def _cycles(self) -> tuple[list[list[BinaryForm]], dict[BinaryForm, int]]:
        index: dict[BinaryForm, int] = {}
        cycles: list[list[BinaryForm]] = []
        for f in self.reduced_forms:
            if f in index:
                continue
            cyc = form_cycle(f)
            for g in cyc:
                index[g] = len(cycles)
            cycles.append(cyc)
        # order classes canonically: principal cycle first, then by smallest form
        principal = self.principal_form()
        pi = index[reduce_form(principal)]
        order = sorted(range(len(cycles)), key=lambda i: (i != pi, min((abs(g.a), g.a, g.b) for g in cycles[i])))
        remap = {old: new for new, old in enumerate(order)}
        return [cycles[i] for i in order], {g: remap[i] for g, i in index.items()}

    def principal_form(self) -> BinaryForm:
        b0 = self.D % 2
        return BinaryForm(1, b0, (b0 - self.D) // 4)

    def form_class(self, f: BinaryForm) -> int:
        """Index of the proper (narrow) class of a primitive form of discriminant D."""
        return self._cycles[1][reduce_form(f)]

    @cached_property
    def narrow_class_group(self) -> FiniteAbelianGroup:
        cycles, _ = self._cycles
        n = len(cycles)
        reps = [min(c, key=lambda g: (abs(g.a), -g.a, g.b)) for c in cycles]
        table = [[self.form_class(compose(reps[i], reps[j])) for j in range(n)] for i in range(n)]
        return FiniteAbelianGroup(table, 0, reps)

    @cached_property
    def minus_class(self) -> int:
        """Narrow class of the principal ideals generated by norm -1 elements."""
        b0 = self.D % 2
        return self.form_class(BinaryForm(-1, b0, -(b0 - self.D) // 4))

    @cached_property
    def class_group(self) -> FiniteAbelianGroup:
        """Wide class group, the quotient of the narrow one by the minus class."""
        G = self.narrow_class_group
        H = G.subgroup([self.minus_class])
        cosets = _cosets(G, H)
        reps = sorted({min(c) for c in cosets.values()})
        idx = {r: i for i, r in enumerate(reps)}
        proj = [idx[min(cosets[x])] for x in range(G.order)]
        table = [[proj[G.mul(r, s)] for s in reps] for r in reps]
        grp = FiniteAbelianGroup(table, 0, [G.labels[r] for r in reps])
        grp.projection = proj  # narrow class -> wide class
        return grp

    @property
    def class_number(self) -> int:
        return self.class_group.order

    @property
    def narrow_class_number(self) -> int:
        return self.narrow_class_group.order

    def ideal_class_of_prime(self, P: PrimeIdealK, narrow: bool = True) -> int:
        c = 0 if P.kind == "inert" else self.form_class(P.form)
        return c if narrow else self.class_group.projection[c]

    def class_representatives(self) -> list[tuple[int, int]]:
        """One ideal (a, (b + sqrt D)/2) with a > 0 per narrow class."""
        cycles, _ = self._cycles
        out = []
        for cyc in cycles:
            f = min((g for g in cyc if g.a > 0), key=lambda g: (g.a, g.b))
            out.append((f.a, f.b))
        return out

    def class_field_group(self, S_inf: Iterable[int], S_0: Iterable[PrimeIdealK]) -> "ClassFieldGroup":
        return ClassFieldGroup.build(self, S_inf, S_0)


def _cosets(G: FiniteAbelianGroup, H: set[int]) -> dict[int, frozenset[int]]:
    out: dict[int, frozenset[int]] = {}
    for x in range(G.order):
        if x not in out:
            c = frozenset(G.mul(x, h) for h in H)
            for y in c:
                out[y] = c
    return out


@dataclass
class ClassFieldGroup:
    """Galois group of the maximal exponent-2 class field with the given
    allowed real ramification S_inf and split-completely set S_0.

    Elements are tuples in (Z/2)^rank; ``artin`` gives the Frobenius.
    """

    K: QuadField
    S_inf: tuple[int, ...]
    S_0: tuple[PrimeIdealK, ...]
    rank: int
    narrow: bool
    coset_vectors: dict[int, tuple[int, ...]] = field(repr=False)
    generators: list[int] = field(repr=False)

    @classmethod
    def build(cls, K: QuadField, S_inf: Iterable[int], S_0: Iterable[PrimeIdealK]) -> "ClassFieldGroup":
        S_inf = tuple(sorted(set(S_inf)))
        if not set(S_inf) <= {0, 1}:
            raise ValueError("real places are 0 and 1")
        S_0 = tuple(sorted(set(S_0), key=PrimeIdealK.sort_key))
        # Allowing one real place gives the wide class group again: -1 is a
        # unit of mixed sign, so every principal ideal has a generator
        # positive at any single chosen place.
        narrow = len(S_inf) == 2
        G = K.narrow_class_group if narrow else K.class_group
        gens = [G.mul(x, x) for x in range(G.order)]
        gens += [K.ideal_class_of_prime(P, narrow) for P in S_0]
        H = G.subgroup(gens)
        cosets = _cosets(G, H)
        # greedy F_2-basis of G/H
        basis: list[int] = []
        span: dict[frozenset, tuple[int, ...]] = {cosets[G.identity]: ()}
        for x in range(G.order):
            if cosets[x] in span:
                continue
            basis.append(x)
            new = {}
            for c, vec in span.items():
                y = G.mul(min(c), x)
                new[cosets[y]] = vec + (1,)
            span = {c: vec + (0,) for c, vec in span.items()}
            span.update(new)
        rank = len(basis)
        vectors = {x: span[cosets[x]] for x in range(G.order)}
        return cls(K, S_inf, S_0, rank, narrow, vectors, basis)

    @property
    def order(self) -> int:
        return 2**self.rank

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def artin(self, P: PrimeIdealK) -> tuple[int, ...]:
        if P.kind == "ramified" and P not in self.S_0:
            raise ValueError("Artin symbol requested at a prime dividing the discriminant")
        return self.coset_vectors[self.K.ideal_class_of_prime(P, self.narrow)]

    @staticmethod
    def add(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % 2 for a, b in zip(u, v))


def artin_symbol(G: ClassFieldGroup, P: PrimeIdealK) -> tuple[int, ...]:
    return G.artin(P)


def fundamental_unit(K: QuadField) -> tuple[FieldElem, int]:
    return K.fundamental_unit


def class_group(K: QuadField) -> FiniteAbelianGroup:
    return K.class_group


def narrow_class_group(K: QuadField) -> FiniteAbelianGroup:
    return K.narrow_class_group


def split_prime(p: int, K: QuadField) -> list[PrimeIdealK]:
    return K.split_prime(p)


def class_field_group(K: QuadField, S_inf, S_0) -> ClassFieldGroup:
    return K.class_field_group(S_inf, S_0)

"""Local orders in M_2(Q_p) for odd p.

F = Q_p(sqrt c) is embedded as a + b*sqrt(c) -> [[a, b], [b*c, a]], the
element xi = diag(1, -1) satisfies x*xi = xi*conj(x) for x in F, and

    R_{2m} = O_F + xi * p^m * O_F = O_F + p^m M_2(Z_p).

Matrices are 4-tuples (x11, x12, x21, x22) of Fractions or ints.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import hensel_lift, is_prime, kronecker, mod_fraction, sqrt_mod, vp
from .lattice import hnf

Mat = tuple

WORK_PREC = 48  # default truncation exponent for p-adic lattices


class UnstableError(RuntimeError):
    """A count changed between precision N and N + 2."""


# -- 2x2 matrix helpers ------------------------------------------------------------


def mmul(x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mdet(x: Mat):
    return x[0] * x[3] - x[1] * x[2]


def madj(x: Mat) -> Mat:
    return (x[3], -x[1], -x[2], x[0])


def minv(x: Mat) -> Mat:
    det = Fraction(mdet(x))
    return tuple(Fraction(v) / det for v in madj(x))


def madd(x: Mat, y: Mat) -> Mat:
    return tuple(a + b for a, b in zip(x, y))


def mscale(x: Mat, s) -> Mat:
    return tuple(a * s for a in x)


def conj(g: Mat, x: Mat) -> Mat:
    return mmul(mmul(g, x), minv(g))


IDENTITY: Mat = (1, 0, 0, 1)


def matmod(x: Mat, mod: int) -> Mat:
    return tuple(mod_fraction(v, mod) for v in x)


# -- p-adic lattices -----------------------------------------------------------------


class PLattice:
    """A full-rank Z_p-lattice in Q_p^n containing a small power of p times Z_p^n.

    Stored as (s, H): H is the integer HNF of p^s L + p^prec Z^n, so every
    pivot is a power of p. Comparisons are exact as long as p^(prec - s) Z^n
    already lies in L.
    """

    __slots__ = ("p", "n", "s", "H", "prec")

    def __init__(self, p: int, n: int, s: int, H, prec: int = WORK_PREC):
        self.p, self.n, self.s, self.H, self.prec = p, n, s, H, prec

    @classmethod
    def from_generators(cls, p: int, gens: Iterable[Sequence], n: int = 4, prec: int = WORK_PREC) -> "PLattice":
        gens = [tuple(Fraction(x) for x in g) for g in gens]
        minv_ = min((vp(x, p) for g in gens for x in g if x), default=0)
        s = max(0, -minv_)
        mod = p**prec
        rows = [[mod_fraction(x * p**s, mod) for x in g] for g in gens]
        rows += [[mod if i == k else 0 for i in range(n)] for k in range(n)]
        return cls(p, n, s, hnf(rows), prec)

    def _reduce(self, v: Sequence) -> list[int] | None:
        p = self.p
        mod = p**self.prec
        w = []
        for x in v:
            x = Fraction(x) * p**self.s
            if x and vp(x, p) < 0:
                return None
            w.append(mod_fraction(x, mod))
        for i, row in enumerate(self.H):
            q = w[i] // row[i]
            if q:
                w = [(a - q * b) for a, b in zip(w, row)]
        return w

    def __contains__(self, v) -> bool:
        w = self._reduce(v)
        return w is not None and not any(w)

    def basis(self) -> list[tuple[Fraction, ...]]:
        scale = Fraction(1, self.p**self.s)
        return [tuple(x * scale for x in row) for row in self.H]

    def log_covolume(self) -> int:
        """log_p of the covolume relative to Z_p^n."""
        return sum(vp(row[i], self.p) for i, row in enumerate(self.H)) - self.n * self.s

    def issubset(self, other: "PLattice") -> bool:
        return all(v in other for v in self.basis())

    def __eq__(self, other) -> bool:
        return isinstance(other, PLattice) and (self.p, self.s, self.H, self.prec) == (
            other.p, other.s, other.H, other.prec)

    def __hash__(self):
        return hash((self.p, self.s, tuple(map(tuple, self.H))))

    def __repr__(self) -> str:
        return f"PLattice(p={self.p}, s={self.s}, H={self.H})"


# -- the local laboratory ------------------------------------------------------------


def smallest_nonresidue(p: int) -> int:
    c = 2
    while kronecker(c, p) != -1:
        c += 1
    return c


@dataclass(frozen=True)
class UnramifiedQuadExt:
    p: int
    c: int

    def embed(self, a, b) -> Mat:
        return (a, b, b * self.c, a)

    @property
    def sqrt_c(self) -> Mat:
        return self.embed(0, 1)

    @property
    def xi(self) -> Mat:
        return (1, 0, 0, -1)

    def bar(self, x: Mat) -> Mat:
        # a + b sqrt(c) -> a - b sqrt(c) on embedded elements
        return (x[0], -x[1], -x[2], x[3])


def unramified_ext(p: int) -> UnramifiedQuadExt:
    if p == 2 or not is_prime(p):
        raise ValueError("local laboratory needs an odd prime")
    return UnramifiedQuadExt(p, smallest_nonresidue(p))


@dataclass
class LocalOrder:
    """A Z_p-order of M_2(Q_p); ``frame`` h and ``level`` m record that the
    order equals h R_{2m} h^{-1} when it belongs to the R_{2m} family."""

    p: int
    lattice: PLattice
    level: int | None = None
    frame: Mat = IDENTITY
    F: UnramifiedQuadExt | None = None

    def __contains__(self, x: Mat) -> bool:
        return x in self.lattice

    def basis(self) -> list[Mat]:
        return self.lattice.basis()

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalOrder) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def is_order(self) -> bool:
        bs = self.basis()
        return IDENTITY in self and all(mmul(x, y) in self for x in bs for y in bs)

    def log_index_in_maximal(self) -> int:
        """log_p [M : R] for M = h M_2(Z_p) h^{-1}; conjugation preserves covolume."""
        return self.lattice.log_covolume()

    def conjugate(self, g: Mat) -> "LocalOrder":
        lat = PLattice.from_generators(self.p, [conj(g, b) for b in self.basis()], prec=self.lattice.prec)
        return LocalOrder(self.p, lat, self.level, mmul(g, self.frame), self.F)

    @property
    def standard(self) -> "LocalOrder":
        """The conjugate h^{-1} R h inside M_2(Z_p)."""
        if self.frame == IDENTITY:
            return self
        return self.conjugate(minv(self.frame))


def build_R2m(F: UnramifiedQuadExt, m: int, N: int | None = None, prec: int = WORK_PREC) -> LocalOrder:
    if m < 0:
        raise ValueError("m must be >= 0")
    if N is not None and N < m + 3:
        raise ValueError(f"precision {N} too small for level {m} (need >= {m + 3})")
    p = F.p
    pm = p**m
    one, s, xi = IDENTITY, F.sqrt_c, F.xi
    gens = [one, s, mscale(xi, pm), mscale(mmul(xi, s), pm)]
    return LocalOrder(p, PLattice.from_generators(p, gens, prec=prec), m, IDENTITY, F)


def maximal_standard(p: int) -> PLattice:
    return PLattice.from_generators(p, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])


def delta(p: int) -> Mat:
    return (p, 0, 0, 1)


# -- normalizers --------------------------------------------------------------------


NORM_CLASSES = ("1", "u", "pi", "u*pi")


def _square_class(n: Fraction, p: int) -> str:
    v = vp(n, p)
    u = Fraction(n) / Fraction(p) ** v
    sq = kronecker(mod_fraction(u, p), p) == 1
    return ("1" if sq else "u") if v % 2 == 0 else ("pi" if sq else "u*pi")


def _class_mul(a: str, b: str) -> str:
    ia, ib = NORM_CLASSES.index(a), NORM_CLASSES.index(b)
    return NORM_CLASSES[(ia ^ ib)]


def _normalizer_candidates(p: int, k: int):
    """Matrices of det valuation 0 and 1 covering M_2(Z_p)-primitive
    matrices modulo right multiplication by O_F^x and by 1 + p^k M_2."""
    mk, mk1 = p**k, p ** (k + 1)
    units_k = [u for u in range(1, mk) if u % p]
    for z in range(mk):
        for w in units_k:
            yield (1, 0, z, w)
    for z in range(mk1):
        for u in units_k:
            yield (1, 0, z, p * u)
    for u in units_k:
        for b in range(0, mk1, p):
            yield (p * u, b, 0, 1)


def _normalizes(x: Mat, basis: Sequence[Mat], order: LocalOrder) -> bool:
    xi = minv(x)
    return all(mmul(mmul(x, b), xi) in order for b in basis)


@dataclass
class NormalizerReport:
    classes: frozenset[str]
    witnesses: list[Mat] = field(repr=False)
    candidates: int = 0


def normalizer_search(R: LocalOrder, N: int | None = None) -> NormalizerReport:
    """Exhaustive normalizer search for h R_{2m} h^{-1}, done on the standard conjugate.

    Square classes of reduced norms are conjugation invariant.
    """
    if R.level is None or R.F is None:
        raise ValueError("normalizer search needs an order of the R_{2m} family")
    m = R.level
    if N is not None and m >= 1 and N < 2 * m + 3:
        raise ValueError(f"precision {N} below 2m+3")
    S = R.standard
    p = R.p
    k = max(m, 1)
    basis = S.basis()
    classes: set[str] = set()
    wit = []
    count = 0
    for x in _normalizer_candidates(p, k):
        count += 1
        if _fast_normalizes(x, p, m, R.F.c):
            cls = _square_class(Fraction(mdet(x)), p)
            classes.update({cls, _class_mul(cls, "u")})
            wit.append(x)
    return NormalizerReport(frozenset(classes), wit, count)


def _fast_normalizes(x: Mat, p: int, m: int, c: int) -> bool:
    """x R_{2m} x^{-1} within R_{2m}, via the congruence description
    {y integral : y11 = y22, y21 = c*y12 (mod p^m)}."""
    det = mdet(x)
    v = vp(det, p)
    pv = p**v
    unit = det // pv
    mod = p ** (m + v)
    inv_unit = pow(unit, -1, p ** max(m, 1))
    adj = madj(x)
    pm = p**m
    for b in ((0, 1, c, 0), (pm, 0, 0, -pm), (0, pm, -c * pm, 0)):
        num = mmul(mmul(x, b), adj)
        if any(e % pv for e in num):
            return False
        if m:
            y = [(e // pv) * inv_unit % pm for e in num]
            if (y[0] - y[3]) % pm or (y[2] - c * y[1]) % pm:
                return False
    return True


def normalizer_norm_classes(R: LocalOrder, N: int | None = None) -> frozenset[str]:
    return normalizer_search(R, N).classes


# -- norm-one generated ring -------------------------------------------------------


@dataclass
class NormOneReport:
    generated: LocalOrder
    equal: bool
    unit_basis: list[Mat]
    sample_size: int
    witness: Mat | None = None


def norm_one_generated_ring(R: LocalOrder, N: int | None = None) -> NormOneReport:
    """O_k-algebra generated by the norm-one elements of R, at precision N.

    Every element x of R with unit square reduced norm gives x/sqrt(n(x)),
    of norm 1 mod p^N. Spanning R modulo p^N M (M the maximal order of the
    frame) forces the exact norm-one span to equal R by Nakayama.
    """
    p = R.p
    m = R.level or 0
    if N is None:
        N = 2 * m + 4
    if N < 2 * m + 3:
        raise ValueError(f"precision {N} below 2m+3")
    mod = p**N
    basis = R.basis()
    ones = []
    from itertools import product

    for cs in product(range(p), repeat=4):
        x = tuple(sum(c * b[t] for c, b in zip(cs, basis)) for t in range(4))
        n = Fraction(mdet(x))
        if n == 0 or vp(n, p) != 0:
            continue
        r = sqrt_mod(mod_fraction(n, p), p)
        if r is None:
            continue
        s = hensel_lift([-mod_fraction(n, mod), 0, 1], r, p, N)
        y = mscale(x, pow(s, -1, mod))
        assert mod_fraction(Fraction(mdet(y)) - 1, mod) == 0
        ones.append(y)
    h = R.frame
    trunc = [conj(h, mscale(e, mod)) for e in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))]
    span = PLattice.from_generators(p, ones + trunc)
    # close under multiplication
    while True:
        bs = span.basis()
        new = [mmul(a, b) for a in bs for b in bs if mmul(a, b) not in span]
        if not new:
            break
        span = PLattice.from_generators(p, bs + new)
    gen = LocalOrder(p, span, R.level, R.frame, R.F)
    equal = gen.lattice == R.lattice
    witness = None
    if not equal:
        witness = next((b for b in basis if b not in span), None) or next(b for b in span.basis() if b not in R)
    # unit basis: greedily pick norm-one elements independent mod p R
    unit_basis = _unit_basis(R, ones)
    return NormOneReport(gen, equal, unit_basis, len(ones), witness)


def _unit_basis(R: LocalOrder, elems: Sequence[Mat]) -> list[Mat]:
    p = R.p
    chosen: list[Mat] = []
    pR = [mscale(b, p) for b in R.basis()]
    for e in elems:
        trial = PLattice.from_generators(p, chosen + [e] + pR)
        base = PLattice.from_generators(p, chosen + pR) if chosen else PLattice.from_generators(p, pR)
        if trial != base:
            chosen.append(e)
        if len(chosen) == 4:
            break
    return chosen


# -- optimal embeddings -------------------------------------------------------------


@dataclass(frozen=True)
class LocalQuadOrder:
    """Z_p[x] with x^2 - t x + n = 0, t and n p-integral rationals."""

    t: Fraction
    n: Fraction


def _local_quadratic_data(p: int, t, n, N: int):
    disc = Fraction(t) ** 2 - 4 * Fraction(n)
    if disc == 0:
        raise ValueError("degenerate quadratic order (discriminant 0)")
    v = vp(disc, p)
    if v >= N:
        raise UnstableError("discriminant valuation exceeds working precision")
    f = v // 2
    d0 = disc / Fraction(p) ** (2 * f)
    if v % 2:
        kind = "ramified"
    else:
        kind = "split" if kronecker(mod_fraction(d0, p), p) == 1 else "unramified"
    return f, d0, kind


def _canon_coset(g: Mat, c: int, mod: int) -> tuple[int, int]:
    """Canonical representative of R^x g for R = O_F + p^k M_2, mod = p^k."""
    a, b, cc, d = g
    # first column (a, cc) corresponds to a + (cc/c) sqrt(c)
    inv_c = pow(c, -1, mod)
    y = cc * inv_c % mod
    nrm = (a * a - c * y * y) % mod
    inv_n = pow(nrm, -1, mod)
    fa, fb = a * inv_n % mod, -y * inv_n % mod  # inverse of a + y sqrt(c)
    # F(f) @ g, second column only
    nb = (fa * b + fb * d) % mod
    nd = (fb * c * b + fa * d) % mod
    return nb, nd


def _group_generators(p: int, mod: int, nval: int, k: int) -> list[tuple[int, int]]:
    """Generators (a, b) of (Z_p[x0] / p^k)^x where x0^2 = nval."""

    def mul(u, w):
        return ((u[0] * w[0] + u[1] * w[1] * nval) % mod, (u[0] * w[1] + u[1] * w[0]) % mod)

    def is_unit(u):
        return (u[0] * u[0] - nval * u[1] * u[1]) % p != 0

    def mul_p(u, w):
        return ((u[0] * w[0] + u[1] * w[1] * nval) % p, (u[0] * w[1] + u[1] * w[0]) % p)

    gens: list[tuple[int, int]] = []
    span = {(1, 0)}
    for a in range(p):
        for b in range(p):
            u = (a, b)
            if not is_unit(u) or u in span:
                continue
            gens.append(u)
            frontier = list(span)
            while frontier:
                nxt = []
                for s in frontier:
                    for g in gens:
                        w = mul_p(s, g)
                        if w not in span:
                            span.add(w)
                            nxt.append(w)
                frontier = nxt
    if k > 1:
        gens += [(1 + p, 0), (1, p)]
    return gens


def _embedding_orbits(p: int, c: int, m: int, nval: int) -> dict[int, int]:
    """R^x-orbits of embeddings whose M_2(Z_p)-optimal order is Z_p[x0], x0^2 = nval,
    into R = O_F + p^m M_2, binned by the level e with R-optimal order
    Z_p[p^e x0]."""
    if m == 0:
        return {0: 1}
    mod = p**m
    x0 = (0, nval % mod, 1, 0)
    gens = _group_generators(p, mod, nval % mod, m)
    seen: dict[tuple[int, int], int] = {}
    tally: dict[int, int] = {}
    for b in range(mod):
        for d in range(1, mod):
            if d % p == 0 or (b, d) in seen:
                continue
            g = (1, b, 0, d)
            # optimal level of g x0 g^-1 in R: commutator with sqrt(c)
            ginv_det = pow(d, -1, mod)
            y = mmul(mmul(g, x0), (d, -b, 0, 1))
            y = tuple(e * ginv_det % mod for e in y)
            comm = (y[1] * c - y[2], y[0] - y[3], c * (y[3] - y[0]), y[2] - c * y[1])
            vcomm = min((vp(e % mod, p) if e % mod else m) for e in comm)
            level = max(0, m - vcomm)
            # orbit under right multiplication by the unit group of Z_p[x0]
            orbit = deque([(b, d)])
            seen[(b, d)] = 1
            while orbit:
                bb, dd = orbit.popleft()
                gg = (1, bb, 0, dd)
                for (ua, ub) in gens:
                    w = (ua, ub * nval, ub, ua)
                    h = tuple(e % mod for e in mmul(gg, w))
                    key = _canon_coset(h, c, mod)
                    if key not in seen:
                        seen[key] = 1
                        orbit.append(key)
            tally[level] = tally.get(level, 0) + 1
    return tally


@dataclass
class EmbeddingCount:
    counts: dict[int, int]  # overorder level j (Z_p + p^j O_L) -> optimal embeddings mod R^1
    conductor_exponent: int
    kind: str

    @property
    def value(self) -> int:
        return self.counts.get(self.conductor_exponent, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _embedding_count_once(t, n, R: LocalOrder, N: int) -> EmbeddingCount:
    p = R.p
    m = R.level
    c = R.F.c
    mod = p**N
    f, d0, kind = _local_quadratic_data(p, t, n, N)
    counts = {j: 0 for j in range(f + 1)}
    inv4 = pow(4, -1, mod)
    for jp in range(f + 1):
        nval = mod_fraction(d0, mod) * p ** (2 * jp) * inv4 % mod
        for e, k in _embedding_orbits(p, c, m, nval).items():
            j = jp + e
            if j > f:
                continue
            split_in_two = not (j == 0 and kind in ("split", "unramified"))
            counts[j] += k * (2 if split_in_two else 1)
    return EmbeddingCount(counts, f, kind)


def local_embedding_count(omega, R: LocalOrder, N: int | None = None, check: bool = True) -> EmbeddingCount:
    """Optimal embeddings of Z_p[x], x^2 - t x + n = 0, into R modulo R^1,
    tabulated for every overorder Z_p + p^j O_L of Z_p[x].

    Works for orders h R_{2m} h^{-1}; the count is computed on the standard
    conjugate. The inputs are truncated mod p^N, and with ``check`` the
    computation is repeated at N + 2 and must agree.
    """
    t, n = omega
    if R.level is None or R.F is None:
        raise ValueError("embedding counts need an order of the R_{2m} family")
    m = R.level
    if N is None:
        N = 2 * m + 4
    if N < 2 * m + 4:
        raise ValueError(f"precision {N} below 2m+4")
    p = R.p

    def trunc(x, NN):
        return Fraction(mod_fraction(x, p**NN))

    res = _embedding_count_once(trunc(t, N), trunc(n, N), R, N)
    if check:
        res2 = _embedding_count_once(trunc(t, N + 2), trunc(n, N + 2), R, N + 2)
        if res2.counts != res.counts:
            raise UnstableError(f"embedding counts differ at N={N} and N+2: {res.counts} vs {res2.counts}")
    return res


# -- unit indices ------------------------------------------------------------------


def _units_mod_p(R: LocalOrder) -> tuple[int, int, bool]:
    """(#image of R in M/pM, #units in it, whether a non-square unit norm occurs)."""
    S = R.standard
    p = R.p
    vecs = []
    for b in S.basis():
        vecs.append(tuple(mod_fraction(x, p) for x in b))
    # F_p span of the images
    span = {(0, 0, 0, 0)}
    for v in vecs:
        if v in span:
            continue
        span = {tuple((a + k * b) % p for a, b in zip(s, v)) for s in span for k in range(p)}
    units = 0
    nonsq = False
    for s in span:
        det = (s[0] * s[3] - s[1] * s[2]) % p
        if det:
            units += 1
            if kronecker(det, p) == -1:
                nonsq = True
    return len(span), units, nonsq


def unit_count(R: LocalOrder, k: int) -> Fraction:
    """|image of R^x in (M / p^k M)^x| for k large enough that p^k M lies in R."""
    img, units, _ = _units_mod_p(R)
    size = Fraction(R.p ** (4 * k), R.p ** R.log_index_in_maximal())
    return units * size / img


def unit_index(inner: LocalOrder, outer: LocalOrder, k: int | None = None, check: bool = True) -> int:
    """[outer^1 : inner^1] for inner inside outer, both with the same frame."""
    if inner.frame != outer.frame:
        raise ValueError("orders must share a maximal overorder frame")
    if not inner.lattice.issubset(outer.lattice):
        raise ValueError("inner order is not contained in outer order")
    p = inner.p
    if k is None:
        k = max(inner.level or 0, outer.level or 0, 1)

    def index_at(kk):
        ix = unit_count(outer, kk) / unit_count(inner, kk)
        # [outer^x : inner^x] = [outer^1 : inner^1] * [n(outer^x) : n(inner^x)]
        nrm = (2 if _units_mod_p(outer)[2] else 1) // (2 if _units_mod_p(inner)[2] else 1)
        q = ix / nrm
        assert q.denominator == 1
        return int(q)

    val = index_at(k)
    if check and index_at(k + 2) != val:
        raise UnstableError("unit index not stable")
    return val

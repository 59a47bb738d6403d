"""Global orders and the chain families R_i^j.

Orders are Z-lattices of rank 8 in B, written in the rational basis
1, w, i, wi, j, wj, k, wk (w the integral generator of O_K). At a split
prime P of degree one, B is identified with M_2(Q_p) through a left-ideal
splitting, and chain orders are cut out by congruences in that frame.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import factor, is_square, kronecker, mod_fraction, sqrt_mod_prime_power, vp
from .lattice import Lattice, kernel_mod
from .local import (
    IDENTITY,
    LocalOrder,
    Mat,
    PLattice,
    build_R2m,
    conj,
    delta,
    madd,
    mdet,
    minv,
    mscale,
    normalizer_norm_classes,
    unramified_ext,
)
from .quadfield import ClassFieldGroup, FieldElem, PrimeIdealK, int_coords
from .quatalg import QuatAlgebra, QuatElem

SPLIT_EXTRA = 12  # extra p-adic digits carried by splittings beyond the requested precision


class PrecisionError(RuntimeError):
    """A constructed lattice does not re-localize to its target."""


# -- global orders ------------------------------------------------------------------


def _is_integral(x: QuatElem) -> bool:
    K = x.B.K
    return K.is_integral(x.trace()) and K.is_integral(x.norm())


def _trace_q(x: QuatElem) -> Fraction:
    return x.trace().trace()


class GlobalOrder:
    """A Z-order of rank 8 in B, stored by the HNF of its rational coordinates."""

    def __init__(self, B: QuatAlgebra, lattice: Lattice, label: str = ""):
        if lattice.rank != 8:
            raise ValueError("a global order has Z-rank 8")
        self.B = B
        self.lattice = lattice
        self.label = label

    @classmethod
    def from_elements(cls, B: QuatAlgebra, elems: Sequence[QuatElem], label: str = "") -> "GlobalOrder":
        return cls(B, Lattice.from_generators([x.to_rational() for x in elems], 8), label)

    def basis(self) -> list[QuatElem]:
        return [self.B.from_rational(v) for v in self.lattice.basis()]

    def __contains__(self, x: QuatElem) -> bool:
        return x.to_rational() in self.lattice

    def __eq__(self, other) -> bool:
        return isinstance(other, GlobalOrder) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self) -> str:
        return f"GlobalOrder({self.label or '?'}, covolume={self.lattice.covolume()})"

    def issubset(self, other: "GlobalOrder") -> bool:
        return self.lattice.issubset(other.lattice)

    def index_in(self, other: "GlobalOrder") -> int:
        return self.lattice.index_in(other.lattice)

    def is_order(self) -> bool:
        bs = self.basis()
        return self.B.one in self and all(x * y in self for x in bs for y in bs)

    def gram(self) -> list[list[Fraction]]:
        bs = self.basis()
        return [[_trace_q(x * y) for y in bs] for x in bs]

    def z_discriminant(self) -> int:
        from sympy import Matrix

        d = Matrix(self.gram()).det()
        assert d.q == 1
        return int(d)

    def reduced_disc_norm(self) -> int:
        """Absolute norm of the reduced discriminant: sqrt(|disc_Z| / D^4)."""
        D = self.B.K.D
        q = Fraction(abs(self.z_discriminant()), D**4)
        assert q.denominator == 1 and is_square(int(q))
        return math.isqrt(int(q))


def ring_closure(B: QuatAlgebra, elems: Sequence[QuatElem], max_rounds: int = 20) -> Lattice | None:
    """Z-span of the ring generated by elems and 1, or None if some element is not integral."""
    gens = [B.one] + list(elems)
    if not all(_is_integral(x) for x in gens):
        return None
    L = Lattice.from_generators([x.to_rational() for x in gens], 8)
    for _ in range(max_rounds):
        bs = [B.from_rational(v) for v in L.basis()]
        new = []
        for x in bs:
            for y in bs:
                z = x * y
                if z.to_rational() not in L:
                    if not _is_integral(z):
                        return None
                    new.append(z)
        if not new:
            return L
        L = Lattice.from_generators(L.basis() + [z.to_rational() for z in new], 8)
    raise RuntimeError("ring closure did not stabilise")


def standard_order(B: QuatAlgebra) -> GlobalOrder:
    """O_K<i, j> = O_K + O_K i + O_K j + O_K k."""
    return GlobalOrder(B, Lattice.from_generators([x.to_rational() for x in B.rational_basis()], 8), "O_K<i,j>")


def maximal_order(B: QuatAlgebra, max_candidates: int = 2_000_000) -> GlobalOrder:
    """A maximal order containing O_K<i, j>.

    At each prime p dividing the index, look for x in (1/p) O inside the
    trace dual of O with O[x] integral; adjoin it and repeat. An order that
    is not p-maximal always has such an x, so the loop ends at a p-maximal
    order.
    """
    K = B.K
    target = 1
    for P in B.ramification.finite:
        target *= P.norm
    O = standard_order(B)
    while True:
        n = O.reduced_disc_norm()
        if n % target:
            raise RuntimeError("reduced discriminant not divisible by the ramified primes")
        excess = n // target
        if excess == 1:
            return GlobalOrder(B, O.lattice, "R_0")
        p = min(factor(excess))
        bigger = _enlarge_at(B, O, p, max_candidates)
        if bigger is None:
            raise RuntimeError(f"order is p-maximal at {p} but the discriminant says otherwise")
        O = bigger


def _enlarge_at(B: QuatAlgebra, O: GlobalOrder, p: int, max_candidates: int) -> GlobalOrder | None:
    G = [[int(x) for x in row] for row in O.gram()]
    ker = kernel_mod(G, p)
    vecs = [r for r in ker if r[next(i for i, x in enumerate(r) if x)] == 1]
    r = len(vecs)
    if (p**r - 1) // (p - 1) > max_candidates:
        raise RuntimeError(f"overorder search at p={p} too large (dimension {r})")
    bs = O.basis()
    # projective enumeration: first nonzero coefficient equal to 1
    for lead in range(r):
        for tail in itertools.product(range(p), repeat=r - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            y = [sum(c * v[k] for c, v in zip(coeffs, vecs)) for k in range(8)]
            x = sum((bs[k] * Fraction(y[k], p) for k in range(8) if y[k] % p), B.elem())
            if not _is_integral(x):
                continue
            L = ring_closure(B, bs + [x])
            if L is not None and L != O.lattice:
                return GlobalOrder(B, L)
    return None


# -- splittings at degree-one primes -----------------------------------------------


class LocalSplitting:
    """B tensor K_P = M_2(Q_p) for a split prime P = (p, w - r) with P coprime to 2ab.

    The idempotent e = 1/2 + x i + y j (norm 0) is lifted exactly, and
    x -> (left multiplication on O_P e in the basis e, u e) is the matrix
    model; it maps O_K<i, j> at P onto M_2(Z_p).
    """

    def __init__(self, B: QuatAlgebra, P: PrimeIdealK, prec: int):
        if P.kind != "split" or P.p == 2:
            raise ValueError("splittings are built at odd split primes")
        p = P.p
        self.B, self.P, self.p, self.prec = B, P, p, prec
        self.work = prec + SPLIT_EXTRA
        mod = p**self.work
        self.mod = mod
        self.omega = P.omega_padic(self.work)
        a, b = self.image_int(B.a), self.image_int(B.b)
        if a % p == 0 or b % p == 0:
            raise ValueError("splitting prime divides a or b")
        self.ab = (a, b)
        inv4 = pow(4, -1, mod)
        inv_b = pow(b, -1, mod)
        for x in range(p):
            rhs = (inv4 - a * x * x) * inv_b % mod
            if rhs % p and kronecker(rhs % p, p) == 1:
                y = sqrt_mod_prime_power(rhs, p, self.work)
                break
        else:  # pragma: no cover - a conic over F_p with p odd always has such a point
            raise RuntimeError("no idempotent found")
        self.seed = (x, y)
        half = pow(2, -1, mod)
        e = (half, x, y, 0)
        assert self._qmul(e, e) == e
        for label, u in (("j", (0, 0, 1, 0)), ("i", (0, 1, 0, 0)), ("k", (0, 0, 0, 1))):
            f = self._qmul(u, e)
            pair = self._pivot(e, f)
            if pair is not None:
                break
        else:  # pragma: no cover
            raise RuntimeError("left ideal basis not found")
        self.partner = label
        self.e, self.f = e, f
        s, t, inv = pair
        self._solve = (s, t, inv)
        self.units = [self._left_matrix(u) for u in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))]

    def _qmul(self, u, v):
        a, b = self.ab
        w1, x1, y1, z1 = u
        w2, x2, y2, z2 = v
        mod = self.mod
        return (
            (w1 * w2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2) % mod,
            (w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2) % mod,
            (w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2) % mod,
            (w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2) % mod,
        )

    def _pivot(self, e, f):
        p, mod = self.p, self.mod
        for s, t in itertools.combinations(range(4), 2):
            det = (e[s] * f[t] - e[t] * f[s]) % mod
            if det % p:
                return s, t, pow(det, -1, mod)
        return None

    def _coords(self, v):
        s, t, inv = self._solve
        e, f, mod = self.e, self.f, self.mod
        al = (v[s] * f[t] - v[t] * f[s]) * inv % mod
        be = (e[s] * v[t] - e[t] * v[s]) * inv % mod
        assert all((al * e[q] + be * f[q] - v[q]) % mod == 0 for q in range(4))
        return al, be

    def _left_matrix(self, u) -> tuple[int, ...]:
        a1, b1 = self._coords(self._qmul(u, self.e))
        a2, b2 = self._coords(self._qmul(u, self.f))
        return (a1, a2, b1, b2)

    def image_int(self, w: FieldElem) -> int:
        val = self.image(w)
        if val and vp(val, self.p) < 0:
            raise ValueError("element is not integral at P")
        return mod_fraction(val, self.mod)

    def image(self, w: FieldElem) -> Fraction:
        """Image of w in Q_p, correct modulo p^(work - 2 v_p(den))."""
        A, B = int_coords(w)
        den = math.lcm(A.denominator, B.denominator)
        A, B = int(A * den), int(B * den)
        e = vp(den, self.p)
        unit_den = den // self.p**e
        mod = self.mod
        num = (A + B * self.omega) * pow(unit_den, -1, mod) % mod
        return Fraction(num, self.p**e)

    def __call__(self, x: QuatElem) -> Mat:
        out = (Fraction(0),) * 4
        for c, U in zip(x.c, self.units):
            if c:
                out = madd(out, mscale(U, self.image(c)))
        return tuple(self._reduce(v) for v in out)

    def _reduce(self, v: Fraction) -> Fraction:
        """Keep the p-adic digits of v below p^work (v with p-power denominator)."""
        if not v:
            return v
        s = max(0, -vp(v, self.p))
        return Fraction(mod_fraction(v * self.p**s, self.mod), self.p**s)

    def record(self) -> dict:
        """The data fixing this splitting, for serialization."""
        m = self.p**self.prec
        return {
            "p": self.p,
            "b": self.P.b,
            "precision": self.prec,
            "omega": str(self.omega % m),
            "idempotent": [str(self.seed[0]), str(self.seed[1] % m)],
            "partner": self.partner,
        }


_split_cache: dict = {}


def splitting(B: QuatAlgebra, P: PrimeIdealK, prec: int) -> LocalSplitting:
    key = (B.K.d, B.a, B.b, P, prec)
    if key not in _split_cache:
        _split_cache[key] = LocalSplitting(B, P, prec)
    return _split_cache[key]


def localize(O: GlobalOrder, phi: LocalSplitting, prec: int | None = None) -> PLattice:
    prec = phi.prec if prec is None else prec
    return PLattice.from_generators(phi.p, [phi(x) for x in O.basis()], prec=prec)


# -- Frobenius primes ---------------------------------------------------------------


@dataclass
class FrobeniusAssignment:
    primes: list[PrimeIdealK]
    symbols: list[tuple[int, ...]]
    group: ClassFieldGroup = field(repr=False)

    @property
    def ell(self) -> int:
        return len(self.primes)


def _usable_prime(B: QuatAlgebra, P: PrimeIdealK) -> bool:
    if P.kind != "split" or P.p == 2:
        return False
    bad = 1
    for x in (B.a, B.b):
        n = x.norm()
        bad *= n.numerator * n.denominator
    return bad % P.p != 0


def class_field_of(B: QuatAlgebra) -> ClassFieldGroup:
    ram = B.ramification
    return B.K.class_field_group(ram.real, ram.finite)


def find_frobenius_primes(G: ClassFieldGroup, ell: int, B: QuatAlgebra, cap: int = 10**6) -> FrobeniusAssignment:
    """Degree-one primes, coprime to 2 D N(ab), whose Artin symbols form a basis of G."""
    if G.rank != ell:
        raise ValueError(f"class field group has rank {G.rank}, not {ell}")
    chosen: list[PrimeIdealK] = []
    syms: list[tuple[int, ...]] = []
    span = {G.zero()}
    if ell == 0:
        return FrobeniusAssignment([], [], G)
    for P in B.K.degree_one_primes(3):
        if P.p > cap:
            raise RuntimeError(f"no Frobenius basis among primes up to {cap}")
        if not _usable_prime(B, P) or any(Q.p == P.p for Q in chosen):
            continue
        s = G.artin(P)
        if s in span:
            continue
        chosen.append(P)
        syms.append(s)
        span |= {G.add(s, v) for v in span}
        if len(chosen) == ell:
            return FrobeniusAssignment(chosen, syms, G)
    raise AssertionError("unreachable")


# -- orders with prescribed localizations -------------------------------------------


@dataclass(frozen=True)
class LocalSpec:
    """Localization delta^a R_{2 level} delta^-a in the frame of a splitting."""

    a: int
    level: int


def target_order(p: int, spec: LocalSpec, prec: int) -> LocalOrder:
    R = build_R2m(unramified_ext(p), spec.level, prec=prec)
    return R.conjugate(delta(p)) if spec.a else R


def order_with_localizations(
    R0: GlobalOrder, specs: dict[PrimeIdealK, LocalSpec], N: int, label: str = "", recheck: bool = True
) -> GlobalOrder:
    """The order equal to R0 away from the given primes and to the target there.

    Both primes above each affected rational prime are constrained (the
    conjugate prime keeps R0's localization unless specified).
    """
    B = R0.B
    by_p: dict[int, dict[PrimeIdealK, LocalSpec]] = {}
    for P, sp in specs.items():
        by_p.setdefault(P.p, {})[P] = sp
    L = R0.lattice
    for p in sorted(by_p):
        local = dict(by_p[p])
        for Q in B.K.split_prime(p):
            local.setdefault(Q, LocalSpec(0, 0))
        s = max(sp.a for sp in local.values())
        E = max(s + sp.a + sp.level for sp in local.values())
        if N < E:
            raise ValueError(f"precision {N} below the congruence depth {E} at p={p}")
        gens = [B.from_rational([x / p**s for x in v]) for v in L.basis()]
        mod = p**E
        rows: list[list[int]] = [[] for _ in gens]
        for Q in sorted(local, key=PrimeIdealK.sort_key):
            sp = local[Q]
            phi = splitting(B, Q, N)
            c = unramified_ext(p).c
            t = s + sp.a
            lv = E - t - sp.level
            for k, g in enumerate(gens):
                # y = delta^-a phi(g) delta^a lies in p^-t M_2; Z = p^t y
                Y = conj(minv(delta(p)), phi(g)) if sp.a else phi(g)
                Z = [mod_fraction(v * p**t, mod) for v in Y]
                row = [z * p ** (E - t) % mod for z in Z]
                row.append((Z[0] - Z[3]) * p**lv % mod)
                row.append((Z[2] - c * Z[1]) * p**lv % mod)
                rows[k].extend(row)
        ker = kernel_mod(rows, mod)
        vecs = [[sum(cc * Fraction(g[t]) for cc, g in zip(kv, [v.to_rational() for v in gens])) for t in range(8)]
                for kv in ker]
        L = Lattice.from_generators(vecs, 8)
    O = GlobalOrder(B, L, label)
    if recheck:
        check_localizations(O, specs, N + 2)
    return O


def check_localizations(O: GlobalOrder, specs: dict[PrimeIdealK, LocalSpec], prec: int) -> None:
    B = O.B
    for p in sorted({P.p for P in specs}):
        for Q in B.K.split_prime(p):
            sp = specs.get(Q, LocalSpec(0, 0))
            phi = splitting(B, Q, prec)
            got = localize(O, phi, prec)
            want = target_order(p, sp, prec).lattice
            if got != want:
                raise PrecisionError(f"localization of {O.label} at {Q.label()} differs from its target")


# -- chain families -------------------------------------------------------------------


def exponent_vectors(ell: int) -> list[tuple[int, ...]]:
    """(a_1, ..., a_ell) ordered so that label j = 1 + sum a_t 2^(t-1)."""
    return [tuple((j >> t) & 1 for t in range(ell)) for j in range(2**ell)]


@dataclass
class ChainFamily:
    B: QuatAlgebra
    R0: GlobalOrder
    frob: FrobeniusAssignment
    depth: int
    chains: dict[tuple[int, ...], list[GlobalOrder]]
    precision: dict[int, int]  # level -> N used

    def orders_at(self, i: int) -> list[tuple[tuple[int, ...], GlobalOrder]]:
        return [(a, self.chains[a][i]) for a in exponent_vectors(self.frob.ell)]

    def spec(self, a: tuple[int, ...], i: int) -> dict[PrimeIdealK, LocalSpec]:
        return {P: LocalSpec(a[t], i) for t, P in enumerate(self.frob.primes)}


def default_precision(level: int) -> int:
    return 2 * level + 4


def build_chain_family(R0: GlobalOrder, A: FrobeniusAssignment, depth: int, max_depth: int = 4) -> ChainFamily:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth > max_depth:
        raise ValueError(f"depth {depth} above cap {max_depth}")
    B = R0.B
    for P in A.primes:
        if not _usable_prime(B, P):
            raise ValueError(f"prime {P.label()} cannot carry a chain")
    chains: dict[tuple[int, ...], list[GlobalOrder]] = {}
    precision = {i: default_precision(i) for i in range(depth + 1)}
    for j, a in enumerate(exponent_vectors(A.ell), start=1):
        col = []
        for i in range(depth + 1):
            specs = {P: LocalSpec(a[t], i) for t, P in enumerate(A.primes)}
            if not any(a) and i == 0:
                O = GlobalOrder(B, R0.lattice, f"R_0^{j}")
                check_localizations(O, specs, precision[i] + 2)
            else:
                O = order_with_localizations(R0, specs, precision[i], f"R_{i}^{j}")
            col.append(O)
        chains[a] = col
    return ChainFamily(B, R0, A, depth, chains, precision)


# -- genus and distance ---------------------------------------------------------------


def _support_primes(O1: GlobalOrder, O2: GlobalOrder) -> list[int]:
    S = O1.lattice + O2.lattice
    n = O1.lattice.index_in(S) * O2.lattice.index_in(S)
    return sorted(factor(n)) if n > 1 else []


def _hermite_conjugators(p: int) -> list[Mat]:
    """Hermite forms [[p^al, be], [0, p^ga]], 0 <= be < p^ga, with determinant
    valuation 1 or 2, skipping the central p * identity."""
    out = []
    for al, ga in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
        for be in range(p**ga):
            if (al, ga, be) != (1, 1, 0):
                out.append((p**al, be, 0, p**ga))
    return out


@dataclass
class LocalConjugacy:
    prime: PrimeIdealK
    verdict: str  # "yes", "no" or "unknown"
    conjugator: Mat | None = None
    reason: str = ""


@dataclass
class GenusVerdict:
    verdict: str
    local: list[LocalConjugacy]

    def __bool__(self) -> bool:
        return self.verdict == "yes"


def _local_conjugator(L1: PLattice, L2: PLattice, p: int, prec: int) -> tuple[str, Mat | None, str]:
    if L1 == L2:
        return "yes", IDENTITY, "equal localizations"
    if L1.log_covolume() != L2.log_covolume():
        return "no", None, "local discriminants differ"
    b1 = L1.basis()
    for g in _hermite_conjugators(p):
        for h in (g, minv(g)):
            if PLattice.from_generators(p, [conj(h, x) for x in b1], prec=prec) == L2:
                return "yes", h, "Hermite conjugator"
    return "unknown", None, "bounded conjugator search exhausted"


def same_genus(O1: GlobalOrder, O2: GlobalOrder, prec: int = 12) -> GenusVerdict:
    """Local conjugacy at every prime where the two lattices differ.

    Elsewhere the localizations coincide. The search at a differing prime
    is bounded, so the answer may be "unknown" but never a silent "no".
    """
    if O1.B is not O2.B and (O1.B.K.d, O1.B.a, O1.B.b) != (O2.B.K.d, O2.B.a, O2.B.b):
        raise ValueError("orders live in different algebras")
    B = O1.B
    out: list[LocalConjugacy] = []
    for p in _support_primes(O1, O2):
        for Q in B.K.split_prime(p):
            if not _usable_prime(B, Q):
                out.append(LocalConjugacy(Q, "unknown", None, "no matrix model at this prime"))
                continue
            phi = splitting(B, Q, prec)
            v, g, why = _local_conjugator(localize(O1, phi), localize(O2, phi), p, phi.prec)
            out.append(LocalConjugacy(Q, v, g, why))
    verdicts = {c.verdict for c in out}
    overall = "no" if "no" in verdicts else ("unknown" if "unknown" in verdicts else "yes")
    return GenusVerdict(overall, out)


@dataclass
class DistanceClass:
    value: tuple[int, ...]
    parities: dict[str, int]  # prime label -> parity of v(det conjugator)

    @property
    def trivial(self) -> bool:
        return not any(self.value)


def distance_idele(O1: GlobalOrder, O2: GlobalOrder, G: ClassFieldGroup, ref: GlobalOrder | None = None,
                   prec: int = 12) -> DistanceClass:
    """Class of n(x_1^-1 x_2) in G: the sum of artin(Q) over primes Q whose
    local conjugator has odd determinant valuation."""
    if ref is not None:
        for O in (O1, O2):
            v = same_genus(O, ref, prec).verdict
            if v != "yes":
                raise ValueError(f"{O.label} not shown to be in the genus of {ref.label} ({v})")
    gv = same_genus(O1, O2, prec)
    if gv.verdict != "yes":
        raise ValueError(f"orders not shown to be in the same genus ({gv.verdict})")
    val = G.zero()
    par = {}
    for lc in gv.local:
        k = vp(Fraction(mdet(lc.conjugator)), lc.prime.p) % 2
        par[lc.prime.label()] = k
        if k:
            val = G.add(val, G.artin(lc.prime))
    return DistanceClass(val, par)


# -- theorem conditions ---------------------------------------------------------------


@dataclass
class ConditionItem:
    condition: int
    level: int
    subject: str
    ok: bool
    detail: str


@dataclass
class TheoremReport:
    items: list[ConditionItem]

    @property
    def passed(self) -> bool:
        return all(it.ok for it in self.items)

    def failures(self) -> list[ConditionItem]:
        return [it for it in self.items if not it.ok]


def recognize_local(O: GlobalOrder, P: PrimeIdealK, spec: LocalSpec, prec: int) -> LocalOrder:
    """The localization of O at P as a LocalOrder with frame and level, after
    checking it equals delta^a R_{2 level} delta^-a."""
    phi = splitting(O.B, P, prec)
    target = target_order(P.p, spec, prec)
    if localize(O, phi, prec) != target.lattice:
        raise PrecisionError(f"{O.label} is not {spec} at {P.label()}")
    return target


def verify_theorem_conditions(F: ChainFamily) -> TheoremReport:
    items: list[ConditionItem] = []
    G = F.frob.group
    vecs = exponent_vectors(F.frob.ell)
    norm_cache: dict[tuple[int, int], frozenset] = {}
    for i in range(F.depth + 1):
        level = F.orders_at(i)
        # (1) strict inclusions with index q^2 per active prime
        if i < F.depth:
            for a, O in level:
                nxt = F.chains[a][i + 1]
                ok = nxt.issubset(O) and nxt != O
                want = 1
                for P in F.frob.primes:
                    want *= P.norm**2
                idx = nxt.index_in(O) if ok else None
                items.append(ConditionItem(1, i, f"{nxt.label} < {O.label}", ok and idx == want,
                                           f"index {idx}, expected {want}"))
        # (2) same genus, pairwise nontrivial distance
        for (a1, O1), (a2, O2) in itertools.combinations(level, 2):
            gv = same_genus(O1, O2, F.precision[i] + 2)
            if gv.verdict != "yes":
                items.append(ConditionItem(2, i, f"{O1.label} ~ {O2.label}", False, f"genus {gv.verdict}"))
                continue
            dc = distance_idele(O1, O2, G, prec=F.precision[i] + 2)
            items.append(ConditionItem(2, i, f"{O1.label} ~ {O2.label}", not dc.trivial,
                                       f"distance {list(dc.value)}"))
        # (3) local normalizer norm classes agree with the maximal order's
        for a, O in level:
            ok = True
            notes = []
            for t, P in enumerate(F.frob.primes):
                key = (P.p, i)
                recognize_local(O, P, LocalSpec(a[t], i), F.precision[i])
                if key not in norm_cache:
                    # square classes of normalizer norms are invariant under conjugation
                    norm_cache[key] = normalizer_norm_classes(build_R2m(unramified_ext(P.p), i))
                if (P.p, 0) not in norm_cache:
                    norm_cache[(P.p, 0)] = normalizer_norm_classes(build_R2m(unramified_ext(P.p), 0))
                same = norm_cache[key] == norm_cache[(P.p, 0)]
                ok &= same
                notes.append(f"{P.label()}: {sorted(norm_cache[key])}")
            items.append(ConditionItem(3, i, O.label, ok, "; ".join(notes)))
    return TheoremReport(items)


# -- serialization ---------------------------------------------------------------------


def prime_record(P: PrimeIdealK) -> dict:
    return {"p": P.p, "kind": P.kind, "b": P.b}


def prime_from_record(K, rec: dict) -> PrimeIdealK:
    for P in K.split_prime(rec["p"]):
        if P.kind == rec["kind"] and P.b == rec["b"]:
            return P
    raise ValueError(f"no prime {rec} in Q(sqrt {K.d})")


def algebra_record(B: QuatAlgebra) -> dict:
    ram = B.ramification
    return {
        "d": B.K.d,
        "a": [str(x) for x in int_coords(B.a)],
        "b": [str(x) for x in int_coords(B.b)],
        "ram_real": list(ram.real),
        "ram_finite": [prime_record(P) for P in ram.finite],
    }


def algebra_from_record(rec: dict) -> QuatAlgebra:
    from .quadfield import QuadField

    K = QuadField(rec["d"])
    a = K.from_int_coords(*(Fraction(x) for x in rec["a"]))
    b = K.from_int_coords(*(Fraction(x) for x in rec["b"]))
    B = QuatAlgebra(K, a, b)
    ram = B.ramification
    if list(ram.real) != rec["ram_real"] or [prime_record(P) for P in ram.finite] != rec["ram_finite"]:
        raise ValueError("recorded ramification does not match the algebra")
    return B


def _basis_record(O: GlobalOrder) -> list[list[str]]:
    return [[str(x) for x in v] for v in O.lattice.basis()]


def family_to_dict(F: ChainFamily, report: TheoremReport | None = None) -> dict:
    from .records import seal

    split_recs = []
    top = max(F.precision.values()) + 2
    for P in F.frob.primes:
        for Q in F.B.K.split_prime(P.p):
            split_recs.append(splitting(F.B, Q, top).record())
    orders = []
    for j, a in enumerate(exponent_vectors(F.frob.ell), start=1):
        for i, O in enumerate(F.chains[a]):
            orders.append({"label": O.label, "chain": j, "exponents": list(a), "level": i,
                           "basis": _basis_record(O)})
    obj = {
        "kind": "chain-family",
        "algebra": algebra_record(F.B),
        "class_field": {"rank": F.frob.group.rank, "narrow": F.frob.group.narrow},
        "frobenius": [dict(prime_record(P), artin=list(s)) for P, s in zip(F.frob.primes, F.frob.symbols)],
        "splittings": split_recs,
        "depth": F.depth,
        "precision": {str(i): n for i, n in sorted(F.precision.items())},
        "orders": orders,
    }
    if report is not None:
        obj["verdicts"] = [vars(it) for it in report.items]
        obj["verdict"] = "PASS" if report.passed else "FAILED"
    return seal(obj)


def family_from_dict(obj: dict) -> ChainFamily:
    from .records import check_seal

    check_seal(obj, "chain-family")
    B = algebra_from_record(obj["algebra"])
    G = class_field_of(B)
    primes = [prime_from_record(B.K, r) for r in obj["frobenius"]]
    symbols = [G.artin(P) for P in primes]
    if [list(s) for s in symbols] != [r["artin"] for r in obj["frobenius"]]:
        raise ValueError("recorded Artin symbols do not match")
    A = FrobeniusAssignment(primes, symbols, G)
    depth = obj["depth"]
    chains: dict[tuple[int, ...], list[GlobalOrder]] = {a: [None] * (depth + 1) for a in exponent_vectors(A.ell)}
    for rec in obj["orders"]:
        L = Lattice.from_generators([[Fraction(x) for x in v] for v in rec["basis"]], 8)
        chains[tuple(rec["exponents"])][rec["level"]] = GlobalOrder(B, L, rec["label"])
    R0 = GlobalOrder(B, chains[exponent_vectors(A.ell)[0]][0].lattice, "R_0")
    precision = {int(k): v for k, v in obj["precision"].items()}
    return ChainFamily(B, R0, A, depth, chains, precision)

"""Isospectrality certificates for chain families.

For every norm-one quadratic order O_K[x], x^2 - t x + 1 = 0, the
certificate records whether K(x) embeds in B and, for each chain order,
the local optimal-embedding counts at every Frobenius prime. Equal rows
across each level of the family are the checkable content.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .chains import (
    ChainFamily,
    LocalSpec,
    TheoremReport,
    exponent_vectors,
    family_from_dict,
    prime_record,
    recognize_local,
    same_genus,
    distance_idele,
    splitting,
    verify_theorem_conditions,
)
from .local import UnstableError, local_embedding_count, unit_index
from .quadfield import FieldElem, QuadField, int_coords
from .quatalg import QuatAlgebra, QuatElem, is_local_square, reduced_invariants
from .records import seal

ASSUMPTIONS = [
    "Spectral equality is a cited implication from equal embedding data across the genus; it is not computed.",
    "The hypotheses of the existence theorem for the algebra (Eichler condition, nonempty finite ramification) "
    "are checked; the arithmetic-to-spectral bridge is taken as given.",
    "Absence of elliptic elements (torsion-freeness of the unit groups) is not checked.",
    "Covering degrees use unit indices of orders; -1 lies in every order, so projective indices agree.",
    "Local counts are taken at Frobenius primes only; at every other prime all orders of a level coincide.",
]


# -- quadratic orders of norm one ----------------------------------------------------


@dataclass(frozen=True)
class QuadOrderOmega:
    t: FieldElem

    @property
    def disc(self) -> FieldElem:
        return self.t * self.t - 4

    @property
    def coords(self) -> tuple[int, int]:
        A, B = int_coords(self.t)
        return int(A), int(B)

    def label(self) -> str:
        A, B = self.coords
        return f"t={A}{B:+d}w"


def _within(x: FieldElem, bound: int) -> bool:
    return all((bound - x).sign(v) >= 0 and (bound + x).sign(v) >= 0 for v in (0, 1))


def enumerate_traces(K: QuadField, house_bound: int) -> list[QuadOrderOmega]:
    """All t in O_K with |sigma(t)| <= house_bound at both real places and
    t^2 - 4 not a square in K, sorted by integral-basis coordinates."""
    if house_bound < 1:
        raise ValueError("house_bound must be >= 1")
    w = K.omega
    gap = float(abs(w.y)) * 2 * math.sqrt(K.d)  # |sigma_1(w) - sigma_2(w)|
    bmax = int(2 * house_bound / gap) + 1
    out = []
    for B in range(-bmax, bmax + 1):
        # sigma(A + B w) in [-H, H] forces |A| <= H + |B| * max|sigma(w)|
        amax = house_bound + int(abs(B) * (abs(float(w.x)) + abs(float(w.y)) * math.sqrt(K.d))) + 2
        for A in range(-amax, amax + 1):
            t = K.from_int_coords(A, B)
            if not _within(t, house_bound):
                continue
            if K.is_square(t * t - 4):
                continue
            out.append(QuadOrderOmega(t))
    out.sort(key=lambda o: o.coords)
    return out


def embeds_in_algebra(omega: QuadOrderOmega, B: QuatAlgebra) -> bool:
    """K(x) embeds in B iff no place ramified in B splits in K(x)."""
    disc = omega.disc
    ram = B.ramification
    if any(disc.sign(v) > 0 for v in ram.real):
        return False
    return not any(is_local_square(disc, P) for P in ram.finite)


def selectivity_exclusion(B: QuatAlgebra, omega: QuadOrderOmega, G) -> dict:
    """Record why embedding behaviour of omega cannot vary across the genus."""
    ram = B.ramification
    if not ram.finite:
        raise ValueError("selectivity exclusion needs a finite ramified prime")
    if len(ram.real) >= 2:
        raise ValueError("selectivity exclusion needs an unramified real place")
    if not embeds_in_algebra(omega, B):
        return {"vacuous": True, "reason": "K(x) does not embed in B, so no order admits an embedding"}
    P = ram.finite[0]
    art = G.artin(P)
    if any(art):
        raise AssertionError("ramified prime with nontrivial Artin symbol in G")
    return {
        "vacuous": False,
        "prime": prime_record(P),
        "artin": list(art),
        "splits_in_L": is_local_square(omega.disc, P),
        "conclusion": "P splits completely in K(B) but not in L, so L is not inside K(B)",
    }


# -- witnesses -----------------------------------------------------------------------


def witness_search(omega: QuadOrderOmega, O, box: int) -> QuatElem | None:
    """Look for x = t/2 + X i + Y j + Z k in O with x^2 - t x + 1 = 0.

    X and Y run over (1/den) (u + v w) with |u|, |v| <= box, den the
    denominator of O's coordinates; Z is then forced up to sign. A miss
    proves nothing.
    """
    if box < 1:
        return None
    B = O.B
    K = B.K
    a, b = B.a, B.b
    t = omega.t
    den = O.lattice.den
    ab_inv = (a * b).inverse()
    c0 = (1 - t * t / 4) * ab_inv
    rng = range(-box, box + 1)
    elems = [K.from_int_coords(Fraction(u, den), Fraction(v, den)) for u in rng for v in rng]
    us = [(X, c0 + a * X * X * ab_inv) for X in elems]
    vs = [(Y, b * Y * Y * ab_inv) for Y in elems]
    # integer images M * (x, y) of every u and v, for a fast norm test
    M = math.lcm(*(c.denominator for _, e in us + vs for c in (e.x, e.y)))
    ui = [(int(e.x * M), int(e.y * M)) for _, e in us]
    vi = [(int(e.x * M), int(e.y * M)) for _, e in vs]
    d = K.d
    half_t = t / 2
    for (X, u), (ux, uy) in zip(us, ui):
        for (Y, v), (vx, vy) in zip(vs, vi):
            zx, zy = ux + vx, uy + vy
            n = zx * zx - d * zy * zy
            if n < 0 or math.isqrt(n) ** 2 != n:
                continue
            Z = K.sqrt(u + v)
            if Z is None:
                continue
            for s_ in (Z, -Z) if Z else (Z,):
                x = B.elem(half_t, X, Y, s_)
                if x in O:
                    _, tr, nr = reduced_invariants(x)
                    assert tr == t and nr == 1
                    return x
    return None


# -- certificates ----------------------------------------------------------------------


def _count_row(F: ChainFamily, omega: QuadOrderOmega, i: int, local_cache: dict) -> dict[str, dict]:
    row = {}
    for j, a in enumerate(exponent_vectors(F.frob.ell), start=1):
        O = F.chains[a][i]
        cell = {}
        for s, P in enumerate(F.frob.primes):
            N = F.precision[i]
            key = (a, i, P)
            if key not in local_cache:
                local_cache[key] = recognize_local(O, P, LocalSpec(a[s], i), N)
            R = local_cache[key]
            phi = splitting(F.B, P, N + 2)
            t_p = phi.image(omega.t)
            res = local_embedding_count((t_p, 1), R, N)
            cell[P.label()] = {str(k): v for k, v in sorted(res.counts.items())}
        row[O.label] = cell
    return row


def _omega_entry(F: ChainFamily, omega: QuadOrderOmega) -> tuple[dict, list[str]]:
    errs = []
    feasible = embeds_in_algebra(omega, F.B)
    entry = {"t": [str(c) for c in omega.coords], "feasible": feasible,
             "selectivity": selectivity_exclusion(F.B, omega, F.frob.group)}
    if feasible:
        per_level = []
        cache: dict = {}
        for i in range(F.depth + 1):
            row = _count_row(F, omega, i, cache)
            uniform = len({repr(sorted(c.items())) for c in row.values()}) == 1
            if not uniform:
                errs.append(f"level {i}, {omega.label()}: counts differ across the genus")
            per_level.append({"level": i, "counts": row, "uniform": uniform})
        entry["levels"] = per_level
    return entry, errs


def certify_isospectral(F: ChainFamily, house_bound: int, chain_hash: str = "",
                        report: TheoremReport | None = None, jobs: int = 1) -> dict:
    """Build the certificate record; its verdict is PASS only if every gate
    and every row check succeeds."""
    failures: list[str] = []
    if report is None:
        report = verify_theorem_conditions(F)
    if not report.passed:
        failures += [f"condition {it.condition} at level {it.level}: {it.subject} ({it.detail})"
                     for it in report.failures()]
    minus_one = F.B.one * -1
    for a, col in sorted(F.chains.items()):
        for O in col:
            if minus_one not in O or not O.is_order():
                failures.append(f"{O.label} is not an order containing -1")
    G = F.frob.group
    levels = []
    for i in range(F.depth + 1):
        pairs = []
        ords = F.orders_at(i)
        for x in range(len(ords)):
            for y in range(x + 1, len(ords)):
                O1, O2 = ords[x][1], ords[y][1]
                gv = same_genus(O1, O2, F.precision[i] + 2)
                entry = {"orders": [O1.label, O2.label], "same_genus": gv.verdict,
                         "instantiates": "same genus but not conjugate"}
                if gv.verdict == "yes":
                    entry["distance"] = list(distance_idele(O1, O2, G, prec=F.precision[i] + 2).value)
                else:
                    failures.append(f"level {i}: {O1.label}, {O2.label} genus {gv.verdict}")
                pairs.append(entry)
        cf = [it.ok for it in report.items if it.condition == 3 and it.level == i]
        levels.append({"level": i, "pairs": pairs, "class_field_equal": all(cf),
                       "instantiates": "class field of every order equals K(B)"})
    rows = []
    if not failures:
        omegas = enumerate_traces(F.B.K, house_bound)
        if jobs > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_omega_entry, [F] * len(omegas), omegas))
        else:
            results = [_omega_entry(F, om) for om in omegas]
        for entry, errs in results:
            rows.append(entry)
            failures += errs
    obj = {
        "kind": "certificate",
        "chain_hash": chain_hash,
        "house_bound": house_bound,
        "depth": F.depth,
        "frobenius": [dict(prime_record(P), artin=list(s)) for P, s in zip(F.frob.primes, F.frob.symbols)],
        "conditions": [dict(vars(it)) for it in report.items],
        "levels": levels,
        "omega_rows": rows,
        "assumptions": ASSUMPTIONS,
        "failures": failures,
        "verdict": "FAILED" if failures else "PASS",
    }
    return seal(obj)


def recheck_certificate(cert: dict, chain: dict) -> bool:
    """Recompute a certificate from the serialized chain family alone."""
    if cert["chain_hash"] != chain["content_hash"]:
        return False
    F = family_from_dict(chain)
    return certify_isospectral(F, cert["house_bound"], chain["content_hash"]) == cert


# -- tower report ---------------------------------------------------------------------


def tower_report(F: ChainFamily, cert_hash: str = "", report: TheoremReport | None = None) -> dict:
    if report is None:
        report = verify_theorem_conditions(F)
    if not report.passed:
        raise ValueError("theorem conditions failed; no tower report")
    levels = []
    cumulative = 1
    for i in range(F.depth):
        degs = {}
        for j, a in enumerate(exponent_vectors(F.frob.ell), start=1):
            deg = 1
            for s, P in enumerate(F.frob.primes):
                N = F.precision[i + 1]
                outer = recognize_local(F.chains[a][i], P, LocalSpec(a[s], i), N)
                inner = recognize_local(F.chains[a][i + 1], P, LocalSpec(a[s], i + 1), N)
                deg *= unit_index(inner, outer)
            degs[F.chains[a][i + 1].label] = deg
        if len(set(degs.values())) != 1:
            raise UnstableError(f"covering degrees differ across chains at level {i}: {degs}")
        deg = next(iter(degs.values()))
        cumulative *= deg
        levels.append({"from": i, "to": i + 1, "degree": deg, "per_chain": degs, "cumulative": cumulative})
    non_iso = []
    for it in report.items:
        if it.condition == 2:
            non_iso.append({"level": it.level, "pair": it.subject, "not_isometric": it.ok,
                            "basis": "nontrivial distance class (cited implication)"})
    obj = {
        "kind": "tower-report",
        "certificate_hash": cert_hash,
        "levels": levels,
        "cumulative_index": cumulative,
        "non_isometry": non_iso,
    }
    return seal(obj)

import copy
import math
from fractions import Fraction

import pytest

from isotower.chains import (
    FrobeniusAssignment,
    GlobalOrder,
    _enlarge_at,
    _usable_prime,
    build_chain_family,
    class_field_of,
    distance_idele,
    exponent_vectors,
    family_from_dict,
    localize,
    maximal_order,
    recognize_local,
    same_genus,
    splitting,
    standard_order,
    verify_theorem_conditions,
)
from isotower.local import mdet
from isotower.records import IntegrityError


def _disc_norm_from_gram(O):
    D = O.B.K.D
    r = math.isqrt(abs(O.z_discriminant()) // D**4)
    assert r * r * D**4 == abs(O.z_discriminant())
    return r


@pytest.mark.parametrize("k", [0, 7, 14, 16, 18])
def test_maximal_order_discriminant(hits, k):
    B = hits[k].algebra()
    O = maximal_order(B)
    assert O.is_order()
    assert standard_order(B).issubset(O)
    want = math.prod(P.norm for P in B.ramification.finite)
    assert _disc_norm_from_gram(O) == O.reduced_disc_norm() == want


def test_maximal_order_is_a_fixed_point(max_order):
    assert maximal_order(max_order.B) == max_order
    B = max_order.B
    for p in (2, 3, 11):
        assert _enlarge_at(B, max_order, p, 2_000_000) is None


def test_splitting_is_a_ring_map(algebra, frob):
    P = frob.primes[0]
    phi = splitting(algebra, P, 10)
    mod = P.p**10
    i, j = algebra.i, algebra.j
    for x, y in [(i, j), (j, i), (i + j, i * j), (algebra.one + i, j - 1)]:
        lhs = phi(x * y)
        a, b = phi(x), phi(y)
        rhs = (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
               a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])
        assert all((u - v) % mod == 0 for u, v in zip(lhs, rhs))
    n = algebra.i.norm()
    assert (mdet(phi(algebra.i)) - phi.image(n)) % mod == 0


def test_frobenius_primes(algebra, frob):
    G = frob.group
    assert frob.ell == G.rank == 1
    for P, s in zip(frob.primes, frob.symbols):
        assert P.kind == "split" and P.p != 2
        assert _usable_prime(algebra, P)
        assert s == G.artin(P) and s != G.zero()


def test_exponent_vector_labels():
    assert exponent_vectors(1) == [(0,), (1,)]
    assert exponent_vectors(2) == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_family_inclusions_and_discriminants(family, frob):
    p = frob.primes[0].p
    base = family.R0.reduced_disc_norm()
    for a, col in family.chains.items():
        for i, O in enumerate(col):
            assert O.is_order()
            assert O.reduced_disc_norm() == base * p ** (2 * i)
            if i:
                assert O.issubset(col[i - 1]) and O != col[i - 1]
                assert O.index_in(col[i - 1]) == p**2


def test_family_localizations(family):
    for a in family.chains:
        for i, O in enumerate(family.chains[a]):
            for P, spec in family.spec(a, i).items():
                R = recognize_local(O, P, spec, family.precision[i])
                assert R.level == i
                assert localize(O, splitting(family.B, P, family.precision[i])) == R.lattice


def test_theorem_conditions_hold(theorem_report):
    assert theorem_report.passed, theorem_report.failures()
    assert {it.condition for it in theorem_report.items} == {1, 2, 3}


def test_genus_and_distance(family, frob):
    G = frob.group
    for i in range(family.depth + 1):
        (_, O1), (_, O2) = family.orders_at(i)
        gv = same_genus(O1, O2)
        assert gv.verdict == "yes" and bool(gv)
        d12 = distance_idele(O1, O2, G)
        d21 = distance_idele(O2, O1, G)
        assert d12.value == frob.symbols[0]
        assert G.add(d12.value, d21.value) == G.zero()
        assert distance_idele(O1, O1, G).trivial
    col = family.chains[(0,)]
    assert same_genus(col[0], col[1]).verdict == "no"


def test_artin_trivial_prime_gives_trivial_distance(max_order):
    B = max_order.B
    G = class_field_of(B)
    P = next(P for P in B.K.degree_one_primes(3) if G.artin(P) == G.zero() and _usable_prime(B, P))
    fam = build_chain_family(max_order, FrobeniusAssignment([P], [G.zero()], G), 1)
    rep = verify_theorem_conditions(fam)
    assert not rep.passed
    assert {it.condition for it in rep.failures()} == {2}


def test_build_rejects_bad_depth(max_order, frob):
    with pytest.raises(ValueError):
        build_chain_family(max_order, frob, -1)
    with pytest.raises(ValueError):
        build_chain_family(max_order, frob, 5)


def test_chain_record_roundtrip(family, chain_record):
    F2 = family_from_dict(chain_record)
    assert F2.depth == family.depth and F2.precision == family.precision
    for a in family.chains:
        assert [O.lattice for O in F2.chains[a]] == [O.lattice for O in family.chains[a]]
    assert chain_record["verdict"] == "PASS"


def test_chain_record_tamper_detected(chain_record):
    bad = copy.deepcopy(chain_record)
    bad["orders"][1]["basis"][0][0] = "7"
    with pytest.raises(IntegrityError):
        family_from_dict(bad)


def test_global_order_rejects_non_order(algebra):
    x = algebra.i * Fraction(1, 3)
    O = GlobalOrder.from_elements(algebra, algebra.rational_basis() + [x])
    assert not O.is_order()

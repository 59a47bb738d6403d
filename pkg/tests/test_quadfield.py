import itertools
import math
from fractions import Fraction

import pytest

from isotower.arith import is_squarefree, kronecker, primes
from isotower.quadfield import QuadField, compose, is_reduced, reduce_form


def _represents_unit(P, signs=(1, -1), ymax=5000):
    """Does the norm form of P take a value in ``signs``?  Direct scan over y."""
    p, b, D = P.p, P.b, P.D
    for y in range(ymax + 1):
        for s in signs:
            disc = D * y * y + 4 * p * s
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            if any((-b * y + t) % (2 * p) == 0 for t in (r, -r)):
                return True
    return False


@pytest.mark.parametrize(
    "d, x, y, n",
    [(2, 1, 1, -1), (3, 2, 1, 1), (5, Fraction(1, 2), Fraction(1, 2), -1), (15, 4, 1, 1)],
)
def test_fundamental_unit_examples(d, x, y, n):
    eps, norm = QuadField(d).fundamental_unit
    assert (eps.x, eps.y, norm) == (x, y, n)


@pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 10, 13, 14, 15, 21])
def test_fundamental_unit_is_minimal(d):
    K = QuadField(d)
    eps, norm = K.fundamental_unit
    assert eps.norm() == norm
    top = float(eps.x) + float(eps.y) * math.sqrt(d)
    # units are (X + Y sqrt d)/s with X^2 - d Y^2 = +-s^2
    s = 2 if d % 4 == 1 else 1
    for Y in range(1, 400):
        for X in range(-400, 401):
            if X * X - d * Y * Y in (s * s, -s * s):
                v = (X + Y * math.sqrt(d)) / s
                assert not (1 + 1e-9 < v < top - 1e-9), (d, X, Y)


@pytest.mark.parametrize(
    "d, h, hplus", [(3, 1, 2), (10, 2, 2), (15, 2, 4), (79, 3, 6), (82, 4, 4), (2, 1, 1)]
)
def test_class_numbers(d, h, hplus):
    K = QuadField(d)
    assert K.class_number == h
    assert K.narrow_class_number == hplus


def test_narrow_wide_ratio():
    for d in range(2, 200):
        if not is_squarefree(d):
            continue
        K = QuadField(d)
        _, n = K.fundamental_unit
        assert K.narrow_class_number == K.class_number * (2 if n == 1 else 1), d


def test_reduced_forms_are_reduced_and_closed():
    K = QuadField(79)
    forms = K.reduced_forms
    assert forms and all(is_reduced(f) and f.disc == K.D for f in forms)
    f, g = forms[0], forms[-1]
    assert compose(f, g).disc == K.D
    assert reduce_form(compose(f, g)) in forms


@pytest.mark.parametrize("d, p, kind", [(3, 13, "split"), (10, 5, "ramified"), (5, 7, "inert")])
def test_split_prime_examples(d, p, kind):
    assert {P.kind for P in QuadField(d).split_prime(p)} == {kind}


@pytest.mark.parametrize("d", [3, 15, 17, 26])
def test_splitting_matches_kronecker(d):
    K = QuadField(d)
    for p in primes(3, 10_000):
        Ps = K.split_prime(p)
        k = kronecker(K.D, p)
        assert len(Ps) == (2 if k == 1 else 1)
        for P in Ps:
            assert P.kind == {1: "split", 0: "ramified", -1: "inert"}[k]
            if P.kind != "inert":
                assert (P.b * P.b - K.D) % (4 * p) == 0


@pytest.mark.parametrize("d", [10, 15, 26, 30, 34, 39])
def test_wide_artin_matches_principality_scan(d):
    K = QuadField(d)
    assert K.class_number == 2
    G = K.class_field_group([0], [])
    assert G.order == 2
    for P in K.degree_one_primes(3):
        if P.p > 250:
            break
        assert (G.artin(P) == G.zero()) == _represents_unit(P)


def test_narrow_artin_matches_principality_scan():
    K = QuadField(3)
    G = K.class_field_group([0, 1], [])
    assert G.order == 2
    wide = K.class_field_group([0], [])
    assert wide.order == 1
    for P in K.degree_one_primes(5):
        if P.p > 400:
            break
        assert (G.artin(P) == G.zero()) == _represents_unit(P, signs=(1,))


def test_split_completely_set_kills_its_classes():
    K = QuadField(15)
    Ps = list(itertools.takewhile(lambda P: P.p < 100, K.degree_one_primes(3)))
    bad = next(P for P in Ps if not _represents_unit(P))
    G = K.class_field_group([0], [bad])
    assert G.order == 1
    good = next(P for P in Ps if _represents_unit(P))
    assert K.class_field_group([0], [good]).order == 2

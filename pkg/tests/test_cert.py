import copy
import math

import pytest

from isotower.cert import (
    QuadOrderOmega,
    embeds_in_algebra,
    enumerate_traces,
    recheck_certificate,
    selectivity_exclusion,
    tower_report,
    witness_search,
)
from isotower.quadfield import QuadField
from isotower.quatalg import QuatAlgebra, reduced_invariants
from isotower.records import IntegrityError, check_seal


def _scan_traces(d, H, box=40):
    """Traces by a wide box scan with floating-point embeddings."""
    K = QuadField(d)
    out = set()
    for A in range(-box, box + 1):
        for B in range(-box, box + 1):
            t = K.from_int_coords(A, B)
            s1 = float(t.x) + float(t.y) * math.sqrt(d)
            s2 = float(t.x) - float(t.y) * math.sqrt(d)
            if abs(s1) <= H + 1e-9 and abs(s2) <= H + 1e-9 and not K.is_square(t * t - 4):
                out.add((A, B))
    return out


@pytest.mark.parametrize("d, H", [(3, 3), (15, 5), (5, 2)])
def test_enumerate_traces_matches_scan(d, H):
    got = {o.coords for o in enumerate_traces(QuadField(d), H)}
    assert got == _scan_traces(d, H)


def test_trace_examples():
    K = QuadField(15)
    coords = {o.coords for o in enumerate_traces(K, 5)}
    assert (0, 0) in coords
    assert (2, 0) not in coords and (-2, 0) not in coords  # t^2 - 4 = 0
    assert len(coords) == 15
    with pytest.raises(ValueError):
        enumerate_traces(K, 0)


def test_enumeration_symmetric_under_sign():
    K = QuadField(15)
    ts = {o.coords for o in enumerate_traces(K, 5)}
    for o in enumerate_traces(K, 5):
        neg = -o.t
        assert QuadOrderOmega(neg).coords in ts


def test_embedding_criterion(algebra):
    K = algebra.K
    feas = [o for o in enumerate_traces(K, 5) if embeds_in_algebra(o, algebra)]
    assert {o.coords for o in feas} == {(-1, 0), (0, 0), (1, 0)}
    for o in enumerate_traces(K, 5):
        assert embeds_in_algebra(o, algebra) == embeds_in_algebra(QuadOrderOmega(-o.t), algebra)


def test_matrix_algebra_control():
    K = QuadField(15)
    M2 = QuatAlgebra(K, K(1), K(1))
    assert len(M2.ramification) == 0
    assert all(embeds_in_algebra(o, M2) for o in enumerate_traces(K, 5))


def test_selectivity_record(algebra, frob):
    G = frob.group
    o = QuadOrderOmega(algebra.K(0))
    rec = selectivity_exclusion(algebra, o, G)
    assert rec["vacuous"] is False and rec["artin"] == [0]
    far = QuadOrderOmega(algebra.K(3))
    assert selectivity_exclusion(algebra, far, G)["vacuous"] is True
    K = algebra.K
    with pytest.raises(ValueError):
        selectivity_exclusion(QuatAlgebra(K, K(1), K(1)), o, G)
    with pytest.raises(ValueError):
        selectivity_exclusion(QuatAlgebra(QuadField(3), -1, -1), QuadOrderOmega(QuadField(3)(0)), G)


def test_witnesses(max_order):
    K = max_order.B.K
    x = witness_search(QuadOrderOmega(K(0)), max_order, 10)
    assert x is not None and x in max_order
    _, tr, nr = reduced_invariants(x)
    assert tr == 0 and nr == 1
    assert witness_search(QuadOrderOmega(K(0)), max_order, 0) is None
    for t in (1, -1):
        assert witness_search(QuadOrderOmega(K(t)), max_order, 10) is None
        y = witness_search(QuadOrderOmega(K(t)), max_order, 24)
        assert y is not None and reduced_invariants(y)[1] == t


def test_certificate_passes(certificate):
    assert certificate["verdict"] == "PASS", certificate["failures"]
    check_seal(certificate, "certificate")
    assert certificate["assumptions"]
    feasible = [r for r in certificate["omega_rows"] if r["feasible"]]
    assert len(feasible) == 3
    for r in feasible:
        assert all(lv["uniform"] for lv in r["levels"])
    for lv in certificate["levels"]:
        assert all(p["same_genus"] == "yes" and any(p["distance"]) for p in lv["pairs"])
        assert lv["class_field_equal"]


def test_certificate_recheck(certificate, chain_record):
    assert recheck_certificate(certificate, chain_record)
    other = copy.deepcopy(certificate)
    other["chain_hash"] = "0" * 64
    assert not recheck_certificate(other, chain_record)
    bad_chain = copy.deepcopy(chain_record)
    bad_chain["depth"] = 1
    with pytest.raises(IntegrityError):
        recheck_certificate(certificate, dict(bad_chain, content_hash=chain_record["content_hash"]))


def test_tower_report(family, theorem_report, certificate, frob):
    rep = tower_report(family, certificate["content_hash"], theorem_report)
    check_seal(rep, "tower-report")
    p = frob.primes[0].p
    assert [lv["degree"] for lv in rep["levels"]] == [p * (p - 1), p * p]
    assert rep["cumulative_index"] == p**3 * (p - 1)
    assert all(x["not_isometric"] for x in rep["non_isometry"])

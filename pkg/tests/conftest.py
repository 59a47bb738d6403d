import pytest

from isotower.cert import certify_isospectral
from isotower.chains import (
    build_chain_family,
    class_field_of,
    family_to_dict,
    find_frobenius_primes,
    maximal_order,
    verify_theorem_conditions,
)
from isotower.quatalg import search_algebras


@pytest.fixture(scope="session")
def hits():
    return search_algebras(50, 1)


@pytest.fixture(scope="session")
def algebra(hits):
    return hits[0].algebra()


@pytest.fixture(scope="session")
def max_order(algebra):
    return maximal_order(algebra)


@pytest.fixture(scope="session")
def frob(algebra):
    G = class_field_of(algebra)
    return find_frobenius_primes(G, G.rank, algebra)


@pytest.fixture(scope="session")
def family(max_order, frob):
    return build_chain_family(max_order, frob, 2)


@pytest.fixture(scope="session")
def theorem_report(family):
    return verify_theorem_conditions(family)


@pytest.fixture(scope="session")
def chain_record(family, theorem_report):
    return family_to_dict(family, theorem_report)


@pytest.fixture(scope="session")
def certificate(family, theorem_report, chain_record):
    return certify_isospectral(family, 5, chain_record["content_hash"], theorem_report)


# one summary line per acceptance criterion

_criteria: dict[str, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    _criteria.setdefault(str(marker), []).append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: (int(k.split(".")[0]), k)):
        for name, outcome in _criteria[key]:
            verdict = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"criterion {key}: {verdict}  ({name})")

import json
import subprocess
import sys

import pytest

from isotower.cli import EXIT_EMPTY, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from isotower.records import load


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    d = tmp_path_factory.mktemp("run")
    files = {k: d / f"{k}.json" for k in ("candidates", "chain", "certificate", "report")}
    codes = [
        main(["search", "--dmax", "20", "--ell", "1", "-o", str(files["candidates"])]),
        main(["chain", "--candidates", str(files["candidates"]), "--depth", "1", "-o", str(files["chain"])]),
        main(["certify", "--chain", str(files["chain"]), "--house-bound", "3", "-o", str(files["certificate"])]),
        main(["report", "--certificate", str(files["certificate"]), "--chain", str(files["chain"]),
              "-o", str(files["report"])]),
    ]
    return codes, files


def test_pipeline_exit_codes(pipeline):
    codes, files = pipeline
    assert codes == [EXIT_OK] * 4
    assert load(files["chain"], "chain-family")["verdict"] == "PASS"
    assert load(files["certificate"], "certificate")["verdict"] == "PASS"
    assert load(files["report"], "tower-report")["cumulative_index"] == 42


def test_outputs_end_with_newline_and_sorted_keys(pipeline):
    _, files = pipeline
    for path in files.values():
        text = path.read_text()
        assert text.endswith("\n")
        obj = json.loads(text)
        assert list(obj) == sorted(obj)


def test_search_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["search", "--dmax", "20", "-o", str(a)]) == EXIT_OK
    assert main(["search", "--dmax", "20", "-o", str(b), "--jobs", "2"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_empty_search(tmp_path):
    assert main(["search", "--dmax", "2", "--ell", "3", "-o", str(tmp_path / "c.json")]) == EXIT_EMPTY


def test_usage_errors(tmp_path):
    assert main([]) == EXIT_USAGE
    assert main(["search", "--dmax", "0", "-o", str(tmp_path / "x.json")]) == EXIT_USAGE
    assert main(["verify-local", "--p", "3", "--m", "2", "--precision", "3", "-o", str(tmp_path / "l.json")]) == EXIT_USAGE
    assert main(["chain", "--candidates", str(tmp_path / "missing.json")]) != EXIT_OK


def test_deep_chain_needs_flag(pipeline, tmp_path):
    _, files = pipeline
    out = tmp_path / "deep.json"
    assert main(["chain", "--candidates", str(files["candidates"]), "--depth", "5", "-o", str(out)]) == EXIT_USAGE
    assert not out.exists()


def test_tampered_chain_is_rejected(pipeline, tmp_path):
    _, files = pipeline
    obj = json.loads(files["chain"].read_text())
    obj["depth"] = 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    assert main(["certify", "--chain", str(bad), "-o", str(tmp_path / "cert.json")]) == EXIT_FAILED
    assert not (tmp_path / "cert.json").exists()


def test_verify_local_small_grid(tmp_path):
    out = tmp_path / "local.json"
    assert main(["verify-local", "--p", "3,5", "--m", "1", "-o", str(out)]) == EXIT_OK
    rows = load(out)["rows"]
    assert len(rows) == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "isotower", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "search" in r.stdout

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from itercover.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, certify_report, lemmas_report, main
from itercover.family import FamilyDescriptor
from itercover.fixtures import planted_degenerate_instances

D = FamilyDescriptor.make


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text(encoding="utf-8")) if out.exists() else None), out


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_families(tmp_path):
    code, data, _ = run(["families", "--dim", "4"], tmp_path)
    assert code == EXIT_PASS and data["count"] == 2 and data["schema_version"] == 1
    code, data, _ = run(["families", "--dim", "5"], tmp_path)
    listed = {(tuple(e["descriptor"]["d"]), tuple(e["descriptor"]["l"])) for e in data["families"]}
    assert listed == {((3,), (3,)), ((4,), (2,)), ((2,), (4,)), ((2,), (2, 2)), ((2, 2), (3,)), ((3, 2), (2,))}
    assert all(e["index_check"] and e["admissible"] for e in data["families"])


def test_usage_errors(tmp_path, capsys):
    assert run(["families", "--dim", "3"], tmp_path)[0] == EXIT_USAGE
    assert main(["nonsense"]) == EXIT_USAGE
    assert main(["certify", "--family", str(tmp_path / "missing.json")]) == EXIT_USAGE
    bad = write_json(tmp_path / "bad.json", {"M": 5})
    assert main(["certify", "--family", bad]) == EXIT_USAGE
    fam = write_json(tmp_path / "fam.json", D(5, [3], [3]).to_json())
    assert main(["certify", "--family", fam, "--samples", "-1"]) == EXIT_USAGE
    assert main(["certify", "--family", fam, "--prime", "61"]) == EXIT_USAGE
    assert main(["lemmas", "--graphs-max-n", "0"]) == EXIT_USAGE
    capsys.readouterr()


def test_certify_deterministic(tmp_path):
    fam = write_json(tmp_path / "fam.json", D(5, [3], [3]).to_json())
    argv = ["certify", "--family", fam, "--samples", "4", "--seed", "7"]
    code1, data, out1 = run(argv, tmp_path, "a.json")
    code2, _, out2 = run(argv, tmp_path, "b.json")
    assert code1 == code2 == EXIT_PASS
    assert out1.read_bytes() == out2.read_bytes()
    assert data["bounds"]["class0_final"] == "3/5" and data["degV"] == 6
    assert len(data["regularity"]) == 8 and all(r["pass"] for r in data["regularity"])
    assert {r["class"] for r in data["regularity"]} == {0, 1}
    assert data["pass"] and not data["regularity_contingent"] and data["failing_points"] == []


def test_adding_samples_keeps_earlier_points():
    desc = D(4, [2], [3])
    small, _ = certify_report(desc, None, samples=1, seed=3, prime=2**31 - 1, graphs_max_n=3)
    large, _ = certify_report(desc, None, samples=2, seed=3, prime=2**31 - 1, graphs_max_n=3)
    for e in (0, 1):
        first = [r for r in small["regularity"] if r["class"] == e]
        again = [r for r in large["regularity"] if r["class"] == e and r["index"] == 0]
        assert first == again


def test_certify_bounds_only(tmp_path):
    fam = write_json(tmp_path / "fam.json", {"descriptor": D(4, [2], [3]).to_json()})
    code, data, _ = run(["certify", "--family", fam, "--samples", "0"], tmp_path)
    assert code == EXIT_PASS
    assert data["regularity"] == [] and data["regularity_contingent"]


def test_certify_inadmissible_descriptor(tmp_path):
    fam = write_json(tmp_path / "fam.json", {"M": 5, "k": 1, "d": [3], "m": 1, "l": [2]})
    code, data, _ = run(["certify", "--family", fam, "--samples", "0"], tmp_path)
    assert code == EXIT_FAIL and not data["admissible"] and data["problems"]


@pytest.mark.parametrize("planted", planted_degenerate_instances(), ids=lambda x: x.name)
def test_certify_planted_instance_fails(tmp_path, planted):
    payload = planted.instance.to_json()
    good = [1] + [3 + i for i in range(planted.instance.descriptor.nvars - 1)]
    payload["points"] = [[str(x) for x in planted.point]]
    fam = write_json(tmp_path / "planted.json", payload)
    code, data, _ = run(["certify", "--family", fam], tmp_path)
    assert code == EXIT_FAIL and not data["pass"]
    assert data["failing_points"][0]["index"] == 0
    assert data["failing_points"][0]["point"] == [str(x) for x in planted.point]
    # a point that is not on Q is reported as an error, not silently skipped
    payload["points"] = [good]
    fam = write_json(tmp_path / "offq.json", payload)
    code, data, _ = run(["certify", "--family", fam], tmp_path, "offq_out.json")
    assert code == EXIT_FAIL and data["regularity"][0]["verdict"] == "error"


def test_lemmas_clean():
    report, code = lemmas_report(8, 12)
    assert code == EXIT_PASS and report["pass"]
    assert report["graphs"]["graphs_checked"] == 378
    assert report["graphs"]["lemma15_equality_cases"][0]["p"] == [1]
    assert report["descriptors"]["counterexamples"] == []
    assert report["codim"]["mismatches"] == 0 and report["codim"]["degree_lists"] > 0


@pytest.mark.parametrize("fault", ["lemma15", "lemma16", "beta"])
def test_lemmas_fault_injection(tmp_path, fault):
    code, data, _ = run(["lemmas", "--graphs-max-n", "5", "--degrees-max-m", "8", "--inject-fault", fault], tmp_path)
    assert code == EXIT_FAIL and not data["pass"] and data["fault_injected"] == fault
    if fault == "lemma15":
        assert data["graphs"]["lemma15_counterexamples"][0]["p"] == [1]
    elif fault == "lemma16":
        assert data["graphs"]["lemma16_counterexamples"]
    else:
        assert data["descriptors"]["counterexamples"]


def test_console_entry_point(tmp_path):
    out = tmp_path / "fam.json"
    proc = subprocess.run(
        [sys.executable, "-m", "itercover.cli", "families", "--dim", "4", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(out.read_text())["count"] == 2

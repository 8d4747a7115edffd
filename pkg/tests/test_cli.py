import json
import subprocess
import sys

import pytest

from freedecomp import registry
from freedecomp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_enumerate_words(capsys):
    code, doc = run_json(capsys, "enumerate", "--example", "words", "--alphabet", "ab", "--level", "2")
    assert code == 0 and doc["count"] == 4
    assert doc["elements"] == ["a,a", "a,b", "b,a", "b,b"]


def test_enumerate_qsym_free_level(capsys):
    code, doc = run_json(capsys, "enumerate", "--example", "qsym", "--bound", "3", "--level", "1", "--space", "free")
    assert code == 0 and doc["count"] == 8


def test_enumerate_nc(capsys):
    code, doc = run_json(capsys, "enumerate", "--example", "nc", "--level", "4")
    assert code == 0 and doc["count"] == 14


def test_enumerate_above_budget(capsys):
    code, _, err = run(capsys, "enumerate", "--example", "words", "--level", "9")
    assert code == 2 and "budget" in err


@pytest.mark.parametrize("name", sorted(registry.REGISTRY))
def test_decomposition_check_every_example(capsys, name):
    code, doc = run_json(capsys, "check", "--example", name, "--which", "decomposition")
    assert code == 0 and doc["verdict"] == "pass"


def test_segal_check_truncated(capsys):
    code, doc = run_json(capsys, "check", "--example", "truncated-paths", "--which", "segal")
    assert code == 1 and doc["verdict"] == "fail" and doc["witnesses"]


def test_sheaf_check_quiver(capsys):
    code, doc = run_json(capsys, "check", "--example", "quiver", "--which", "sheaf")
    assert code == 0


def test_culf_check(capsys):
    assert run(capsys, "check", "--example", "nc", "--which", "culf", "--full")[0] == 0


def test_comult_words(capsys):
    code, doc = run_json(capsys, "comult", "--example", "words", "--alphabet", "abc", "--element", "abc")
    assert code == 0 and doc["count"] == 4
    assert doc["terms"][0] == {"left": "0|", "right": "3|a,b,c", "coeff": "+1/1"}


def test_comult_qsym(capsys):
    code, doc = run_json(capsys, "comult", "--example", "qsym", "--element", "2,3,1,1,4")
    assert code == 0 and doc["count"] == 6


def test_comult_empty_word(capsys):
    code, doc = run_json(capsys, "comult", "--example", "words", "--element", "")
    assert code == 0 and doc["count"] == 1


def test_comult_iterate(capsys):
    code, doc = run_json(capsys, "comult", "--example", "words", "--element", "ab", "--iterate", "2")
    assert code == 0 and doc["count"] == 6
    assert "factors" in doc["terms"][0]


def test_comult_parse_failure(capsys):
    code, _, err = run(capsys, "comult", "--example", "nc", "--element", "13|24x")
    assert code == 2 and err


def test_comult_missing_element(capsys):
    assert run(capsys, "comult", "--example", "words")[0] == 2


def test_mobius_bn(capsys):
    code, doc = run_json(capsys, "mobius", "--example", "bn")
    assert code == 0
    assert list(doc["values"].values()) == ["+1/1", "-1/1", "0/1", "0/1"]
    assert doc["cross_check"] == "pass"


def test_mobius_too_long(capsys):
    code, _, err = run(capsys, "mobius", "--example", "bn", "--truncation", "3", "--level", "3")
    assert code == 2 and "truncation >= 4" in err


def test_roundtrip_words(capsys):
    code, doc = run_json(capsys, "roundtrip", "--example", "words")
    assert code == 0 and doc["verdict"] == "pass"


def test_compare_tw(capsys):
    code, doc = run_json(capsys, "compare", "--which", "tw")
    assert code == 0
    homs = doc["checks"][0]["details"]["homs"]
    assert homs["0->0"] == 1 and homs["2->5"] == 4


def test_compare_tw_needs_truncation(capsys):
    code, _, err = run(capsys, "compare", "--which", "tw", "--truncation", "3")
    assert code == 2 and ">= 5" in err


def test_unknown_example(capsys):
    code, _, err = run(capsys, "enumerate", "--example", "nope")
    assert code == 2 and "unknown example" in err


def test_bad_flags(capsys):
    assert run(capsys, "enumerate", "--bound", "0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "--which", "nonsense")[0] == 2


def test_table_format(capsys):
    code, out, _ = run(capsys, "enumerate", "--example", "nc", "--level", "2", "--format", "table")
    assert code == 0 and out.splitlines()[0].endswith("2 elements")


def test_output_is_byte_stable(capsys):
    argv = ["comult", "--example", "nc", "--element", "1|24|3"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    proc = subprocess.run([sys.executable, "-m", "freedecomp", *argv], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == first

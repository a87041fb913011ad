import json
from fractions import Fraction
from pathlib import Path

import pytest

uevidence = pytest.importorskip("uevidence")

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def test_npd_fails_on_leading():
    code, doc = uevidence.check("npd", FIXTURES / "leading.json")
    assert code == 3
    assert doc["exit_code"] == 3
    assert doc["command"] == "check npd"


def test_nppd_passes_on_leading():
    code, _ = uevidence.check("nppd", FIXTURES / "leading.json")
    assert code == 0


def test_in_memory_scenario_round_trip():
    scn = json.loads(uevidence.random_flat_scenario(3))
    code, doc = uevidence.validate(scn)
    assert code == 0
    assert doc["input_digest"] == uevidence.digest(json.dumps(scn))


def test_probabilities_are_exact_strings():
    scn = json.loads(uevidence.random_flat_scenario(11))
    for per_agent in scn["distributions"].values():
        for rows in per_agent.values():
            assert sum(Fraction(r["prob"]) for r in rows) == 1


def test_am_build_and_lowered_rounds():
    code, doc = uevidence.build("am", FIXTURES / "micro.json", eps="1/100")
    assert code == 0
    code, _ = uevidence.audit("icr", FIXTURES / "coordination.json", rounds=533)
    assert code == 3


def test_missing_file_is_io_error():
    code, doc = uevidence.validate(FIXTURES / "missing.json")
    assert code == 1
    assert "error" in doc["result"]


def test_machine_output_deterministic():
    a = uevidence._uevidence.run("check", which="sm", path=str(FIXTURES / "nppd_gap.json"))
    b = uevidence._uevidence.run("check", which="sm", path=str(FIXTURES / "nppd_gap.json"))
    assert a == b

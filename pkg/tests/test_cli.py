import json
import subprocess
import sys

import pytest

from cpnets import (
    CnfFormula,
    forward_sweep_optimum,
    formula_net,
    net_from_json,
    net_to_json,
    parse_dimacs,
    profile_from_json,
    profile_to_json,
)
from cpnets.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture()
def profile_path(tmp_path, dinner_profile):
    path = tmp_path / "profile.json"
    path.write_text(json.dumps(profile_to_json(dinner_profile)))
    return str(path)


@pytest.fixture()
def cnf_path(tmp_path):
    path = tmp_path / "phi.cnf"
    path.write_text("p cnf 2 2\n1 -2 0\n2 0\n")
    return str(path)


@pytest.fixture()
def qbf_path(tmp_path):
    path = tmp_path / "phi.qdimacs"
    path.write_text("p cnf 2 1\ne 1 0\na 2 0\n1 2 0\n")
    return str(path)


class TestValidate:
    def test_valid_net(self, capsys, dinner_path):
        code, payload = run_json(capsys, "validate", dinner_path)
        assert code == 0
        assert payload == {"answer": True, "violations": []}

    def test_invalid_net_still_answers(self, capsys, tmp_path):
        raw = {
            "features": [
                {
                    "name": "A",
                    "parents": ["A"],
                    "cpt": [{"cond": [0], "prefer": 0}, {"cond": [1], "prefer": 1}],
                }
            ]
        }
        path = tmp_path / "cyclic.json"
        path.write_text(json.dumps(raw))
        code, payload = run_json(capsys, "validate", str(path))
        assert code == 0
        assert payload["answer"] is False
        assert payload["violations"]

    def test_malformed_json_is_exit_2(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, payload = run_json(capsys, "validate", str(path))
        assert code == 2
        assert "error" in payload

    def test_missing_file_is_exit_2(self, capsys, tmp_path):
        code, payload = run_json(capsys, "validate", str(tmp_path / "nope.json"))
        assert code == 2
        assert "error" in payload


class TestNetQueries:
    def test_optimum(self, capsys, dinner_path):
        code, payload = run_json(capsys, "optimum", dinner_path)
        assert code == 0
        assert payload == {"answer": "00"}

    def test_is_optimal(self, capsys, dinner_path):
        code, payload = run_json(capsys, "is-optimal", dinner_path, "00")
        assert (code, payload["answer"]) == (0, True)
        code, payload = run_json(capsys, "is-optimal", dinner_path, "01")
        assert (code, payload["answer"]) == (0, False)

    def test_dominates_with_stats(self, capsys, dinner_path):
        code, payload = run_json(capsys, "dominates", dinner_path, "00", "10")
        assert code == 0
        assert payload["answer"] is True
        assert isinstance(payload["stats"]["visited"], int)
        assert payload["stats"]["ms"] >= 0
        assert "witness" not in payload

    def test_dominates_witness(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "dominates", dinner_path, "00", "10", "--witness"
        )
        assert code == 0
        assert payload["witness"] == {
            "start": "10",
            "end": "00",
            "steps": [{"feature": "Main", "from": 1, "to": 0}],
        }

    def test_false_answer_has_no_witness(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "dominates", dinner_path, "10", "00", "--witness"
        )
        assert code == 0
        assert payload["answer"] is False
        assert "witness" not in payload

    def test_budget_is_exit_3(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "dominates", dinner_path, "00", "11", "--max-states", "1"
        )
        assert code == 3
        assert "state budget" in payload["error"]

    def test_bad_outcome_is_exit_2(self, capsys, dinner_path):
        code, payload = run_json(capsys, "dominates", dinner_path, "000", "10")
        assert code == 2
        assert "error" in payload

    def test_incomparable(self, capsys, dinner_path):
        code, payload = run_json(capsys, "incomparable", dinner_path, "00", "01")
        assert (code, payload["answer"]) == (0, False)


class TestNamedOutcomes:
    def test_named_values(self, capsys, dinner_path):
        code, payload = run_json(
            capsys,
            "dominates",
            dinner_path,
            "Main=m,Wine=r",
            "Main=f,Wine=r",
            "--named",
        )
        assert (code, payload["answer"]) == (0, True)

    def test_digits_always_work(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "is-optimal", dinner_path, "Main=0,Wine=0", "--named"
        )
        assert (code, payload["answer"]) == (0, True)

    def test_unknown_value(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "is-optimal", dinner_path, "Main=tofu,Wine=r", "--named"
        )
        assert code == 2
        assert "tofu" in payload["error"]

    def test_missing_feature(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "is-optimal", dinner_path, "Main=m", "--named"
        )
        assert code == 2

    def test_duplicate_feature(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "is-optimal", dinner_path, "Main=m,Main=f,Wine=r", "--named"
        )
        assert code == 2

    def test_unknown_feature(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "is-optimal", dinner_path, "Main=m,Wine=r,Dessert=1", "--named"
        )
        assert code == 2


class TestVotingCommands:
    def test_pareto_dominates(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "pareto", "dominates", profile_path, "00", "10"
        )
        assert (code, payload["answer"]) == (0, True)

    def test_pareto_is_optimal(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "pareto", "is-optimal", profile_path, "01"
        )
        assert (code, payload["answer"]) == (0, True)

    def test_pareto_is_optimum(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "pareto", "is-optimum", profile_path, "00"
        )
        assert (code, payload["answer"]) == (0, False)

    def test_pareto_exists_optimal(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "pareto", "exists-optimal", profile_path
        )
        assert code == 0
        assert payload == {"answer": True, "witness": "00"}

    def test_pareto_exists_optimum(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "pareto", "exists-optimum", profile_path
        )
        assert code == 0
        assert payload == {"answer": False, "witness": None}

    def test_majority_exists_optimum(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "majority", "exists-optimum", profile_path
        )
        assert code == 0
        assert payload == {"answer": True, "witness": "00"}

    def test_majority_dominates(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "majority", "dominates", profile_path, "00", "01"
        )
        assert (code, payload["answer"]) == (0, True)

    def test_majority_pair_bound_gate(self, capsys, profile_path):
        code, payload = run_json(
            capsys,
            "majority",
            "is-optimal",
            profile_path,
            "00",
            "--pair-bound",
            "1",
        )
        assert code == 3
        assert "error" in payload


class TestGadgetCommand:
    def test_nowin_profile_roundtrip(self, capsys, tmp_path):
        code, payload = run_json(capsys, "gadget", "m-nowin")
        assert code == 0
        profile = profile_from_json(payload)
        assert profile.m == 4
        saved = tmp_path / "nowin.json"
        saved.write_text(json.dumps(payload))
        code, payload = run_json(
            capsys, "majority", "exists-optimal", str(saved)
        )
        assert code == 0
        assert payload == {"answer": False, "witness": None}

    def test_formula_net_matches_library(self, capsys, cnf_path):
        code, payload = run_json(capsys, "gadget", "formula-net", "--cnf", cnf_path)
        assert code == 0
        with open(cnf_path) as fh:
            expected = formula_net(parse_dimacs(fh.read())).net
        assert payload == net_to_json(expected)

    def test_formula_net_requires_cnf(self, capsys):
        code, payload = run_json(capsys, "gadget", "formula-net")
        assert code == 2

    def test_hc_synthesizes_inputs(self, capsys):
        code, payload = run_json(capsys, "gadget", "hc", "-m", "5")
        assert code == 0
        net = net_from_json(payload)
        assert net.features[:5] == ("S_1", "S_2", "S_3", "S_4", "S_5")
        assert forward_sweep_optimum(net) == (1 << net.n) - 1

    def test_hd_needs_m(self, capsys):
        code, payload = run_json(capsys, "gadget", "hd")
        assert code == 2

    def test_direct(self, capsys):
        code, payload = run_json(capsys, "gadget", "direct", "--outcome", "101")
        assert code == 0
        net = net_from_json(payload)
        assert forward_sweep_optimum(net) == 0b101

    def test_direct_rejects_junk(self, capsys):
        code, payload = run_json(capsys, "gadget", "direct", "--outcome", "abc")
        assert code == 2

    def test_m_imm_from_file(self, capsys, qbf_path):
        code, payload = run_json(capsys, "gadget", "m-imm", "--qbf", qbf_path)
        assert code == 0
        profile = profile_from_json(payload)
        assert profile.m == 3

    def test_generated_net_flows_into_queries(self, capsys, tmp_path):
        path = tmp_path / "one.cnf"
        path.write_text("p cnf 1 1\n1 0\n")
        code, payload = run_json(capsys, "gadget", "formula-net", "--cnf", str(path))
        assert code == 0
        saved = tmp_path / "fnet.json"
        saved.write_text(json.dumps(payload))
        built = formula_net(CnfFormula(num_vars=1, clauses=((1,),)))
        beta = format(built.beta_bar(), f"0{built.net.n}b")
        code, payload = run_json(
            capsys, "dominates", str(saved), beta, "0" * built.net.n
        )
        assert (code, payload["answer"]) == (0, True)


class TestOracleCommands:
    def test_graph_json(self, capsys, dinner_path):
        code, payload = run_json(capsys, "oracle", "graph", dinner_path)
        assert code == 0
        assert payload == {
            "arcs": {
                "00": [],
                "01": ["00"],
                "10": ["00", "11"],
                "11": ["01"],
            }
        }

    def test_graph_dot(self, capsys, dinner_path):
        code, out = run(capsys, "oracle", "graph", dinner_path, "--dot")
        assert code == 0
        assert out.startswith("digraph preference {")
        assert '"01" -> "00";' in out

    def test_graph_bound_is_exit_3(self, capsys, dinner_path):
        code, payload = run_json(
            capsys, "oracle", "graph", dinner_path, "--oracle-bound", "1"
        )
        assert code == 3

    def test_closure(self, capsys, dinner_path):
        code, payload = run_json(capsys, "oracle", "closure", dinner_path)
        assert code == 0
        assert payload == {
            "reach": {
                "00": [],
                "01": ["00"],
                "10": ["00", "01", "11"],
                "11": ["00", "01"],
            }
        }

    def test_check(self, capsys, dinner_path):
        code, payload = run_json(capsys, "oracle", "check", dinner_path)
        assert code == 0
        assert payload == {"answer": True, "pairs": 12}

    def test_verify_default_nowin(self, capsys):
        code, payload = run_json(
            capsys, "oracle", "verify", "--lemma", "theorem_nowin"
        )
        assert code == 0
        assert payload == {"answer": True, "checked": 4, "detail": "pass"}

    def test_verify_lemma7_needs_profile(self, capsys):
        code, payload = run_json(capsys, "oracle", "verify", "--lemma", "lemma7")
        assert code == 2

    def test_verify_lemma7(self, capsys, profile_path):
        code, payload = run_json(
            capsys, "oracle", "verify", "--lemma", "lemma7",
            "--profile", profile_path,
        )
        assert code == 0
        assert payload["answer"] is True
        assert payload["checked"] == 4

    def test_verify_formula_tag(self, capsys, cnf_path):
        code, payload = run_json(
            capsys, "oracle", "verify", "--lemma", "corollary1", "--cnf", cnf_path
        )
        assert code == 0
        assert payload == {"answer": True, "checked": 1, "detail": "pass"}

    def test_verify_unknown_tag(self, capsys):
        code, payload = run_json(capsys, "oracle", "verify", "--lemma", "lemma99")
        assert code == 2
        assert "lemma99" in payload["error"]

    def test_verify_missing_cnf(self, capsys):
        code, payload = run_json(capsys, "oracle", "verify", "--lemma", "lemma1")
        assert code == 2


def test_module_entry_point(dinner_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cpnets", "optimum", dinner_path],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"answer": "00"}

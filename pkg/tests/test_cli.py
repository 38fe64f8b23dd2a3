import json
import os

import pytest

from finitetopo import Poset, Relation
from finitetopo import fixtures as fx
from finitetopo.cli import main
from finitetopo.formats import relation_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


class TestVerify:
    def test_certified_relation(self, capsys):
        code, doc = run_json(capsys, "verify", "thm-a", "certified-relation")
        assert code == 0
        assert doc["status"] == "Certified"
        assert {c["label"] for c in doc["certificates"]} == {"collapse-to-source", "collapse-to-target"}

    def test_refutation_fixture(self, capsys):
        code, doc = run_json(capsys, "verify", "thm-a", "thm-a-refutation")
        assert code == 1
        assert doc["status"] == "Refuted"

    def test_monotone_map_both_statements(self, capsys):
        code, doc = run_json(capsys, "verify", "prop-2.5", "monotone-map-fence")
        assert code == 0
        code, doc = run_json(capsys, "verify", "prop-2.4", "monotone-map-fence")
        assert code == 1

    def test_homology_version_with_degree(self, capsys):
        code, doc = run_json(capsys, "verify", "prop-homology", "homology-relation", "--degree", "1")
        assert code == 0
        assert doc["detail"]["homology_version"]["through_degree"] == 1

    def test_nerve_variants(self, capsys):
        for theorem, fixture in [
            ("nerve-good", "star-cover-six-cycle"),
            ("nerve-x0", "x-zero-star-cover"),
            ("nerve-quasigood", "two-arc-cover-six-cycle"),
        ]:
            code, doc = run_json(capsys, "verify", theorem, fixture)
            assert code == 0, (theorem, doc["status"])

    def test_completion_corollary(self, capsys):
        code, doc = run_json(capsys, "verify", "cor-completion", "example-3-12")
        assert code == 0
        assert doc["detail"]["completion_corollary"]["completion_f_vector"] == [2, 2]

    def test_dictionary(self, capsys):
        code, doc = run_json(capsys, "verify", "dictionary", "torus")
        assert code == 0

    def test_unknown_fixture_is_input_error(self, capsys):
        code = main(["verify", "thm-a", "no-such-thing"])
        assert code == 3

    def test_unknown_exit_code_on_budget_exhaustion(self, capsys, tmp_path):
        disc = fx.REGISTRY["collapsible-noncontractible"].build()
        r = Relation.of(disc, Poset(["w"]), [(x, "w") for x in disc.elements])
        path = tmp_path / "rel.json"
        path.write_text(json.dumps(relation_to_json(r)))
        code, doc = run_json(capsys, "verify", "thm-a", str(path), "--budget", "1")
        assert code == 2
        assert doc["status"] == "Unknown"

    def test_input_hash_is_recorded(self, capsys, tmp_path):
        code, doc = run_json(capsys, "verify", "thm-a", "certified-relation")
        assert set(doc["inputs"]) == {"input"}
        assert len(doc["inputs"]["input"]) == 64


class TestBatch:
    def test_batch_over_emitted_fixtures(self, capsys, tmp_path):
        emit_dir = str(tmp_path / "fx")
        assert main(["fixtures", "emit", "--dir", emit_dir, "--out", os.devnull]) == 0
        code, doc = run_json(capsys, "verify", "--batch", emit_dir)
        assert code == 0
        counts = doc["detail"]["counts"]
        assert counts["errors"] == 0
        assert counts["mismatched"] == 0
        entries = {e["name"]: e for e in doc["detail"]["fixtures"]}
        assert entries["thm-a-refutation"]["status"] == "Refuted"
        assert entries["thm-a-refutation"]["match"] is True

    def test_batch_on_empty_dir_is_input_error(self, capsys, tmp_path):
        code = main(["verify", "--batch", str(tmp_path)])
        assert code == 3


class TestHomologyCommand:
    def test_fixture_by_name(self, capsys):
        code, doc = run_json(capsys, "homology", "projective-plane")
        assert code == 0
        entry = doc["homology"][0]
        assert entry["describe"] == "H0=Z H1=Z/2 H2=0"
        assert doc["detail"]["euler_characteristic"] == 1

    def test_reduced_flag(self, capsys):
        code, doc = run_json(capsys, "homology", "point", "--reduced")
        assert code == 0
        assert doc["homology"][0]["betti"] == [0]

    def test_text_format(self, capsys):
        code, out = run(capsys, "homology", "six-cycle", "--format", "text")
        assert code == 0
        assert "H0=Z H1=Z" in out

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("a < b\n")
        code, doc = run_json(capsys, "homology", str(path))
        assert code == 0
        assert doc["homology"][0]["betti"] == [1, 0]


class TestReductionCommands:
    def test_reduce_reports_points_and_core(self, capsys):
        code, doc = run_json(capsys, "reduce", "collapsible-noncontractible")
        assert code == 0  # collapsible, so the oracle certifies
        assert doc["detail"]["core_size"] == 22
        assert doc["detail"]["oracle"]["status"] == "trivial"

    def test_reduce_refutes_circle(self, capsys):
        code, doc = run_json(capsys, "reduce", "six-cycle")
        assert code == 1
        assert doc["detail"]["oracle"]["reason"] == "homology"

    def test_core_of_core_fixture_is_identity(self, capsys):
        code, doc = run_json(capsys, "core", "six-cycle")
        assert code == 0
        assert len(doc["detail"]["core"]["elements"]) == 6
        assert doc["detail"]["removed"] == 0

    def test_collapse_with_target(self, capsys, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("a < b < c\n")
        code, doc = run_json(capsys, "collapse", str(path), "--target", "a")
        assert code == 0

    def test_dot_format(self, capsys):
        code, out = run(capsys, "core", "six-cycle", "--format", "dot")
        assert code == 0
        assert out.startswith("digraph")


class TestCylinderCommand:
    def test_build_attaches_retraction_for_map(self, capsys):
        code, doc = run_json(capsys, "cylinder", "build", "monotone-map-fence")
        assert code == 0
        assert doc["detail"]["source_part"] == ["X:a", "X:b", "X:c"]
        assert {c["label"] for c in doc["certificates"]} == {"beat-retraction"}

    def test_check_sides(self, capsys):
        code, doc = run_json(capsys, "cylinder", "check-x", "certified-relation")
        assert code == 0
        code, doc = run_json(capsys, "cylinder", "check-y", "certified-relation")
        assert code == 0

    def test_verify_a(self, capsys):
        code, doc = run_json(capsys, "cylinder", "verify-a", "thm-a-refutation")
        assert code == 1

    def test_verify_homology(self, capsys):
        code, doc = run_json(
            capsys, "cylinder", "verify-homology", "homology-relation", "--degree", "1"
        )
        assert code == 0


class TestNerveAndCompletion:
    def test_nerve_reports_classification(self, capsys):
        code, doc = run_json(capsys, "nerve", "star-cover-six-cycle")
        assert code == 0
        assert doc["detail"]["classification"]["status"] == "good"

    def test_completion_f_vector(self, capsys):
        code, doc = run_json(capsys, "completion", "example-3-12")
        assert code == 0
        assert doc["detail"]["f_vector"] == [2, 2]


class TestMapperCommand:
    def test_fixture_by_name(self, capsys):
        code, doc = run_json(
            capsys,
            "mapper",
            "circle-60",
            "--filter", "x",
            "--intervals", "4",
            "--overlap", "0.3",
            "--epsilon", "0.15",
        )
        assert code == 0
        assert doc["detail"]["mapper"]["completion_f_vector"] == [6, 6]

    def test_csv_file_input(self, capsys, tmp_path):
        fx.write_fixture(fx.get_fixture("circle-60"), str(tmp_path))
        code, doc = run_json(
            capsys,
            "mapper",
            str(tmp_path / "circle-60.csv"),
            "--filter", "x",
            "--intervals", "4",
            "--overlap", "0.3",
            "--epsilon", "0.15",
        )
        assert code == 0

    def test_epsilon_is_required(self, capsys):
        with pytest.raises(SystemExit):
            main(["mapper", "circle-60", "--filter", "x"])


class TestFixturesCommand:
    def test_list_names_everything(self, capsys):
        code, doc = run_json(capsys, "fixtures", "list")
        assert code == 0
        names = [f["name"] for f in doc["detail"]["fixtures"]]
        assert "six-cycle" in names and "torus" in names
        assert len(names) == len(fx.REGISTRY)

    def test_generate_requires_seed(self, capsys, tmp_path):
        code = main(["fixtures", "generate", "--recipe", "poset", "--dir", str(tmp_path)])
        assert code == 3

    def test_generate_is_deterministic(self, capsys, tmp_path):
        d1, d2 = str(tmp_path / "a"), str(tmp_path / "b")
        for d in (d1, d2):
            code = main(
                ["fixtures", "generate", "--recipe", "relation", "--count", "2",
                 "--seed", "5", "--dir", d, "--out", os.devnull]
            )
            assert code == 0
        for name in os.listdir(d1):
            assert (
                open(os.path.join(d1, name)).read() == open(os.path.join(d2, name)).read()
            )


class TestOutputPlumbing:
    def test_out_flag_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code = main(["homology", "point", "--out", str(target)])
        assert code == 0
        doc = json.loads(target.read_text())
        assert doc["status"] == "Certified"

    def test_format_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("FINITETOPO_FORMAT", "text")
        code, out = run(capsys, "homology", "point")
        assert code == 0
        assert out.startswith("command: homology")

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FINITETOPO_FORMAT", "text")
        code, doc = run_json(capsys, "homology", "point", "--format", "json")
        assert code == 0

    def test_dot_unsupported_action_errors(self, capsys):
        code = main(["verify", "thm-a", "certified-relation", "--format", "dot"])
        assert code == 3

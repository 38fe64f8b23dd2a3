import json

import pytest

from finitetopo import (
    InputError,
    ReductionCertificate,
    ReductionStep,
    RunReport,
    SimplicialComplex,
    core,
    is_collapsible,
)
from finitetopo import fixtures as fx
from finitetopo.formats import (
    certificate_from_json,
    certificate_to_json,
    complex_cover_from_json,
    complex_cover_to_json,
    complex_from_json,
    complex_to_json,
    complex_to_text,
    cw_from_json,
    cw_to_json,
    dot_complex,
    dot_poset,
    parse_complex_text,
    parse_poset_text,
    poset_cover_from_json,
    poset_cover_to_json,
    poset_from_json,
    poset_to_json,
    poset_to_text,
    read_complex,
    read_poset,
    relation_from_json,
    relation_to_json,
)
from finitetopo.report import EXIT_CODES, content_hash, hash_json
from tests.test_poset import diamond


class TestPosetText:
    def test_parse_chains_and_isolated(self):
        p = parse_poset_text("a < b < c\nd\n# comment\n")
        assert p.le("a", "c")
        assert "d" in p
        assert len(p) == 4

    def test_round_trip(self):
        p = diamond()
        assert parse_poset_text(poset_to_text(p)) == p

    def test_bad_line_reports_location(self):
        with pytest.raises(InputError, match="input.txt:2"):
            parse_poset_text("a < b\n< c\n", where="input.txt")


class TestComplexText:
    def test_parse_facets(self):
        k = parse_complex_text("a b c\nc d\n")
        assert ("a", "b", "c") in k.facets

    def test_round_trip(self):
        k = SimplicialComplex([("a", "b"), ("b", "c")])
        assert parse_complex_text(complex_to_text(k)) == k


class TestJsonRoundTrips:
    def test_poset(self):
        p = diamond()
        assert poset_from_json(poset_to_json(p)) == p

    def test_poset_rejects_junk(self):
        with pytest.raises(InputError, match="elements"):
            poset_from_json({"nope": 1})

    def test_complex(self):
        k = fx.REGISTRY["torus"].build()
        assert complex_from_json(complex_to_json(k)) == k

    def test_relation(self):
        r = fx._certified_relation()
        back = relation_from_json(relation_to_json(r))
        assert back.source == r.source
        assert back.target == r.target
        assert back.pairs == r.pairs

    def test_poset_cover(self):
        cov = fx.star_cover_six_cycle()
        back = poset_cover_from_json(poset_cover_to_json(cov))
        assert back.base == cov.base
        assert {k: set(back.part(k)) for k in back.part_names} == {
            k: set(cov.part(k)) for k in cov.part_names
        }

    def test_complex_cover(self):
        cov = fx.example_3_12_cover()
        back = complex_cover_from_json(complex_cover_to_json(cov))
        assert back.base == cov.base
        assert set(back.part_names) == set(cov.part_names)

    def test_cw(self):
        from finitetopo import complex_as_cw

        cw = complex_as_cw(SimplicialComplex([("a", "b", "c")]))
        back = cw_from_json(cw_to_json(cw))
        assert back == cw

    def test_certificate_with_nested_evidence(self):
        p = fx.REGISTRY["collapsible-noncontractible"].build()
        v = is_collapsible(p)
        data = certificate_to_json(v.certificate)
        back = certificate_from_json(json.loads(json.dumps(data)))
        assert back == v.certificate

    def test_certificate_rejects_malformed_step(self):
        with pytest.raises(InputError):
            certificate_from_json({"steps": [{"kind": "up-beat"}]})


class TestFileReaders:
    def test_read_poset_json_and_text(self, tmp_path):
        p = diamond()
        jpath = tmp_path / "p.json"
        jpath.write_text(json.dumps(poset_to_json(p)))
        assert read_poset(str(jpath)) == p
        tpath = tmp_path / "p.txt"
        tpath.write_text(poset_to_text(p))
        assert read_poset(str(tpath)) == p

    def test_read_complex(self, tmp_path):
        k = SimplicialComplex([("a", "b")])
        path = tmp_path / "k.json"
        path.write_text(json.dumps(complex_to_json(k)))
        assert read_complex(str(path)) == k

    def test_missing_file_becomes_input_error(self):
        with pytest.raises(InputError, match="cannot read"):
            read_poset("/nonexistent/nope.json")


class TestDotOutput:
    def test_poset_dot_lists_covers(self):
        out = dot_poset(diamond())
        assert out.startswith("digraph")
        assert '"a" -> "b"' in out

    def test_complex_dot_mentions_facets(self):
        out = dot_complex(SimplicialComplex([("a", "b")]))
        assert "a" in out and "b" in out


class TestFixturePayloads:
    def test_every_registry_entry_emits_and_rebuilds(self, tmp_path):
        from finitetopo.cli import object_from_fixture

        for f in fx.all_fixtures():
            if f.kind == "point-cloud":
                continue  # clouds ship as CSV, checked in the mapper tests
            payload = fx.fixture_payload(f)
            assert payload["name"] == f.name
            obj = object_from_fixture(f.kind, payload["data"], f.name)
            assert obj is not None

    def test_write_fixture_creates_versioned_files(self, tmp_path):
        f = fx.get_fixture("six-cycle")
        path = fx.write_fixture(f, str(tmp_path))
        data = json.loads((tmp_path / "six-cycle.json").read_text())
        assert data["kind"] == "poset"
        assert data["theorem"] == "dictionary"

    def test_unknown_fixture_lists_known_names(self):
        with pytest.raises(InputError, match="six-cycle"):
            fx.get_fixture("nope")


class TestRunReport:
    def test_exit_codes_table(self):
        assert EXIT_CODES == {"Certified": 0, "Refuted": 1, "Unknown": 2, "Error": 3}

    def test_status_validation(self):
        rep = RunReport("demo")
        with pytest.raises(ValueError):
            rep.set_status("Sideways")

    def test_certified_requires_replayable_targets(self):
        p = diamond()
        q, cert = core(p)
        rep = RunReport("demo")
        rep.set_status("Certified")
        rep.add_certificate("core", cert, p)
        rep.finalize()
        assert rep.status == "Certified"
        assert rep.exit_code == 0

    def test_certificate_without_target_downgrades(self):
        p = diamond()
        _, cert = core(p)
        rep = RunReport("demo")
        rep.set_status("Certified")
        rep.add_certificate("core", cert)  # steps but nothing to replay on
        rep.finalize()
        assert rep.status == "Error"
        assert rep.exit_code == 3

    def test_tampered_certificate_downgrades(self):
        p = diamond()
        _, cert = core(p)
        bad = ReductionCertificate(
            (ReductionStep("up-beat", (cert.steps[0].removed[0],), witness=cert.steps[0].removed[0]),)
        )
        rep = RunReport("demo")
        rep.set_status("Certified")
        rep.add_certificate("core", bad, p)
        rep.finalize()
        assert rep.status == "Error"

    def test_json_shape_and_input_hashes(self, tmp_path):
        path = tmp_path / "in.txt"
        path.write_text("a < b\n")
        rep = RunReport("demo")
        rep.add_input("file", path=str(path))
        rep.add_input("payload", payload={"k": 1})
        rep.set_status("Unknown")
        rep.finalize()
        d = rep.to_json_dict()
        assert d["command"] == "demo"
        assert d["status"] == "Unknown"
        assert set(d["inputs"]) == {"file", "payload"}
        assert all(len(h) == 64 for h in d["inputs"].values())
        assert "elapsed_seconds" in d["timing"]

    def test_hashes_are_stable(self):
        assert content_hash(b"abc") == content_hash(b"abc")
        assert hash_json({"a": 1, "b": 2}) == hash_json({"b": 2, "a": 1})

"""CLI surface: subcommands, exit codes, deterministic output."""

import io
import json

import pytest

from treealg.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestBasics:
    def test_parse(self):
        code, out, _ = invoke("parse", "<<a*c>*b>")
        assert code == 0 and out == "<<a*c>*b>\n"

    def test_parse_json(self):
        code, out, _ = invoke("parse", "<<a*c>*b>", "--json")
        assert code == 0
        assert json.loads(out) == {
            "tree": "<<a*c>*b>",
            "leaves": 3,
            "skeleton": "<<*>*>",
            "foliage": "acb",
        }

    def test_skeleton(self):
        code, out, _ = invoke("skeleton", "<<a*c>*b>")
        assert code == 0 and out == "<<*>*>\n"

    def test_foliage(self):
        code, out, _ = invoke("foliage", "<a*<c*b>>")
        assert code == 0 and out == "acb\n"

    def test_rebuild(self):
        code, out, _ = invoke("rebuild", "--foliage", "acb", "--skeleton", "<<*>*>")
        assert code == 0 and out == "<<a*c>*b>\n"

    def test_rebuild_single_leaf(self):
        code, out, _ = invoke("rebuild", "--foliage", "a", "--skeleton", "")
        assert code == 0 and out == "a\n"

    def test_graft(self):
        code, out, _ = invoke("graft", "a-><b*c>", "<a*b>")
        assert code == 0 and out == "<<b*c>*b>\n"

    def test_substitute(self):
        code, out, _ = invoke("substitute", "a=>bc", "aba")
        assert code == 0 and out == "bcbbc\n"

    def test_project_sigma(self):
        code, out, _ = invoke("project", "--sigma", "<<a*c>*b>")
        assert code == 0 and out == "<<*>*>\n"

    def test_project_phi(self):
        code, out, _ = invoke("project", "--phi", "<<a*c>*b>")
        assert code == 0 and out == "acb\n"

    def test_unicode_rendering(self):
        code, out, _ = invoke("skeleton", "<<a*c>*b>", "--unicode")
        assert code == 0 and out == "◂◂•▸•▸\n"

    def test_enumerate(self):
        code, out, _ = invoke("enumerate", "--bound", "2")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 12 and lines[0] == "a"

    def test_enumerate_json(self):
        code, out, _ = invoke("enumerate", "--bound", "1", "--json")
        assert code == 0
        assert json.loads(out) == {"count": 3, "trees": ["a", "b", "c"]}

    def test_custom_alphabet(self):
        code, out, _ = invoke("enumerate", "--bound", "1", "--alphabet", "pq")
        assert code == 0 and out == "p\nq\n"


class TestErrorsAndExitCodes:
    def test_domain_error_is_exit_one(self):
        code, out, err = invoke("parse", "<a*b")
        assert code == 1 and out == ""
        assert "MalformedTree" in err

    def test_domain_error_json_payload(self):
        code, out, _ = invoke("rebuild", "--foliage", "ab", "--skeleton", "", "--json")
        assert code == 1
        payload = json.loads(out)
        assert payload["error"] == "LengthMismatch"
        assert payload["witness"] == {"foliage": "ab", "skeleton": ""}

    def test_usage_error_is_exit_two(self):
        code, _, _ = invoke("no-such-command")
        assert code == 2

    def test_missing_argument_is_exit_two(self):
        code, _, _ = invoke("rebuild", "--foliage", "abc")
        assert code == 2

    def test_bad_alphabet_is_exit_two(self):
        code, _, err = invoke("enumerate", "--bound", "1", "--alphabet", "aa")
        assert code == 2 and "usage error" in err

    def test_small_alphabet_rejected_for_synthesis_commands(self):
        code, _, err = invoke("check-cp", "--function", "identity", "--alphabet", "ab")
        assert code == 2 and "at least three letters" in err

    def test_bad_grafting_literal(self):
        code, _, err = invoke("graft", "ab>tree", "a")
        assert code == 2 and "usage error" in err

    def test_universe_cap(self):
        code, _, err = invoke("enumerate", "--bound", "3", "--cap", "10")
        assert code == 1 and "UniverseTooLarge" in err


class TestClosure:
    FIXTURE = (
        '{"universe_size":12,"classes":[["a","b"],["c"],'
        '["<a*a>","<a*b>","<b*a>","<b*b>"],["<a*c>","<b*c>"],'
        '["<c*a>","<c*b>"],["<c*c>"]]}'
    )

    def test_fixture_bytes(self, tmp_path):
        pairs = tmp_path / "pairs.txt"
        pairs.write_text("a b\n")
        code, out, _ = invoke("closure", "--pairs", str(pairs), "--bound", "2")
        assert code == 0 and out == self.FIXTURE + "\n"

    def test_deterministic(self, tmp_path):
        pairs = tmp_path / "pairs.txt"
        pairs.write_text("a b\nc <a*a>\n")
        first = invoke("closure", "--pairs", str(pairs), "--bound", "3")
        second = invoke("closure", "--pairs", str(pairs), "--bound", "3")
        assert first == second and first[0] == 0

    def test_pair_out_of_universe(self, tmp_path):
        pairs = tmp_path / "pairs.txt"
        pairs.write_text("<<a*b>*<a*b>> a\n")
        code, _, err = invoke("closure", "--pairs", str(pairs), "--bound", "2")
        assert code == 1 and "PairOutOfUniverse" in err

    def test_bad_pair_line(self, tmp_path):
        pairs = tmp_path / "pairs.txt"
        pairs.write_text("a b c\n")
        code, _, err = invoke("closure", "--pairs", str(pairs), "--bound", "2")
        assert code == 1 and "MalformedTable" in err


class TestSynthesisCommands:
    def test_synthesize(self, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("a <a*c>\nb <b*c>\nc <c*c>\n")
        code, out, _ = invoke("synthesize", "--table", str(table))
        assert code == 0 and out == "<x*c>\n"

    def test_synthesize_bad_table(self, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("a b\nb a\nc c\n")
        code, out, err = invoke("synthesize", "--table", str(table), "--json")
        assert code == 1
        payload = json.loads(out)
        assert payload["error"] == "HypothesesViolated"
        assert payload["witness"]["pair"] == ["a", "c"]

    def test_word_synthesize(self, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("a ac\nb bc\nc cc\n")
        code, out, _ = invoke("word-synthesize", "--table", str(table))
        assert code == 0 and out == "xc\n"

    def test_word_synthesize_negative(self, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("a ab\nb ba\nc ca\n")
        code, out, _ = invoke("word-synthesize", "--table", str(table), "--json")
        assert code == 1
        payload = json.loads(out)
        assert payload["witness"]["pair"] == ["a", "c"]
        assert payload["witness"]["position"] == 1


class TestCpCommands:
    def test_check_cp_mirror_fails_with_witness(self):
        code, out, _ = invoke("check-cp", "--function", "mirror", "--bound", "4")
        assert code == 3
        report = json.loads(out)
        assert report["verdict"] == "not-cp"
        assert report["witness"] is not None
        failed = [t["name"] for t in report["tests"] if not t["passed"]]
        assert "idempotent-grafting" in failed

    def test_check_cp_identity_passes(self):
        code, out, _ = invoke("check-cp", "--function", "identity", "--bound", "3")
        assert code == 0
        assert json.loads(out)["verdict"] == "evidence-of-cp"

    def test_check_cp_deterministic(self):
        first = invoke("check-cp", "--function", "poly:<x*c>", "--bound", "3")
        second = invoke("check-cp", "--function", "poly:<x*c>", "--bound", "3")
        assert first == second

    def test_to_poly_identity(self):
        code, out, _ = invoke("to-poly", "--function", "identity", "--verify-bound", "4")
        assert code == 0 and out == "x\n"

    def test_to_poly_mirror_not_cp(self):
        code, out, err = invoke("to-poly", "--function", "mirror", "--verify-bound", "4")
        assert code == 3 and "NotCP" in err

    def test_to_poly_mirror_json_witness(self):
        code, out, _ = invoke(
            "to-poly", "--function", "mirror", "--verify-bound", "4", "--json"
        )
        assert code == 3
        payload = json.loads(out)
        assert payload["error"] == "NotCP"
        assert payload["stage"] == "verification"
        assert len(payload["witness"]) == 2

    def test_const_function(self):
        code, out, _ = invoke("to-poly", "--function", "const:<a*b>", "--verify-bound", "3")
        assert code == 0 and out == "<a*b>\n"

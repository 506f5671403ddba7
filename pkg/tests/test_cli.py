"""Command-line interface: exit codes, stdout/stderr discipline, formats."""

import json
import subprocess
import sys

import pytest

import scholarlens as sl
from scholarlens.cli import main

from .conftest import REPO


@pytest.fixture(autouse=True)
def in_repo(monkeypatch):
    monkeypatch.chdir(REPO)  # picks up service.conf exactly like a user checkout


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- search


def test_search_json_to_stdout(capsys):
    code, out, err = run(capsys, "search", "big data")
    assert code == 0
    payload = json.loads(out)
    assert payload["query"] == "big data"
    assert payload["count"] >= 5
    assert "error" not in err.lower()


def test_search_stdout_is_pure_payload(capsys):
    code, out, _ = run(capsys, "-v", "search", "big data")
    assert code == 0
    json.loads(out)  # nothing but the document, even with debug logging on


def test_search_table_format(capsys):
    code, out, _ = run(capsys, "search", "Reverse Engineering", "--format", "table")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "Title | Abstract"
    assert lines[1].startswith("Research on Reverse Engineering Technology")


def test_search_xml_format(capsys):
    code, out, _ = run(capsys, "search", "big data", "--format", "xml")
    assert code == 0
    sl.parse_xml(out.encode())


def test_search_zero_results_is_success(capsys):
    code, out, _ = run(capsys, "search", "antarctic botany")
    assert code == 0
    assert json.loads(out)["count"] == 0


def test_blank_query_is_usage_error(capsys):
    code, out, err = run(capsys, "search", "   ")
    assert code == 2
    assert out == ""
    assert "blank" in err


def test_unknown_source_is_runtime_error(capsys):
    code, out, err = run(capsys, "search", "x", "--sources", "nope")
    assert code == 1
    assert out == ""
    assert "nope" in err


def test_search_respects_flags(capsys):
    code, out, _ = run(
        capsys, "search", "Networking", "--depth", "2", "--gamma", "0.25", "--limit", "2"
    )
    payload = json.loads(out)
    assert payload["depth"] == 2
    assert payload["gamma"] == 0.25
    assert len(payload["expanded_terms"]) == 25
    assert payload["count"] <= 2


# -------------------------------------------------------------- ontology


def test_ontology_tree_prints_indented(capsys):
    code, out, _ = run(capsys, "ontology", "tree")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "Computer Science"
    assert "  Database" in lines
    assert "    Data Mining" in lines


def test_ontology_tree_from_root(capsys):
    code, out, _ = run(capsys, "ontology", "tree", "--root", "database")
    assert code == 0
    assert out.startswith("Database\n")
    assert "Networking" not in out


def test_ontology_tree_unknown_root(capsys):
    code, out, err = run(capsys, "ontology", "tree", "--root", "astrology")
    assert code == 1
    assert out == ""
    assert "astrology" in err


def test_ontology_expand_lists_weighted_terms(capsys):
    code, out, _ = run(capsys, "ontology", "expand", "networking", "--depth", "1")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "networking 1.0"
    assert len(lines) == 8
    assert all(line.rsplit(" ", 1)[1] == "0.5" for line in lines[1:])


def test_ontology_expand_depth_two(capsys):
    code, out, _ = run(capsys, "ontology", "expand", "networking", "--depth", "2")
    assert len(out.strip().split("\n")) == 25


# -------------------------------------------------------------- fixtures


def test_fixtures_validate_passes_on_shipped_corpus(capsys):
    code, out, err = run(capsys, "fixtures", "validate")
    assert code == 0
    assert out == "validated 17 fixture pages\n"
    assert err == ""


def test_fixtures_validate_reports_mismatch(capsys, tmp_path):
    manifest = {
        "entries": [
            {
                "file": "fixtures/pages/ieee_reverse_engineering.html",
                "source": "ieee_xplore",
                "records": 4,
            }
        ]
    }
    bad = tmp_path / "manifest.json"
    bad.write_text(json.dumps(manifest))
    code, out, err = run(capsys, "fixtures", "validate", "--manifest", str(bad))
    assert code == 1
    assert "FAIL" in err
    assert "manifest says 4" in err


def test_fixtures_validate_missing_manifest(capsys, tmp_path):
    code, _, err = run(capsys, "fixtures", "validate", "--manifest", str(tmp_path / "no.json"))
    assert code == 1
    assert "cannot read manifest" in err


# ----------------------------------------------------------------- usage


def test_no_command_prints_help_and_exits_2(capsys):
    code, out, err = run(capsys)
    assert code == 2
    assert out == ""
    assert "usage:" in err


def test_unknown_flag_exits_2(capsys):
    code, _, _ = run(capsys, "search", "x", "--frobnicate")
    assert code == 2


def test_bad_config_path_is_runtime_error(capsys):
    code, _, err = run(capsys, "--config", "/no/such/file.conf", "search", "x")
    assert code == 1
    assert "error" in err


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "scholarlens", "ontology", "expand", "big data"],
        capture_output=True,
        text=True,
        cwd=REPO,
    )
    assert result.returncode == 0
    assert result.stdout.splitlines()[0] == "big data 1.0"

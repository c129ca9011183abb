"""Command line behaviour: transcripts, exit codes, JSON mode."""

import json
import subprocess
import sys
from importlib import resources

import pytest

from sosforge import parse_label, parse_spec, parse_term
from sosforge.cli import main
from sosforge.terms import render_term


def corpus_path(name: str) -> str:
    return str(resources.files("sosforge") / "corpus" / f"{name}.sos")


PAR = corpus_path("bccsp_par")
LINDA = corpus_path("linda")
REC = corpus_path("recursion")
G = corpus_path("g")
FULL = corpus_path("full")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- transcripts -----------------------------------------------------------------


def test_simulate_transcript(capsys):
    code, out, _ = run(capsys, "simulate", PAR, "| . 0 || a . 0")
    assert code == 0
    assert out == "Possible steps:\n < a # | . 0 || 0 >\n"


def test_simulate_three_steps(capsys):
    code, out, _ = run(capsys, "simulate", PAR, "| . 0 + b . 0 || c . 0 + | . 0")
    assert code == 0
    assert out == (
        "Possible steps:\n"
        " < b # 0 || c . 0 + | . 0 >\n"
        " < c # | . 0 + b . 0 || 0 >\n"
        " < | # 0 >\n"
    )


def test_bisim_true_transcript(capsys):
    code, out, _ = run(capsys, "bisim", PAR, "a . 0 || b . 0", "a . b . 0 + b . a . 0")
    assert code == 0
    assert out == (
        "true\n"
        " < 0 || 0 ; 0 >\n"
        " < 0 || b . 0 ; b . 0 >\n"
        " < a . 0 || 0 ; a . 0 >\n"
        " < a . 0 || b . 0 ; a . b . 0 + b . a . 0 >\n"
    )


def test_bisim_false(capsys):
    code, out, _ = run(capsys, "bisim", PAR, "a . 0", "b . 0")
    assert code == 1
    assert out == "false\n"


def test_eq_transcript(capsys):
    code, out, _ = run(capsys, "eq", REC, "p1", "q1")
    assert code == 0
    assert out == "< true ; < p1 ; q1 > < p1 ; q4 > < p2 ; q2 > < p3 ; q3 > >\n"


def test_eq_false(capsys):
    code, out, _ = run(capsys, "eq", REC, "p1", "q2")
    assert code == 1
    assert out == "< false >\n"


def test_normalize_transcript(capsys):
    code, out, _ = run(capsys, "normalize", LINDA, "ask(u) ; tell(v)")
    assert code == 0
    assert out == "< {d, u},-,{d, u} > . < {d},-,{d, v} > . | . 0\n"


def test_validate_clean(capsys):
    code, out, _ = run(capsys, "validate", FULL)
    assert code == 0
    assert out == "no violations\n"


def test_validate_reports_violations(tmp_path, capsys):
    bad = tmp_path / "bad.sos"
    bad.write_text(
        "spec BAD\nactions a ;\nop f : 2 ;\nvar x x' : Proc ;\n"
        "rule x -(a)-> x' ==> f(x, x) -(a)-> x' ;\n",
        encoding="utf-8",
    )
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1
    assert "rule 1: RepeatedVariable" in out


def test_comm_transcript(capsys):
    code, out, _ = run(capsys, "comm", G)
    assert code == 0
    assert "g is commutative" in out
    assert "k <- l  l <- k" in out


def test_comm_failures_exit_code(capsys):
    code, out, _ = run(capsys, "comm", LINDA)
    assert code == 1
    assert "Could not prove commutativity for: _;_" in out


def test_axioms_text(capsys):
    code, out, _ = run(capsys, "axioms", PAR)
    assert code == 0
    assert out.startswith("axioms for _||_\n")


# -- exit codes for trouble ---------------------------------------------------------


def test_unbound_variable_is_usage_error(capsys):
    code, out, err = run(capsys, "simulate", PAR, "x")
    assert code == 2
    assert out == "" and "error:" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "simulate", "no_such.sos", "0")
    assert code == 2 and "error:" in err


def test_parse_error_in_spec(tmp_path, capsys):
    bad = tmp_path / "syntax.sos"
    bad.write_text("spec X\nactions ;\n", encoding="utf-8")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "error:" in err


def test_state_cap_exit(capsys):
    code, _, err = run(
        capsys, "bisim", PAR, "--state-cap", "2", "a . b . c . 0", "a . b . c . 0"
    )
    assert code == 3 and "error:" in err


def test_budget_exit(capsys):
    code, _, err = run(capsys, "normalize", PAR, "--budget", "1", "a . 0 || b . 0")
    assert code == 3 and "error:" in err


def test_unguarded_definition_exit(tmp_path, capsys):
    bad = tmp_path / "ug.sos"
    bad.write_text("spec U\nactions a ;\ndef p = p + a . 0 ;\n", encoding="utf-8")
    code, _, err = run(capsys, "simulate", str(bad), "p")
    assert code == 3 and "unguarded" in err


def test_state_cap_env(monkeypatch, capsys):
    monkeypatch.setenv("SOSFORGE_STATE_CAP", "2")
    code, _, err = run(capsys, "bisim", PAR, "a . b . c . 0", "a . b . c . 0")
    assert code == 3 and "error:" in err


def test_missing_subcommand_usage(capsys):
    assert main([]) == 2


# -- machine-readable mode -------------------------------------------------------------


def test_simulate_json_roundtrip(capsys):
    spec = parse_spec(open(LINDA, encoding="utf-8").read())
    code, out, _ = run(capsys, "simulate", LINDA, "--json", "ask(u) ; tell(v)")
    assert code == 0
    data = json.loads(out)
    assert isinstance(data, list) and data
    for entry in data:
        parse_label(entry["label"], spec)
        t = parse_term(entry["target"], spec)
        assert render_term(t) == entry["target"]


def test_bisim_json(capsys):
    spec = parse_spec(open(PAR, encoding="utf-8").read())
    code, out, _ = run(
        capsys, "bisim", PAR, "--json", "a . 0 || b . 0", "a . b . 0 + b . a . 0"
    )
    assert code == 0
    data = json.loads(out)
    assert data["bisimilar"] is True
    assert len(data["witness"]) == 4
    for p, q in data["witness"]:
        parse_term(p, spec)
        parse_term(q, spec)


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", FULL, "--json")
    assert code == 0
    assert json.loads(out) == []


def test_comm_json(capsys):
    code, out, _ = run(capsys, "comm", LINDA, "--json")
    assert code == 1
    data = json.loads(out)
    assert data["failed"] == {"_;_": [4, 5, 6]}


def test_normalize_json(capsys):
    code, out, _ = run(capsys, "normalize", PAR, "--json", "a . 0 || b . 0")
    assert code == 0
    assert json.loads(out) == {"term": "a . b . 0 + b . a . 0"}


def test_axioms_json(capsys):
    code, out, _ = run(capsys, "axioms", PAR, "--json")
    assert code == 0
    assert json.loads(out)[0]["op"] == "_||_"


# -- derived spec artifact ---------------------------------------------------------------


def test_emit_formats(tmp_path, capsys):
    target = tmp_path / "derived.sos"
    code, out, _ = run(capsys, "comm", PAR, "--emit-formats", str(target))
    assert code == 0
    text = target.read_text(encoding="utf-8")
    assert "[comm]" in text
    derived = parse_spec(text)
    assert derived.proc_ops["_||_"].comm


# -- installed entry point ----------------------------------------------------------------


def test_console_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "sosforge.cli", "simulate", PAR, "| . 0 || a . 0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "Possible steps:\n < a # | . 0 || 0 >\n"

import io
import json
import subprocess
import sys

import pytest

from fitchmtt import model
from fitchmtt.cli import Config, main
from fitchmtt.properties import corpus_files

MODAL = str(next(p for p in corpus_files("accept") if p.stem == "modal"))


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), stream=buf)
    return code, buf.getvalue()


def write(tmp_path, text, name="f.mtt"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_check_corpus_ok():
    code, out = run("check", MODAL)
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("k :"))
    assert line.endswith("OK")
    assert "@ U 1" in line


def test_check_no_lock(tmp_path):
    code, out = run("check", write(tmp_path, r"def bad : Box Bool -> Bool := \x. open x;"))
    assert code == 1
    assert out.strip().endswith("NO_LOCK")


def test_check_malformed(tmp_path):
    code, out = run("check", write(tmp_path, "def bad := ;"))
    assert code == 2
    assert "PARSE" in out


def test_check_missing_file(tmp_path):
    code, _ = run("check", str(tmp_path / "nope.mtt"))
    assert code == 2


def test_parse_error_outranks_type_error(tmp_path):
    good = write(tmp_path, "def t : Bool := shut true;", "a.mtt")
    bad = write(tmp_path, "def", "b.mtt")
    assert run("check", good, bad)[0] == 2


def test_norm_prints_normal_form(tmp_path):
    p = write(tmp_path, "def a : Box Bool := shut (open (shut true));\ndef t : Bool := true;")
    assert run("norm", p, "a") == (0, "shut true\n")
    assert run("norm", p, "t") == (0, "true\n")


def test_norm_unknown_name(tmp_path):
    p = write(tmp_path, "def t : Bool := true;")
    assert run("norm", p, "nope")[0] == 1


def test_norm_fuel(tmp_path):
    e = "shut true"
    for _ in range(20):
        e = f"shut (open ({e}))"
    p = write(tmp_path, f"def deep : Box Bool := {e};")
    assert run("norm", p, "deep", "--fuel", "10")[0] == 4
    assert run("norm", p, "deep")[0] == 0


def test_model_corpus():
    paths = [str(p) for p in corpus_files("accept")]
    code, out = run("model", *paths)
    assert code == 0
    assert "VIOLATION" not in out


def test_model_strict_flags_fragment():
    paths = [str(p) for p in corpus_files("accept")]
    assert run("model", "--strict", *paths)[0] == 5


def test_laws_ok():
    code, out = run("laws", "--depth", "2", "--trials", "200", "--seed", "42")
    assert code == 0
    names = {l.split()[0] for l in out.splitlines()}
    assert len(names) >= 8
    assert all("instances=0 " not in l for l in out.splitlines())


def test_laws_detect_broken_bar(monkeypatch):
    def constant_bar(gamma, a, t):
        return next(iter(model.dra_type(gamma, a).elements()))

    monkeypatch.setattr(model, "dra_bar", constant_bar)
    assert run("laws", "--depth", "2", "--trials", "50")[0] == 3


def test_json_lines_deterministic():
    a = run("laws", "--depth", "2", "--trials", "30", "--format", "json-lines")[1]
    b = run("laws", "--depth", "2", "--trials", "30", "--format", "json-lines")[1]
    assert a == b
    recs = [json.loads(l) for l in a.splitlines()]
    assert all(set(r) == {"kind", "name", "status", "detail"} for r in recs)


def test_json_lines_check(tmp_path):
    p = write(tmp_path, "def t : Bool := true;")
    code, out = run("check", "--format", "json-lines", p)
    assert code == 0
    assert json.loads(out) == {"kind": "decl", "name": "t", "status": "OK", "detail": "Bool @ U 0"}


def test_figures_written(tmp_path):
    figs = tmp_path / "figs"
    assert run("laws", "--depths", "1", "2", "--trials", "10", "--figures", str(figs))[0] == 0
    assert (figs / "laws.png").stat().st_size > 0
    assert run("model", MODAL, "--figures", str(figs))[0] == 0
    assert (figs / "modal.png").stat().st_size > 0


@pytest.mark.parametrize(
    "kwargs",
    [{"depth": 0}, {"size": 0}, {"fuel": -1}, {"trials": -1}, {"seed": 2**64}, {"format": "xml"}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        Config(**kwargs)


def test_bad_config_exits_2():
    assert run("laws", "--depth", "0")[0] == 2
    assert run("laws", "--depths", "0")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fitchmtt", "check", MODAL], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "boxhat : Box U 0 -> U 0 @ U 1 OK" in proc.stdout

import io
import json
import random
import subprocess
import sys

import pytest

from vmcross.cli import run
from vmcross.gauss import format_gauss, random_gauss_code

FOUR_CROSSING = "{1243; (1,2),(1,3),(2,4),(3,4)}"
TRIVIAL = "O1+U2+U1+O2+"
THREE_CROSSING = "O1+U2+U1+O3-O2+U3-"


def call(*argv):
    buf = io.StringIO()
    code = run(["--json", *argv], out=buf)
    text = buf.getvalue()
    assert text.count("\n") == 1, "exactly one JSON report"
    report = json.loads(text)
    assert report["status"] == {0: "ok", 1: "invalid-input", 2: "internal-error"}[code]
    return code, report


def raw(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


# ---- validate


def test_validate_four_crossing():
    code, rep = call("validate", FOUR_CROSSING)
    assert code == 0
    assert rep["payload"]["classes"] == [[1, 4], [2, 3]]
    assert rep["payload"]["valid"] is True


def test_validate_forbidden_triple():
    code, rep = call("validate", "{123; (1,2)}")
    assert code == 1
    assert rep["payload"]["offending_triples"] == [[1, 2, 3]]
    assert "{1,2,3}" in rep["diagnostics"][0]


def test_validate_classical_two():
    code, rep = call("validate", "{12; }")
    assert code == 0
    assert rep["payload"]["classification"] == "classical 2-crossing"


def test_validate_triple_and_distance():
    _, rep = call("validate", "{123; (1,3),(2,3)}")
    assert rep["payload"]["classification"] == "Type II"
    assert rep["payload"]["almost_virtual"] is True
    assert rep["payload"]["distance"] == 1


@pytest.mark.parametrize("text", ["{1243 (1,2)}", "garbage", "{1; }"])
def test_validate_syntax(text):
    code, rep = call("validate", text)
    assert code == 1 and rep["diagnostics"]


# ---- count


def test_count_ten():
    code, rep = call("count", "10")
    assert code == 0
    assert rep["payload"]["vcount"] == "5894550"


def test_count_three():
    _, rep = call("count", "3")
    p = rep["payload"]
    assert (p["bell"], p["fragmented"], p["vcount"]) == ("5", "13", "5")
    assert all(isinstance(v, str) for v in p["fix_by_divisor"].values())


def test_count_two():
    assert call("count", "2")[1]["payload"]["vcount"] == "2"


def test_count_selected_fields():
    _, rep = call("count", "5", "--bell")
    assert set(rep["payload"]) == {"n", "bell"}


def test_count_oracle():
    code, rep = call("count", "5", "--oracle")
    assert code == 0
    assert rep["payload"]["oracle"] and all(rep["payload"]["oracle"].values())


def test_count_oracle_bound():
    code, rep = call("count", "9", "--oracle")
    assert code == 1 and "bound" in rep["diagnostics"][0]
    assert call("count", "30")[0] == 0


@pytest.mark.parametrize("argv", [("count", "1"), ("count", "x"), ("count", "4", "--bound", "0"), ("nope",)])
def test_usage_errors_are_invalid_input(argv):
    assert call(*argv)[0] == 1


# ---- enumerate


@pytest.mark.parametrize("n,entries", [(2, 2), (3, 5), (4, 20)])
def test_enumerate_counts(n, entries):
    code, rep = call("enumerate", str(n))
    assert code == 0
    assert rep["payload"]["count"] == len(rep["payload"]["types"]) == entries


def test_enumerate_three_tags():
    _, rep = call("enumerate", "3")
    assert sorted(t["classification"] for t in rep["payload"]["types"]) == ["Type I", "Type I", "Type II", "Type II", "Type III"]


def test_enumerate_bound():
    assert call("enumerate", "9")[0] == 1


# ---- petal, recover, roundtrip


@pytest.mark.parametrize("code_text,petals", [(TRIVIAL, 7), (THREE_CROSSING, 9), ("", 1)])
def test_petal_counts(code_text, petals):
    code, rep = call("petal", code_text)
    assert code == 0 and rep["payload"]["petals"] == petals


def test_petal_invalid_code():
    code, rep = call("petal", "O1+U1-")
    assert code == 1


def test_petal_writes_files_and_recover(tmp_path):
    js, svg = tmp_path / "d.json", tmp_path / "d.svg"
    assert call("petal", TRIVIAL, "--out", str(js), "--svg", str(svg))[0] == 0
    assert svg.read_text().startswith("<?xml")
    code, rep = call("recover", str(js))
    assert code == 0 and rep["payload"]["gauss"] == TRIVIAL


def test_recover_trivial(tmp_path):
    f = tmp_path / "t.json"
    f.write_text('{"petals": 1, "heights": [1], "classical_pairs": []}')
    code, rep = call("recover", str(f))
    assert code == 0 and rep["payload"]["gauss"] == ""


@pytest.mark.parametrize(
    "content",
    [
        '{"petals": 8, "heights": [1, 2, 3, 4, 5, 6, 7, 8], "classical_pairs": []}',
        '{"petals": 3, "heights": [1, 2, 3], "classical_pairs": [[1, 2], [1, 3], [2, 3]]}',
        "{",
    ],
)
def test_recover_rejects(tmp_path, content):
    f = tmp_path / "bad.json"
    f.write_text(content)
    code, rep = call("recover", str(f))
    assert code == 1 and rep["diagnostics"]


def test_recover_missing_file(tmp_path):
    assert call("recover", str(tmp_path / "nope.json"))[0] == 1


@pytest.mark.parametrize("code_text", [TRIVIAL, THREE_CROSSING, ""])
def test_roundtrip_single(code_text):
    code, rep = call("roundtrip", code_text)
    assert code == 0 and rep["payload"]["match"] is True


def _batch_file(tmp_path, count=200, n=8, seed=7):
    rng = random.Random(seed)
    f = tmp_path / "codes.txt"
    f.write_text("\n".join(format_gauss(random_gauss_code(n, rng)) for _ in range(count)) + "\n")
    return f


def test_roundtrip_batch_200(tmp_path):
    f = _batch_file(tmp_path)
    code, rep = call("roundtrip", "--batch", str(f))
    assert code == 0
    assert rep["payload"]["total"] == rep["payload"]["matched"] == 200
    assert all(r["petals"] == 25 for r in rep["payload"]["results"])


def test_roundtrip_batch_bad_line(tmp_path):
    f = tmp_path / "codes.txt"
    f.write_text(TRIVIAL + "\nO1+O1+\n")
    code, rep = call("roundtrip", "--batch", str(f))
    assert code == 1
    assert rep["payload"]["matched"] == 1 and len(rep["diagnostics"]) == 1


def test_roundtrip_needs_input():
    assert call("roundtrip")[0] == 1


# ---- render


def test_render_crossing_stdout():
    code, text = raw("render", "--crossing", FOUR_CROSSING)
    assert code == 0 and text.startswith("<?xml") and text.count('class="virtual-arc"') == 4


def test_render_gauss_to_file(tmp_path):
    out = tmp_path / "p.svg"
    code, rep = call("render", "--gauss", THREE_CROSSING, "-o", str(out))
    assert code == 0 and rep["payload"]["bytes"] == len(out.read_bytes())


@pytest.mark.parametrize("argv", [(), ("--crossing", "{123; (1,2)}"), ("--gauss", TRIVIAL, "--crossing", FOUR_CROSSING)])
def test_render_errors(argv):
    assert call("render", *argv)[0] == 1


# ---- determinism and the installed entry point


def test_repeated_runs_identical(tmp_path):
    f = _batch_file(tmp_path, count=50)
    for argv in (
        ("count", "12"),
        ("enumerate", "5"),
        ("petal", THREE_CROSSING),
        ("roundtrip", "--batch", str(f)),
        ("render", "--gauss", THREE_CROSSING),
        ("validate", FOUR_CROSSING),
    ):
        assert raw(*argv) == raw(*argv)
        assert raw("--json", *argv) == raw("--json", *argv)


def test_workers_do_not_change_output(tmp_path):
    f = _batch_file(tmp_path, count=100)
    assert raw("--json", "enumerate", "6") == raw("--json", "enumerate", "6", "--workers", "3")
    assert raw("roundtrip", "--batch", str(f)) == raw("roundtrip", "--batch", str(f), "--workers", "4")


def test_module_entry_point_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "vmcross", "--json", "roundtrip", "--batch", "-"],
        input=f"{TRIVIAL}\n{THREE_CROSSING}\n",
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["matched"] == 2


def test_module_exit_code_invalid():
    proc = subprocess.run(
        [sys.executable, "-m", "vmcross", "validate", "{123; (1,2)}"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 1


def test_roundtrip_mismatch_is_internal(monkeypatch):
    from vmcross import cli
    from vmcross.gauss import parse_gauss

    monkeypatch.setattr(cli, "roundtrip", lambda code: (code, parse_gauss("")))
    code, rep = call("roundtrip", TRIVIAL)
    assert code == 2 and "round trip changed" in rep["diagnostics"][0]


def test_oracle_disagreement_is_internal(monkeypatch):
    from vmcross import counting

    monkeypatch.setattr(counting, "vcount", lambda n: 0)
    code, rep = call("count", "4", "--types", "--oracle")
    assert code == 2 and rep["payload"]["oracle"]["vcount"] is False

import csv
import io
import json
import subprocess
import sys

import pytest

from polydiam import cli, hypercube, parse_hrep, read_hrep, write_hrep
from polydiam.report import flatten

FAST = ["--samples", "20000", "--facet-samples", "2000"]

OCTAHEDRON = "8 3\n" + "".join(
    f"{a} {b} {c} 1\n" for a in (1, -1) for b in (1, -1) for c in (1, -1))
SLAB = "3 2\n1 0 1\n-1 0 1\n0 1 1\n"
FLAT = "2 2\n1 0 1\n0 1 1\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    write_hrep(hypercube(2), tmp_path / "square.hrep")
    out["square"] = str(tmp_path / "square.hrep")
    for name, text in [("octahedron", OCTAHEDRON), ("slab", SLAB), ("flat", FLAT),
                       ("broken", "4 2\n1 0\n")]:
        (tmp_path / f"{name}.hrep").write_text(text)
        out[name] = str(tmp_path / f"{name}.hrep")
    return out


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_analyze_square(capsys, files):
    code, out = run(capsys, "analyze", files["square"], *FAST)
    rep = json.loads(out.out)
    assert code == 0
    assert (rep["exact_diameter"], rep["delta"], rep["det_star"], rep["j_max_paper"]) == (2, 1, 1, 17)
    assert rep["all_passed"] and all(s["passed"] for s in rep["lemma_results"].values())


def test_octahedron_exit_3(capsys, files):
    code, out = run(capsys, "analyze", files["octahedron"], *FAST)
    assert code == 3
    err = json.loads(out.out)
    assert err["error"] == "Degenerate"
    tops = [v for v in err["detail"]["vertices"] if v["point"] == [0.0, 0.0, 1.0]]
    assert len(tops) == 1 and len(tops[0]["tight_rows"]) == 4
    assert "Degenerate" in out.err


def test_slab_exit_4(capsys, files):
    code, out = run(capsys, "analyze", files["slab"], *FAST)
    err = json.loads(out.out)
    assert code == 4 and err["error"] == "Unbounded"
    assert len(err["detail"]["direction"]) == 2


@pytest.mark.parametrize("name", ["flat", "broken"])
def test_input_errors_exit_2(capsys, files, name):
    code, _ = run(capsys, "diameter", files[name])
    assert code == 2


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "bound", str(tmp_path / "nope.hrep"))[0] == 2


def test_samples_floor(capsys, files):
    with pytest.raises(SystemExit):
        cli.main(["analyze", files["square"], "--samples", "10"])


def test_csv_matches_json(capsys, files):
    _, out_json = run(capsys, "analyze", files["square"], *FAST)
    _, out_csv = run(capsys, "analyze", files["square"], *FAST, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out_csv.out)))
    assert rows[0] == ["key", "value"]
    from_csv = dict(rows[1:])
    flat = dict(flatten(json.loads(out_json.out)))
    assert list(from_csv) == list(flat)
    for k, v in flat.items():
        if v is None:
            assert from_csv[k] == ""
        elif isinstance(v, bool):
            assert from_csv[k] == str(v).lower()
        elif isinstance(v, float):
            assert float(from_csv[k]) == v
        else:
            assert from_csv[k] == str(v)


def test_text_format(capsys, files):
    code, out = run(capsys, "analyze", files["square"], *FAST, "--format", "text")
    assert code == 0 and "j_max_paper" in out.out and "lemma1" in out.out


def test_bound_and_diameter(capsys, files):
    _, out = run(capsys, "bound", files["square"], "--all-minors")
    rep = json.loads(out.out)
    assert rep["diameter_bound_paper"] == 34 and rep["det_star_all_minors"] == 1
    _, out = run(capsys, "diameter", files["square"])
    assert json.loads(out.out)["exact_diameter"] == 2


@pytest.mark.parametrize("lemma", ["1", "2", "3"])
def test_verify_single_lemma(capsys, files, lemma):
    code, out = run(capsys, "verify", files["square"], *FAST, "--lemma", lemma)
    rep = json.loads(out.out)
    assert code == 0
    assert len(rep["lemma_results"]) == (2 if lemma == "2" else 1)


def test_trace(capsys, files):
    code, out = run(capsys, "trace", files["square"], *FAST, "--from", "0", "--to", "3")
    rep = json.loads(out.out)
    assert code == 0 and rep["meet_iteration"] == 1 and rep["distance"] == 2
    assert run(capsys, "trace", files["square"], "--from", "0", "--to", "9")[0] == 2


def test_output_file(capsys, files, tmp_path):
    dest = tmp_path / "r.json"
    code, out = run(capsys, "bound", files["square"], "-o", str(dest))
    assert code == 0 and out.out == ""
    assert json.loads(dest.read_text())["j_max_paper"] == 17


class TestGenerate:
    def test_hypercube(self, capsys):
        code, out = run(capsys, "generate", "hypercube", "--dim", "3")
        H = parse_hrep(out.out)
        assert code == 0 and H.m == 6

    def test_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.hrep", tmp_path / "b.hrep"
        for p in (a, b):
            run(capsys, "generate", "random-tangent", "--rows", "10", "--dim", "3",
                "--seed", "7", "-o", str(p))
        assert a.read_bytes() == b.read_bytes()
        H, ref = read_hrep(a), __import__("polydiam").random_tangent(10, 3, 7)
        assert abs(H.A - ref.A).max() <= 1e-15 and abs(H.b - ref.b).max() <= 1e-15

    def test_polygon_needs_rows(self, capsys):
        assert run(capsys, "generate", "regular-polygon")[0] == 2

    def test_generation_failed_exit_6(self, capsys, monkeypatch):
        from polydiam import generators
        monkeypatch.setattr(generators, "MAX_ATTEMPTS", 0)
        assert run(capsys, "generate", "random-tangent", "--rows", "6", "--dim", "2")[0] == 6


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "polydiam", "diameter", files["square"]],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["exact_diameter"] == 2

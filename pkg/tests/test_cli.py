import json
import subprocess
import sys
from pathlib import Path

import pytest

from halfdisk.cli import main

GOLDEN = Path(__file__).parent / "golden"


def series(coeffs, dim=2, order=16):
    return {"dim": dim, "order": order, "coeffs": coeffs}


def vec_series(rows, order=16):
    return series([[list(a), list(b)] for a, b in rows], order=order)


def problem(kind, payload):
    return {"version": "halfdisk/1", "kind": kind, "payload": payload}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def pair_payload(u2_rows):
    return {"u1": vec_series([((0, 0), (0, 0)), ((1, 0), (0, 0))]),
            "u2": vec_series(u2_rows), "exact": True}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestIndexCommand:
    def test_cubic_pair_both_methods(self, tmp_path, capsys):
        doc = problem("index", pair_payload(
            [((0, 0), (0, 0)), ((1, 0), (0, 0)), ((0, 0), (0, 0)),
             ((0, 0), (1, 0))]))
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["index", "--method", "both", path])
        assert code == 0
        rep = json.loads(out)
        assert rep["index"] == 3 and rep["agree"] is True

    def test_reparametrization_exit_2(self, tmp_path, capsys):
        doc = problem("index", pair_payload(
            [((0, 0), (0, 0)), ((1, 0), (0, 0))]))
        path = write(tmp_path, "p.json", doc)
        assert main(["index", path]) == 2

    def test_schema_violation_exit_2_with_pointer(self, tmp_path, capsys):
        doc = problem("index", {"u1": {"dim": 3, "order": 8, "coeffs": []}})
        path = write(tmp_path, "p.json", doc)
        code = main(["index", path])
        err = capsys.readouterr().err
        assert code == 2
        assert "/payload/" in err

    def test_wrong_kind_for_subcommand(self, tmp_path):
        doc = problem("maslov", {"tangent": {"g": 0, "sigma": 1}})
        path = write(tmp_path, "p.json", doc)
        assert main(["index", path]) == 2


class TestOtherCommands:
    def test_tangency(self, tmp_path, capsys):
        doc = problem("tangency", pair_payload(
            [((0, 0), (0, 0)), ((1, 0), (0, 0)), ((0, 0), (1, 0))]))
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["tangency", path])
        assert code == 0
        rep = json.loads(out)
        assert rep["d"] == 2 and rep["kind"] == "touching"

    def test_compare(self, tmp_path, capsys):
        doc = problem("compare", pair_payload(
            [((0, 0), (0, 0)), ((1, 0), (0, 0)), ((1, 0), (0, 0)),
             ((0, 0), (0, 0)), ((0, 0), (1, 0))]))
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["compare", path])
        assert code == 0
        rep = json.loads(out)
        assert rep["nu"] == 4 and rep["kind"] == "touching"
        assert rep["w0"] == [0.0, 1.0]

    def test_maslov_tangent_flags(self, capsys):
        code, out = run(capsys, ["maslov", "--tangent", "-g", "1", "-s", "2"])
        assert code == 0
        assert json.loads(out)["maslov"] == -4

    def test_maslov_zeros_file(self, tmp_path, capsys):
        doc = problem("maslov", {"zeros": {"interior": [1], "boundary": [1]}})
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["maslov", path])
        assert json.loads(out)["maslov"] == 3

    def test_adjunction(self, tmp_path, capsys):
        doc = problem("adjunction", {"g": 0, "sigma": 1, "normal_maslov": 5,
                                     "double_sq": 5})
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["adjunction", path])
        assert code == 0
        assert json.loads(out)["verdict"] == "equal"

    def test_adjunction_total_maslov_validated(self, tmp_path, capsys):
        doc = problem("adjunction", {"g": 0, "sigma": 1, "normal_maslov": 5,
                                     "double_sq": 5, "maslov_total": 0})
        path = write(tmp_path, "p.json", doc)
        assert main(["adjunction", path]) == 2
        doc["payload"]["maslov_total"] = 7   # 5 + 4 - 0 - 2
        path = write(tmp_path, "p2.json", doc)
        assert main(["adjunction", path]) == 0
        capsys.readouterr()

    def test_reflect_eta_example(self, tmp_path, capsys):
        doc = problem("reflect", {
            "structure": {"name": "eta_example", "domain": "disk"},
            "operation": "reflect",
            "samples": [[0.0, -0.5]],
        })
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["reflect", path])
        assert code == 0
        M = json.loads(out)["matrices"][0]
        assert M[2][1] == 0.5 and M[3][0] == 0.5

    def test_perturb_small_grid(self, tmp_path, capsys):
        doc = problem("perturb", {
            "u0": vec_series([((0, 0), (0, 0)), ((1, 0), (0, 0))], order=8),
            "nu": 1, "w0": [0.0, 0.25],
        })
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["perturb", "--grid", "16", path])
        assert code == 0
        rep = json.loads(out)
        assert rep["w_origin"] == [0.0, 0.25]
        assert rep["dbar_residual"] < 1e-10

    def test_perturb_grid_dump(self, tmp_path, capsys):
        doc = problem("perturb", {
            "u0": vec_series([((0, 0), (0, 0)), ((1, 0), (0, 0))], order=8),
            "nu": 1, "w0": [0.0, 0.1],
        })
        path = write(tmp_path, "p.json", doc)
        dump = tmp_path / "w.json"
        code, out = run(capsys, ["perturb", "--grid", "16", "--dump",
                                 str(dump), path])
        assert code == 0
        blob = json.loads(dump.read_text())
        assert blob["h"] == 1 / 16
        assert len(blob["values"]) > 0

    def test_reflect_raw_sampled_structure(self, tmp_path, capsys):
        import numpy as np
        from halfdisk.structures import JST
        doc = problem("reflect", {
            "structure": {"domain": "space",
                          "points": [[0.0, 0.0, 0.0, 0.0]],
                          "matrices": [JST.tolist()]},
            "operation": "minus",
            "samples": [[0.1, 0.2, 0.3, 0.4]],
        })
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["reflect", path])
        assert code == 0
        M = np.array(json.loads(out)["matrices"][0])
        assert np.allclose(M, JST)

    def test_smooth_cusp_small_grid(self, tmp_path, capsys):
        doc = problem("smooth-cusp", {
            "u0": vec_series([((0, 0), (0, 0)), ((0, 0), (0, 0)),
                              ((1, 0), (0, 0)), ((0, 0), (1, 0))], order=8),
            "a": 0.1,
        })
        path = write(tmp_path, "p.json", doc)
        code, out = run(capsys, ["smooth-cusp", "--grid", "24", path])
        assert code == 0
        assert json.loads(out)["radius"] > 0

    def test_emit_input_round_trip(self, tmp_path, capsys):
        doc = problem("maslov", {"tangent": {"g": 0, "sigma": 2}})
        path = write(tmp_path, "p.json", doc)
        code, out1 = run(capsys, ["--emit-input", "maslov", path])
        assert code == 0
        path2 = tmp_path / "normalized.json"
        path2.write_text(out1)
        code, out2 = run(capsys, ["--emit-input", "maslov", str(path2)])
        assert out1 == out2


class TestGolden:
    @pytest.mark.parametrize("name", ["index_cubic", "maslov_tangent",
                                      "adjunction_embedded", "tangency_d2"])
    def test_golden(self, name, capsys):
        case = json.loads((GOLDEN / f"{name}.json").read_text())
        argv = [a.replace("$GOLDEN", str(GOLDEN)) for a in case["argv"]]
        code, out = run(capsys, argv)
        assert code == case["exit"]
        assert out == case["stdout"]


class TestEntryPoint:
    def test_console_script(self):
        out = subprocess.run([sys.executable, "-m", "halfdisk.cli", "maslov",
                              "--tangent", "-g", "0", "-s", "1"],
                             capture_output=True, text=True)
        assert out.returncode == 0
        assert json.loads(out.stdout)["maslov"] == 2

    def test_env_seed_accepted(self, monkeypatch, capsys):
        monkeypatch.setenv("HALFDISK_SEED", "42")
        code, out = run(capsys, ["maslov", "--tangent", "-g", "0", "-s", "2"])
        assert code == 0
        assert json.loads(out)["maslov"] == 0


class TestSchemasShipped:
    def test_repo_copy_matches_package_copy(self):
        from importlib import resources
        repo = Path(__file__).parent.parent / "schemas"
        pkg = resources.files("halfdisk.schemas")
        names = sorted(p.name for p in repo.glob("*.json"))
        assert names, "repo /schemas must ship the JSON schemas"
        for name in names:
            assert (repo / name).read_text() == \
                pkg.joinpath(name).read_text()

import json
import shutil
import subprocess

import numpy as np
import pytest

from logcrit.catalog import ftilde, ftilde_family
from logcrit.cli import (
    EXIT_FAILED,
    EXIT_INPUT,
    EXIT_OK,
    RenderScene,
    amoeba_points,
    main,
    parse_complex,
    render_svg,
)
from logcrit.poly import LaurentPolynomial


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    fam = ftilde_family().to_json()
    fam["t"] = [0.003, 0.0]
    (d / "ftilde_family.json").write_text(json.dumps(fam))
    (d / "ftilde.json").write_text(json.dumps(ftilde().to_json()))
    line = LaurentPolynomial({(0, 0): 1, (1, 0): 1, (0, 1): 1})
    (d / "line.json").write_text(json.dumps(line.to_json()))
    (d / "bad.json").write_text("{not json")
    return d


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out.strip()


def test_parse_complex():
    assert parse_complex("0.5") == 0.5
    assert parse_complex("1,-2") == 1 - 2j
    with pytest.raises(ValueError):
        parse_complex("x")


def test_b0_polynomial(files, capsys):
    assert _run(capsys, "b0", files / "ftilde.json") == (EXIT_OK, "2")


def test_b0_family(files, capsys):
    assert _run(capsys, "b0", files / "ftilde_family.json", "--t", "0.003") == (EXIT_OK, "2")


def test_bad_json(files, capsys):
    code, _ = _run(capsys, "b0", files / "bad.json")
    assert code == EXIT_INPUT
    code, _ = _run(capsys, "b0", files / "missing.json")
    assert code == EXIT_INPUT


def test_unknown_subcommand(capsys):
    assert main(["nonsense"]) == EXIT_INPUT


def test_construct_then_b0(tmp_path, capsys):
    out = tmp_path / "c31.json"
    code, _ = _run(capsys, "construct", "--degree", 3, "--components", 1, "--out", out)
    assert code == EXIT_OK
    raw = json.loads(out.read_text())
    assert "family" not in raw["construction"]
    assert _run(capsys, "b0", out) == (EXIT_OK, "1")


def test_construct_rejects_bad_counts(tmp_path, capsys):
    code, _ = _run(capsys, "construct", "--degree", 3, "--components", 3, "--out", tmp_path / "x.json")
    assert code == EXIT_INPUT


def test_line_amoeba_tentacles():
    line = LaurentPolynomial({(0, 0): 1, (1, 0): 1, (0, 1): 1})
    A = amoeba_points(line, 120, box=(-8, 8, -8, 8))
    x, y = A[:, 0], A[:, 1]
    # log|z| -> -oo along w = -1, log|w| -> -oo along z = -1, both -> +oo with w ~ -z
    assert np.all(np.abs(y[x < -5]) < 0.05) and np.sum(x < -5) > 0
    assert np.all(np.abs(x[y < -5]) < 0.05) and np.sum(y < -5) > 0
    far = (x > 5) & (y > 5)
    assert np.all(np.abs(x[far] - y[far]) < 0.05) and np.sum(far) > 0
    # the three tentacles exhaust the far region
    assert not np.any((x > 5) & (y < 3))


def test_svg_determinism_and_groups(files, tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (a, b):
        code, _ = _run(capsys, "amoeba", files / "ftilde.json", "--out", out, "--contour")
        assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert 'id="amoeba"' in text and 'id="contour"' in text
    assert 'id="tropical"' not in text and "stroke-dasharray" not in text
    contour = text.split('id="contour"')[1]
    assert len(set(s for s in contour.split('"') if s.startswith("#"))) == 2


def test_tropical_overlay_is_dashed(files, tmp_path, capsys):
    out = tmp_path / "t.svg"
    code, _ = _run(capsys, "amoeba", files / "ftilde_family.json", "--out", out, "--tropical",
                   "--resolution", 60)
    assert code == EXIT_OK
    text = out.read_text()
    assert 'id="tropical"' in text and "stroke-dasharray" in text


def test_containment(files, tmp_path, capsys):
    rep_path = tmp_path / "rep.json"
    code, _ = _run(capsys, "amoeba", files / "ftilde.json", "--out", tmp_path / "c.svg", "--contour",
                   "--json-out", rep_path)
    assert code == EXIT_OK
    rep = json.loads(rep_path.read_text())
    assert rep["report"]["b0"] == 2
    assert rep["report"]["containment_defect"] < 0.05


def test_viewport_margins():
    scene = RenderScene(np.array([[0.0, 0.0], [10.0, 20.0]]))
    x0, x1, y0, y1 = scene.fitted_viewport()
    assert np.allclose([x0, x1, y0, y1], [-0.5, 10.5, -1.0, 21.0])


def test_render_empty_overlay(tmp_path):
    out = render_svg(RenderScene(np.array([[0.0, 0.0], [1.0, 1.0]])), tmp_path / "e.svg")
    assert "stroke-dasharray" not in out.read_text()


def test_json_out_records_tolerances(files, tmp_path, capsys):
    rep_path = tmp_path / "b0.json"
    code, _ = _run(capsys, "--seed", 4, "b0", files / "ftilde.json", "--json-out", rep_path)
    assert code == EXIT_OK
    rep = json.loads(rep_path.read_text())
    assert rep["command"] == "b0" and rep["seed"] == 4
    assert "root_cluster" in rep["tolerances"]


def test_catalog_check(tmp_path, capsys):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"d": 1, "a": [-10.05, -1], "b": [-10.15], "lam": 0, "variant": "F"}))
    assert _run(capsys, "catalog-check", "--prop", "eps", "--params", p)[0] == EXIT_OK
    assert _run(capsys, "catalog-check", "--prop", "critloc", "--params", p)[0] == EXIT_OK
    bad = tmp_path / "q.json"
    bad.write_text(json.dumps({"d": 1, "a": [-1, -10], "b": [-10.15]}))
    assert _run(capsys, "catalog-check", "--prop", "eps", "--params", bad)[0] == EXIT_INPUT


def test_appendix_verify_exit_code(capsys):
    # the stated closed form for the branch coefficient does not hold, so
    # the command reports a failed check
    code, line = _run(capsys, "appendix-verify")
    assert code == EXIT_FAILED
    assert "alpha" in line


@pytest.mark.skipif(shutil.which("logcrit") is None, reason="console script not installed")
def test_console_script(files):
    out = subprocess.run(["logcrit", "b0", str(files / "ftilde.json")], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "2"

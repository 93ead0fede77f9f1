import json
import os
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from dataflow_indices import si_smi_bridge, separation_index, smoothness_index_r, whiten
from dataflow_indices.cli import main
from dataflow_indices.io import load_labels, load_matrix, write_csv
from dataflow_indices.report import TIMESTAMP_KEYS

GOLDEN = Path(__file__).parent / "golden"
SVG_NS = "{http://www.w3.org/2000/svg}"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_times(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in TIMESTAMP_KEYS}


def polylines(svg_text: str):
    return ET.fromstring(svg_text.split("\n", 1)[1]).findall(f"{SVG_NS}polyline")


@pytest.fixture
def clusters(tmp_path):
    write_csv(tmp_path / "x.csv", [[0.0, 0.0], [0.1, 0.0], [0.0, 0.2], [10.0, 10.0], [10.1, 10.0], [10.0, 10.3]])
    write_csv(tmp_path / "y.csv", [1, 1, 1, 2, 2, 2])
    return tmp_path


def test_si_fixture_is_one(clusters, capsys):
    code, out, _ = run(["si", clusters / "x.csv", "--labels", clusters / "y.csv"], capsys)
    assert code == 0
    rec = json.loads(out)["series"][0]["records"][0]
    assert rec["value"] == 1.0 and rec["match_count"] == 6


def test_si_higher_order_not_larger(clusters, capsys):
    _, out, _ = run(["si", clusters / "x.csv", "--labels", clusters / "y.csv", "--r", "1,3"], capsys)
    recs = json.loads(out)["series"][0]["records"]
    assert recs[1]["r"] == 3 and recs[1]["value"] <= recs[0]["value"]


def test_si_label_column(tmp_path, capsys):
    (tmp_path / "d.csv").write_text("a,b,cls\n0,0,1\n0,1,1\n9,9,2\n9,8,2\n")
    _, out, _ = run(["si", tmp_path / "d.csv", "--label-column", "cls"], capsys)
    assert json.loads(out)["series"][0]["records"][0]["value"] == 1.0


def test_si_csv_and_svg_views(clusters, capsys):
    out = clusters / "rep.json"
    code, _, _ = run(["si", clusters / "x.csv", "--labels", clusters / "y.csv", "--r", "1,2",
                      "--out", out, "--format", "csv", "--format", "svg"], capsys)
    assert code == 0
    assert out.with_suffix(".csv").read_text().splitlines()[0].startswith("series,name")
    assert len(polylines(out.with_suffix(".svg").read_text())) == 1


@pytest.mark.parametrize(
    "argv_tail, code",
    [
        (["--r", "9"], 2),  # order beyond Q - 1
        (["--r", "0,1"], 2),
        (["--n-classes", "1"], 4),  # label 2 out of range
    ],
)
def test_si_exit_codes(clusters, capsys, argv_tail, code):
    assert run(["si", clusters / "x.csv", "--labels", clusters / "y.csv", *argv_tail], capsys)[0] == code


def test_parse_error_exit_code(tmp_path, capsys):
    (tmp_path / "bad.csv").write_text("1,2\n3,oops\n")
    (tmp_path / "l.csv").write_text("1\n2\n")
    code, _, err = run(["si", tmp_path / "bad.csv", "--labels", tmp_path / "l.csv"], capsys)
    assert code == 3 and "line 2" in err


def test_missing_file_exit_code(tmp_path, capsys):
    assert run(["si", tmp_path / "nope.csv", "--labels", tmp_path / "nope.csv"], capsys)[0] == 3


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["si"])
    assert exc.value.code == 2


def test_smi_whiten_recorded(tmp_path, capsys, rng):
    X = rng.normal(size=(40, 2))
    y = 5 + 3 * X[:, :1] + 0.2 * rng.normal(size=(40, 1))
    write_csv(tmp_path / "x.csv", X)
    write_csv(tmp_path / "t.csv", y)
    _, out, _ = run(["smi", tmp_path / "x.csv", "--targets", tmp_path / "t.csv", "--r", "1,2,3", "--whiten"], capsys)
    rep = json.loads(out)
    assert rep["params"]["whiten"] is True and rep["whitening"]["std"][0] > 0
    yw, _ = whiten(load_matrix(tmp_path / "t.csv"))
    Xl = load_matrix(tmp_path / "x.csv")
    values = [r["value"] for r in rep["series"][0]["records"]]
    assert values == [smoothness_index_r(Xl, yw, r) for r in (1, 2, 3)]
    assert isinstance(rep["monotonicity_violations"], list)


def test_curve(clusters, capsys):
    out = clusters / "curve.json"
    code, _, _ = run(["curve", clusters / "x.csv", "--labels", clusters / "y.csv",
                      "--sizes", "6,3,4", "--seed", "2", "--out", out, "--format", "svg"], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert [r["size"] for r in rep["series"][0]["records"]] == [3, 4, 6]
    assert rep["params"]["seed"] == 2
    assert len(polylines(out.with_suffix(".svg").read_text())) == 1


def test_embed_then_smi(tmp_path, capsys):
    (tmp_path / "s.csv").write_text("price\n" + "\n".join(str(v) for v in [1, 2, 3, 4, 5]) + "\n")
    code, out, _ = run(["embed", tmp_path / "s.csv", "-n", "2", "--out-x", tmp_path / "x.csv",
                        "--out-y", tmp_path / "y.dflw"], capsys)
    assert code == 0 and json.loads(out)["rows"] == 3
    np.testing.assert_array_equal(load_matrix(tmp_path / "x.csv"), [[2, 1], [3, 2], [4, 3]])
    np.testing.assert_array_equal(load_matrix(tmp_path / "y.dflw").ravel(), [3, 4, 5])


def test_quantize_bridge_round_trip(tmp_path, capsys, rng):
    x = rng.uniform(size=(80, 1))
    write_csv(tmp_path / "x.csv", x)
    write_csv(tmp_path / "t.csv", np.sin(5 * x))
    code, out, _ = run(["quantize", tmp_path / "t.csv", "--levels", "5", "--out", tmp_path / "l.csv"], capsys)
    assert code == 0
    spec = json.loads(out)
    assert spec["n_c"] == 5 and sum(spec["counts"]) == 80
    _, out, _ = run(["si", tmp_path / "x.csv", "--labels", tmp_path / "l.csv"], capsys)
    labels = load_labels(tmp_path / "l.csv")
    value = json.loads(out)["series"][0]["records"][0]["value"]
    assert value == separation_index(x, labels) == si_smi_bridge(x, labels)


# ---------------------------------------------------------------------------
# layer stacks


def make_synthetic_stack(directory: Path, seed: int = 2024, name: str = "train", n: int = 60):
    """Three layers that pull each class toward its centroid by 0%, 60%, 95%."""
    g = np.random.default_rng(seed)
    labels = np.repeat([1, 2, 3], n // 3)
    base = g.normal(size=(n, 4))
    centroids = g.normal(size=(3, 4)) * 0.5
    write_csv(directory / f"{name}_labels.csv", labels)
    lines = [f"labels: {name}_labels.csv"]
    for i, pull in enumerate([0.0, 0.6, 0.95], start=1):
        layer = (1 - pull) * base + pull * centroids[labels - 1]
        write_csv(directory / f"{name}_l{i}.csv", layer)
        lines.append(f"layer{i} = {name}_l{i}.csv")
    (directory / f"{name}.txt").write_text("\n".join(lines) + "\n")
    return directory / f"{name}.txt"


def test_layers_golden(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    make_synthetic_stack(tmp_path)
    make_synthetic_stack(tmp_path, seed=7, name="test")
    Path("ccr.csv").write_text("layer,train,test\nlayer1,0.3,0.25\nlayer2,0.8,0.7\nlayer3,1.0,0.9\n")
    code, _, err = run(["layers", "train.txt", "--test-manifest", "test.txt", "--ccr", "ccr.csv",
                        "--out", "layers.json", "--format", "csv", "--format", "svg"], capsys)
    assert code == 0, err
    report = strip_times(json.loads(Path("layers.json").read_text()))
    train = [r["value"] for r in report["series"][0]["records"]]
    assert train[0] < train[1] < train[2] == 1.0

    svg = Path("layers.svg").read_text()
    assert len(polylines(svg)) == len(report["series"]) == 4

    if os.environ.get("UPDATE_GOLDEN"):
        GOLDEN.mkdir(exist_ok=True)
        (GOLDEN / "layers_report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        (GOLDEN / "layers.svg").write_text(svg)
        (GOLDEN / "layers.csv").write_text(Path("layers.csv").read_text())
    assert report == json.loads((GOLDEN / "layers_report.json").read_text())
    assert svg == (GOLDEN / "layers.svg").read_text()
    assert Path("layers.csv").read_text() == (GOLDEN / "layers.csv").read_text()


def test_layers_rerun_identical_except_timestamps(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    make_synthetic_stack(tmp_path)
    _, a, _ = run(["layers", "train.txt", "--threads", "1"], capsys)
    _, b, _ = run(["layers", "train.txt", "--threads", "4"], capsys)
    assert strip_times(json.loads(a)) == strip_times(json.loads(b))


def test_layers_smi_manifest(tmp_path, capsys, rng):
    y = rng.normal(size=(30, 1))
    write_csv(tmp_path / "t.csv", y)
    write_csv(tmp_path / "a.csv", rng.normal(size=(30, 3)))
    write_csv(tmp_path / "b.csv", 2 * y + 1)
    (tmp_path / "m.txt").write_text("targets: t.csv\na.csv\nb.csv\n")
    _, out, _ = run(["layers", tmp_path / "m.txt", "--whiten"], capsys)
    recs = json.loads(out)["series"][0]["records"]
    assert [r["name"] for r in recs] == ["a", "b"]
    assert recs[1]["value"] == pytest.approx(1.0, abs=1e-12)
    assert run(["layers", tmp_path / "m.txt", "--index", "si"], capsys)[0] == 2


def test_module_entry_point(clusters):
    proc = subprocess.run(
        [sys.executable, "-m", "dataflow_indices.cli", "si", str(clusters / "x.csv"),
         "--labels", str(clusters / "y.csv")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["command"] == "si"


def test_sparse_series_aligned_by_layer_name():
    from dataflow_indices.report import render_svg

    rep = {"series": [
        {"name": "train", "records": [{"name": n, "value": v} for n, v in [("a", 0.1), ("b", 0.5), ("c", 0.9)]]},
        {"name": "ccr", "records": [{"name": "a", "value": 0.2}, {"name": "c", "value": 0.8}]},
    ]}
    lines = polylines(render_svg(rep))
    train_x = [p.split(",")[0] for p in lines[0].get("points").split()]
    ccr_x = [p.split(",")[0] for p in lines[1].get("points").split()]
    assert ccr_x == [train_x[0], train_x[2]]


def test_smi_target_column_and_targets_curve(tmp_path, capsys, rng):
    X = rng.normal(size=(30, 2))
    y = X[:, 0] * 2
    write_csv(tmp_path / "d.csv", np.column_stack([X, y]), header=["a", "b", "price"])
    _, out, _ = run(["smi", tmp_path / "d.csv", "--target-column", "price"], capsys)
    assert json.loads(out)["series"][0]["records"][0]["value"] == smoothness_index_r(X, y, 1)

    write_csv(tmp_path / "x.csv", X)
    write_csv(tmp_path / "t.csv", y)
    _, out, _ = run(["curve", tmp_path / "x.csv", "--targets", tmp_path / "t.csv",
                     "--sizes", "10,30", "--whiten", "--r", "2"], capsys)
    rep = json.loads(out)
    assert rep["params"]["index"] == "smi" and rep["whitening"] is not None
    assert len(rep["series"][0]["records"]) == 2

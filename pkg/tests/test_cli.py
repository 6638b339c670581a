import json
from pathlib import Path

import pytest

import constants
import main
from logic.function import PolyhedralConvexFunction, indicator
from logic.geometry import box
from models.function_models import FunctionModel
from tests.helpers import abs_function


def write_function(path: Path, phi: PolyhedralConvexFunction) -> str:
    path.write_text(phi.to_model().model_dump_json(indent=2), encoding='utf-8')
    return str(path)


def read_function(path: Path) -> PolyhedralConvexFunction:
    return PolyhedralConvexFunction.from_model(FunctionModel.model_validate_json(path.read_text(encoding='utf-8')))


def test_transform_polarity_of_abs(tmp_path):
    src = write_function(tmp_path / "abs.json", abs_function())
    out = tmp_path / "out.json"
    assert main.main(['transform', '--op', 'polarity', '-i', src, '-o', str(out)]) == constants.EXIT_OK
    assert read_function(out).equals(abs_function())

    manifest = json.loads((tmp_path / "out.manifest.json").read_text())
    assert manifest["exit_code"] == 0
    assert manifest["outputs"] == [str(out)]
    assert src in manifest["inputs"]


def test_product_report(tmp_path):
    src = write_function(tmp_path / "abs.json", abs_function(2.0))
    report = tmp_path / "report.json"
    assert main.main(['product', '--functional', 'L', '-i', src, '--report', str(report)]) == constants.EXIT_OK
    assert json.loads(report.read_text())["product"] == pytest.approx(4.0, rel=1e-9)


def test_classify_to_stdout(tmp_path, capsys):
    src = write_function(tmp_path / "shifted.json", abs_function(shift=1.0))
    assert main.main(['classify', '-i', src, '--no-john', '--query', 'cvx0']) == constants.EXIT_OK
    tags = json.loads(capsys.readouterr().out)
    assert tags["is_cvx0"] is False
    assert (tmp_path / "shifted.classify.manifest.json").exists()


def test_normalize_writes_certificate(tmp_path):
    src = write_function(tmp_path / "abs.json", abs_function(2.0))
    out = tmp_path / "normal.json"
    assert main.main(['normalize', '--class', 'even', '-i', src, '-o', str(out)]) == constants.EXIT_OK
    assert read_function(out).equals(abs_function(), tol=1e-8)
    cert = json.loads((tmp_path / "normal.cert.json").read_text())
    assert cert["target_class"] == "S_e"


def test_domain_error_exits_with_report(tmp_path):
    src = write_function(tmp_path / "unit.json", indicator(box([0.0], [1.0])))
    report = tmp_path / "report.json"
    code = main.main(['product', '--functional', 'L', '-i', src, '--report', str(report)])
    assert code == constants.EXIT_DOMAIN_ERROR
    error = json.loads((tmp_path / "report.error.json").read_text())
    assert error["error"] == "IllPositioned"
    assert json.loads((tmp_path / "report.manifest.json").read_text())["exit_code"] == constants.EXIT_DOMAIN_ERROR


def test_malformed_input_exits_with_io_error(tmp_path):
    src = tmp_path / "broken.json"
    src.write_text("{not json", encoding='utf-8')
    out = tmp_path / "out.json"
    assert main.main(['transform', '--op', 'legendre', '-i', str(src), '-o', str(out)]) == constants.EXIT_IO_ERROR
    assert (tmp_path / "out.error.json").exists()
    assert not out.exists()


def test_missing_input_exits_with_io_error(tmp_path):
    out = tmp_path / "out.json"
    code = main.main(['transform', '--op', 'gauge', '-i', str(tmp_path / "missing.json"), '-o', str(out)])
    assert code == constants.EXIT_IO_ERROR


def test_usage_error_exits_with_one():
    assert main.main(['transform', '--op', 'fourier']) == constants.EXIT_IO_ERROR


def test_diag_over_a_sequence_directory(tmp_path):
    sequence = tmp_path / "seq"
    sequence.mkdir()
    for i, k in enumerate(range(8, 12)):
        write_function(sequence / f"fn_{i:03d}.json", abs_function(1.0 + 2.0 ** -k))
    limit = write_function(tmp_path / "limit.json", abs_function())
    report = tmp_path / "tau.json"
    code = main.main(['diag', 'tau', '--sequence', str(sequence), '--limit', limit, '--report', str(report),
                      '--radii', '1.0', '2.0'])
    assert code == constants.EXIT_OK
    assert len(json.loads(report.read_text())["terms"]) == 4


def test_search_writes_result(tmp_path):
    out = tmp_path / "search.json"
    code = main.main(['search', '--functional', 'A', '--knots', '2', '--radius', '2', '--seed', '5',
                      '--restarts', '1', '--max-iters', '10', '--out', str(out)])
    assert code == constants.EXIT_OK
    result = json.loads(out.read_text())
    assert result["seed"] == 5
    assert len(result["best_params"]) == 2
    assert json.loads((tmp_path / "search.manifest.json").read_text())["seed"] == 5


def test_plot_writes_svg(tmp_path):
    src = write_function(tmp_path / "abs.json", abs_function())
    out = tmp_path / "abs.svg"
    assert main.main(['plot', '-i', src, '-o', str(out)]) == constants.EXIT_OK
    assert out.read_text().lstrip().startswith("<?xml")


def test_plot_of_planar_gauge(tmp_path, square_gauge):
    src = write_function(tmp_path / "square.json", square_gauge)
    out = tmp_path / "square.svg"
    assert main.main(['plot', '-i', src, '-o', str(out), '--levels', '1', '2']) == constants.EXIT_OK
    assert "<svg" in out.read_text()


def test_plot_refuses_three_dimensions(tmp_path):
    phi = PolyhedralConvexFunction(3, [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]], [0.0, 0.0])
    src = write_function(tmp_path / "slab.json", phi)
    code = main.main(['plot', '-i', src, '-o', str(tmp_path / "slab.svg")])
    assert code == constants.EXIT_DOMAIN_ERROR
    assert json.loads((tmp_path / "slab.error.json").read_text())["error"] == "UnsupportedDimension"

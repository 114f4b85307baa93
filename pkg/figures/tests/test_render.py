import json
from pathlib import Path

import pytest

from ringflow_figures.render import FigureSpec, SchemaError, build_figure, load_rows, main, render

DATA = Path(__file__).parent / "data"


def _count_rows(path):
    lines = [line for line in path.read_text().split("\n") if line]
    if lines[0].startswith("#"):
        lines = lines[1:]
    return [line for line in lines[1:]]


@pytest.mark.parametrize("figure_id", ["fig1a", "fig1b", "fig2a", "fig2b"])
def test_renders_reference_csvs(figure_id, tmp_path):
    csv_path = DATA / f"{figure_id}.csv"
    out = tmp_path / f"{figure_id}.png"
    info = render(FigureSpec(figure_id=figure_id, csv_path=str(csv_path), output_path=str(out)))
    assert out.exists() and out.stat().st_size > 0

    rows = _count_rows(csv_path)
    if figure_id.startswith("fig1"):
        n_values = {row.split(",")[0] for row in rows}
        assert info["curves"] == len(n_values)
        assert info["points"] == len(rows)
    else:
        data_rows = [row for row in rows if not row.startswith("-1,")]
        fit_rows = [row for row in rows if row.startswith("-1,")]
        assert info["points"] == len(data_rows)
        assert info["fit_points"] == len(fit_rows)


def test_fig2a_intercept_annotation_matches_fit_row(tmp_path):
    csv_path = DATA / "fig2a.csv"
    out = tmp_path / "fig2a.png"
    info = render(FigureSpec(figure_id="fig2a", csv_path=str(csv_path), output_path=str(out)))
    fit_zero = next(
        row for row in _count_rows(csv_path) if row.startswith("-1,") and float(row.split(",")[1]) == 0.0
    )
    expected = float(fit_zero.split(",")[2])
    assert abs(info["intercept"] - expected) <= 1e-12


def test_schema_mismatch_names_offending_header(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("alpha,stuff\n0.1,0.2\n")
    spec = FigureSpec(figure_id="fig1a", csv_path=str(bad), output_path=str(tmp_path / "x.png"))
    with pytest.raises(SchemaError) as excinfo:
        load_rows(spec)
    assert "alpha,stuff" in str(excinfo.value)
    assert "n,alpha,min_lambda" in str(excinfo.value)


def test_empty_csv_errors_without_writing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("n,alpha,min_lambda\n")
    out = tmp_path / "out.png"
    spec = FigureSpec(figure_id="fig1a", csv_path=str(empty), output_path=str(out))
    with pytest.raises(SchemaError):
        render(spec)
    assert not out.exists()


def test_unknown_figure_id_rejected(tmp_path):
    with pytest.raises(SchemaError):
        FigureSpec(figure_id="fig9", csv_path="x.csv", output_path="y.png")


def test_metadata_line_is_parsed(tmp_path):
    meta, rows = load_rows(
        FigureSpec(figure_id="fig2a", csv_path=str(DATA / "fig2a.csv"), output_path="unused.png")
    )
    assert meta.get("package") == "ringflow"
    assert all(isinstance(n, int) for n, _, _ in rows)


def test_rendering_is_deterministic(tmp_path):
    spec1 = FigureSpec(figure_id="fig1b", csv_path=str(DATA / "fig1b.csv"), output_path=str(tmp_path / "a.png"))
    spec2 = FigureSpec(figure_id="fig1b", csv_path=str(DATA / "fig1b.csv"), output_path=str(tmp_path / "b.png"))
    render(spec1)
    render(spec2)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_svg_output_supported(tmp_path):
    out = tmp_path / "fig2b.svg"
    render(FigureSpec(figure_id="fig2b", csv_path=str(DATA / "fig2b.csv"), output_path=str(out)))
    body = out.read_text()
    assert body.startswith("<?xml")


def test_cli_roundtrip(tmp_path, capsys):
    out = tmp_path / "fig2a.png"
    code = main(["fig2a", str(DATA / "fig2a.csv"), str(out)])
    assert code == 0
    info = json.loads(capsys.readouterr().out)
    assert out.exists()
    assert info["points"] == 11


def test_cli_schema_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong,header\n1,2\n")
    code = main(["fig1a", str(bad), str(tmp_path / "x.png")])
    assert code == 1
    assert "n,alpha,min_lambda" in capsys.readouterr().err


def test_cli_axis_limit_flags(tmp_path):
    out = tmp_path / "fig1a.png"
    # Negative limits need the = form, or argparse reads them as options.
    code = main(["fig1a", str(DATA / "fig1a.csv"), str(out), "--xlim", "0:1", "--ylim=-0.1:0.5"])
    assert code == 0
    assert out.exists()

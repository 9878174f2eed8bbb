"""CSV parsing, deterministic rendering, and the four-figure set."""

import pytest

from bwfigures.cli import main as figures_main
from bwfigures.csvio import FigureInputError, read_table, require_columns
from bwfigures.render import FigureJob, render

from bwdelay.cli import main as bwdelay_main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def sweep_text(fingerprint="abc123def456", kind="sweep", ratios=(0.98, 0.9, 1.1)):
    rows = "\n".join(
        f"{i},{r},1.9e-05,9.7e-06,9.7e-06" for i, r in enumerate(ratios)
    )
    return (
        f"# kind = {kind}\n"
        "# version = 0.1.0\n"
        f"# fingerprint = {fingerprint}\n"
        "# gamma.omega = 1.01\n"
        "# pulse1 = xi 0.1, omega 1.01, cycles 4, cep_pi 0\n"
        "# grid = radial 200, polar 96, azimuthal 32, pmax 2.5\n"
        "D_lambda_e,ratio,P_double,P_first_single,P_second_single\n"
        f"{rows}\n"
    )


def write(path, text):
    path.write_text(text)
    return str(path)


class TestCsvReading:
    def test_metadata_header_and_columns(self, tmp_path):
        table = read_table(write(tmp_path / "s.csv", sweep_text()))
        assert table.kind == "sweep"
        assert table.fingerprint == "abc123def456"
        assert table.meta["gamma.omega"] == "1.01"
        assert list(table.columns) == ["D_lambda_e", "ratio", "P_double",
                                       "P_first_single", "P_second_single"]
        assert table.columns["ratio"].tolist() == [0.98, 0.9, 1.1]
        assert table.pulse_lines() == [
            "pulse1: xi 0.1, omega 1.01, cycles 4, cep_pi 0"
        ]

    def test_empty_file(self, tmp_path):
        with pytest.raises(FigureInputError, match="empty file"):
            read_table(write(tmp_path / "e.csv", ""))

    def test_header_without_rows(self, tmp_path):
        with pytest.raises(FigureInputError, match="no data rows"):
            read_table(write(tmp_path / "h.csv", "# kind = sweep\na,b\n"))

    def test_ragged_row(self, tmp_path):
        with pytest.raises(FigureInputError, match="2 cells for 3"):
            read_table(write(tmp_path / "r.csv", "a,b,c\n1,2,3\n1,2\n"))

    def test_non_numeric_cell(self, tmp_path):
        with pytest.raises(FigureInputError, match="non-numeric"):
            read_table(write(tmp_path / "n.csv", "a,b\n1,x\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FigureInputError, match="cannot read"):
            read_table(str(tmp_path / "absent.csv"))

    def test_missing_column_is_named(self, tmp_path):
        table = read_table(write(tmp_path / "s.csv", sweep_text()))
        with pytest.raises(FigureInputError, match="missing column 'ratio_ab'"):
            require_columns(table, ["D_lambda_e", "ratio_ab"])


class TestRendering:
    def test_ratio_png_and_byte_identical_rerun(self, tmp_path):
        csv = write(tmp_path / "s.csv", sweep_text())
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(FigureJob(kind="ratio", inputs=(csv,), out=str(a)))
        render(FigureJob(kind="ratio", inputs=(csv,), out=str(b)))
        assert a.read_bytes()[:8] == PNG_MAGIC
        assert a.read_bytes() == b.read_bytes()

    def test_axis_ranges_change_the_image(self, tmp_path):
        csv = write(tmp_path / "s.csv", sweep_text())
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(FigureJob(kind="ratio", inputs=(csv,), out=str(a)))
        render(FigureJob(kind="ratio", inputs=(csv,), out=str(b),
                         ylim=(0.0, 2.0)))
        assert a.read_bytes() != b.read_bytes()

    def test_overlay_requires_matching_fingerprints(self, tmp_path):
        sim = write(tmp_path / "sim.csv", sweep_text("aaaaaaaaaaaa"))
        mod = write(tmp_path / "mod.csv",
                    sweep_text("bbbbbbbbbbbb", kind="model"))
        out = tmp_path / "o.png"
        with pytest.raises(FigureInputError, match="fingerprint mismatch"):
            render(FigureJob(kind="model-overlay", inputs=(sim, mod),
                             out=str(out)))
        assert not out.exists()

    def test_overlay_requires_one_of_each_kind(self, tmp_path):
        a = write(tmp_path / "a.csv", sweep_text())
        b = write(tmp_path / "b.csv", sweep_text())
        with pytest.raises(FigureInputError, match="one sweep CSV and one"):
            render(FigureJob(kind="model-overlay", inputs=(a, b),
                             out=str(tmp_path / "o.png")))

    def test_ratio_pair_names_missing_column(self, tmp_path):
        csv = write(tmp_path / "s.csv", sweep_text())
        with pytest.raises(FigureInputError, match="'ratio_ab'"):
            render(FigureJob(kind="ratio-pair", inputs=(csv,),
                             out=str(tmp_path / "o.png")))

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(FigureInputError, match="unknown figure kind"):
            render(FigureJob(kind="scatter", inputs=("x.csv",),
                             out=str(tmp_path / "o.png")))

    def test_cli_exit_codes(self, tmp_path, capsys):
        csv = write(tmp_path / "s.csv", sweep_text())
        out = tmp_path / "o.png"
        assert figures_main(["ratio", csv, "--out", str(out)]) == 0
        assert out.exists()

        mod = write(tmp_path / "m.csv",
                    sweep_text("cccccccccccc", kind="model"))
        rc = figures_main(["model-overlay", csv, mod,
                           "--out", str(tmp_path / "bad.png")])
        assert rc == 2
        assert "BWFIGURES_ERROR" in capsys.readouterr().err
        assert not (tmp_path / "bad.png").exists()


@pytest.fixture(scope="module")
def csv_set(tmp_path_factory):
    """The figure-input CSVs, generated through the simulator CLI."""
    root = tmp_path_factory.mktemp("csvs")
    jobs = {
        "fig2": ["spectrum", "--preset", "fig2"],
        "fig3_blue": ["sweep", "--preset", "fig3-blue"],
        "fig3_green": ["sweep", "--preset", "fig3-green"],
        "fig4": ["exchange", "--preset", "fig4"],
        "fig5": ["exchange", "--preset", "fig5"],
        "model_p1": ["model", "--preset", "P1"],
    }
    paths = {}
    for name, argv in jobs.items():
        paths[name] = str(root / f"{name}.csv")
        rc = bwdelay_main(argv + ["--grid-scale", "0.5",
                                  "--out", paths[name]])
        assert rc == 0, name
    return paths


def test_criterion_13_four_figure_set(csv_set, tmp_path):
    figures = [
        FigureJob(kind="spectrum", inputs=(csv_set["fig2"],),
                  out=str(tmp_path / "fig2.png")),
        FigureJob(kind="ratio",
                  inputs=(csv_set["fig3_blue"], csv_set["fig3_green"]),
                  out=str(tmp_path / "fig3.png")),
        FigureJob(kind="ratio-pair", inputs=(csv_set["fig4"],),
                  out=str(tmp_path / "fig4.png")),
        FigureJob(kind="ratio-pair", inputs=(csv_set["fig5"],),
                  out=str(tmp_path / "fig5.png")),
    ]
    for job in figures:
        render(job)
        data = (tmp_path / job.out.rsplit("/", 1)[1]).read_bytes()
        assert data[:8] == PNG_MAGIC and len(data) > 5000

    # the model preset shares its config with the blue sweep, so the
    # overlay accepts that pairing and refuses the green one
    render(FigureJob(kind="model-overlay",
                     inputs=(csv_set["fig3_blue"], csv_set["model_p1"]),
                     out=str(tmp_path / "overlay.png")))
    assert (tmp_path / "overlay.png").exists()

    with pytest.raises(FigureInputError, match="fingerprint mismatch"):
        render(FigureJob(kind="model-overlay",
                         inputs=(csv_set["fig3_green"], csv_set["model_p1"]),
                         out=str(tmp_path / "bad.png")))
    assert not (tmp_path / "bad.png").exists()
    print("criterion 13: PASS - spectrum, ratio, and two exchange figures "
          "rendered from CLI CSVs; overlay accepts matching fingerprints "
          "and rejects mismatched ones")

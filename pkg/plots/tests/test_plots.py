import csv
import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

from seedalloc_plots import FigureError, FigureSpec, render, stacked_means
from seedalloc_plots.cli import main as cli_main
from seedalloc_plots.figures import load_result_rows, REGRET_COLUMNS

FIXTURE = Path(__file__).resolve().parent / "data" / "fixture.csv"


def test_one_image_per_group(tmp_path):
    spec = FigureSpec(csv_path=str(FIXTURE), kind="regret-stacked",
                      out_dir=str(tmp_path))
    written = render(spec)
    assert len(written) == 2  # two mean_demand groups in the fixture
    assert all(p.exists() and p.suffix == ".png" for p in written)
    assert len({p.name for p in written}) == 2


def test_rerender_overwrites_same_names(tmp_path):
    spec = FigureSpec(csv_path=str(FIXTURE), out_dir=str(tmp_path))
    first = {p.name for p in render(spec)}
    second = {p.name for p in render(spec)}
    assert first == second
    assert len(list(tmp_path.iterdir())) == len(first)


def test_stacked_means_match_csv():
    frame = load_result_rows(FIXTURE, REGRET_COLUMNS)
    table = stacked_means(frame)
    raw = pd.read_csv(FIXTURE)
    picked = raw[(raw["mean_demand"] == 0.2) & (raw["demand_supply"] == 0.8)
                 & (raw["algorithm"] == "bg")]
    row = table[(table["mean_demand"] == 0.2) & (table["demand_supply"] == 0.8)
                & (table["algorithm"] == "bg")].iloc[0]
    assert row["excessive_regret"] == pytest.approx(
        picked["excessive_regret"].mean(), abs=1e-12)
    assert row["unsatisfied_regret"] == pytest.approx(
        picked["unsatisfied_regret"].mean(), abs=1e-12)


def test_bar_segments_equal_means(tmp_path):
    import matplotlib
    matplotlib.use("Agg")
    from seedalloc_plots import figures

    frame = load_result_rows(FIXTURE, REGRET_COLUMNS)
    table = stacked_means(frame)
    group_key = ("fixture_graph", "uniform", 0.2)
    group = table[(table["dataset"] == group_key[0])
                  & (table["probability"] == group_key[1])
                  & (table["mean_demand"] == group_key[2])]
    heights = {}
    real_bar = figures.plt.Axes.bar

    def spy(ax, xs, values, bottom=None, **kwargs):
        heights.setdefault(kwargs.get("label"), []).append(list(values))
        return real_bar(ax, xs, values, bottom=bottom, **kwargs)

    figures.plt.Axes.bar = spy
    try:
        figures._render_regret_group(group, "t", tmp_path / "t.png", False)
    finally:
        figures.plt.Axes.bar = real_bar

    ratios = sorted(group["demand_supply"].unique())
    algorithms = sorted(group["algorithm"].unique())
    for panel, ratio in enumerate(ratios):
        for col, algorithm in enumerate(algorithms):
            row = group[(group["demand_supply"] == ratio)
                        & (group["algorithm"] == algorithm)].iloc[0]
            assert heights["excessive"][panel][col] == pytest.approx(
                row["excessive_regret"], abs=1e-12)
            assert heights["unsatisfied"][panel][col] == pytest.approx(
                row["unsatisfied_regret"], abs=1e-12)


def test_runtime_kind(tmp_path):
    spec = FigureSpec(csv_path=str(FIXTURE), kind="runtime",
                      out_dir=str(tmp_path), image_format="svg")
    written = render(spec)
    assert len(written) == 2
    assert all(p.suffix == ".svg" for p in written)


def test_cli_success_and_output_list(tmp_path, capsys):
    assert cli_main(["--csv", str(FIXTURE), "--kind", "regret-stacked",
                     "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 2


def test_cli_error_bars_flag(tmp_path):
    assert cli_main(["--csv", str(FIXTURE), "--kind", "regret-stacked",
                     "--out", str(tmp_path), "--error-bars"]) == 0


def test_empty_csv_fails(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert cli_main(["--csv", str(empty), "--out", str(tmp_path)]) == 2

    header_only = tmp_path / "header.csv"
    with open(FIXTURE) as fh:
        header_only.write_text(fh.readline())
    assert cli_main(["--csv", str(header_only), "--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_columns_fail(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    with open(bad, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "algorithm"])
        writer.writerow(["x", "bg"])
    assert cli_main(["--csv", str(bad), "--out", str(tmp_path)]) == 2
    assert "missing columns" in capsys.readouterr().err


def test_error_rows_are_dropped(tmp_path):
    frame = pd.read_csv(FIXTURE)
    frame["error"] = frame["error"].astype("string")
    frame.loc[frame.index[:2], "error"] = "boom"
    frame.loc[frame.index[:2], "excessive_regret"] = None
    doctored = tmp_path / "doctored.csv"
    frame.to_csv(doctored, index=False)
    spec = FigureSpec(csv_path=str(doctored), out_dir=str(tmp_path / "figs"))
    assert len(render(spec)) == 2


def test_bad_kind_rejected():
    with pytest.raises(FigureError):
        FigureSpec(csv_path="x", kind="pie")


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "seedalloc_plots", "--csv", str(FIXTURE),
         "--out", "/tmp/seedalloc_plot_smoke"],
        capture_output=True, text=True)
    assert proc.returncode == 0

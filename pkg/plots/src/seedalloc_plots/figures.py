"""Render experiment CSVs into paper-style figures.

Two figure kinds over the harness CSV schema:

* ``regret-stacked``: one image per (dataset, probability, mean_demand)
  group; inside, one panel per demand-supply ratio with one bar per
  algorithm, stacked into excessive and unsatisfied segments. Segment
  heights are plain means over repetitions, no normalization.
* ``runtime``: same grouping, mean runtime against the demand-supply
  ratio, one line per algorithm.

Rendering is read-only over the CSV and overwrites identically named
files on repeat runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

REGRET_STACKED = "regret-stacked"
RUNTIME = "runtime"
KINDS = (REGRET_STACKED, RUNTIME)

GROUP_KEYS = ["dataset", "probability", "mean_demand"]
REGRET_COLUMNS = GROUP_KEYS + [
    "demand_supply", "algorithm", "excessive_regret", "unsatisfied_regret"]
RUNTIME_COLUMNS = GROUP_KEYS + [
    "demand_supply", "algorithm", "runtime_seconds"]

EXCESSIVE_COLOR = "#c44e52"
UNSATISFIED_COLOR = "#4c72b0"


class FigureError(ValueError):
    """Raised for unusable input: missing columns or nothing to plot."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    kind: str = REGRET_STACKED
    out_dir: str = "figures"
    image_format: str = "png"
    group_keys: tuple = tuple(GROUP_KEYS)
    error_bars: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}")
        if self.image_format not in ("png", "svg"):
            raise FigureError(f"unsupported image format {self.image_format!r}")


def load_result_rows(csv_path, required) -> pd.DataFrame:
    frame = pd.read_csv(csv_path)
    missing = sorted(set(required) - set(frame.columns))
    if missing:
        raise FigureError(f"CSV is missing columns: {', '.join(missing)}")
    if "error" in frame.columns:
        frame = frame[frame["error"].isna() | (frame["error"] == "")]
    frame = frame.dropna(subset=[c for c in required if c in frame.columns])
    if frame.empty:
        raise FigureError("no usable rows after filtering")
    return frame


def stacked_means(frame: pd.DataFrame) -> pd.DataFrame:
    """Mean excessive/unsatisfied regret per
    (group keys, demand_supply, algorithm), averaged over repetitions."""
    keys = GROUP_KEYS + ["demand_supply", "algorithm"]
    grouped = frame.groupby(keys)
    out = grouped[["excessive_regret", "unsatisfied_regret"]].mean()
    sem = grouped["total_regret"].sem().fillna(0.0) \
        if "total_regret" in frame.columns else 0.0
    out["total_sem"] = sem
    return out.reset_index()


def runtime_means(frame: pd.DataFrame) -> pd.DataFrame:
    keys = GROUP_KEYS + ["demand_supply", "algorithm"]
    return frame.groupby(keys, as_index=False)[["runtime_seconds"]].mean()


def _slug(value) -> str:
    if isinstance(value, float):
        text = f"{value:g}".replace(".", "p")
    else:
        text = str(value)
    return "".join(ch if ch.isalnum() or ch in "p-" else "_" for ch in text)


def _group_name(kind: str, key: tuple, fmt: str) -> str:
    stem = "_".join(_slug(v) for v in key)
    return f"{kind.replace('-', '_')}_{stem}.{fmt}"


def _render_regret_group(group: pd.DataFrame, title: str, path: Path,
                         error_bars: bool) -> None:
    ratios = sorted(group["demand_supply"].unique())
    algorithms = sorted(group["algorithm"].unique())
    fig, axes = plt.subplots(1, len(ratios),
                             figsize=(2.6 * len(ratios) + 1.2, 3.4),
                             sharey=True, squeeze=False)
    for ax, ratio in zip(axes[0], ratios):
        panel = group[group["demand_supply"] == ratio] \
            .set_index("algorithm").reindex(algorithms)
        exc = panel["excessive_regret"].fillna(0.0).to_numpy()
        uns = panel["unsatisfied_regret"].fillna(0.0).to_numpy()
        xs = range(len(algorithms))
        ax.bar(xs, exc, color=EXCESSIVE_COLOR, label="excessive")
        kwargs = {}
        if error_bars and "total_sem" in panel:
            kwargs = dict(yerr=panel["total_sem"].fillna(0.0).to_numpy(),
                          capsize=3)
        ax.bar(xs, uns, bottom=exc, color=UNSATISFIED_COLOR,
               label="unsatisfied", **kwargs)
        ax.set_xticks(list(xs))
        ax.set_xticklabels(algorithms, rotation=45, ha="right")
        ax.set_title(f"demand/supply {ratio:g}")
    axes[0][0].set_ylabel("regret")
    axes[0][-1].legend(loc="upper right", fontsize="small")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _render_runtime_group(group: pd.DataFrame, title: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for algorithm, rows in group.groupby("algorithm"):
        rows = rows.sort_values("demand_supply")
        ax.plot(rows["demand_supply"], rows["runtime_seconds"],
                marker="o", label=algorithm)
    ax.set_xlabel("demand/supply ratio")
    ax.set_ylabel("runtime (s)")
    ax.legend(fontsize="small")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render(spec: FigureSpec) -> list[Path]:
    """Write one image per group; returns the written paths."""
    required = REGRET_COLUMNS if spec.kind == REGRET_STACKED else RUNTIME_COLUMNS
    frame = load_result_rows(spec.csv_path, required)
    table = stacked_means(frame) if spec.kind == REGRET_STACKED \
        else runtime_means(frame)
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    keys = list(spec.group_keys)
    for key, group in table.groupby(keys):
        if not isinstance(key, tuple):
            key = (key,)
        name = _group_name(spec.kind, key, spec.image_format)
        path = out_dir / name
        title = ", ".join(f"{k}={v}" for k, v in zip(keys, key))
        if spec.kind == REGRET_STACKED:
            _render_regret_group(group, title, path, spec.error_bars)
        else:
            _render_runtime_group(group, title, path)
        written.append(path)
    return written

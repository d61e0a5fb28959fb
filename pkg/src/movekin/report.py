"""Figure rendering for batch exports.

Every export subcommand writes a delimited file and, unless disabled, a
matching PNG next to it: line chart for a pair series, intensity heatmap
for the matrix, shaded spans for episodes, grouped bars for travel.
Rendering is headless (Agg); constants here are display choices only.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .model import INTERPOLATED, Dataset, TimeWindow, time_of
from .relatedness import PairEpisode, RelatednessMatrix, RelatednessSeries, TravelMetrics

ROLE_COLORS = {"predator": "#d95f02", "herbivore": "#7570b3", "other": "#666666"}


def _slot_times(dataset: Dataset, slots) -> list:
    return [time_of(int(s), dataset.grid) for s in slots]


def render_pair_series(dataset: Dataset, series: RelatednessSeries, path: str) -> None:
    values = series.values()
    slots = [s.slot for s in series.samples]
    times = _slot_times(dataset, slots)
    interp = [s.provenance.value == "some-interpolated" for s in series.samples]

    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(times, values, lw=0.8, color="#1b6ca8")
    mask = np.array(interp) & ~np.isnan(values)
    if mask.any():
        ax.plot(np.array(times)[mask], values[mask], ".", ms=2, color="#e08214",
                label="interpolated input")
        ax.legend(loc="lower right", fontsize=8)
    ax.set_ylabel("relatedness (m)")
    ax.set_title(f"pair {series.pair[0]} / {series.pair[1]}")
    ax.set_ylim(0, dataset.M * 1.02)
    fig.autofmt_xdate()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_matrix(matrix: RelatednessMatrix, path: str) -> None:
    ids = matrix.animals
    n = len(ids)
    grid = np.zeros((n, n))
    for a, i in zip(ids, range(n)):
        for b, j in zip(ids, range(n)):
            if i != j:
                grid[i, j] = matrix.intensity(a, b)
    fig, ax = plt.subplots(figsize=(0.35 * n + 2.5, 0.35 * n + 2))
    im = ax.imshow(grid, cmap="YlOrRd", vmin=0.0, vmax=1.0)
    ax.set_xticks(range(n), ids, rotation=90, fontsize=6)
    ax.set_yticks(range(n), ids, fontsize=6)
    fig.colorbar(im, ax=ax, label="mean relatedness / M")
    w = matrix.window
    ax.set_title(f"pairwise relatedness, slots {w.start_slot}-{w.end_slot}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_episodes(dataset: Dataset, series: RelatednessSeries,
                    episodes: list[PairEpisode], threshold: float, path: str) -> None:
    values = series.values()
    slots = np.array([s.slot for s in series.samples])
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(slots, values, lw=0.6, color="#888888")
    ax.axhline(threshold, color="#1b6ca8", ls="--", lw=0.8, label="threshold")
    for ep in episodes:
        ax.axvspan(ep.start_slot, ep.end_slot, color="#66c2a5", alpha=0.35)
    ax.set_xlabel("slot")
    ax.set_ylabel("relatedness (m)")
    ax.set_title(f"stable episodes {series.pair[0]} / {series.pair[1]} ({len(episodes)} found)")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_travel(dataset: Dataset, metrics: list[TravelMetrics], path: str) -> None:
    fig, ax = plt.subplots(figsize=(10, 0.3 * max(len(metrics), 4) + 1.5))
    ids = [m.animal for m in metrics]
    paths = [m.path_length for m in metrics]
    nets = [m.displacement for m in metrics]
    ypos = np.arange(len(ids))
    colors = [ROLE_COLORS[dataset.tracks[a].species.role.value] for a in ids]
    ax.barh(ypos - 0.2, paths, height=0.4, color=colors, label="path length")
    ax.barh(ypos + 0.2, nets, height=0.4, color=colors, alpha=0.45, label="displacement")
    ax.set_yticks(ypos, ids, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("meters")
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("travel over window")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_trace(dataset: Dataset, animal: str, window: TimeWindow,
                 runs: list[np.ndarray], path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 7))
    color = ROLE_COLORS[dataset.tracks[animal].species.role.value]
    for run in runs:
        ax.plot(run[:, 0], run[:, 1], lw=0.9, color=color)
    track = dataset.tracks[animal]
    lo, hi = window.start_slot, window.end_slot + 1
    interp = track.state[lo:hi] == INTERPOLATED
    ax.plot(track.x[lo:hi][interp], track.y[lo:hi][interp], ".", ms=3, color="#e08214")
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"{animal}, slots {window.start_slot}-{window.end_slot}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

"""Figures written next to the CLI's tabular output."""

from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure

POINT_CLASSES = ("m3", "m4", "m5", "m6")
_COLORS = ("#0072b2", "#999999", "#e69f00", "#cc79a7")


def plot_scaling(voxels, seconds, path, title="analyze runtime"):
    """Log-log runtime against voxel count, with a slope-1 guide through the first point."""
    voxels = np.asarray(voxels, dtype=float)
    seconds = np.asarray(seconds, dtype=float)
    fig = Figure(figsize=(5, 3.6))
    ax = fig.add_subplot()
    ax.loglog(voxels, seconds, "o-", color=_COLORS[0], label="measured")
    if len(voxels) and seconds[0] > 0:
        ax.loglog(voxels, seconds[0] * voxels / voxels[0], "--", color="0.5", label="linear")
    ax.set_xlabel("voxels")
    ax.set_ylabel("seconds")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    return path


def plot_classification(report, path):
    """Grouped bars of point-class counts for every boundary surface."""
    labels, counts = [], []
    for comp in report.components:
        for s in comp.surfaces:
            labels.append(f"c{comp.component_id}/s{s.id}\ng={s.genus}")
            counts.append([getattr(s.classification, k) for k in POINT_CLASSES])
    counts = np.asarray(counts, dtype=float).reshape(-1, len(POINT_CLASSES))

    fig = Figure(figsize=(max(4, 1.2 * len(labels) + 1.5), 3.6))
    ax = fig.add_subplot()
    x = np.arange(len(labels))
    width = 0.8 / len(POINT_CLASSES)
    for i, (name, color) in enumerate(zip(POINT_CLASSES, _COLORS)):
        ax.bar(x + (i - 1.5) * width, counts[:, i], width, label=name.upper(), color=color)
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("surface points")
    ax.legend(frameon=False, ncol=4, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    return path

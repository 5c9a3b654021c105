"""Figure rendering for CLI reports.

Core analysis stays render-free; this module turns EdaReport data and
confusion matrices into PNG files next to the delimited output. The Agg
backend keeps rendering headless and byte-stable for a fixed matplotlib
version; PNG metadata is pinned so reruns do not differ.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from ghalib import __version__

_META = {"Software": f"ghalib {__version__}"}


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="png", dpi=100, metadata=_META)
    plt.close(fig)
    return path


def render_distribution(report, path) -> Path:
    labels = [e["label"] for e in report.per_class]
    counts = [e["count"] for e in report.per_class]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(labels)), counts, color="#4878cf")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("records")
    ax.set_title(f"label distribution ({report.language})")
    fig.tight_layout()
    return _save(fig, Path(path))


def render_lengths(report, path) -> Path:
    entries = [e for e in report.per_class if not e["empty"]]
    labels = [e["label"] for e in entries]
    means = [e["mean_char_length"] for e in entries]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(labels)), means, color="#6acc65")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("mean characters")
    ax.set_title(f"mean text length ({report.language})")
    fig.tight_layout()
    return _save(fig, Path(path))


def render_word_counts(report, path) -> Path:
    entries = [e for e in report.per_class if not e["empty"]]
    labels = [e["label"] for e in entries]
    means = [e["mean_word_count"] for e in entries]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(labels)), means, color="#d65f5f")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("mean words")
    ax.set_title(f"mean word count ({report.language})")
    fig.tight_layout()
    return _save(fig, Path(path))


def render_confusion(cm, labels, path, title: str = "confusion") -> Path:
    grid = np.asarray(cm.counts, dtype=float)
    k = grid.shape[0]
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(grid, cmap="Blues")
    ax.set_xticks(range(k))
    ax.set_yticks(range(k))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_yticklabels(labels)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_title(title)
    threshold = grid.max() / 2 if grid.max() > 0 else 0.5
    for i in range(k):
        for j in range(k):
            color = "white" if grid[i, j] > threshold else "black"
            ax.text(j, i, str(int(grid[i, j])), ha="center", va="center", color=color)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    return _save(fig, Path(path))

"""Figures drawn from a corpus run, written next to the delimited output."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .corpus import CorpusRow  # noqa: E402

__all__ = ["write_figures", "FIGURE_NAMES"]

FIGURE_NAMES = ("diagram_profile.png", "f_polynomials.png", "fox_colorings.png")

# fixed metadata so repeated runs give identical files
_SAVE_KW = {"dpi": 100, "metadata": {"Software": None}}


def _diagram_profile(rows: Sequence[CorpusRow], path: Path) -> None:
    names = [r.name for r in rows]
    series = {
        "crossings": [r.crossings for r in rows],
        "diagram genus": [r.genus for r in rows],
        "odd writhe": [r.report.odd_writhe for r in rows],
    }
    fig, ax = plt.subplots(figsize=(max(6.0, 0.8 * len(rows) + 2), 4))
    width = 0.8 / len(series)
    for k, (label, values) in enumerate(series.items()):
        xs = [i + (k - 1) * width for i in range(len(rows))]
        ax.bar(xs, values, width=width, label=label)
    ax.axhline(0, color="black", linewidth=0.6)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("value")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def _f_polynomials(rows: Sequence[CorpusRow], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, max(3.0, 0.5 * len(rows) + 1)))
    for i, row in enumerate(rows):
        poly = row.report.f_polynomial
        if poly is None:
            continue
        for exp, coef in poly.terms.items():
            color = "tab:blue" if coef > 0 else "tab:red"
            ax.scatter([exp], [i], s=40 * abs(coef), color=color)
            if abs(coef) > 1:
                ax.annotate(str(coef), (exp, i), textcoords="offset points", xytext=(4, 4), fontsize=7)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([r.name for r in rows])
    ax.invert_yaxis()
    ax.set_xlabel("exponent of A (blue: positive coefficient, red: negative)")
    ax.grid(axis="x", linewidth=0.3)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def _fox_colorings(rows: Sequence[CorpusRow], path: Path) -> None:
    moduli = sorted({n for r in rows for n in r.report.fox_colorings})
    # colorings beyond the n constant ones, on a log scale
    data = [[math.log(r.report.fox_colorings.get(n, n) / n, n) if n in r.report.fox_colorings else 0.0
             for n in moduli] for r in rows]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(moduli) + 2), max(3.0, 0.4 * len(rows) + 1)))
    image = ax.imshow(data or [[0.0]], aspect="auto", cmap="viridis", vmin=0)
    ax.set_xticks(range(len(moduli)))
    ax.set_xticklabels([str(n) for n in moduli])
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([r.name for r in rows])
    ax.set_xlabel("modulus n")
    fig.colorbar(image, ax=ax, label="log_n(colorings / n)")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def write_figures(rows: Sequence[CorpusRow], directory: str | Path) -> list[Path]:
    """Render the corpus figures as PNG files and return their paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / name for name in FIGURE_NAMES]
    _diagram_profile(rows, paths[0])
    _f_polynomials(rows, paths[1])
    _fox_colorings(rows, paths[2])
    return paths

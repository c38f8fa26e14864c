"""Bar charts for law and soundness reports, written as PNG files."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def law_figure(reports, out_dir: Path) -> Path:
    """Instances (and violations) per law, one bar group per depth."""
    out_dir.mkdir(parents=True, exist_ok=True)
    names = list(reports[0].laws)
    fig, ax = plt.subplots(figsize=(10, 0.3 * len(names) + 1.5))
    height = 0.8 / len(reports)
    for i, rep in enumerate(reports):
        ys = [j + i * height for j in range(len(names))]
        ax.barh(ys, [rep.laws[n].instances for n in names], height=height, label=f"N={rep.depth}")
        bad = [rep.laws[n].violations for n in names]
        if any(bad):
            ax.barh(ys, bad, height=height, color="red")
    ax.set_yticks([j + 0.4 - height / 2 for j in range(len(names))])
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("instances checked")
    ax.legend(loc="lower right")
    fig.tight_layout()
    path = out_dir / "laws.png"
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def soundness_figure(report, out_dir: Path, stem: str = "model") -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    ok = Counter(e.kind for e in report.entries if e.ok)
    bad = Counter(e.kind for e in report.entries if not e.ok)
    kinds = sorted(set(ok) | set(bad))
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.bar(kinds, [ok[k] for k in kinds], label="agree")
    ax.bar(kinds, [bad[k] for k in kinds], bottom=[ok[k] for k in kinds], color="red", label="flagged")
    ax.set_ylabel("entries")
    ax.set_title(f"soundness at depth {report.depth}")
    ax.legend()
    fig.tight_layout()
    path = out_dir / f"{stem}.png"
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path

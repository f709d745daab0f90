"""PNG figures for training curves and evaluation reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 9,
    "font.family": "sans-serif",
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (6.0, 3.6),
    "savefig.dpi": 120,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)


def plot_training(records, path, tune_f1=None):
    """Objective per epoch, with tune-set F1 on a second axis when given."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        epochs = [r.epoch for r in records]
        ax.plot(epochs, [r.objective for r in records], marker="o", ms=3, color="tab:blue")
        ax.set_xlabel("epoch")
        ax.set_ylabel("objective", color="tab:blue")
        if tune_f1:
            ax2 = ax.twinx()
            ax2.plot(range(len(tune_f1)), tune_f1, marker="s", ms=3, color="tab:orange")
            ax2.set_ylabel("tune F1", color="tab:orange")
            ax2.set_ylim(0, 1.02)
            ax2.grid(False)
        _save(fig, path)


def plot_report(report, path):
    """Bar chart of a report's scalar components; a confusion heat map for boundaries."""
    with plt.rc_context(RC):
        confusion = report.components.get("confusion")
        if confusion is not None:
            fig, (ax, axm) = plt.subplots(1, 2, figsize=(8.0, 3.6))
        else:
            fig, ax = plt.subplots()
        keys = [k for k, v in report.components.items()
                if isinstance(v, float) and k not in ("hyp_len", "ref_len")]
        ax.bar(range(len(keys)), [report.components[k] for k in keys], color="tab:blue")
        ax.set_xticks(range(len(keys)))
        ax.set_xticklabels(keys, rotation=45, ha="right")
        ax.set_title(f"{report.metric} = {report.score:.4f}")
        if confusion is not None:
            from .corpus import BOUNDARY_LABELS

            axm.imshow(confusion, cmap="Blues")
            axm.grid(False)
            axm.set_xticks(range(len(BOUNDARY_LABELS)))
            axm.set_yticks(range(len(BOUNDARY_LABELS)))
            axm.set_xticklabels(BOUNDARY_LABELS, rotation=45, ha="right")
            axm.set_yticklabels(BOUNDARY_LABELS)
            axm.set_xlabel("predicted")
            axm.set_ylabel("gold")
            for i, row in enumerate(confusion):
                for j, v in enumerate(row):
                    axm.text(j, i, str(v), ha="center", va="center", fontsize=7)
        _save(fig, path)

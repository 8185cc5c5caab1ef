"""Report rendering: delimited score tables plus matplotlib figures."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import LEVELS


def tree_score_table(score):
    """Tab-separated table mirroring the per-level correctness layout."""
    lines = ["level\tprecision\trecall\tf_score"]
    for level, prf in score.levels:
        lines.append(
            "%s\t%.4f\t%.4f\t%.4f"
            % (level, float(prf.precision), float(prf.recall), float(prf.f_score))
        )
    return "\n".join(lines) + "\n"


def rouge_table(scores):
    """``scores``: list of (name, RougeScore)."""
    lines = ["measure\tprecision\trecall\tf_score"]
    for name, s in scores:
        lines.append(
            "%s\t%.4f\t%.4f\t%.4f"
            % (name, float(s.precision), float(s.recall), float(s.f_score))
        )
    return "\n".join(lines) + "\n"


def render_tree_score_figure(score, path):
    labels = [level for level, _ in score.levels]
    f_values = [float(prf.f_score) for _, prf in score.levels]
    p_values = [float(prf.precision) for _, prf in score.levels]
    r_values = [float(prf.recall) for _, prf in score.levels]
    x = range(len(labels))
    width = 0.27
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([i - width for i in x], p_values, width, label="precision")
    ax.bar(list(x), r_values, width, label="recall")
    ax.bar([i + width for i in x], f_values, width, label="F-score")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.set_title("Tree correctness by level")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_rouge_figure(scores, path):
    labels = [name for name, _ in scores]
    f_values = [float(s.f_score) for _, s in scores]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(labels, f_values, color="#4878d0")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("F-score")
    ax.set_title("ROUGE scores")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

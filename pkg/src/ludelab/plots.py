"""Figure rendering for reports: quality metric bars, distance-matrix
heatmaps, reconstruction rankings and phylogenetic tree sketches.
Figures are written next to the delimited outputs by the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_PNG_METADATA = {"Software": "ludelab"}


def save_figure(fig, path) -> None:
    kwargs = {"dpi": 100, "bbox_inches": "tight"}
    if str(path).lower().endswith(".png"):
        kwargs["metadata"] = _PNG_METADATA
    fig.savefig(path, **kwargs)
    plt.close(fig)


def quality_figure(report):
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    names = ["cap rate", "advantage", "draw rate", "depth", "score"]
    values = [report.length_cap_rate, report.advantage, report.draw_rate,
              report.depth_proxy, report.score]
    bars = ax.bar(names, values, color=["#888", "#4878d0", "#d65f5f", "#6acc64", "#222"])
    for bar, v in zip(bars, values):
        ax.text(bar.get_x() + bar.get_width() / 2, v + 0.02, f"{v:.2f}",
                ha="center", fontsize=8)
    ax.set_ylim(0, 1.15)
    ax.axhline(1.0, color="#ccc", lw=0.5)
    flags = ", ".join(report.flags) if report.flags else "none"
    ax.set_title(f"{report.game_name}: mean length {report.mean_length:.1f} plies; "
                 f"flags: {flags}", fontsize=9)
    return fig


def heatmap_figure(matrix):
    n = len(matrix.labels)
    fig, ax = plt.subplots(figsize=(0.6 * n + 2.4, 0.6 * n + 1.8))
    im = ax.imshow(matrix.d, cmap="viridis")
    ax.set_xticks(range(n), matrix.labels, rotation=60, ha="right", fontsize=7)
    ax.set_yticks(range(n), matrix.labels, fontsize=7)
    fig.colorbar(im, ax=ax, shrink=0.8, label="ludemic distance")
    ax.set_title("pairwise weighted edit distance", fontsize=9)
    return fig


def recon_figure(ranked):
    fig, ax = plt.subplots(figsize=(6.4, 0.5 * len(ranked) + 1.6))
    names = [c.description.name for c in ranked]
    scores = [c.score for c in ranked]
    ax.barh(range(len(ranked)), scores, color="#4878d0")
    ax.set_yticks(range(len(ranked)),
                  [f"#{i + 1} {n}" for i, n in enumerate(names)], fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("quality x authenticity score")
    ax.set_title("reconstruction candidates", fontsize=9)
    return fig


def tree_figure(tree):
    """Simple left-to-right cladogram of an unrooted tree, drawn from
    the same deterministic rooting Newick export uses."""
    root = max(tree.adj, key=lambda n: (tree.degree(n), -n))
    ypos: dict = {}
    xpos: dict = {root: 0.0}
    next_y = [0.0]

    def assign(node, parent, x):
        kids = [(y, ln) for y, ln in tree.adj[node] if y != parent]
        kids.sort(key=lambda e: tree._subtree_min_leaf(e[0], node))
        if not kids:
            ypos[node] = next_y[0]
            next_y[0] += 1.0
            return
        for y, ln in kids:
            xpos[y] = x + max(ln, 1e-3)
            assign(y, node, xpos[y])
        ypos[node] = sum(ypos[y] for y, _ in kids) / len(kids)

    assign(root, None, 0.0)
    fig, ax = plt.subplots(figsize=(7.2, 0.45 * tree.leaf_count + 1.2))
    for a, b, _ in tree.edges():
        hi, lo = (a, b) if xpos[a] < xpos[b] else (b, a)
        ax.plot([xpos[hi], xpos[hi], xpos[lo]], [ypos[hi], ypos[lo], ypos[lo]],
                color="#333", lw=1.0)
    for node, name in tree.names.items():
        ax.text(xpos[node] + 0.02, ypos[node], name, va="center", fontsize=8)
    ax.set_xlabel("branch length")
    ax.set_yticks([])
    ax.set_title("neighbor-joining tree", fontsize=9)
    return fig

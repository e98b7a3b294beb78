"""Ludemic distance: weighted ordered-tree edit distance between
canonical game descriptions, and corpus distance matrices.

Canonicalization fixes argument order, so the ordered tree edit
distance (Zhang-Shasha dynamic program) is well-defined and polynomial.
Costs are driven by a WeightTable keyed on ludeme category; integer
leaves live in the pseudo-category "Num" and identifier leaves in
"Term".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DuplicateName
from .sexpr import LudemeNode
from .validate import GameDescription, canonicalize

NUM_CAT = "Num"
TERM_CAT = "Term"
DEFAULT_INDEL = {"Board": 2.0, "EndRule": 2.0}


@dataclass(frozen=True)
class WeightTable:
    indel: dict = field(default_factory=dict)  # category -> cost; others default
    default_indel: float = 1.0
    relabel_same: float = 1.0
    relabel_cross: float = 2.0
    numeric_edit: float = 1.0

    @classmethod
    def default(cls) -> "WeightTable":
        return cls(indel=dict(DEFAULT_INDEL))

    @classmethod
    def unit(cls) -> "WeightTable":
        return cls()

    @classmethod
    def from_json(cls, text: str) -> "WeightTable":
        doc = json.loads(text)
        return cls(
            indel={k: float(v) for k, v in doc.get("indel", {}).items()},
            default_indel=float(doc.get("default_indel", 1.0)),
            relabel_same=float(doc.get("relabel_same", 1.0)),
            relabel_cross=float(doc.get("relabel_cross", 2.0)),
            numeric_edit=float(doc.get("numeric_edit", 1.0)),
        )

    def scaled(self, k: float) -> "WeightTable":
        return WeightTable(
            indel={c: v * k for c, v in self.indel.items()},
            default_indel=self.default_indel * k,
            relabel_same=self.relabel_same * k,
            relabel_cross=self.relabel_cross * k,
            numeric_edit=self.numeric_edit * k,
        )

    def cost_indel(self, label) -> float:
        return self.indel.get(label[0], self.default_indel)

    def cost_relabel(self, a, b) -> float:
        if a == b:
            return 0.0
        if a[0] == NUM_CAT and b[0] == NUM_CAT:
            return self.numeric_edit
        if a[0] == b[0]:
            return self.relabel_same
        return self.relabel_cross


def description_label_tree(gd: GameDescription):
    """Convert a canonical description into a (label, children) tree.

    Labels are (category, token) pairs: ludeme nodes carry their schema
    category and keyword, integer leaves ("Num", value), identifiers and
    flags ("Term", text).
    """
    lib = gd.library

    def conv(node):
        if isinstance(node, LudemeNode):
            cat = lib[node.keyword].category.value
            return ((cat, node.keyword), [conv(a) for a in node.args])
        if isinstance(node, int):
            return ((NUM_CAT, node), [])
        return ((TERM_CAT, node), [])

    return conv(canonicalize(gd).root)


# --- Zhang-Shasha ordered tree edit distance ---------------------------------------

class _Annotated:
    def __init__(self, tree):
        self.labels = []
        self.lmld = []  # leftmost leaf descendant, postorder indexed

        def walk(t):
            label, children = t
            child_lmlds = [walk(c) for c in children]
            idx = len(self.labels)
            self.labels.append(label)
            lm = child_lmlds[0] if child_lmlds else idx
            self.lmld.append(lm)
            return lm

        walk(tree)
        n = len(self.labels)
        self.keyroots = [i for i in range(n)
                         if i == n - 1 or not any(
                             self.lmld[j] == self.lmld[i] for j in range(i + 1, n))]


def tree_edit_distance(t1, t2, w: WeightTable) -> float:
    """Ordered tree edit distance on (label, children) trees."""
    a, b = _Annotated(t1), _Annotated(t2)
    n, m = len(a.labels), len(b.labels)
    td = [[0.0] * m for _ in range(n)]

    for i in a.keyroots:
        for j in b.keyroots:
            _treedist(a, b, i, j, td, w)
    return td[n - 1][m - 1]


def _treedist(a, b, i, j, td, w):
    li, lj = a.lmld[i], b.lmld[j]
    ni, nj = i - li + 2, j - lj + 2
    fd = [[0.0] * nj for _ in range(ni)]
    for x in range(1, ni):
        fd[x][0] = fd[x - 1][0] + w.cost_indel(a.labels[li + x - 1])
    for y in range(1, nj):
        fd[0][y] = fd[0][y - 1] + w.cost_indel(b.labels[lj + y - 1])
    for x in range(1, ni):
        for y in range(1, nj):
            u, v = li + x - 1, lj + y - 1
            dcost = fd[x - 1][y] + w.cost_indel(a.labels[u])
            icost = fd[x][y - 1] + w.cost_indel(b.labels[v])
            if a.lmld[u] == li and b.lmld[v] == lj:
                rcost = fd[x - 1][y - 1] + w.cost_relabel(a.labels[u], b.labels[v])
                best = min(dcost, icost, rcost)
                td[u][v] = best
            else:
                x0, y0 = a.lmld[u] - li, b.lmld[v] - lj
                best = min(dcost, icost, fd[x0][y0] + td[u][v])
            fd[x][y] = best


def wed(a: GameDescription, b: GameDescription,
        w: WeightTable | None = None) -> float:
    """Weighted edit distance between two game descriptions (both are
    canonicalized first)."""
    w = w or WeightTable.default()
    return tree_edit_distance(description_label_tree(a), description_label_tree(b), w)


# --- distance matrices ---------------------------------------------------------------

@dataclass
class DistanceMatrix:
    labels: list
    d: list  # row-major square matrix

    def value(self, a: str, b: str) -> float:
        return self.d[self.labels.index(a)][self.labels.index(b)]

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.labels)]
        for name, row in zip(self.labels, self.d):
            lines.append(name + "," + ",".join("%.10g" % v for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "DistanceMatrix":
        rows = [line.split(",") for line in text.strip().splitlines()]
        labels = rows[0][1:]
        d = [[float(v) for v in row[1:]] for row in rows[1:]]
        return cls(labels, d)


def distance_matrix(corpus, w: WeightTable | None = None) -> DistanceMatrix:
    """Pairwise weighted edit distance over named game descriptions."""
    w = w or WeightTable.default()
    names = [gd.name for gd in corpus]
    if len(names) != len(set(names)):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise DuplicateName(f"duplicate game names: {', '.join(dupes)}")
    if len(corpus) < 2:
        raise ValueError("need at least two games")
    trees = [description_label_tree(gd) for gd in corpus]
    n = len(trees)
    d = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = tree_edit_distance(trees[i], trees[j], w)
            d[i][j] = d[j][i] = v
    return DistanceMatrix(names, d)

"""Phylogenetics over game distance matrices: neighbor-joining trees,
Fitch parsimony ancestral reconstruction, and date-constrained
horizontal influence networks.  Tree and network exports are
byte-stable given identical inputs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .errors import MissingDate, MissingLeafTrait, TooFewTaxa
from .distance import DistanceMatrix


@dataclass
class PhyloTree:
    """Unrooted tree: adjacency with branch lengths; leaves carry names."""

    names: dict = field(default_factory=dict)      # node id -> leaf name
    adj: dict = field(default_factory=dict)        # node id -> list[(node, length)]

    def add_node(self, name=None) -> int:
        nid = len(self.adj)
        self.adj[nid] = []
        if name is not None:
            self.names[nid] = name
        return nid

    def add_edge(self, a: int, b: int, length: float):
        self.adj[a].append((b, length))
        self.adj[b].append((a, length))

    @property
    def leaf_count(self) -> int:
        return len(self.names)

    def leaves(self) -> list:
        return sorted(self.names, key=lambda n: self.names[n])

    def edges(self) -> list:
        out = []
        for a, nbrs in self.adj.items():
            for b, ln in nbrs:
                if a < b:
                    out.append((a, b, ln))
        return sorted(out)

    def degree(self, node: int) -> int:
        return len(self.adj[node])

    def splits(self) -> set:
        """Nontrivial leaf bipartitions induced by internal edges
        (topology fingerprint, independent of branch lengths)."""
        all_leaves = frozenset(self.names.values())
        out = set()
        for a, b, _ in self.edges():
            side = frozenset(self.names[x] for x in self._component(a, without=b)
                             if x in self.names)
            if 1 < len(side) < len(all_leaves) - 1:
                out.add(min(side, all_leaves - side, key=sorted))
        return out

    def _component(self, start: int, without: int) -> set:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y, _ in self.adj[x]:
                if y != without and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def _subtree_min_leaf(self, node: int, parent: int) -> str:
        if node in self.names:
            return self.names[node]
        return min(self._subtree_min_leaf(y, node)
                   for y, _ in self.adj[node] if y != parent)

    def to_newick(self) -> str:
        """Deterministic Newick with branch lengths, rooted for writing
        at the highest-degree node (children ordered by min leaf name)."""
        root = max(self.adj, key=lambda n: (self.degree(n), -n))

        def render(node, parent):
            kids = [(y, ln) for y, ln in self.adj[node] if y != parent]
            if not kids:
                return self.names[node]
            kids.sort(key=lambda e: self._subtree_min_leaf(e[0], node))
            inner = ",".join(f"{render(y, node)}:{ln:.6g}" for y, ln in kids)
            return f"({inner})"

        return render(root, None) + ";"


def neighbor_joining(m: DistanceMatrix) -> PhyloTree:
    """Standard neighbor joining (Q-criterion agglomeration) with
    deterministic tie-breaking by lowest label pair.  Negative branch
    lengths are clamped to zero with a warning."""
    n = len(m.labels)
    if n < 3:
        raise TooFewTaxa("neighbor joining needs at least 3 taxa")
    tree = PhyloTree()
    active = []          # node ids
    tie_label = {}       # node id -> min leaf name under it
    for name in m.labels:
        nid = tree.add_node(name)
        active.append(nid)
        tie_label[nid] = name
    d = {(a, b): m.d[i][j]
         for i, a in enumerate(active) for j, b in enumerate(active)}

    def clamp(x):
        if x < 0:
            warnings.warn(f"negative NJ branch length {x:.6g} clamped to 0",
                          stacklevel=3)
            return 0.0
        return x

    while len(active) > 3:
        r = {a: sum(d[(a, b)] for b in active if b != a) for a in active}
        k = len(active)
        best = None
        for ia in range(k):
            for ib in range(ia + 1, k):
                a, b = active[ia], active[ib]
                q = (k - 2) * d[(a, b)] - r[a] - r[b]
                tie = tuple(sorted((tie_label[a], tie_label[b])))
                if best is None or (q, tie) < (best[0], best[1]):
                    best = (q, tie, a, b)
        _, _, a, b = best
        la = clamp(0.5 * d[(a, b)] + (r[a] - r[b]) / (2 * (k - 2)))
        lb = clamp(d[(a, b)] - (0.5 * d[(a, b)] + (r[a] - r[b]) / (2 * (k - 2))))
        u = tree.add_node()
        tree.add_edge(u, a, la)
        tree.add_edge(u, b, lb)
        tie_label[u] = min(tie_label[a], tie_label[b])
        for c in active:
            if c not in (a, b):
                d[(u, c)] = d[(c, u)] = 0.5 * (d[(a, c)] + d[(b, c)] - d[(a, b)])
        active = [c for c in active if c not in (a, b)] + [u]

    a, b, c = sorted(active, key=lambda x: tie_label[x])
    u = tree.add_node()
    tree.add_edge(u, a, clamp(0.5 * (d[(a, b)] + d[(a, c)] - d[(b, c)])))
    tree.add_edge(u, b, clamp(0.5 * (d[(a, b)] + d[(b, c)] - d[(a, c)])))
    tree.add_edge(u, c, clamp(0.5 * (d[(a, c)] + d[(b, c)] - d[(a, b)])))
    return tree


# --- rooting and Fitch parsimony -----------------------------------------------------

def _leaf_distances(tree: PhyloTree, start: int) -> dict:
    dist = {start: 0.0}
    stack = [start]
    while stack:
        x = stack.pop()
        for y, ln in tree.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + ln
                stack.append(y)
    return dist


def midpoint_edge(tree: PhyloTree):
    """Edge containing the midpoint of the longest leaf-to-leaf path,
    as (u, v, offset from u); ties resolved lexicographically."""
    leaves = tree.leaves()
    best = None
    for a in leaves:
        dist = _leaf_distances(tree, a)
        for b in leaves:
            if tree.names[a] < tree.names[b]:
                key = (-dist[b], tree.names[a], tree.names[b])
                if best is None or key < best[0]:
                    best = (key, a, b)
    _, a, b = best
    # walk the a..b path to the halfway point
    parent = {a: None}
    stack = [a]
    while stack:
        x = stack.pop()
        for y, ln in tree.adj[x]:
            if y not in parent:
                parent[y] = (x, ln)
                stack.append(y)
    path = []
    x = b
    while parent[x] is not None:
        px, ln = parent[x]
        path.append((px, x, ln))
        x = px
    path.reverse()
    total = sum(ln for _, _, ln in path)
    target = total / 2.0
    acc = 0.0
    for u, v, ln in path:
        if acc + ln >= target or (u, v, ln) == path[-1]:
            return (u, v, target - acc)
        acc += ln
    return path[-1][0], path[-1][1], path[-1][2]


def rooted_children(tree: PhyloTree, edge) -> tuple:
    """Root the tree on an edge; returns (root_id, children dict).  The
    root is virtual (-1) with the edge's两 endpoints as children."""
    u, v = edge[0], edge[1]
    children: dict = {-1: [u, v]}

    def build(node, parent):
        kids = [y for y, _ in tree.adj[node]
                if y != parent and not (node in (u, v) and y in (u, v))]
        children[node] = kids
        for y in kids:
            build(y, node)

    build(u, v)
    build(v, u)
    return -1, children


def fitch_ancestral(tree: PhyloTree, trait: dict, edge=None):
    """Two-pass Fitch parsimony for a binary trait given per-leaf values.

    Returns (cost, state_sets) where state_sets maps node id (and -1 for
    the virtual root) to the candidate state set.  `edge` selects the
    rooting edge; default is the midpoint edge.
    """
    for node, name in tree.names.items():
        if name not in trait:
            raise MissingLeafTrait(f"no trait value for leaf {name!r}")
    if edge is None:
        edge = midpoint_edge(tree)
    root, children = rooted_children(tree, edge)
    cost = 0
    sets: dict = {}
    order = []
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        stack.extend(children[x])
    for x in reversed(order):
        kids = children[x]
        if not kids:
            sets[x] = frozenset([bool(trait[tree.names[x]])])
            continue
        inter = None
        union = frozenset()
        for y in kids:
            inter = sets[y] if inter is None else (inter & sets[y])
            union |= sets[y]
        if inter:
            sets[x] = inter
        else:
            sets[x] = union
            cost += 1
    return cost, sets


# --- horizontal influence networks ----------------------------------------------------

@dataclass
class InfluenceNetwork:
    nodes: list                      # game names, matrix order
    dates: dict                      # name -> earliest date
    edges: list                      # (src, dst, weight), deterministic order

    def to_dot(self) -> str:
        lines = ["digraph influence {"]
        for name in self.nodes:
            lines.append(f'    "{name}" [label="{name}\\n{self.dates[name]}"];')
        for src, dst, wgt in self.edges:
            lines.append(f'    "{src}" -> "{dst}" [weight="{wgt:.6g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def influence_network(dates: dict, m: DistanceMatrix,
                      threshold: float) -> InfluenceNetwork:
    """Edge old->new wherever the older game is within `threshold`
    ludemic distance of the newer one; weight 1 - d/threshold."""
    for name in m.labels:
        if name not in dates:
            raise MissingDate(f"no earliest date for {name!r}")
    edges = []
    if threshold > 0:
        for i, a in enumerate(m.labels):
            for j, b in enumerate(m.labels):
                if i == j or not dates[a] < dates[b]:
                    continue
                d = m.d[i][j]
                if d < threshold:
                    edges.append((a, b, 1.0 - d / threshold))
    edges.sort()
    return InfluenceNetwork(list(m.labels), {n: dates[n] for n in m.labels}, edges)

"""Board graphs: cells, labeled adjacency, straight-line rays, named
regions, layout coordinates and the board's symmetry group.

Cell indexing is documented and stable so `.lud` cell references mean
the same thing everywhere: row-major for square/rect and rhombus,
axial spiral (centre first, then rings) for hex, rim-then-hub for
wheel, declaration order for explicit graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import MalformedGraph, SizeOutOfRange, TooLargeForExhaustive
from .sexpr import LudemeNode

MAX_CELLS = 4096
EXHAUSTIVE_LIMIT = 64

SQUARE_DIRS = {
    "N": (0, -1), "NE": (1, -1), "E": (1, 0), "SE": (1, 1),
    "S": (0, 1), "SW": (-1, 1), "W": (-1, 0), "NW": (-1, -1),
}
SQUARE_ORTH = ("N", "E", "S", "W")
SQUARE_DIAG = ("NE", "SE", "SW", "NW")

HEX_DIRS = {
    "E": (1, 0), "NE": (1, -1), "NW": (0, -1),
    "W": (-1, 0), "SW": (-1, 1), "SE": (0, 1),
}

SQRT3_2 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class Ray:
    """Maximal straight run of cells; cyclic rays wrap (wheel rim)."""

    cells: tuple[int, ...]
    family: str  # "orthogonal" | "diagonal"
    cyclic: bool = False


@dataclass
class BoardGraph:
    kind: str
    cell_count: int
    adjacency: tuple[tuple[int, ...], ...]            # unlabeled neighbor lists
    labeled: tuple[tuple[tuple[int, str], ...], ...]  # (neighbor, label) pairs
    direction_labels: tuple[str, ...]
    rays: tuple[Ray, ...]
    regions: dict[str, frozenset]
    layout: tuple[tuple[float, float], ...]
    symmetries: tuple[tuple[int, ...], ...]           # known group, identity first
    label_perms: tuple[dict, ...]                     # aligned with symmetries
    _walk: dict = field(default_factory=dict, repr=False)
    _autos: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        walk = {}
        for c, pairs in enumerate(self.labeled):
            seen = {}
            for nb, lab in pairs:
                seen[lab] = nb if lab not in seen else None  # ambiguous -> None
            for lab, nb in seen.items():
                if nb is not None:
                    walk[(c, lab)] = nb
        self._walk = walk

    def step(self, cell: int, label: str):
        """Unique neighbor along a direction label, or None."""
        return self._walk.get((cell, label))

    def degree(self, cell: int) -> int:
        return len(self.adjacency[cell])

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def ray_families(self) -> set:
        return {r.family for r in self.rays}

    def rays_for(self, dirs: str) -> list[Ray]:
        if dirs == "Any":
            return list(self.rays)
        want = "orthogonal" if dirs == "Orthogonal" else "diagonal"
        return [r for r in self.rays if r.family == want]

    def capture_steps(self, family: str) -> dict:
        """cell -> list of (next, beyond) straight continuations."""
        out: dict[int, list] = {c: [] for c in range(self.cell_count)}
        for ray in self.rays:
            if family != "Any":
                want = "orthogonal" if family == "Orthogonal" else "diagonal"
                if ray.family != want:
                    continue
            cells = ray.cells
            n = len(cells)
            for i, c in enumerate(cells):
                for d in (1, -1):
                    if ray.cyclic:
                        out[c].append((cells[(i + d) % n], cells[(i + 2 * d) % n]))
                    else:
                        j, k = i + d, i + 2 * d
                        if 0 <= j < n and 0 <= k < n:
                            out[c].append((cells[j], cells[k]))
        return out


def _check_size(cells: int):
    if cells < 1 or cells > MAX_CELLS:
        raise SizeOutOfRange(f"board has {cells} cells (allowed 1..{MAX_CELLS})")


def _from_grid(kind, coords, dirs, orth_labels, diag_labels, use_diag,
               transforms, regions, layout):
    """Shared construction for square/rect/hex/rhombus boards."""
    index = {xy: i for i, xy in enumerate(coords)}
    labels = tuple(orth_labels) + (tuple(diag_labels) if use_diag else ())
    labeled = []
    for xy in coords:
        pairs = []
        for lab in labels:
            dx, dy = dirs[lab]
            nb = index.get((xy[0] + dx, xy[1] + dy))
            if nb is not None:
                pairs.append((nb, lab))
        labeled.append(tuple(pairs))
    adjacency = tuple(tuple(nb for nb, _ in pairs) for pairs in labeled)

    rays = []
    ray_dirs = [(lab, "orthogonal") for lab in _ray_axes(orth_labels)]
    if use_diag:
        ray_dirs += [(lab, "diagonal") for lab in _ray_axes(diag_labels)]
    for lab, family in ray_dirs:
        dx, dy = dirs[lab]
        starts = [xy for xy in coords if (xy[0] - dx, xy[1] - dy) not in index]
        for sx, sy in starts:
            run = []
            x, y = sx, sy
            while (x, y) in index:
                run.append(index[(x, y)])
                x, y = x + dx, y + dy
            if len(run) >= 1:
                rays.append(Ray(tuple(run), family))

    perms, label_perms = [], []
    for lin, mapping in transforms:
        perm = tuple(index[mapping(xy)] for xy in coords)
        lp = {}
        for lab in labels:
            v = dirs[lab]
            w = lin(v)
            target = next((l2 for l2, v2 in dirs.items() if v2 == w and l2 in labels), None)
            if target is None:
                break
            lp[lab] = target
        else:
            perms.append(perm)
            label_perms.append(lp)
            continue
        perms.append(perm)
        label_perms.append({})
    region_map = {name: frozenset(index[xy] for xy in cells if xy in index)
                  for name, cells in regions.items()}
    region_map["all"] = frozenset(range(len(coords)))
    return BoardGraph(
        kind=kind, cell_count=len(coords), adjacency=adjacency,
        labeled=tuple(labeled), direction_labels=labels, rays=tuple(rays),
        regions=region_map, layout=tuple(layout(xy) for xy in coords),
        symmetries=tuple(perms), label_perms=tuple(label_perms),
    )


def _ray_axes(labels):
    """Keep one direction per axis (E not W, S not N, ...)."""
    axis_reps = {"E", "S", "SE", "NE"}
    return [lab for lab in labels if lab in axis_reps]


def _grid_transforms(w, h):
    """Cell maps + linear parts for the rectangle symmetry group."""
    def rot180(c_r):
        c, r = c_r
        return (w - 1 - c, h - 1 - r)

    def flip_h(c_r):
        c, r = c_r
        return (w - 1 - c, r)

    def flip_v(c_r):
        c, r = c_r
        return (c, h - 1 - r)

    out = [
        (lambda v: v, lambda xy: xy),
        (lambda v: (-v[0], -v[1]), rot180),
        (lambda v: (-v[0], v[1]), flip_h),
        (lambda v: (v[0], -v[1]), flip_v),
    ]
    if w == h:
        def rot90(c_r):
            c, r = c_r
            return (w - 1 - r, c)

        def rot270(c_r):
            c, r = c_r
            return (r, h - 1 - c)

        def diag(c_r):
            return (c_r[1], c_r[0])

        def anti(c_r):
            c, r = c_r
            return (h - 1 - r, w - 1 - c)

        out += [
            (lambda v: (-v[1], v[0]), rot90),
            (lambda v: (v[1], -v[0]), rot270),
            (lambda v: (v[1], v[0]), diag),
            (lambda v: (-v[1], -v[0]), anti),
        ]
    return out


def build_square(n: int, diagonals: bool) -> BoardGraph:
    return build_rect(n, n, diagonals)


def build_rect(w: int, h: int, diagonals: bool) -> BoardGraph:
    if w < 1 or h < 1:
        raise SizeOutOfRange(f"rect {w}x{h}")
    _check_size(w * h)
    coords = [(c, r) for r in range(h) for c in range(w)]
    regions = {
        "N": [(c, 0) for c in range(w)],
        "S": [(c, h - 1) for c in range(w)],
        "W": [(0, r) for r in range(h)],
        "E": [(w - 1, r) for r in range(h)],
    }
    return _from_grid(
        "square" if w == h else "rect", coords, SQUARE_DIRS,
        SQUARE_ORTH, SQUARE_DIAG, diagonals,
        _grid_transforms(w, h), regions, lambda xy: (float(xy[0]), float(xy[1])))


def _hex_transforms(recenter):
    """D6 in axial coordinates around the origin."""
    def rot(v):
        return (-v[1], v[0] + v[1])

    def mirror(v):
        return (v[1], v[0])

    lins = []
    cur = lambda v: v
    for _ in range(6):
        lins.append(cur)
        prev = cur
        cur = (lambda f: (lambda v: rot(f(v))))(prev)
    lins += [(lambda f: (lambda v: mirror(f(v))))(f) for f in list(lins)]
    return [(lin, (lambda lin_: lambda xy: recenter(lin_(xy)))(lin)) for lin in lins]


def build_hex(n: int) -> BoardGraph:
    """Hexagon of side n, axial-spiral indexing (centre is cell 0)."""
    if n < 1:
        raise SizeOutOfRange(f"hex {n}")
    coords = [(0, 0)]
    walk_dirs = [HEX_DIRS[d] for d in ("SE", "SW", "W", "NW", "NE", "E")]
    for k in range(1, n):
        q, r = k, -k
        for dq, dr in walk_dirs:
            for _ in range(k):
                coords.append((q, r))
                q, r = q + dq, r + dr
    _check_size(len(coords))
    m = n - 1
    regions = {
        "N": [(q, -m) for q in range(0, m + 1)],
        "S": [(q, m) for q in range(-m, 1)],
        "W": [(-m, r) for r in range(0, m + 1)],
        "E": [(m, r) for r in range(-m, 1)],
    }
    return _from_grid(
        "hex", coords, HEX_DIRS, tuple(HEX_DIRS), (), False,
        _hex_transforms(lambda xy: xy), regions,
        lambda xy: (xy[0] + xy[1] / 2.0, xy[1] * SQRT3_2))


def build_rhombus(n: int) -> BoardGraph:
    """n x n rhombus with hexagonal adjacency (the classic Hex board)."""
    if n < 1:
        raise SizeOutOfRange(f"rhombus {n}")
    _check_size(n * n)
    coords = [(q, r) for r in range(n) for q in range(n)]
    m = n - 1

    def rot180(xy):
        return (m - xy[0], m - xy[1])

    def transpose(xy):
        return (xy[1], xy[0])

    transforms = [
        (lambda v: v, lambda xy: xy),
        (lambda v: (-v[0], -v[1]), rot180),
        (lambda v: (v[1], v[0]), transpose),
        (lambda v: (-v[1], -v[0]), lambda xy: rot180(transpose(xy))),
    ]
    regions = {
        "N": [(q, 0) for q in range(n)],
        "S": [(q, m) for q in range(n)],
        "W": [(0, r) for r in range(n)],
        "E": [(m, r) for r in range(n)],
    }
    return _from_grid(
        "rhombus", coords, HEX_DIRS, tuple(HEX_DIRS), (), False,
        transforms, regions,
        lambda xy: (xy[0] + xy[1] / 2.0, xy[1] * SQRT3_2))


def build_wheel(n: int) -> BoardGraph:
    """n rim cells in a cycle plus one hub adjacent to every rim cell."""
    if n < 3:
        raise SizeOutOfRange(f"wheel {n} (need at least 3 rim cells)")
    _check_size(n + 1)
    hub = n
    labeled = []
    for i in range(n):
        labeled.append((
            ((i + 1) % n, "CW"),
            ((i - 1) % n, "CCW"),
            (hub, "IN"),
        ))
    labeled.append(tuple((i, "OUT") for i in range(n)))
    adjacency = tuple(tuple(nb for nb, _ in pairs) for pairs in labeled)
    rays = [Ray(tuple(range(n)), "orthogonal", cyclic=True)]
    if n % 2 == 0:
        for i in range(n // 2):
            rays.append(Ray((i, hub, i + n // 2), "orthogonal"))
    perms, label_perms = [], []
    ident_lp = {"CW": "CW", "CCW": "CCW", "IN": "IN", "OUT": "OUT"}
    swap_lp = {"CW": "CCW", "CCW": "CW", "IN": "IN", "OUT": "OUT"}
    for k in range(n):
        perms.append(tuple((i + k) % n for i in range(n)) + (hub,))
        label_perms.append(ident_lp)
    for k in range(n):
        perms.append(tuple((k - i) % n for i in range(n)) + (hub,))
        label_perms.append(swap_lp)
    layout = [(math.cos(2 * math.pi * i / n - math.pi / 2),
               math.sin(2 * math.pi * i / n - math.pi / 2)) for i in range(n)]
    layout.append((0.0, 0.0))
    return BoardGraph(
        kind="wheel", cell_count=n + 1, adjacency=adjacency,
        labeled=tuple(labeled), direction_labels=("CW", "CCW", "IN", "OUT"),
        rays=tuple(rays),
        regions={"rim": frozenset(range(n)), "hub": frozenset([hub]),
                 "all": frozenset(range(n + 1))},
        layout=tuple(layout), symmetries=tuple(perms),
        label_perms=tuple(label_perms),
    )


def build_graph(n: int, edges: list) -> BoardGraph:
    _check_size(n)
    nbrs = [set() for _ in range(n)]
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n):
            raise MalformedGraph(f"edge ({a} {b}) references a missing cell")
        if a == b:
            raise MalformedGraph(f"edge ({a} {b}) is a self-loop")
        nbrs[a].add(b)
        nbrs[b].add(a)
    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    layout = tuple((math.cos(2 * math.pi * i / max(n, 1)),
                    math.sin(2 * math.pi * i / max(n, 1))) for i in range(n))
    return BoardGraph(
        kind="graph", cell_count=n, adjacency=adjacency,
        labeled=tuple(tuple() for _ in range(n)), direction_labels=(),
        rays=(), regions={"all": frozenset(range(n))}, layout=layout,
        symmetries=(tuple(range(n)),), label_perms=({},),
    )


def build_board(node: LudemeNode) -> BoardGraph:
    """Build from a validated (board ...) wrapper or bare shape node."""
    diagonals = False
    shape = node
    if node.keyword == "board":
        shape = next(a for a in node.args if isinstance(a, LudemeNode))
        diagonals = "diagonals" in node.args
    kw, args = shape.keyword, shape.args
    if kw == "square":
        return build_square(args[0], diagonals)
    if kw == "rect":
        return build_rect(args[0], args[1], diagonals)
    if kw == "hex":
        return build_hex(args[0])
    if kw == "rhombus":
        return build_rhombus(args[0])
    if kw == "wheel":
        return build_wheel(args[0])
    if kw == "graph":
        edges = [(e.args[0], e.args[1]) for e in args[1:] if isinstance(e, LudemeNode)]
        return build_graph(args[0], edges)
    raise SizeOutOfRange(f"unknown board shape {kw!r}")


# --- automorphisms ---------------------------------------------------------

def _is_automorphism(board: BoardGraph, perm) -> bool:
    adj = [set(a) for a in board.adjacency]
    for a in range(board.cell_count):
        if {perm[b] for b in adj[a]} != adj[perm[a]]:
            return False
    return True


def automorphisms(board: BoardGraph) -> list:
    """All graph automorphisms for boards up to 64 cells (backtracking
    with degree pruning); the known constructor group otherwise."""
    if board.cell_count > EXHAUSTIVE_LIMIT:
        if board.kind == "graph":
            raise TooLargeForExhaustive(
                f"{board.cell_count} cells exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}")
        return list(board.symmetries)
    if board._autos is not None:
        return list(board._autos)
    n = board.cell_count
    adj = [set(a) for a in board.adjacency]
    deg = [len(a) for a in adj]
    # refine an invariant: degree multiset of the neighborhood
    sig = [(deg[v], tuple(sorted(deg[u] for u in adj[v]))) for v in range(n)]
    order = sorted(range(n), key=lambda v: (-deg[v], sig[v]))
    found = []
    image = [-1] * n
    used = [False] * n

    def extend(k):
        if k == n:
            found.append(tuple(image))
            return
        v = order[k]
        for w in range(n):
            if used[w] or sig[w] != sig[v]:
                continue
            ok = True
            for u in adj[v]:
                if image[u] != -1 and image[u] not in adj[w]:
                    ok = False
                    break
            if ok:
                for u in range(n):
                    if image[u] != -1 and (u in adj[v]) != (image[u] in adj[w]):
                        ok = False
                        break
            if ok:
                image[v] = w
                used[w] = True
                extend(k + 1)
                image[v] = -1
                used[w] = False

    extend(0)
    board._autos = tuple(sorted(found))
    return list(board._autos)

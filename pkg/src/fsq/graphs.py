"""Adjacency structures of a fractal square: connectivity and dendrite tests.

Two views of the same geometry: the ordinary intersection graph (digits as
vertices, an edge whenever the two pieces meet) decides connectivity of
the attractor; the bipartite structure (pieces as white vertices, exact
intersection points as black vertices) decides dendrite-ness, because the
attractor is a dendrite exactly when that structure is a tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import (
    Cardinality,
    DEFAULT_CELL_BUDGET,
    DigitSet,
    FACES,
    HALF_FACES,
    Point,
    cell_offsets,
    refine,
)
from .intersections import all_intersections, one_point_property


class UnionFind:
    """Minimal union-find with path compression for component counting."""

    def __init__(self, size):
        self.parent = list(range(size))
        self.components = size

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
            self.components -= 1


def ordinary_graph(D: DigitSet) -> dict:
    """Digit adjacency: d ~ d' when their pieces actually intersect."""
    inter = all_intersections(D)
    ds = D.digit_set
    adj = {d: [] for d in D.digits}
    for d in D.digits:
        for alpha in FACES:
            other = (d[0] + alpha[0], d[1] + alpha[1])
            if other in ds and not inter[alpha].is_empty:
                adj[d].append(other)
    return {d: tuple(sorted(nbrs)) for d, nbrs in adj.items()}


def component_count(adj: dict) -> int:
    index = {v: i for i, v in enumerate(adj)}
    uf = UnionFind(len(index))
    for v, nbrs in adj.items():
        for w in nbrs:
            uf.union(index[v], index[w])
    return uf.components


def is_connected(D: DigitSet) -> bool:
    """Connectivity of the attractor = connectivity of the ordinary graph."""
    return component_count(ordinary_graph(D)) == 1


@dataclass(frozen=True)
class AdjacencyStructure:
    """Level-k bipartite structure: white cells and exact black points.

    A point where several pieces meet is ONE black vertex listing all
    incident whites; merging is by exact coordinate equality, never by
    tolerance.
    """

    level: int
    whites: tuple
    blacks: tuple  # ((Point, (white index, ...)), ...)

    @property
    def n_white(self) -> int:
        return len(self.whites)

    @property
    def n_black(self) -> int:
        return len(self.blacks)

    @property
    def n_edges(self) -> int:
        return sum(len(inc) for _, inc in self.blacks)

    def adjacency(self) -> list:
        """Neighbor lists over ids: whites 0..W-1, blacks W..W+B-1."""
        w = self.n_white
        adj = [[] for _ in range(w + self.n_black)]
        for b, (_, inc) in enumerate(self.blacks):
            for i in inc:
                adj[w + b].append(i)
                adj[i].append(w + b)
        return adj

    def vertex_label(self, vid):
        if vid < self.n_white:
            return ("white", self.whites[vid])
        return ("black", self.blacks[vid - self.n_white][0])


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    component_count: int
    is_tree: bool
    cycle_witness: tuple | None = None
    failed_gate: str | None = None


@lru_cache(maxsize=64)
def adjacency_structure(
    D: DigitSet, k: int, budget: int = DEFAULT_CELL_BUDGET
) -> AdjacencyStructure:
    """Build the level-k structure from cell adjacency and the F_a points.

    Cells c and c+a carry pieces meeting in (F_a + c)/n^k whenever F_a is a
    singleton; a realized offset with an infinite F_a means the one-point
    property fails at this level and the structure is undefined.
    """
    inter = all_intersections(D)
    cells = sorted(refine(D, k, budget))
    index = {c: i for i, c in enumerate(cells)}
    nk = D.n**k
    black_map = {}
    for c in cells:
        i = index[c]
        for alpha in HALF_FACES:
            other = (c[0] + alpha[0], c[1] + alpha[1])
            j = index.get(other)
            if j is None:
                continue
            f = inter[alpha]
            if f.is_empty:
                continue
            if not f.is_singleton:
                raise ValueError(
                    f"one-point property fails at offset {alpha} "
                    f"({f.kind.value}); level-{k} structure undefined"
                )
            p = f.points[0]
            q = Point(Fraction(p.x + c[0], nk), Fraction(p.y + c[1], nk))
            black_map.setdefault(q, set()).update((i, j))
    blacks = tuple(
        (q, tuple(sorted(black_map[q]))) for q in sorted(black_map)
    )
    return AdjacencyStructure(level=k, whites=tuple(cells), blacks=blacks)


def structure_components(structure: AdjacencyStructure, skip=frozenset()) -> int:
    """Component count of the structure with `skip` vertex ids removed."""
    total = structure.n_white + structure.n_black
    uf = UnionFind(total)
    alive = total - len(skip)
    w = structure.n_white
    for b, (_, inc) in enumerate(structure.blacks):
        bid = w + b
        if bid in skip:
            continue
        for i in inc:
            if i not in skip:
                uf.union(bid, i)
    roots = {uf.find(v) for v in range(total) if v not in skip}
    assert len(roots) <= alive
    return len(roots)


def tree_report(structure: AdjacencyStructure) -> ConnectivityReport:
    """Tree test with a cycle witness (alternating white/black path) on failure."""
    total = structure.n_white + structure.n_black
    if total == 0:
        return ConnectivityReport(False, 0, False)
    adj = structure.adjacency()
    parent = [-1] * total
    seen = [False] * total
    components = 0
    cycle = None
    for start in range(total):
        if seen[start]:
            continue
        components += 1
        seen[start] = True
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    stack.append(u)
                elif u != parent[v] and cycle is None:
                    cycle = _close_cycle(parent, v, u)
    connected = components == 1
    is_tree = connected and structure.n_edges == total - 1
    witness = None
    if not is_tree and cycle is not None:
        witness = tuple(structure.vertex_label(v) for v in cycle)
    return ConnectivityReport(connected, components, is_tree, witness)


def _close_cycle(parent, v, u):
    """Join the tree paths of v and u at their lowest common ancestor."""
    anc_v = [v]
    while parent[anc_v[-1]] != -1:
        anc_v.append(parent[anc_v[-1]])
    pos = {x: i for i, x in enumerate(anc_v)}
    path_u = [u]
    while path_u[-1] not in pos:
        path_u.append(parent[path_u[-1]])
    lca = path_u[-1]
    return anc_v[: pos[lca] + 1] + path_u[-2::-1]


def is_dendrite(D: DigitSet) -> tuple:
    """Gate chain: connected, then one-point property, then level-1 tree.

    Returns (flag, report); on failure the report names the first gate that
    failed and carries a cycle witness when the tree test is the culprit.
    """
    graph = ordinary_graph(D)
    comps = component_count(graph)
    if comps != 1:
        return False, ConnectivityReport(
            False, comps, False, failed_gate="connectivity"
        )
    if not one_point_property(D):
        inter = all_intersections(D)
        bad = sorted(
            alpha
            for alpha in cell_offsets(D)
            if not (inter[alpha].is_empty or inter[alpha].is_singleton)
        )
        detail = ", ".join(f"{a}:{inter[a].kind.value}" for a in bad)
        return False, ConnectivityReport(
            True, 1, False, failed_gate=f"one-point property ({detail})"
        )
    report = tree_report(adjacency_structure(D, 1))
    if not report.is_tree:
        return False, ConnectivityReport(
            report.connected,
            report.component_count,
            False,
            cycle_witness=report.cycle_witness,
            failed_gate="tree",
        )
    return True, report


def to_dot(structure: AdjacencyStructure) -> str:
    """DOT rendering of a bipartite structure (whites boxed, blacks dots)."""
    lines = ["graph intersection_structure {"]
    for i, cell in enumerate(structure.whites):
        lines.append(f'  w{i} [shape=box, label="{cell[0]},{cell[1]}"];')
    for b, (p, _) in enumerate(structure.blacks):
        lines.append(f'  b{b} [shape=point, xlabel="{p}"];')
    for b, (_, inc) in enumerate(structure.blacks):
        for i in inc:
            lines.append(f"  w{i} -- b{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Main tree of a fractal square dendrite: extraction and the 7-type catalog.

The main tree is the minimal subdendrite containing the self-similar
boundary.  At refinement level k it is approximated by the Steiner subtree
of the boundary terminals inside the level-k bipartite tree; suppressing
degree-2 vertices leaves an abstract shape that stabilizes as k grows and
falls into one of seven types, keyed by the ramification vertices (degree
3 or 4), their mutual adjacency, and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Address,
    DigitSet,
    StabilizationError,
    address_point,
    cell_digits,
    containing_cells,
)
from .boundary import BoundaryType, boundary_points
from .graphs import AdjacencyStructure, adjacency_structure, is_dendrite

# Boundary types that may accompany each main-tree type.
PERMITTED_CASES = {
    1: {BoundaryType.A, BoundaryType.C, BoundaryType.SEGMENT},
    2: {BoundaryType.A, BoundaryType.C, BoundaryType.D3},
    3: {BoundaryType.A, BoundaryType.B, BoundaryType.C},
    4: {BoundaryType.A, BoundaryType.B, BoundaryType.C, BoundaryType.D6},
    5: {BoundaryType.D6},
    6: {BoundaryType.D6},
    7: {BoundaryType.D6},
}


@dataclass(frozen=True)
class CombinatorialTree:
    """Steiner subtree of boundary terminals inside a level-k structure."""

    structure: AdjacencyStructure
    vertices: frozenset
    terminals: tuple  # ((Point, vertex id), ...)

    def degree(self, adj, v) -> int:
        return sum(1 for u in adj[v] if u in self.vertices)


@dataclass(frozen=True)
class TreeShape:
    """Reduced abstract shape of a main-tree approximation."""

    ramification_degrees: tuple
    ramification_adjacency: str  # canonical encoding of the ramification tree
    leaf_count: int
    type_id: int | None
    encoding: str  # nested-parenthesis form, e.g. "R3(L,L,R3(L,L))"

    def key(self):
        return (self.ramification_degrees, self.ramification_adjacency, self.leaf_count)


@dataclass(frozen=True)
class MainTreeReport:
    shape: TreeShape
    stabilized_at: int  # first level whose shape equals the next level's


def locate_terminals(D: DigitSet, k: int) -> dict:
    """Attach each boundary point to its vertex in the level-k structure.

    A boundary point lying in two or more pieces is a black vertex; one
    lying in a single piece attaches to that white cell.
    """
    structure = adjacency_structure(D, k)
    white_index = {c: i for i, c in enumerate(structure.whites)}
    black_index = {p: structure.n_white + b for b, (p, _) in enumerate(structure.blacks)}
    out = {}
    for p in boundary_points(D):
        cells = containing_cells(p, D, k)
        if len(cells) >= 2:
            out[p] = black_index[p]
        else:
            out[p] = white_index[next(iter(cells))]
    return out


def steiner_subtree(structure: AdjacencyStructure, terminals) -> CombinatorialTree:
    """Minimal subtree spanning the terminals: prune non-terminal leaves."""
    adj = structure.adjacency()
    term_ids = set(terminals.values()) if isinstance(terminals, dict) else set(terminals)
    degree = [len(nbrs) for nbrs in adj]
    alive = set(range(len(adj)))
    queue = [v for v in alive if degree[v] <= 1 and v not in term_ids]
    while queue:
        v = queue.pop()
        if v not in alive or v in term_ids or degree[v] > 1:
            continue
        alive.discard(v)
        for u in adj[v]:
            if u in alive:
                degree[u] -= 1
                if degree[u] <= 1 and u not in term_ids:
                    queue.append(u)
    if isinstance(terminals, dict):
        term_pairs = tuple(sorted(terminals.items(), key=lambda kv: kv[0]))
    else:
        term_pairs = tuple((None, v) for v in sorted(term_ids))
    return CombinatorialTree(structure, frozenset(alive), term_pairs)


def _canonical_rooted(adj, root, parent, labels) -> str:
    """AHU-style canonical encoding of a labeled rooted tree."""
    subs = sorted(
        _canonical_rooted(adj, u, root, labels) for u in adj[root] if u != parent
    )
    return f"{labels[root]}({','.join(subs)})" if subs else labels[root]


def _canonical_tree(adj, labels) -> str:
    """Canonical encoding of a labeled free tree: minimum over center roots."""
    if not adj:
        return ""
    if len(adj) == 1:
        return labels[next(iter(adj))]
    # Peel leaves to find the tree center(s).
    deg = {v: len(ns) for v, ns in adj.items()}
    layer = [v for v in adj if deg[v] <= 1]
    remaining = len(adj)
    while remaining > 2:
        nxt = []
        for v in layer:
            remaining -= 1
            deg[v] = 0
            for u in adj[v]:
                if deg[u] > 1:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        layer = nxt
    centers = [v for v in adj if deg[v] >= 1] or list(adj)
    return min(_canonical_rooted(adj, c, None, labels) for c in centers)


def reduce_shape(tree: CombinatorialTree) -> TreeShape:
    """Suppress degree-2 non-terminal vertices and classify what remains."""
    adj_full = tree.structure.adjacency()
    alive = tree.vertices
    term_ids = {v for _, v in tree.terminals}
    deg = {v: sum(1 for u in adj_full[v] if u in alive) for v in alive}
    kept = {v for v in alive if deg[v] != 2 or v in term_ids}
    if not kept:  # a pure cycle cannot occur in a tree; single path fallback
        kept = set(list(alive)[:1])

    # Contract suppressed chains: kept vertices are adjacent when joined by
    # a path of suppressed degree-2 vertices.
    reduced = {v: set() for v in kept}
    for v in kept:
        for u in adj_full[v]:
            if u not in alive:
                continue
            prev, cur = v, u
            while cur not in kept:
                nxts = [w for w in adj_full[cur] if w in alive and w != prev]
                if not nxts:
                    break
                prev, cur = cur, nxts[0]
            if cur in kept and cur != v:
                reduced[v].add(cur)

    red_deg = {v: len(ns) for v, ns in reduced.items()}
    rams = sorted(v for v in kept if red_deg[v] >= 3)
    leaves = sorted(v for v in kept if red_deg[v] <= 1)
    ram_degrees = tuple(sorted(red_deg[v] for v in rams))

    # Adjacency among ramification vertices: connected when the reduced path
    # between them passes through no other ramification vertex.
    ram_adj = {v: set() for v in rams}
    ram_set = set(rams)
    for v in rams:
        for u in reduced[v]:
            prev, cur = v, u
            while cur not in ram_set:
                nxts = [w for w in reduced[cur] if w != prev]
                if not nxts:
                    break
                prev, cur = cur, nxts[0]
            if cur in ram_set and cur != v:
                ram_adj[v].add(cur)
    ram_labels = {v: f"R{red_deg[v]}" for v in rams}
    ram_code = _canonical_tree({v: sorted(ns) for v, ns in ram_adj.items()}, ram_labels)

    labels = {v: (f"R{red_deg[v]}" if red_deg[v] >= 3 else "L") for v in kept}
    encoding = _canonical_tree({v: sorted(ns) for v, ns in reduced.items()}, labels)

    return TreeShape(
        ramification_degrees=ram_degrees,
        ramification_adjacency=ram_code,
        leaf_count=len(leaves),
        type_id=_match_type(ram_degrees, ram_code),
        encoding=encoding,
    )


def _match_type(ram_degrees, ram_code) -> int | None:
    if ram_degrees == ():
        return 1
    if ram_degrees == (3,):
        return 2
    if ram_degrees == (4,):
        return 3
    if ram_degrees == (3, 3):
        return 4
    if ram_degrees == (3, 3, 3):
        return 5  # three ramification vertices in a tree always form a path
    if ram_degrees == (3, 3, 3, 3):
        # Star: some vertex adjacent to the other three; else a path.
        return 6 if "R3(R3,R3,R3)" == ram_code else 7
    return None


def main_tree(D: DigitSet, k: int) -> CombinatorialTree:
    """Level-k Steiner approximation of the main tree."""
    structure = adjacency_structure(D, k)
    return steiner_subtree(structure, locate_terminals(D, k))


def main_tree_cells(D: DigitSet, k: int) -> frozenset:
    """Level-k cells covering the main-tree approximation (render overlay)."""
    tree = main_tree(D, k)
    return frozenset(
        tree.structure.whites[v] for v in tree.vertices if v < tree.structure.n_white
    )


def classify_main_tree(D: DigitSet, k_start: int = 1, k_max: int = 6) -> MainTreeReport:
    """Reduce at increasing levels until two consecutive shapes agree."""
    flag, report = is_dendrite(D)
    if not flag:
        raise ValueError(f"not a dendrite (failed gate: {report.failed_gate})")
    prev = None
    prev_level = None
    for k in range(k_start, k_max + 1):
        shape = reduce_shape(main_tree(D, k))
        if prev is not None and shape.key() == prev.key():
            return MainTreeReport(shape=shape, stabilized_at=prev_level)
        prev, prev_level = shape, k
    raise StabilizationError(
        f"main-tree shape did not stabilize by level {k_max} for {D}"
    )


def ramification_points(D: DigitSet, k_extra: int = 3) -> tuple:
    """Exact limit points of the main tree's ramification vertices.

    A ramification vertex that is a black vertex is already an exact point.
    A white one determines a nested chain of cells across levels; once the
    chain's digits turn periodic the limit is an exact address.  Points
    whose chains show no short period within the scanned levels are
    dropped (they would need deeper refinement to pin down).
    """
    report = classify_main_tree(D)
    k0 = report.stabilized_at
    n = D.n
    levels = range(k0, k0 + k_extra + 1)
    per_level = {}
    for k in levels:
        tree = main_tree(D, k)
        shape_adj = tree.structure.adjacency()
        deg = {
            v: sum(1 for u in shape_adj[v] if u in tree.vertices) for v in tree.vertices
        }
        # Recompute reduced degrees: suppressing degree-2 chains preserves
        # branch counts, so reduced degree >= 3 equals raw degree >= 3 here.
        rams = []
        for v in tree.vertices:
            if deg[v] >= 3:
                rams.append(v)
        per_level[k] = (tree, rams)

    points = set()
    chains = {}  # level-k0 white cell -> list of nested cells
    for k in levels:
        tree, rams = per_level[k]
        for v in rams:
            if v >= tree.structure.n_white:
                points.add(tree.structure.blacks[v - tree.structure.n_white][0])
                continue
            cell = tree.structure.whites[v]
            root = cell
            for _ in range(k - k0):
                root = (root[0] // n, root[1] // n)
            chains.setdefault(root, {})[k] = cell
    for root, by_level in chains.items():
        if len(by_level) < len(list(levels)):
            continue
        digits = []
        ordered = [by_level[k] for k in levels]
        for a, b in zip(ordered, ordered[1:]):
            if (b[0] // n, b[1] // n) != a:
                digits = None
                break
            digits.append((b[0] - n * a[0], b[1] - n * a[1]))
        if not digits:
            continue
        for period in (1, 2, 3):
            if len(digits) >= 2 * period and all(
                digits[i] == digits[i + period] for i in range(len(digits) - period)
            ):
                prefix = cell_digits(ordered[0], n, k0)
                points.add(address_point(Address.of(prefix, digits[:period]), D))
                break
    return tuple(sorted(points))

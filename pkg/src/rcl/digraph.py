"""Metatile digraph construction, cycle analysis, and transfer-style counting.

Nodes are partial-metatile occupancy states encoded as integers: bit 0 is
the first cell after the already-completed prefix (always empty, so labels
start with a 0 reading upwards from bit 0) and the highest set bit is the
last filled cell.  The empty state is 0.  Every node has exactly two
outgoing arcs: add a square at the first empty cell, or add a comb with its
leftmost cell there (bitwise OR, then shift off the completed run of 1s).

Arc length contributions follow the first-empty-cell bookkeeping: a comb
arc from a node whose label has d digits contributes q+1-d, square arcs
contribute 0 except for the square self-loop at the empty state (the
trivial one-square metatile), which contributes 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import CombShape, LimitError

CYCLE_CAP = 20000


@dataclass(frozen=True)
class Arc:
    tile: str  # "S" or "C"
    dest: int
    length: int
    combs: int

    def symbol(self) -> str:
        return self.tile + (f"[{self.length}]" if self.length else "")


@dataclass(frozen=True)
class MetatileDigraph:
    comb: CombShape
    nodes: tuple[int, ...]
    arcs: dict[int, tuple[Arc, Arc]]  # (square arc, comb arc) per node

    @property
    def q(self) -> int:
        return self.comb.q


def label_str(state: int) -> str:
    """Paper-style node label: bits from cell 0 upwards, e.g. 0b110 -> "011"."""
    if state == 0:
        return "0"
    return format(state, "b")[::-1]


def state_digits(state: int) -> int:
    return state.bit_length()


def _drop_filled_prefix(bits: int) -> int:
    """Discard the run of 1s at the low end (the newly completed cells)."""
    while bits & 1:
        bits >>= 1
    return bits


def build_digraph(comb: CombShape) -> MetatileDigraph:
    """Breadth-first closure of the two-arc transition rule from the 0 node."""
    occ = comb.occupancy
    q = comb.q
    arcs: dict[int, tuple[Arc, Arc]] = {}
    frontier = [0]
    while frontier:
        state = frontier.pop()
        if state in arcs:
            continue
        d = state_digits(state)
        sq_dest = _drop_filled_prefix(state | 1)
        sq = Arc("S", sq_dest, 1 if state == 0 else 0, 0)
        cb_dest = _drop_filled_prefix(state | occ)
        cb = Arc("C", cb_dest, q + 1 - d, 1)
        # A zero-length square arc must strictly shrink the label, otherwise
        # the zero-length closure in the DP would not terminate.
        assert state == 0 or state_digits(sq_dest) < d
        arcs[state] = (sq, cb)
        frontier.extend(t for t in (sq_dest, cb_dest) if t not in arcs)
    return MetatileDigraph(comb, tuple(sorted(arcs)), arcs)


def sigma_state(comb: CombShape, i: int) -> int:
    """The node reached by filling the first i-1 empty comb cells with squares.

    sigma_1 is the comb itself minus its leading tooth; sigma_a is the state
    with only the final tooth outstanding.
    """
    allowed = comb.allowed
    if not 1 <= i <= len(allowed):
        raise ValueError(f"sigma index {i} out of range 1..{len(allowed)}")
    bits = comb.occupancy
    for p in allowed[: i - 1]:
        bits |= 1 << p
    return _drop_filled_prefix(bits)


def is_finite_family(comb: CombShape) -> bool:
    """Whether the metatile family is finite: 2r >= q (gapless combs trivially so)."""
    if comb.gapless:
        return True
    return 2 * comb.r >= comb.q


def count_via_transfer(
    digraph: MetatileDigraph, n_max: int, want_triangle: bool = True
):
    """Dynamic programming over digraph states: B_n = walks 0 -> 0 of length n.

    Layers are indexed by total length consumed.  Zero-length square arcs
    are resolved within a layer in decreasing label-size order (they
    strictly shrink the label, so the closure is a DAG pass).
    """
    from .oracles import CountTable

    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    order = sorted(digraph.nodes, key=state_digits, reverse=True)
    # layers[n][node] = dict k -> number of length-n walks from 0 using k combs
    layers: list[dict[int, dict[int, int]]] = [dict() for _ in range(n_max + 1)]
    layers[0][0] = {0: 1}
    totals: list[int] = []
    rows: list[tuple[int, ...]] = []
    for n in range(n_max + 1):
        layer = layers[n]
        for node in order:
            if node == 0 or node not in layer:
                continue
            sq, _ = digraph.arcs[node]
            dest = layer.setdefault(sq.dest, {})
            for k, v in layer[node].items():
                dest[k] = dest.get(k, 0) + v
        here = layer.get(0, {})
        totals.append(sum(here.values()))
        rows.append(tuple(here.get(k, 0) for k in range(n + 1)))
        for node, counts in layer.items():
            for arc in digraph.arcs[node]:
                if arc.length == 0:
                    continue
                m = n + arc.length
                if m > n_max:
                    continue
                dest = layers[m].setdefault(arc.dest, {})
                for k, v in counts.items():
                    dest[k + arc.combs] = dest.get(k + arc.combs, 0) + v
    return CountTable(
        "B", n_max, tuple(totals), tuple(rows) if want_triangle else None
    )


@dataclass(frozen=True)
class Walk:
    """A walk through the digraph, stored as (source node, arc) steps."""

    steps: tuple[tuple[int, Arc], ...]

    @property
    def length(self) -> int:
        return sum(arc.length for _, arc in self.steps)

    @property
    def combs(self) -> int:
        return sum(arc.combs for _, arc in self.steps)

    def nodes(self) -> tuple[int, ...]:
        return tuple(src for src, _ in self.steps)

    def symbol(self) -> str:
        return "".join(arc.symbol() for _, arc in self.steps)


@dataclass(frozen=True)
class MetatileEnumeration:
    items: tuple[tuple[int, int, int], ...]  # (length, combs, multiplicity)
    complete: bool
    max_len: int


def enumerate_metatiles(digraph: MetatileDigraph, max_len: int) -> MetatileEnumeration:
    """All first-return walks 0 -> 0 of length <= max_len, grouped by (length, combs).

    ``complete`` is set when no walk was pruned by the length bound, i.e.
    the returned list is the whole (finite) metatile family.
    """
    counts: dict[tuple[int, int], int] = {}
    pruned = False

    def explore(node: int, length: int, combs: int) -> None:
        nonlocal pruned
        for arc in digraph.arcs[node]:
            total = length + arc.length
            if total > max_len:
                pruned = True
                continue
            if arc.dest == 0:
                key = (total, combs + arc.combs)
                counts[key] = counts.get(key, 0) + 1
            else:
                explore(arc.dest, total, combs + arc.combs)

    explore(0, 0, 0)
    items = tuple((ln, k, m) for (ln, k), m in sorted(counts.items()))
    return MetatileEnumeration(items, not pruned, max_len)


@dataclass(frozen=True)
class CycleAnalysis:
    """Simple cycles of the digraph, classified for recurrence synthesis.

    ``inner`` cycles avoid the 0 node; when they all share a node the
    smallest such label is the ``common_node`` (ties broken by label value
    for determinism).  ``outer`` cycles pass through 0 but avoid the common
    node, and ``common_circuits`` are simple-path pairs 0 -> common -> 0.
    """

    cycles: tuple[Walk, ...]
    inner: tuple[Walk, ...]
    outer: tuple[Walk, ...]
    common_node: int | None
    common_circuits: tuple[Walk, ...]


def _cycles_through(
    digraph: MetatileDigraph, root: int, forbidden: frozenset[int] = frozenset()
) -> tuple[Walk, ...]:
    """Node-simple cycles through ``root`` avoiding ``forbidden`` nodes."""
    out: list[Walk] = []
    stack: list[tuple[int, Arc]] = []
    on_path: set[int] = set()

    def dfs(node: int) -> None:
        for arc in digraph.arcs[node]:
            if arc.dest == root:
                if len(out) >= CYCLE_CAP:
                    raise LimitError(f"more than {CYCLE_CAP} cycles in digraph")
                out.append(Walk(tuple(stack) + ((node, arc),)))
            elif arc.dest not in on_path and arc.dest not in forbidden:
                stack.append((node, arc))
                on_path.add(arc.dest)
                dfs(arc.dest)
                on_path.remove(arc.dest)
                stack.pop()

    on_path.add(root)
    dfs(root)
    return tuple(out)


def _simple_cycles(digraph: MetatileDigraph) -> Iterator[Walk]:
    """All cycles (no repeated node or arc except the start), parallel arcs distinct.

    Each cycle is reported once, rooted at its smallest node.  Exponential in
    pathological digraphs; guarded by CYCLE_CAP.
    """
    emitted = 0
    for root in digraph.nodes:
        smaller = frozenset(n for n in digraph.nodes if n < root)
        for walk in _cycles_through(digraph, root, smaller):
            emitted += 1
            if emitted > CYCLE_CAP:
                raise LimitError(f"more than {CYCLE_CAP} cycles in digraph")
            yield walk


def _simple_paths(digraph: MetatileDigraph, src: int, dst: int) -> Iterator[Walk]:
    """Simple paths src -> dst (no repeated node; src may equal dst only as ends)."""
    stack: list[tuple[int, Arc]] = []
    seen = {src}

    def dfs(node: int):
        for arc in digraph.arcs[node]:
            if arc.dest == dst:
                yield Walk(tuple(stack) + ((node, arc),))
            elif arc.dest not in seen and arc.dest != src:
                stack.append((node, arc))
                seen.add(arc.dest)
                yield from dfs(arc.dest)
                seen.remove(arc.dest)
                stack.pop()

    yield from dfs(src)


def _has_cycle_avoiding(digraph: MetatileDigraph, forbidden: frozenset[int]) -> bool:
    """Cycle detection on the digraph minus ``forbidden`` nodes (no enumeration)."""
    color: dict[int, int] = {}

    def dfs(node: int) -> bool:
        color[node] = 1
        for arc in digraph.arcs[node]:
            t = arc.dest
            if t in forbidden:
                continue
            c = color.get(t, 0)
            if c == 1 or (c == 0 and dfs(t)):
                return True
        color[node] = 2
        return False

    return any(
        color.get(n, 0) == 0 and dfs(n)
        for n in digraph.nodes
        if n not in forbidden
    )


def has_inner_cycle(digraph: MetatileDigraph) -> bool:
    """Cycle detection on the digraph minus the 0 node (cheap, no enumeration)."""
    return _has_cycle_avoiding(digraph, frozenset({0}))


def common_node_candidates(digraph: MetatileDigraph) -> tuple[int, ...]:
    """Nodes lying on every inner cycle, or () when there is none.

    A node v is on every inner cycle exactly when deleting v (along with the
    0 node) leaves the digraph acyclic, so no cycle enumeration is needed.
    """
    if not has_inner_cycle(digraph):
        return ()
    return tuple(
        v
        for v in digraph.nodes
        if v != 0 and not _has_cycle_avoiding(digraph, frozenset({0, v}))
    )


def find_common_node(digraph: MetatileDigraph) -> int | None:
    """Smallest-label node shared by all inner cycles, None if no such node."""
    candidates = common_node_candidates(digraph)
    return min(candidates) if candidates else None


def analyze_cycles(
    digraph: MetatileDigraph, common_node: int | None = None
) -> CycleAnalysis:
    """Classify cycles; ``common_node`` overrides the smallest-label tie-break.

    Any node shared by all inner cycles is a valid choice and yields a valid
    (if differently shaped) recurrence; the theorem families pass the node
    their statements are phrased around.
    """
    zero_cycles = _cycles_through(digraph, 0)
    common: int | None = None
    circuits: tuple[Walk, ...] = ()
    if not has_inner_cycle(digraph):
        if common_node is not None:
            raise ValueError("digraph has no inner cycles")
        inner: tuple[Walk, ...] = ()
    else:
        candidates = common_node_candidates(digraph)
        if common_node is not None:
            if common_node not in candidates:
                raise ValueError(
                    f"node {label_str(common_node)} is not on every inner cycle"
                )
            common = common_node
        elif candidates:
            common = min(candidates)
        if common is not None:
            inner = _cycles_through(digraph, common, frozenset({0}))
            circuits = tuple(
                Walk(p1.steps + p2.steps)
                for p1 in _simple_paths(digraph, 0, common)
                for p2 in _simple_paths(digraph, common, 0)
            )
        else:
            inner = tuple(
                c for c in _simple_cycles(digraph) if 0 not in c.nodes()
            )
    if common is None:
        outer = zero_cycles
    else:
        outer = tuple(c for c in zero_cycles if common not in c.nodes())
    return CycleAnalysis(zero_cycles + inner, inner, outer, common, circuits)


def to_dot(digraph: MetatileDigraph) -> str:
    """Graphviz form with paper-style node labels and S / C[len] arc labels."""
    lines = ["digraph metatiles {", "  rankdir=LR;"]
    for node in digraph.nodes:
        lines.append(f'  "{label_str(node)}";')
    for node in digraph.nodes:
        for arc in digraph.arcs[node]:
            lines.append(
                f'  "{label_str(node)}" -> "{label_str(arc.dest)}" '
                f'[label="{arc.symbol()}"];'
            )
    lines.append("}")
    return "\n".join(lines)


def analysis_to_json(analysis: CycleAnalysis) -> dict:
    def walk_json(w: Walk) -> dict:
        return {
            "symbol": w.symbol(),
            "nodes": [label_str(n) for n in w.nodes()],
            "length": w.length,
            "combs": w.combs,
        }

    return {
        "cycles": [walk_json(c) for c in analysis.cycles],
        "inner": [walk_json(c) for c in analysis.inner],
        "outer": [walk_json(c) for c in analysis.outer],
        "common_node": None
        if analysis.common_node is None
        else label_str(analysis.common_node),
        "common_circuits": [walk_json(c) for c in analysis.common_circuits],
    }

"""de Bruijn graph analyses of CA rules.

The de Bruijn graph B(m-1, d) has a node for every (m-1)-digit overlap
window and an edge for every RMT: edge r runs from node r // d to node
r mod d^(m-1).  Cycles of length n are exactly the RMT sequences of the
n-cell configurations, which makes the graph the right tool for finding
fixed points and for deciding which trivial configurations s^n have
non-trivial predecessors.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import networkx as nx

from .rules import Rule


def parse_configuration(text: str, d: int) -> tuple[int, ...]:
    """Parse a digit string into a cell tuple, validating states."""
    cells = []
    for pos, ch in enumerate(text):
        if not ch.isdigit() or int(ch) >= d:
            raise ValueError(f"bad cell digit {ch!r} at position {pos} for d={d}")
        cells.append(int(ch))
    return tuple(cells)


def next_configuration(rule: Rule, config: Sequence[int] | str) -> tuple[int, ...]:
    """One synchronous update of ``config`` under periodic boundary."""
    if isinstance(config, str):
        cells = parse_configuration(config, rule.d)
    else:
        cells = tuple(config)
        for c in cells:
            if not 0 <= c < rule.d:
                raise ValueError(f"cell state {c} out of range for d={rule.d}")
    n = len(cells)
    if n < 1:
        raise ValueError("configuration must have at least one cell")
    d = rule.d
    table = rule.table
    # roll the neighborhood window around the ring: consecutive RMTs
    # overlap in m-1 digits
    wrap = d ** (rule.m - 1)
    rmt = 0
    for off in range(-rule.lr, rule.rr + 1):
        rmt = rmt * d + cells[off % n]
    out = [table[rmt]]
    edge = rule.rr
    for i in range(1, n):
        rmt = (rmt % wrap) * d + cells[(i + edge) % n]
        out.append(table[rmt])
    return tuple(out)


def rmt_sequence(rule: Rule, config: Sequence[int] | str) -> tuple[int, ...]:
    """The cyclic RMT sequence induced by a configuration."""
    if isinstance(config, str):
        cells = parse_configuration(config, rule.d)
    else:
        cells = tuple(config)
    n = len(cells)
    d = rule.d
    seq = []
    for i in range(n):
        rmt = 0
        for off in range(-rule.lr, rule.rr + 1):
            rmt = rmt * d + cells[(i + off) % n]
        seq.append(rmt)
    return tuple(seq)


@dataclass(frozen=True)
class PrimaryRmtSet:
    """The RMTs of one elementary cycle of the de Bruijn graph.

    ``rmts`` lists the cycle in traversal order, rotated so the smallest
    RMT comes first.  The middle digits of the members spell the repeating
    block of the homogeneous configurations built from this set.
    """

    rmts: tuple[int, ...]
    d: int
    m: int

    @property
    def cardinality(self) -> int:
        return len(self.rmts)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.rmts)

    def pattern(self) -> tuple[int, ...]:
        """Repeating cell block of the homogeneous configuration."""
        rr = self.m - 1 - (self.m - 1) // 2
        return tuple((r // self.d ** rr) % self.d for r in self.rmts)


def _canonical_cycle(rmts: Sequence[int]) -> tuple[int, ...]:
    k = min(range(len(rmts)), key=lambda i: rmts[i])
    return tuple(rmts[k:]) + tuple(rmts[:k])


class DeBruijnGraph:
    """B(m-1, d) with RMT-labeled edges, optionally restricted to a subset."""

    def __init__(self, d: int, m: int):
        self.d = d
        self.m = m
        self.num_nodes = d ** (m - 1)
        self.num_edges = d ** m

    def edge_ends(self, rmt: int) -> tuple[int, int]:
        return rmt // self.d, rmt % self.num_nodes

    def _graph(self, rmts: Iterable[int]) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(self.num_nodes))
        for r in rmts:
            tail, head = self.edge_ends(r)
            g.add_edge(tail, head, rmt=r)
        return g

    def cycles(self, rmts: Iterable[int], max_len: int | None = None) -> list[tuple[int, ...]]:
        """Elementary cycles of the subgraph with edge set ``rmts``.

        Returns RMT cycles in canonical rotation, ordered by length then
        lexicographically.  With parallel edges absent (always true here,
        every RMT is a distinct node pair), node cycles map 1:1 to RMT
        cycles.
        """
        g = self._graph(rmts)
        edge_lookup: dict[tuple[int, int], int] = {}
        for tail, head, data in g.edges(data=True):
            edge_lookup[(tail, head)] = data["rmt"]
        out = []
        for nodes in nx.simple_cycles(g, length_bound=max_len):
            cycle = []
            for i, tail in enumerate(nodes):
                head = nodes[(i + 1) % len(nodes)]
                cycle.append(edge_lookup[(tail, head)])
            out.append(_canonical_cycle(cycle))
        out.sort(key=lambda c: (len(c), c))
        return out


def primary_rmt_sets(d: int, m: int, max_card: int) -> list[PrimaryRmtSet]:
    """All elementary de Bruijn cycles of length <= max_card, as RMT sets."""
    if max_card > d ** (m - 1):
        max_card = d ** (m - 1)
    graph = DeBruijnGraph(d, m)
    return [
        PrimaryRmtSet(rmts=c, d=d, m=m)
        for c in graph.cycles(range(d ** m), max_len=max_card)
    ]


def quiescent_states(rule: Rule) -> set[int]:
    """States s with R(s, ..., s) = s."""
    out = set()
    for s in range(rule.d):
        r = 0
        for _ in range(rule.m):
            r = r * rule.d + s
        if rule.table[r] == s:
            out.add(s)
    return out


def fixed_point_attractors(
    rule: Rule, max_len: int | None = None
) -> list[tuple[PrimaryRmtSet, int]]:
    """Cycles of the self-replicating subgraph: every fixed point pattern.

    Each cycle of length p yields the fixed point (pattern)^k for ring
    sizes n = k * p.  ``max_len`` bounds the cycle search (full de Bruijn
    subgraphs of high-state rules hold astronomically many cycles).
    """
    graph = DeBruijnGraph(rule.d, rule.m)
    selfrep = [r for r in range(rule.num_rmts)
               if rule.table[r] == rule.middle_digit(r)]
    return [
        (PrimaryRmtSet(rmts=c, d=rule.d, m=rule.m), len(c))
        for c in graph.cycles(selfrep, max_len=max_len)
    ]


@dataclass(frozen=True)
class ReachabilityVerdict:
    """Which trivial configurations have predecessors besides themselves.

    ``reachable_trivials`` lists (state s, witness cycle) pairs where the
    witness is any cycle of the R[r] = s subgraph other than the self-loop
    at node s...s; evolving the witness's configuration one step yields
    s^n.  Witnesses of length 1 are other trivial configurations; longer
    witnesses are genuinely non-trivial predecessors.
    """

    nontrivial_fixed_points: tuple[tuple[PrimaryRmtSet, int], ...]
    reachable_trivials: tuple[tuple[int, PrimaryRmtSet], ...]

    def nontrivial_predecessors(self) -> list[tuple[int, PrimaryRmtSet]]:
        """Witnesses that are not themselves trivial configurations."""
        return [(s, w) for s, w in self.reachable_trivials if w.cardinality >= 2]


def trivial_reachability(rule: Rule, max_len: int | None = None) -> ReachabilityVerdict:
    """Find predecessors of every trivial configuration s^n."""
    graph = DeBruijnGraph(rule.d, rule.m)
    witnesses = []
    for s in range(rule.d):
        own_loop = 0
        for _ in range(rule.m):
            own_loop = own_loop * rule.d + s
        edges = [r for r in range(rule.num_rmts) if rule.table[r] == s]
        for cycle in graph.cycles(edges, max_len=max_len):
            if cycle == (own_loop,):
                continue
            witnesses.append((s, PrimaryRmtSet(rmts=cycle, d=rule.d, m=rule.m)))
    fixed = [
        (p, period)
        for p, period in fixed_point_attractors(rule, max_len=max_len)
        if period >= 2
    ]
    return ReachabilityVerdict(
        nontrivial_fixed_points=tuple(fixed),
        reachable_trivials=tuple(witnesses),
    )

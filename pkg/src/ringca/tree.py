"""Reachability-tree reversibility analysis.

The reachability tree of an n-cell CA is a d-ary edge-labeled tree whose
root-to-leaf paths enumerate exactly the reachable configurations.  Each
node is an ordered list of d^(m-1) RMT sets (one per sibling-set slot).
The global map is a bijection for size n iff every node is balanced and
carries the right number of RMTs: d^m at generic levels, d^iota at level
n - iota (1 <= iota <= m-1), where those last levels keep only a fixed
valid subset of RMTs.

Because equal nodes root equal subtrees, the tree collapses to a finite
*minimized* tree of unique nodes whose re-occurrences are tracked as level
sets with loop links.  A node present at levels q and q + L reappears at
q + 2L, q + 3L, ...; projecting those occurrences onto the special levels
n - iota decides reversibility for arbitrary n and yields arithmetic
progressions of sizes ("n = modulus*j + offset") at which the CA is
irreversible.

Node contents are stored as tuples of integer bitmasks over the d^m RMTs;
RMT multiplicity across the d^(m-1) set slots is what the balance and
cardinality conditions count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .rules import Rule, is_balanced

TreeNode = tuple[frozenset[int], ...]

_MAX_NODES = 500_000  # safety valve for pathological rules


class TreeSizeError(RuntimeError):
    """Minimized tree exceeded the safety cap (pathological rule)."""


# ---------------------------------------------------------------------------
# rule-specific precomputation and node primitives


class _Context:
    """Per-rule bitmask tables used by all node operations."""

    def __init__(self, rule: Rule):
        self.rule = rule
        d, m = rule.d, rule.m
        self.d = d
        self.m = m
        self.num_rmts = d ** m
        self.num_sets = d ** (m - 1)
        self.full_total = self.num_rmts
        # RMTs labelled with each next-state value
        self.value_mask = [0] * d
        for r, v in enumerate(rule.table):
            self.value_mask[v] |= 1 << r
        # sibling expansion of a single RMT: Sibl_(r mod d^(m-1))
        block = (1 << d) - 1
        self.expand = [block << (d * (r % self.num_sets)) for r in range(self.num_rmts)]
        # valid RMTs per set slot at level n - iota
        self.valid = [None] * m  # index by iota, 1..m-1
        for iota in range(1, m):
            step = d ** (m - iota)
            per_slot = []
            for k in range(self.num_sets):
                i = k // d ** (iota - 1)
                mask = 0
                for j in range(d ** iota):
                    mask |= 1 << (i + j * step)
                per_slot.append(mask)
            self.valid[iota] = per_slot

    def root(self) -> tuple[int, ...]:
        block = (1 << self.d) - 1
        return tuple(block << (self.d * k) for k in range(self.num_sets))

    def child(self, gamma: tuple[int, ...], branch: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Edge label and child node along ``branch``."""
        vmask = self.value_mask[branch]
        label = []
        child = []
        for g in gamma:
            lab = g & vmask
            label.append(lab)
            out = 0
            bits = lab
            while bits:
                low = bits & -bits
                out |= self.expand[low.bit_length() - 1]
                bits ^= low
            child.append(out)
        return tuple(label), tuple(child)

    def restrict(self, gamma: tuple[int, ...], iota: int) -> tuple[int, ...]:
        """Intersect each set slot with the valid RMTs of level n - iota."""
        valid = self.valid[iota]
        return tuple(g & valid[k] for k, g in enumerate(gamma))

    def total(self, gamma: tuple[int, ...]) -> int:
        return sum(g.bit_count() for g in gamma)

    def balanced(self, gamma: tuple[int, ...]) -> bool:
        counts = [0] * self.d
        for g in gamma:
            for v in range(self.d):
                counts[v] += (g & self.value_mask[v]).bit_count()
        return len(set(counts)) == 1

    def node_ok(self, gamma: tuple[int, ...], required_total: int) -> bool:
        return self.total(gamma) == required_total and self.balanced(gamma)

    def bad_iotas(self, gamma: tuple[int, ...]) -> frozenset[int]:
        """Which last-level placements this node content would violate."""
        bad = []
        for iota in range(1, self.m):
            restricted = self.restrict(gamma, iota)
            if not self.node_ok(restricted, self.d ** iota):
                bad.append(iota)
        return frozenset(bad)


# -- public node operations (set-of-frozensets view) ------------------------


def _to_masks(node: TreeNode) -> tuple[int, ...]:
    return tuple(sum(1 << r for r in s) for s in node)


def _to_sets(gamma: tuple[int, ...]) -> TreeNode:
    out = []
    for g in gamma:
        members = set()
        while g:
            low = g & -g
            members.add(low.bit_length() - 1)
            g ^= low
        out.append(frozenset(members))
    return tuple(out)


def root_node(rule: Rule) -> TreeNode:
    """The tree root: slot k holds sibling set k."""
    return _to_sets(_Context(rule).root())


def child_node(node: TreeNode, rule: Rule, branch: int) -> tuple[TreeNode, TreeNode]:
    """Label and child of ``node`` along the branch for state ``branch``."""
    if not 0 <= branch < rule.d:
        raise ValueError(f"branch must be a state < {rule.d}")
    label, child = _Context(rule).child(_to_masks(node), branch)
    return _to_sets(label), _to_sets(child)


def restrict_last_levels(node: TreeNode, rule: Rule, iota: int) -> TreeNode:
    """Node content as it appears at level n - iota (valid RMTs only)."""
    if not 1 <= iota <= rule.m - 1:
        raise ValueError(f"iota must be in [1, {rule.m - 1}]")
    return _to_sets(_Context(rule).restrict(_to_masks(node), iota))


# ---------------------------------------------------------------------------
# minimized tree construction


class _Node:
    __slots__ = ("gamma", "levels", "self_loop", "children", "created_level",
                 "claims", "bad_iotas", "generic_bad")

    def __init__(self, gamma, levels, claims, self_loop, bad_iotas,
                 generic_bad, created_level):
        self.gamma = gamma
        self.levels: set[int] = set(levels)
        self.self_loop = self_loop
        self.children: list[int] | None = None
        self.created_level = created_level  # construction pass of discovery
        # occurrence claims accumulated over every level-set state:
        # (start, 0) single level, (start, 1) every level >= start,
        # (start, L) arithmetic progression start + j*L.
        self.claims: set[tuple[int, int]] = set(claims)
        self.bad_iotas = bad_iotas
        self.generic_bad = generic_bad


def _state_claims(levels: set[int], self_loop: bool) -> set[tuple[int, int]]:
    q = min(levels)
    if self_loop:
        return {(q, 1)}
    claims = {(q, 0)}
    for l in levels:
        if l > q:
            claims.add((q, l - q))
    return claims


def _claims_cover(claims: set[tuple[int, int]], p: int) -> bool:
    for start, period in claims:
        if period == 0:
            if p == start:
                return True
        elif period == 1:
            if p >= start:
                return True
        elif p >= start and (p - start) % period == 0:
            return True
    return False


class _Builder:
    """Shared minimized-tree construction with loop bookkeeping.

    ``on_change(uid)`` fires after a node's occurrence claims grow (creation
    included); raising from it aborts construction.
    """

    def __init__(self, rule: Rule, on_change, generic_check_limit=None):
        self.ctx = _Context(rule)
        self.rule = rule
        self.nodes: list[_Node] = []
        self.index: dict[tuple[int, ...], int] = {}
        self.on_change = on_change
        # children at levels <= limit get the generic balance/d^m check
        self.generic_check_limit = generic_check_limit
        self.generic_violation_level: int | None = None

    # -- node bookkeeping -------------------------------------------------

    def _new_node(self, gamma, levels: set[int], self_loop: bool,
                  created_level: int, parent: _Node | None = None) -> int:
        if len(self.nodes) >= _MAX_NODES:
            raise TreeSizeError(f"more than {_MAX_NODES} unique nodes")
        uid = len(self.nodes)
        claims = _state_claims(levels, self_loop)
        if parent is not None:
            # level overwrites may have dropped early parent occurrences;
            # the accumulated claims still carry them, shifted one level down
            claims |= {(s + 1, p) for s, p in parent.claims}
        node = _Node(
            gamma,
            levels,
            claims,
            self_loop,
            self.ctx.bad_iotas(gamma),
            not self.ctx.node_ok(gamma, self.ctx.full_total),
            created_level,
        )
        self.nodes.append(node)
        self.index[gamma] = uid
        self.on_change(uid)
        return uid

    def _record_occurrence(self, uid: int, i: int) -> None:
        """Apply the loop-relevance rules for a re-occurrence at level i."""
        nd = self.nodes[uid]
        if i in nd.levels:
            return
        if i < min(nd.levels):
            # level overwrites may have raised the minimum; keep the level
            # set anchored to the loop tail and record the point on its own
            if (i, 0) not in nd.claims:
                nd.claims.add((i, 0))
                self.on_change(uid)
                self._update_subtree(uid)
            return
        if len(nd.levels) == 1:
            nd.levels.add(i)
            if i - min(nd.levels) == 1:
                nd.self_loop = True
            self._changed(uid)
            return
        if nd.self_loop:
            return
        q = min(nd.levels)
        new_loop = i - q
        if new_loop == 1:
            nd.levels = {i - 1, i}
            nd.self_loop = True
            self._changed(uid)
            return
        for l in sorted(nd.levels):
            old_loop = l - q
            if old_loop == 0:
                continue
            g = math.gcd(old_loop, new_loop)
            if g == old_loop:
                return  # old loop prevails; the new one adds nothing
            if old_loop == 2 and g == 1:
                nd.levels = {i - 1, i}  # loop 2 + odd loop: every level
                nd.self_loop = True
                self._changed(uid)
                return
            if g > 1:
                nd.levels = {i - g, i}
                self._changed(uid)
                return
        nd.levels.add(i)
        self._changed(uid)

    def _changed(self, uid: int) -> None:
        nd = self.nodes[uid]
        before = len(nd.claims)
        nd.claims |= _state_claims(nd.levels, nd.self_loop)
        if len(nd.claims) == before:
            return  # nothing new to propagate; also breaks link cycles
        self.on_change(uid)
        self._update_subtree(uid)

    def _update_subtree(self, uid: int) -> None:
        """Propagate a node's new levels to its (already expanded) children."""
        nd = self.nodes[uid]
        if nd.children is None:
            return
        for c in set(nd.children):
            child = self.nodes[c]
            if nd.self_loop and not child.self_loop:
                base = min(nd.levels) + 1
                child.levels = {base, base + 1}
                child.self_loop = True
                self._changed(c)
                continue
            for l in sorted(nd.levels):
                self._record_occurrence(c, l + 1)

    # -- construction -----------------------------------------------------

    def build(self, stop_level: int | None = None, stop_check=None) -> None:
        """Expand level by level until convergence or past ``stop_level``.

        ``stop_check(level)`` may end construction early once the caller
        has gathered enough evidence.
        """
        self._new_node(self.ctx.root(), {0}, False, created_level=0)
        frontier = [0]
        i = 1
        while frontier and (stop_level is None or i <= stop_level):
            if stop_check is not None and stop_check(i - 1):
                break
            next_frontier = []
            for p in frontier:
                parent = self.nodes[p]
                children = []
                for branch in range(self.ctx.d):
                    _, gamma = self.ctx.child(parent.gamma, branch)
                    limit = self.generic_check_limit
                    if (limit is None or i <= limit) and not self.ctx.node_ok(
                            gamma, self.ctx.full_total):
                        if self.generic_violation_level is None:
                            self.generic_violation_level = i
                        self.on_generic_violation(gamma, i)
                    uid = self.index.get(gamma)
                    if uid is None:
                        levels = {l + 1 for l in parent.levels}
                        uid = self._new_node(gamma, levels, parent.self_loop,
                                             created_level=i, parent=parent)
                        next_frontier.append(uid)
                    else:
                        for l in sorted(parent.levels):
                            self._record_occurrence(uid, l + 1)
                    children.append(uid)
                parent.children = children
            frontier = next_frontier
            i += 1
        self.final_frontier = frontier
        self.levels_built = i - 1

    def on_generic_violation(self, gamma, level: int) -> None:  # overridden
        raise NotImplementedError

    # -- stats -------------------------------------------------------------

    @property
    def unique_nodes(self) -> int:
        return len(self.nodes)

    @property
    def last_unique_level(self) -> int | None:
        if not self.nodes:
            return None
        return max(nd.created_level for nd in self.nodes)


# ---------------------------------------------------------------------------
# fixed-size decision


@dataclass(frozen=True)
class ReversibilityCheck:
    size: int
    reversible: bool
    unique_nodes: int
    last_unique_level: int | None


class _IrreversibleFound(Exception):
    pass


class _FixedSizeBuilder(_Builder):
    def __init__(self, rule: Rule, n: int):
        super().__init__(rule, self._verify, generic_check_limit=n - rule.m)
        self.n = n

    def on_generic_violation(self, gamma, level: int) -> None:
        raise _IrreversibleFound

    def _verify(self, uid: int) -> None:
        nd = self.nodes[uid]
        for iota in nd.bad_iotas:
            if _claims_cover(nd.claims, self.n - iota):
                raise _IrreversibleFound

    def final_checks(self) -> None:
        n, m = self.n, self.ctx.m
        # sweep every node's occurrence claims over the special levels
        for nd in self.nodes:
            for iota in nd.bad_iotas:
                if _claims_cover(nd.claims, n - iota):
                    raise _IrreversibleFound
        if not self.final_frontier:
            return
        # construction reached level n-m+1: walk the remaining special
        # levels explicitly, restricting at each step
        occupants = {
            nd.gamma for nd in self.nodes if _claims_cover(nd.claims, n - m + 1)
        }
        current = set()
        for gamma in occupants:
            restricted = self.ctx.restrict(gamma, m - 1)
            if not self.ctx.node_ok(restricted, self.ctx.d ** (m - 1)):
                raise _IrreversibleFound
            current.add(restricted)
        for iota in range(m - 2, 0, -1):
            nxt = set()
            for gamma in current:
                for branch in range(self.ctx.d):
                    _, child = self.ctx.child(gamma, branch)
                    child = self.ctx.restrict(child, iota)
                    if not self.ctx.node_ok(child, self.ctx.d ** iota):
                        raise _IrreversibleFound
                    nxt.add(child)
            current = nxt


def check_reversible(rule: Rule, n: int) -> ReversibilityCheck:
    """Decide whether the global map is bijective for ring size ``n``."""
    if n < rule.m:
        raise ValueError(f"ring size must be at least m={rule.m}, got {n}")
    if not is_balanced(rule):
        return ReversibilityCheck(n, False, 0, None)
    builder = _FixedSizeBuilder(rule, n)
    try:
        builder.build(stop_level=n - rule.m + 1)
        builder.final_checks()
    except _IrreversibleFound:
        return ReversibilityCheck(
            n, False, builder.unique_nodes, builder.last_unique_level)
    return ReversibilityCheck(
        n, True, builder.unique_nodes, builder.last_unique_level)


# ---------------------------------------------------------------------------
# classification over all ring sizes


class Classification(str, Enum):
    REVERSIBLE = "reversible"
    STRICTLY_IRREVERSIBLE = "strictly-irreversible"
    TRIVIAL_SEMI = "trivially-semi-reversible"
    NONTRIVIAL_SEMI = "non-trivially-semi-reversible"


@dataclass(frozen=True, order=True)
class IrrevExpression:
    """Sizes n = modulus*j + offset (j >= 0) at which the CA is irreversible."""

    modulus: int
    offset: int

    def covers(self, n: int) -> bool:
        return n >= self.offset and (n - self.offset) % self.modulus == 0

    def subsumes(self, other: IrrevExpression) -> bool:
        return (other.modulus % self.modulus == 0) and self.covers(other.offset)

    def __str__(self) -> str:
        return f"n = {self.modulus}j + {self.offset}, j >= 0"


@dataclass(frozen=True)
class ReversibilityReport:
    classification: Classification
    expressions: tuple[IrrevExpression, ...] = ()
    irreversible_from: int | None = None
    exceptional_sizes: tuple[int, ...] = ()
    unique_nodes: int = 0
    last_unique_level: int | None = None

    def irreversible_at(self, n: int) -> bool:
        if self.classification is Classification.STRICTLY_IRREVERSIBLE:
            return True
        if self.irreversible_from is not None and n >= self.irreversible_from:
            return True
        return n in self.exceptional_sizes or any(
            e.covers(n) for e in self.expressions)

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "expressions": [[e.modulus, e.offset] for e in self.expressions],
            "irreversible_from": self.irreversible_from,
            "exceptional_sizes": list(self.exceptional_sizes),
            "unique_nodes": self.unique_nodes,
            "last_unique_level": self.last_unique_level,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ReversibilityReport:
        return cls(
            classification=Classification(data["classification"]),
            expressions=tuple(IrrevExpression(m, o) for m, o in data["expressions"]),
            irreversible_from=data["irreversible_from"],
            exceptional_sizes=tuple(data["exceptional_sizes"]),
            unique_nodes=data["unique_nodes"],
            last_unique_level=data["last_unique_level"],
        )


def merge_expressions(expressions) -> tuple[IrrevExpression, ...]:
    """Drop expressions whose size sets are contained in another's."""
    kept: list[IrrevExpression] = []
    for e in sorted(set(expressions)):
        if any(o.subsumes(e) for o in kept):
            continue
        kept = [k for k in kept if not e.subsumes(k)]
        kept.append(e)
    return tuple(sorted(kept))


class _ClassifyBuilder(_Builder):
    """Collects irreversibility evidence while the tree grows.

    Evidence forms: ``tails`` (irreversible for every n >= t), arithmetic
    ``progressions``, and isolated ``singles``.  Once the evidence covers a
    tail {n >= B}, construction may stop after level B - 2: every special
    level n - iota of every smaller size has been built and checked, and
    any occurrence discovered later sits beyond the horizon, affecting only
    sizes the tail already covers.
    """

    def __init__(self, rule: Rule):
        # generic violations are recorded per unique node, so the per-child
        # re-check in the build loop is disabled (limit below every level)
        super().__init__(rule, self._collect, generic_check_limit=-1)
        self.tails: set[int] = set()
        self.progressions: set[IrrevExpression] = set()
        self.singles: set[int] = set()

    def on_generic_violation(self, gamma, level: int) -> None:
        raise AssertionError("unreachable: generic checks disabled")

    def _collect(self, uid: int) -> None:
        nd = self.nodes[uid]
        if nd.generic_bad:
            self.tails.add(min(s for s, _ in nd.claims) + self.ctx.m)
        for iota in nd.bad_iotas:
            for start, period in nd.claims:
                if period == 0:
                    self.singles.add(start + iota)
                elif period == 1:
                    self.tails.add(start + iota)
                else:
                    self.progressions.add(IrrevExpression(period, start + iota))

    def covered(self, n: int) -> bool:
        return (
            any(n >= t for t in self.tails)
            or any(e.covers(n) for e in self.progressions)
            or n in self.singles
        )

    def tail_bound(self) -> int | None:
        """Least B with {n >= B} covered by the evidence, if one exists."""
        lam = 1
        for e in self.progressions:
            lam = math.lcm(lam, e.modulus)
        residues_covered = self.progressions and all(
            any((r - e.offset) % e.modulus == 0 for e in self.progressions)
            for r in range(lam)
        )
        if not self.tails and not residues_covered:
            return None
        horizon = max(
            list(self.tails) + [e.offset for e in self.progressions] + [0]
        ) + 2 * lam
        uncovered = [n for n in range(1, horizon + 1) if not self.covered(n)]
        return (max(uncovered) + 1) if uncovered else 1

    def done_early(self, levels_built: int) -> bool:
        bound = self.tail_bound()
        return bound is not None and levels_built >= bound - 2


def _strictly_irreversible(rule: Rule) -> bool:
    seen = {}
    for s in range(rule.d):
        r = 0
        for _ in range(rule.m):
            r = r * rule.d + s
        v = rule.table[r]
        if v in seen:
            return True
        seen[v] = s
    return False


def classify(rule: Rule) -> ReversibilityReport:
    """Full reversibility class plus irreversibility expressions."""
    if _strictly_irreversible(rule):
        return ReversibilityReport(Classification.STRICTLY_IRREVERSIBLE)
    if not is_balanced(rule):
        return ReversibilityReport(
            Classification.TRIVIAL_SEMI, irreversible_from=rule.m)

    builder = _ClassifyBuilder(rule)
    builder.build(stop_check=builder.done_early)

    tails, progressions, singles = builder.tails, builder.progressions, builder.singles
    stats = {
        "unique_nodes": builder.unique_nodes,
        "last_unique_level": builder.last_unique_level,
    }

    if not tails and not progressions and not singles:
        return ReversibilityReport(Classification.REVERSIBLE, **stats)

    merged = merge_expressions(progressions)
    extra = tuple(sorted(
        s for s in singles
        if not any(e.covers(s) for e in progressions)
        and not any(s >= t for t in tails)
    ))

    bound = builder.tail_bound()
    if bound is not None:
        kept = tuple(e for e in merged if e.offset < bound)
        return ReversibilityReport(
            Classification.TRIVIAL_SEMI,
            expressions=kept,
            irreversible_from=bound,
            exceptional_sizes=tuple(s for s in extra if s < bound),
            **stats,
        )
    return ReversibilityReport(
        Classification.NONTRIVIAL_SEMI,
        expressions=merged,
        exceptional_sizes=extra,
        **stats,
    )


def reversible_sizes(report: ReversibilityReport, up_to: int) -> set[int]:
    """Ring sizes in [1, up_to] at which the CA is reversible."""
    if up_to < 1:
        raise ValueError("up_to must be at least 1")
    return {n for n in range(1, up_to + 1) if not report.irreversible_at(n)}

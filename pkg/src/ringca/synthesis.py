"""Rule generators and randomness-oriented filters.

Three permutation strategies produce balanced rules with maximal
information flow in one direction (I: distinct values on every equivalent
set; II: on every sibling set; III: constant sibling sets arranged in
same-or-distinct groups).  On top of those, quiescent-state / fixed-point /
trivial-reachability filters select PRNG candidates, and a staged heuristic
assembles 10-state rules primary-set by primary-set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .debruijn import (fixed_point_attractors, quiescent_states,
                       trivial_reachability)
from .rules import Rule, information_flow, is_balanced


class Lcg:
    """32-bit linear congruential generator, used for reproducible sampling.

    x <- (1664525 * x + 1013904223) mod 2^32 (Numerical Recipes constants);
    fixed here so synthesized rule lists are identical across platforms.
    """

    def __init__(self, seed: int):
        self.state = seed & 0xFFFFFFFF

    def next_u32(self) -> int:
        self.state = (1664525 * self.state + 1013904223) & 0xFFFFFFFF
        return self.state

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        bits = max(n.bit_length() + 16, 32)
        words = (bits + 31) // 32
        span = 1 << (32 * words)
        limit = span - span % n
        while True:
            value = 0
            for _ in range(words):
                value = (value << 32) | self.next_u32()
            if value < limit:
                return value % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice(self, items):
        return items[self.randbelow(len(items))]


@dataclass(frozen=True)
class StrategySpec:
    """Parameters for rule generation and candidate filtering."""

    kind: str  # "I" | "II" | "III"
    d: int = 3
    m: int = 3
    seed: int = 1
    max_run: int = 3
    min_reverse_flow: int = 8

    def __post_init__(self) -> None:
        if self.kind not in ("I", "II", "III"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "III" and self.m != 3:
            raise ValueError("strategy III is defined for 3-neighborhood rules only")


def _strategy_i(rng: Lcg, d: int, m: int) -> Rule:
    table = [0] * d ** m
    num_sets = d ** (m - 1)
    for i in range(num_sets):
        values = list(range(d))
        rng.shuffle(values)
        for k in range(d):
            table[i + k * num_sets] = values[k]
    return Rule(d, m, tuple(table))


def _strategy_ii(rng: Lcg, d: int, m: int) -> Rule:
    table = [0] * d ** m
    for j in range(d ** (m - 1)):
        values = list(range(d))
        rng.shuffle(values)
        for t in range(d):
            table[d * j + t] = values[t]
    return Rule(d, m, tuple(table))


def _rule_from_set_values(values: list[int], d: int) -> Rule:
    """Rule whose sibling set j is constant with next state values[j]."""
    table = [0] * d ** 3
    for j, v in enumerate(values):
        for t in range(d):
            table[d * j + t] = v
    return Rule(d, 3, tuple(table))


def strategy_iii_rules(d: int):
    """Every strategy-III clause combination, in clause order.

    Sibling sets are constant (clause 1).  The d^2 set values form a d x d
    grid; either all rows (sets Sibl_kd .. Sibl_kd+d-1) or all columns
    (sets congruent mod d) are constant or are permutations.  Yields
    2 * (d! + (d!)^d) rules, counting one per clause combination; some
    rules satisfy several clauses and repeat.
    """
    perms = list(permutations(range(d)))
    # rows constant: row k takes c[k]; balance forces c to be a permutation
    for c in perms:
        yield _rule_from_set_values([c[i // d] for i in range(d * d)], d)
    # rows all-distinct: each row an independent permutation
    for rows in _product_perms(perms, d):
        yield _rule_from_set_values(
            [rows[i // d][i % d] for i in range(d * d)], d)
    # columns constant
    for c in perms:
        yield _rule_from_set_values([c[i % d] for i in range(d * d)], d)
    # columns all-distinct
    for cols in _product_perms(perms, d):
        yield _rule_from_set_values(
            [cols[i % d][i // d] for i in range(d * d)], d)


def _product_perms(perms, count):
    if count == 0:
        yield ()
        return
    for head in perms:
        for rest in _product_perms(perms, count - 1):
            yield (head,) + rest


def _strategy_iii(rng: Lcg, d: int) -> Rule:
    perms = [list(p) for p in permutations(range(d))]
    fact = len(perms)
    weights = [fact, fact ** d, fact, fact ** d]
    pick = rng.randbelow(sum(weights))
    family = 0
    for family, w in enumerate(weights):
        if pick < w:
            break
        pick -= w
    by_row = family < 2
    constant = family % 2 == 0
    if constant:
        c = list(range(d))
        rng.shuffle(c)
        grid = [[c[k]] * d for k in range(d)]
    else:
        grid = []
        for _ in range(d):
            p = list(range(d))
            rng.shuffle(p)
            grid.append(p)
    if by_row:
        values = [grid[i // d][i % d] for i in range(d * d)]
    else:
        values = [grid[i % d][i // d] for i in range(d * d)]
    return _rule_from_set_values(values, d)


def generate_strategy(spec: StrategySpec, count: int) -> list[Rule]:
    """Sample ``count`` rules per the chosen strategy, reproducibly."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = Lcg(spec.seed)
    out = []
    for _ in range(count):
        if spec.kind == "I":
            out.append(_strategy_i(rng, spec.d, spec.m))
        elif spec.kind == "II":
            out.append(_strategy_ii(rng, spec.d, spec.m))
        else:
            out.append(_strategy_iii(rng, spec.d))
    return out


# -- candidate filters -----------------------------------------------------


def filter_randomness_candidates(
    rules, spec: StrategySpec | None = None, *, strict: bool = False
) -> list[Rule]:
    """Keep rules whose attractor structure suits a PRNG.

    Requirements: exactly one quiescent state, no fixed point other than
    the quiescent one, and information flow of at least
    ``spec.min_reverse_flow`` set-score units in the weaker direction.
    With ``strict=True``, additionally reject any rule for which some
    trivial configuration s^n has a non-trivial predecessor.  (With a
    single quiescent state the other trivial configurations necessarily
    map among themselves, so length-1 witnesses are always present and
    only cycles of length >= 2 disqualify.)
    """
    min_flow = spec.min_reverse_flow if spec is not None else 8
    kept = []
    for rule in rules:
        if len(quiescent_states(rule)) != 1:
            continue
        attractors = fixed_point_attractors(rule)
        if len(attractors) != 1 or attractors[0][1] != 1:
            continue
        flow = information_flow(rule)
        if min(flow.left_changes, flow.right_changes) < min_flow:
            continue
        if strict and trivial_reachability(rule).nontrivial_predecessors():
            continue
        kept.append(rule)
    return kept


def equivalent_sets_acceptable(rule: Rule) -> bool:
    """Asymmetry condition on the equivalent sets of a finished rule: no
    set constant, and not every set fully distinct."""
    all_distinct = 0
    for i in range(rule.num_sets):
        values = [rule.table[r] for r in rule.equivalent_set(i)]
        if len(set(values)) == 1:
            return False
        if len(set(values)) == rule.d:
            all_distinct += 1
    return all_distinct < rule.num_sets


def verify_rule(rule: Rule, max_len: int | None = 4) -> bool:
    """Accept a PRNG candidate: no periodic fixed point and no non-trivial
    predecessor of any trivial configuration, among cycles up to ``max_len``.

    The cap mirrors the staged cardinality limit of the synthesis.  It is
    also a hard necessity: in a rule whose sibling sets are permutations,
    every per-value subgraph and the self-replicating subgraph have one
    outgoing edge per node, so each contains *some* cycle; only the short
    ones are controllable.
    """
    verdict = trivial_reachability(rule, max_len=max_len)
    if verdict.nontrivial_fixed_points:
        return False
    return not verdict.nontrivial_predecessors()


# -- staged decimal synthesis ------------------------------------------------


def assignment_stages(d: int = 10) -> list[list[tuple[int, ...]]]:
    """Primary RMT sets in staged assignment order, per cardinality 1..4.

    Stage by stage: the d singletons; the pairs {iji, jij}; the triples
    through digit 0; then the quadruples, skipping any whose RMTs were all
    covered by earlier stages.  For d = 10 the stages hold 10, 45, 90 and
    648 sets and together cover all 1000 RMTs.
    """
    def rmt(a, b, c):
        return a * d * d + b * d + c

    stages: list[list[tuple[int, ...]]] = [[], [], [], []]
    assigned: set[int] = set()

    for i in range(d):
        stages[0].append((rmt(i, i, i),))
        assigned.add(rmt(i, i, i))
    for i in range(d - 1):
        for j in range(i + 1, d):
            cycle = (rmt(i, j, i), rmt(j, i, j))
            stages[1].append(cycle)
            assigned.update(cycle)
    for i in range(d):
        for j in range(1, d):
            cycle = (rmt(0, i, j), rmt(i, j, 0), rmt(j, 0, i))
            stages[2].append(cycle)
            assigned.update(cycle)
    for l in range(d):
        for i in range(1, d):
            for j in range(d):
                for k in range(1, d):
                    if (l == i == j) or (i == j == k) or (j == k == l) or (k == l == i):
                        continue
                    cycle = (rmt(l, i, j), rmt(i, j, k), rmt(j, k, l), rmt(k, l, i))
                    if len(set(cycle)) < 4:
                        continue
                    if all(r in assigned for r in cycle):
                        continue
                    stages[3].append(cycle)
                    assigned.update(cycle)
    return stages


class _DeadEnd(Exception):
    """A forced assignment closed a short bad cycle; retry the attempt."""


class _DecimalAssembler:
    """One synthesis attempt: value assignment over the staged sets."""

    def __init__(self, rng: Lcg, max_run: int):
        self.d = 10
        self.rng = rng
        self.max_run = max_run
        self.table = [-1] * 1000
        self.sibl_used = [set() for _ in range(100)]

    def _run_through(self, r: int, v: int) -> int:
        """Longest same-value RMT chain through r if r took value v."""
        d = self.d
        cap = 2 * self.max_run

        def extend(cur: int, forward: bool, depth: int) -> int:
            if depth >= cap:
                return 0
            best = 0
            if forward:
                base = (cur * d) % 1000
                nbrs = [base + t for t in range(d)]
            else:
                base = cur // d
                nbrs = [base + t * 100 for t in range(d)]
            for nb in nbrs:
                if self.table[nb] == v:
                    best = max(best, 1 + extend(nb, forward, depth + 1))
            return best

        return extend(r, False, 0) + 1 + extend(r, True, 0)

    def _closes_bad_cycle(self, r: int, v: int) -> bool:
        """Would value v close a constant or self-replicating cycle of
        length 2..4 through RMT r?  (Length-1 loops are the trivial
        fixed points and stay allowed.)"""
        d = self.d

        def closes(accept) -> bool:
            base = (r * d) % 1000
            layer = {nb for nb in (base + t for t in range(d))
                     if nb != r and accept(nb)}
            for _ in range(3):
                nxt = set()
                for cur in layer:
                    b2 = (cur * d) % 1000
                    for nb in (b2 + t for t in range(d)):
                        if nb == r:
                            return True
                        if accept(nb):
                            nxt.add(nb)
                layer = nxt
            return False

        if closes(lambda x: self.table[x] == v):
            return True
        if v == (r // 10) % 10:
            return closes(lambda x: self.table[x] == (x // 10) % 10)
        return False

    def assign_cycle(self, cycle: tuple[int, ...]) -> None:
        todo = [r for r in cycle if self.table[r] == -1]
        # fill the tightest sibling sets first; their slots are forced anyway
        todo.sort(key=lambda r: len(self.sibl_used[r // 10]), reverse=True)
        for r in todo:
            allowed = [v for v in range(self.d) if v not in self.sibl_used[r // 10]]
            allowed = self._prune(cycle, r, allowed)
            safe = [v for v in allowed if not self._closes_bad_cycle(r, v)]
            if not safe:
                raise _DeadEnd  # whatever we pick, verification will fail
            candidates = [v for v in safe
                          if self._run_through(r, v) < self.max_run]
            if candidates:
                v = self.rng.choice(candidates)
            else:
                # no value avoids a long run: take the least-bad one
                v = min(safe, key=lambda v: (self._run_through(r, v), v))
            self.table[r] = v
            self.sibl_used[r // 10].add(v)

    def _prune(self, cycle: tuple[int, ...], r: int, allowed: list[int]) -> list[int]:
        if len(cycle) < 2:
            return allowed
        others = [x for x in cycle if x != r]
        pruned = list(allowed)
        if all(self.table[x] != -1 for x in others):
            # last member: the set must not become constant ...
            values = {self.table[x] for x in others}
            if len(values) == 1:
                pruned = [v for v in pruned if v not in values]
            # ... nor entirely self-replicating
            middle = (r // 10) % 10
            if all(self.table[x] == (x // 10) % 10 for x in others):
                pruned = [v for v in pruned if v != middle]
        # avoid completing an equivalent set with one repeated value
        equi = [r % 100 + k * 100 for k in range(self.d)]
        pending = [x for x in equi if self.table[x] == -1]
        if pending == [r]:
            values = {self.table[x] for x in equi if x != r}
            if len(values) == 1:
                pruned = [v for v in pruned if v not in values]
        return pruned if pruned else allowed


def _fast_reject(table: list[int], max_len: int = 4) -> bool:
    """Bounded bad-cycle scan for a finished sibling-permutation rule.

    Each per-value subgraph and the self-replicating subgraph have exactly
    one outgoing edge per node, so a walk of ``max_len`` steps from every
    node finds all short cycles.
    """
    d = 10
    # out-neighbor of node j in the subgraph for value s: position of s
    pos = [[-1] * d for _ in range(100)]
    for j in range(100):
        for t in range(d):
            pos[j][table[10 * j + t]] = t
    for s in range(d):
        for start in range(100):
            cur = start
            for step in range(1, max_len + 1):
                cur = (10 * cur + pos[cur][s]) % 100
                if cur == start:
                    if step >= 2:
                        return True
                    break
    # self-replicating walk: value demanded at node j is j mod 10
    for start in range(100):
        cur = start
        for step in range(1, max_len + 1):
            cur = (10 * cur + pos[cur][cur % 10]) % 100
            if cur == start:
                if step >= 2:
                    return True
                break
    return False


def synthesize_decimal(count: int, seed: int = 1, max_run: int = 3,
                       max_attempts_per_rule: int = 200) -> list[Rule]:
    """Heuristically assemble 10-state PRNG candidate rules.

    Values are assigned to the staged primary RMT sets in cardinality
    order, keeping sibling sets injective, avoiding constant or fully
    self-replicating sets, and capping same-value runs at ``max_run``.
    Finished rules must pass :func:`verify_rule`; failures are discarded
    and retried.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = Lcg(seed)
    stages = assignment_stages(10)
    out: list[Rule] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > max_attempts_per_rule * count:
            raise RuntimeError("synthesis rejection rate too high")
        asm = _DecimalAssembler(rng, max_run)
        try:
            for singleton in stages[0]:
                r = singleton[0]
                asm.table[r] = rng.randbelow(10)
                asm.sibl_used[r // 10].add(asm.table[r])
            for stage in stages[1:]:
                for cycle in stage:
                    if all(asm.table[r] != -1 for r in cycle):
                        continue
                    asm.assign_cycle(cycle)
        except _DeadEnd:
            continue
        if -1 in asm.table:  # every RMT is covered by the stages
            raise AssertionError("staged sets failed to cover the rule table")
        if _fast_reject(asm.table):
            continue
        rule = Rule(10, 3, tuple(asm.table))
        if not equivalent_sets_acceptable(rule):
            continue
        if verify_rule(rule):  # same check through the general graph path
            out.append(rule)
    return out


# -- permutation-form rules --------------------------------------------------


def _rot_right(seq: tuple[int, ...], k: int) -> tuple[int, ...]:
    k %= len(seq)
    return seq[-k:] + seq[:-k] if k else seq


def rule_from_permutation(perm) -> Rule:
    """Expand a 10-digit permutation into a full 10-state rule.

    Sibling set 0 takes the permutation; sets 1..9 take right rotations of
    it by the set index; sets 10..99 rotate set (j mod 10) by j // 10; then
    each set j*10+i with i < j is replaced by set i*10+j, which balances
    the cardinality-2 primary sets.
    """
    if isinstance(perm, str):
        digits = tuple(int(c) for c in perm)
    else:
        digits = tuple(perm)
    if sorted(digits) != list(range(10)):
        raise ValueError("need a permutation of the digits 0-9")
    sibl: list[tuple[int, ...]] = [()] * 100
    sibl[0] = digits
    for i in range(1, 10):
        sibl[i] = _rot_right(digits, i)
    for j in range(10, 100):
        sibl[j] = _rot_right(sibl[j % 10], j // 10)
    for i in range(9):
        for j in range(i + 1, 10):
            sibl[j * 10 + i] = sibl[i * 10 + j]
    table = [0] * 1000
    for j in range(100):
        for t in range(10):
            table[10 * j + t] = sibl[j][t]
    return Rule(10, 3, tuple(table))


def permutation_of(rule: Rule) -> str:
    """Sibling set 0 of a 10-state rule, as a digit string."""
    if rule.d != 10 or rule.m != 3:
        raise ValueError("permutation form applies to 10-state, 3-neighborhood rules")
    return "".join(str(rule.table[t]) for t in range(10))


def satisfies_strategy(rule: Rule, kind: str) -> bool:
    """Check the distinctness predicate of strategy I or II."""
    num_sets = rule.num_sets
    if kind == "I":
        groups = (rule.equivalent_set(i) for i in range(num_sets))
    elif kind == "II":
        groups = (rule.sibling_set(j) for j in range(num_sets))
    else:
        raise ValueError("kind must be 'I' or 'II'")
    return is_balanced(rule) and all(
        len({rule.table[r] for r in g}) == rule.d for g in groups)

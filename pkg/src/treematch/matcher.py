"""Constructive perfect matchings on finitely presented infinite trees.

All constructions answer pointwise partner queries: an oracle holds a domain
predicate and a partner function, and totality/involution are only ever
checked on finite windows. The end-based constructions classify each queried
vertex against a distinguished doubly infinite line (the "spine" through the
root for one end, the line spanned by the two rays for two ends) and delegate
everything hanging off that line to oriented component matchings.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceededError, InvariantViolationError
from .graph_core import (
    ROOT,
    AutomaticTree,
    EndDescriptor,
    FiniteGraph,
    Matching,
    TreeVertex,
    ends_equivalent,
    has_bad_ray,
    render_path,
    shortlex,
    validate_end,
)


class MatchingOracle:
    """Pointwise access to a matching: a domain predicate plus a partner
    function, with memoized queries."""

    def __init__(self, tree: AutomaticTree, in_domain: Callable, partner_fn: Callable, description: str = ""):
        self.tree = tree
        self._in_domain = in_domain
        self._partner_fn = partner_fn
        self.description = description
        self._memo: dict = {}

    def in_domain(self, v: TreeVertex) -> bool:
        return self.tree.is_valid_vertex(v) and bool(self._in_domain(v))

    def partner(self, v: TreeVertex) -> TreeVertex:
        if v in self._memo:
            return self._memo[v]
        if not self.tree.is_valid_vertex(v):
            raise ValueError(f"invalid vertex {render_path(v)}")
        if not self._in_domain(v):
            raise ValueError(f"vertex {render_path(v)} is outside the oracle domain")
        p = self._partner_fn(v)
        self._memo[v] = p
        return p

    def restricted_pairs(self, vertices: Iterable) -> Matching:
        """The matching pairs seen from a finite vertex set (partners may lie
        outside the set)."""
        pairs = set()
        for v in vertices:
            if self.in_domain(v):
                pairs.add(tuple(sorted((v, self.partner(v)), key=shortlex)))
        return Matching.of(pairs)


class _Component:
    """Deterministic perfect matching of a subtree component, re-rooted at an
    arbitrary vertex.

    Neighbors of a vertex are ranked children-first (ascending index), then
    the tree parent; child_filter(v, ch) may exclude neighbors to cut the
    component out of the ambient tree. A vertex pairs with its first kept
    child or with its neighbor toward the component root, depending on the
    parity of the chain of first-child links above it.
    """

    def __init__(self, tree: AutomaticTree, root: TreeVertex, child_filter: Callable | None = None):
        self.tree = tree
        self.root = root
        self.child_filter = child_filter

    def toward_root(self, v: TreeVertex) -> TreeVertex | None:
        if v == self.root:
            return None
        if len(v) < len(self.root) and self.root[: len(v)] == v:
            return v + (self.root[len(v)],)
        return v[:-1]

    def kept_children(self, v: TreeVertex) -> list:
        toward = self.toward_root(v)
        out = [ch for ch in self.tree.children(v) if ch != toward]
        if v != ROOT and v[:-1] != toward:
            out.append(v[:-1])
        if self.child_filter is not None:
            out = [ch for ch in out if self.child_filter(v, ch)]
        return out

    def first_child(self, v: TreeVertex) -> TreeVertex | None:
        kept = self.kept_children(v)
        return kept[0] if kept else None

    def partner(self, v: TreeVertex) -> TreeVertex:
        r = 0
        x = v
        while True:
            up = self.toward_root(x)
            if up is None or self.first_child(up) != x:
                break
            r += 1
            x = up
        if r % 2 == 1:
            return self.toward_root(v)
        down = self.first_child(v)
        if down is None:
            raise InvariantViolationError(
                f"component vertex {render_path(v)} has no child to pair with"
            )
        return down


def _non_root_states(t: AutomaticTree) -> set:
    return {t.step(q, i) for q in t.states for i in range(t.branch_of(q))}


def _require_min_degree_two(t: AutomaticTree) -> None:
    if t.branch_of(t.root_state) < 2:
        raise ValueError("root degree below two")
    for q in sorted(_non_root_states(t)):
        if t.branch_of(q) < 1:
            raise ValueError(f"state {q!r} gives degree-one vertices")


def rooted_matching(t: AutomaticTree) -> MatchingOracle:
    """Total matching of a tree whose every vertex has at least one child."""
    for q in t.states:
        if t.branch_of(q) < 1:
            raise ValueError(f"state {q!r} has no children")
    comp = _Component(t, ROOT)
    return MatchingOracle(t, lambda v: True, comp.partner, "rooted")


@dataclass(frozen=True)
class BijectionResult:
    matching: Matching | None
    odd_cycle: tuple | None


def permutation_graph(perm: Sequence) -> FiniteGraph:
    return FiniteGraph.from_edges(len(perm), ((x, perm[x]) for x in range(len(perm))))


def bijection_graph_matching(perm: Sequence) -> BijectionResult:
    """Match the graph generated by a fixed-point-free permutation: alternate
    pairs around each cycle; an odd cycle is returned as the obstruction."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    for x in range(n):
        if perm[x] == x:
            raise ValueError(f"fixed point at {x}")
    seen = set()
    pairs = []
    for start in range(n):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = perm[x]
        if len(cycle) % 2 == 1:
            return BijectionResult(None, tuple(cycle))
        for i in range(0, len(cycle), 2):
            pairs.append((cycle[i], cycle[i + 1]))
    return BijectionResult(Matching.of(pairs), None)


@dataclass(frozen=True)
class LineReport:
    """The doubly infinite line spanned by two inequivalent ends, with the
    positions of its degree->=3 vertices summarized periodically."""

    m: TreeVertex
    m_len: int
    e1: EndDescriptor
    e2: EndDescriptor
    odd_pair: bool
    a_parities: frozenset
    a_positions_sample: tuple
    side_summaries: tuple  # ((preperiod, period, infinitely_many_a), ...) per side

    def contains(self, v: TreeVertex) -> bool:
        if len(v) < self.m_len:
            return False
        return v == self.e1.prefix(len(v)) or v == self.e2.prefix(len(v))


@dataclass(frozen=True)
class BSet:
    """The exceptional set of an end-based construction: empty, the whole
    component (when the toward-end map is injective), or a line."""

    kind: str  # "empty" | "injective_part" | "line"
    line: LineReport | None = None

    def contains(self, v: TreeVertex) -> bool:
        if self.kind == "empty":
            return False
        if self.kind == "injective_part":
            return True
        return self.line.contains(v)


@dataclass
class EndsOutput:
    b_set: BSet
    oracle: MatchingOracle
    n_ends: int
    note: str = ""


class _TailFlags:
    """Eventually periodic boolean sequence flag(j), j >= 1, discovered by
    walking a keyed deterministic sequence until a key repeats."""

    def __init__(self, keyed_flags: Iterable):
        flags = [False]  # index 0 unused
        seen = {}
        for j, (key, fl) in enumerate(keyed_flags, start=1):
            if key in seen:
                self.pre = seen[key] - 1
                self.period = j - seen[key]
                break
            seen[key] = j
            flags.append(fl)
        else:
            raise InvariantViolationError("tail walk did not cycle")
        self.flags = flags  # positions 1 .. pre+period
        cyc = flags[self.pre + 1 : self.pre + self.period + 1]
        self.cycle_any = any(cyc)
        self.cycle_all = all(cyc)
        if self.cycle_any:
            self.last = None  # flagged positions are unbounded
        else:
            self.last = max((i for i in range(1, len(flags)) if flags[i]), default=None)

    def flag(self, j: int) -> bool:
        if j <= self.pre + self.period:
            return self.flags[j]
        return self.flags[self.pre + 1 + (j - self.pre - 1) % self.period]


def _ray_flag_walk(t: AutomaticTree, e: EndDescriptor, start_depth: int):
    """(key, flag) per tail position j >= 1 along e below depth start_depth;
    flag marks branch >= 2 (an extra neighbor besides line and parent)."""
    q = t.state_of(e.prefix(start_depth))
    pre_len = len(e.preperiod)
    per_len = len(e.period)
    d = start_depth
    while True:
        q = t.step(q, e.index(d))
        d += 1
        phase = d if d < pre_len else pre_len + (d - pre_len) % per_len
        yield ((q, phase), t.branch_of(q) >= 2)


class _OneEndSpine:
    """Coordinates along the doubly infinite orbit through the root used by
    the one-end construction: the chosen end's ray on the nonnegative side
    and the leftmost descent from the other lowest root child on the
    negative side."""

    def __init__(self, t: AutomaticTree, e: EndDescriptor, budget: int):
        self.t = t
        self.e = e
        self.budget = budget
        self.c_idx = 1 if e.index(0) == 0 else 0
        self.ray = _TailFlags(_ray_flag_walk(t, e, 0))
        self.cside = _TailFlags(self._c_walk())
        self.root_in_a = t.branch_of(t.root_state) >= 3
        self.cofinal = self.ray.cycle_any and self.cside.cycle_any

    def _c_walk(self):
        q = self.t.step(self.t.root_state, self.c_idx)
        while True:
            yield (q, self.t.branch_of(q) >= 2)
            q = self.t.step(q, 0)

    def vertex_at(self, p: int) -> TreeVertex:
        if p >= 0:
            return self.e.prefix(p)
        return (self.c_idx,) + (0,) * (-p - 1)

    def position_of(self, v: TreeVertex) -> int | None:
        if v == self.e.prefix(len(v)):
            return len(v)
        if v and v[0] == self.c_idx and all(i == 0 for i in v[1:]):
            return -len(v)
        return None

    def a_at(self, p: int) -> bool:
        if p == 0:
            return self.root_in_a
        if p > 0:
            return self.ray.flag(p)
        return self.cside.flag(-p)

    def _scan(self, p: int, step: int) -> int:
        q = p + step
        for _ in range(self.budget):
            if self.a_at(q):
                return q
            q += step
        raise BudgetExceededError(
            f"budget exceeded walking the spine from {render_path(self.vertex_at(p))}",
            frontier=(self.vertex_at(p),),
        )

    def next_a(self, p: int) -> int:
        return self._scan(p, 1)

    def prev_a(self, p: int) -> int:
        return self._scan(p, -1)

    def n_of(self, p: int) -> int:
        return self.next_a(p) - p

    def is_aprime(self, p: int) -> bool:
        return self.a_at(p) and self.n_of(p) % 2 == 1

    def run_interval(self, p: int) -> tuple:
        """Maximal interval of consecutive flagged positions around p,
        trimmed on the right to its subset of odd-gap members. None marks an
        unbounded side."""
        a = p
        while self.a_at(a - 1):
            a -= 1
            if a - 1 < 0 and self.cside.cycle_all and (a - 1) <= -(self.cside.pre + 1):
                a = None
                break
        b_raw = p
        while b_raw is not None and self.a_at(b_raw + 1):
            b_raw += 1
            if b_raw + 1 > 0 and self.ray.cycle_all and (b_raw + 1) >= self.ray.pre + 1:
                b_raw = None
        if b_raw is None:
            b = None
        else:
            b = b_raw if self.n_of(b_raw) % 2 == 1 else b_raw - 1
        return (a, b)

    def run_component(self, p: int) -> _Component:
        a, b = self.run_interval(p)
        if (a is None or a <= 0) and (b is None or b >= 0):
            w_pos = 0
        elif b is not None and b < 0:
            w_pos = b
        else:
            w_pos = a

        def keep(v, ch, lo=a, hi=b):
            q = self.position_of(ch)
            if q is None:
                return True
            return (lo is None or q >= lo) and (hi is None or q <= hi)

        return _Component(self.t, self.vertex_at(w_pos), keep)

    def partner(self, v: TreeVertex) -> TreeVertex:
        pos = self.position_of(v)
        if pos is None:
            k = 0
            while k < len(v) and self.position_of(v[: k + 1]) is not None:
                k += 1
            x = v[:k]
            u = v[: k + 1]
            x_pos = self.position_of(x)
            if self.is_aprime(x_pos):
                return self.run_component(x_pos).partner(v)
            return _Component(self.t, u, lambda vv, ch, cut=x: ch != cut).partner(v)
        if self.a_at(pos):
            if self.n_of(pos) % 2 == 1:
                return self.run_component(pos).partner(v)
            return self.vertex_at(pos + 1)
        x_pos = self.prev_a(pos)
        d = pos - x_pos
        start_is_odd = (self.next_a(pos) - x_pos) % 2 == 1
        if start_is_odd:
            return self.vertex_at(pos + 1 if d % 2 == 1 else pos - 1)
        return self.vertex_at(pos + 1 if d % 2 == 0 else pos - 1)


def _is_bare_line(t: AutomaticTree) -> bool:
    if t.branch_of(t.root_state) != 2:
        return False
    return all(t.branch_of(q) == 1 for q in _non_root_states(t))


def one_end_matching(t: AutomaticTree, e: EndDescriptor, budget: int = 100_000) -> EndsOutput:
    """Matching toward a single end.

    If the toward-end map is injective (the component is a bare line) the
    whole component is exceptional and the matching is empty. Otherwise the
    spine through the root is cut into gaps between its branching vertices;
    gap interiors pair along the spine and everything else is closed off in
    hanging components. When branching vertices are not cofinal in both spine
    directions the whole tree is matched away from the root instead.
    """
    _require_min_degree_two(t)
    if not validate_end(t, e):
        raise ValueError(f"invalid end descriptor {e.render()}")
    if _is_bare_line(t):
        oracle = MatchingOracle(t, lambda v: False, lambda v: None, "one-end injective")
        return EndsOutput(BSet("injective_part"), oracle, 1)
    spine = _OneEndSpine(t, e, budget)
    if not spine.cofinal:
        comp = _Component(t, ROOT)
        oracle = MatchingOracle(t, lambda v: True, comp.partner, "one-end rooted fallback")
        return EndsOutput(BSet("empty"), oracle, 1, note="branching not cofinal along the spine")
    oracle = MatchingOracle(t, lambda v: True, spine.partner, "one-end")
    return EndsOutput(BSet("empty"), oracle, 1)


class _TwoEndLine:
    """The doubly infinite line spanned by two inequivalent ends, in signed
    coordinates: the divergence vertex at 0, the first end's tail on the
    negative side, the second end's on the positive side."""

    def __init__(self, t: AutomaticTree, e1: EndDescriptor, e2: EndDescriptor, budget: int):
        self.t = t
        self.e1 = e1
        self.e2 = e2
        self.budget = budget
        bound = len(e1.preperiod) + len(e2.preperiod) + 2 * _lcm(len(e1.period), len(e2.period))
        m_len = None
        for i in range(bound):
            if e1.index(i) != e2.index(i):
                m_len = i
                break
        if m_len is None:
            raise ValueError("ends are equivalent")
        self.m_len = m_len
        self.m = e1.prefix(m_len)
        self.side1 = _TailFlags(_ray_flag_walk(t, e1, m_len))
        self.side2 = _TailFlags(_ray_flag_walk(t, e2, m_len))
        state_m = t.state_of(self.m)
        if self.m == ROOT:
            self.a0 = t.branch_of(state_m) >= 3
        else:
            self.a0 = t.branch_of(state_m) >= 2
        parities = set()
        if self.a0:
            parities.add(0)
        for side in (self.side1, self.side2):
            for j in range(1, side.pre + 2 * side.period + 1):
                if side.flag(j):
                    parities.add(j % 2)
        self.a_parities = frozenset(parities)
        self.odd_pair = len(parities) >= 2

    def vertex_at(self, pos: int) -> TreeVertex:
        if pos >= 0:
            return self.e2.prefix(self.m_len + pos) if pos else self.m
        return self.e1.prefix(self.m_len - pos)

    def position_of(self, v: TreeVertex) -> int | None:
        if len(v) < self.m_len or v[: self.m_len] != self.m:
            return None
        if len(v) == self.m_len:
            return 0
        if v == self.e1.prefix(len(v)):
            return -(len(v) - self.m_len)
        if v == self.e2.prefix(len(v)):
            return len(v) - self.m_len
        return None

    def a_at(self, pos: int) -> bool:
        if pos == 0:
            return self.a0
        if pos > 0:
            return self.side2.flag(pos)
        return self.side1.flag(-pos)

    def _scan(self, pos: int, step: int) -> int | None:
        side = self.side2 if step > 0 else self.side1
        q = pos + step
        for _ in range(self.budget):
            j = q * step  # tail coordinate once past the divergence vertex
            if j > 0 and not side.cycle_any and (side.last is None or j > side.last):
                return None
            if self.a_at(q):
                return q
            q += step
        raise BudgetExceededError(
            f"budget exceeded walking the line from {render_path(self.vertex_at(pos))}",
            frontier=(self.vertex_at(pos),),
        )

    def next_a(self, pos: int) -> int | None:
        return self._scan(pos, 1)

    def prev_a(self, pos: int) -> int | None:
        return self._scan(pos, -1)

    def sel(self, pos: int) -> bool:
        """Selected branching vertices: the first-end-side endpoint of every
        odd-length gap between consecutive branching vertices."""
        if not self.a_at(pos):
            return False
        na = self.next_a(pos)
        return na is not None and (na - pos) % 2 == 1

    def prev_sel(self, pos: int) -> int | None:
        deep = -(self.side1.pre + self.side1.period + 2)
        marker = None
        q = pos
        while True:
            q = self.prev_a(q)
            if q is None:
                return None
            if self.sel(q):
                return q
            if q <= deep:
                if marker is None:
                    marker = q
                elif marker - q >= self.side1.period:
                    return None

    def next_sel(self, pos: int) -> int | None:
        deep = self.side2.pre + self.side2.period + 2
        marker = None
        q = pos
        while True:
            q = self.next_a(q)
            if q is None:
                return None
            if self.sel(q):
                return q
            if q >= deep:
                if marker is None:
                    marker = q
                elif q - marker >= self.side2.period:
                    return None

    def line_child_indices(self, pos: int) -> set:
        depth = self.m_len + abs(pos)
        if pos == 0:
            return {self.e1.index(depth), self.e2.index(depth)}
        if pos > 0:
            return {self.e2.index(depth)}
        return {self.e1.index(depth)}

    def hanging_neighbors(self, pos: int) -> list:
        v = self.vertex_at(pos)
        line_idx = self.line_child_indices(pos)
        out = [v + (i,) for i in range(self.t.branch_of(self.t.state_of(v))) if i not in line_idx]
        if pos == 0 and self.m != ROOT:
            out.append(self.m[:-1])
        return out

    def partner_on_line(self, pos: int) -> TreeVertex:
        if self.sel(pos):
            hang = self.hanging_neighbors(pos)
            if not hang:
                raise InvariantViolationError(
                    f"selected line vertex {render_path(self.vertex_at(pos))} has no hanging neighbor"
                )
            return hang[0]
        s = self.prev_sel(pos)
        if s is not None:
            r = pos - s
            return self.vertex_at(pos + 1 if r % 2 == 1 else pos - 1)
        s2 = self.next_sel(pos)
        if s2 is None:
            raise InvariantViolationError("no selected vertex on an odd-pair line")
        r = s2 - pos
        return self.vertex_at(pos - 1 if r % 2 == 1 else pos + 1)

    def attachment(self, v: TreeVertex) -> tuple:
        """(line vertex x, first vertex u on the path from x toward v)."""
        if len(v) >= self.m_len and v[: self.m_len] == self.m:
            k = self.m_len
            while k < len(v) and v[k] == self.e1.index(k):
                k += 1
            k1 = k
            k = self.m_len
            while k < len(v) and v[k] == self.e2.index(k):
                k += 1
            k2 = k
            cut = max(k1, k2)
            return v[:cut], v[: cut + 1]
        return self.m, self.m[:-1]

    def partner_off_line(self, v: TreeVertex, paired_into_hanging: bool) -> TreeVertex:
        x, u = self.attachment(v)
        x_pos = self.position_of(x)
        if paired_into_hanging and self.sel(x_pos):
            hang = self.hanging_neighbors(x_pos)
            if hang and u == hang[0]:
                if v == u:
                    return x
                if v[: len(u)] == u:
                    root2 = v[: len(u) + 1]
                else:
                    root2 = u[:-1]
                return _Component(self.t, root2, lambda vv, ch, cut=u: ch != cut).partner(v)
        return _Component(self.t, u, lambda vv, ch, cut=x: ch != cut).partner(v)

    def report(self) -> LineReport:
        sample = []
        lo = self.side1.pre + 2 * self.side1.period + 2
        hi = self.side2.pre + 2 * self.side2.period + 2
        for pos in range(-lo, hi + 1):
            if self.a_at(pos):
                sample.append(pos)
        return LineReport(
            m=self.m,
            m_len=self.m_len,
            e1=self.e1,
            e2=self.e2,
            odd_pair=self.odd_pair,
            a_parities=self.a_parities,
            a_positions_sample=tuple(sample),
            side_summaries=(
                (self.side1.pre, self.side1.period, self.side1.cycle_any),
                (self.side2.pre, self.side2.period, self.side2.cycle_any),
            ),
        )


def _lcm(a: int, b: int) -> int:
    return math.lcm(a, b)


def two_end_matching(
    t: AutomaticTree, e1: EndDescriptor, e2: EndDescriptor, budget: int = 100_000
) -> EndsOutput:
    """Matching for exactly two inequivalent ends.

    If the line spanned by the ends has two degree->=3 vertices at odd
    distance, everything is matched: selected branching vertices pair into
    their first hanging subtree, the rest of the line pairs off inside the
    even segments between selections, and hanging pieces are closed
    componentwise. Otherwise the line itself is the exceptional set and only
    the hanging pieces are matched.
    """
    _require_min_degree_two(t)
    for e in (e1, e2):
        if not validate_end(t, e):
            raise ValueError(f"invalid end descriptor {e.render()}")
    line = _TwoEndLine(t, e1, e2, budget)
    if line.odd_pair:
        def partner(v, line=line):
            pos = line.position_of(v)
            if pos is not None:
                return line.partner_on_line(pos)
            return line.partner_off_line(v, paired_into_hanging=True)

        oracle = MatchingOracle(t, lambda v: True, partner, "two-end full")
        return EndsOutput(BSet("empty"), oracle, 2)

    def partner(v, line=line):
        return line.partner_off_line(v, paired_into_hanging=False)

    oracle = MatchingOracle(
        t, lambda v, line=line: line.position_of(v) is None, partner, "two-end off-line"
    )
    return EndsOutput(BSet("line", line.report()), oracle, 2)


def _divergence_length(t: AutomaticTree, a: EndDescriptor, b: EndDescriptor) -> int:
    bound = len(a.preperiod) + len(b.preperiod) + 2 * _lcm(len(a.period), len(b.period))
    for i in range(bound):
        if a.index(i) != b.index(i):
            return i
    raise ValueError("ends are equivalent")


def many_end_matching(t: AutomaticTree, ends: Sequence) -> EndsOutput:
    """Matching for three or more pairwise inequivalent ends: re-root at the
    median of the first three pairwise divergence vertices and match every
    vertex within its oriented component."""
    _require_min_degree_two(t)
    if len(ends) < 3:
        raise ValueError("need at least three ends")
    for e in ends:
        if not validate_end(t, e):
            raise ValueError(f"invalid end descriptor {e.render()}")
    for a, b in itertools.combinations(ends, 2):
        if ends_equivalent(t, a, b):
            raise ValueError("ends are not pairwise inequivalent")
    e1, e2, e3 = ends[0], ends[1], ends[2]
    div = [
        e1.prefix(_divergence_length(t, e1, e2)),
        e1.prefix(_divergence_length(t, e1, e3)),
        e2.prefix(_divergence_length(t, e2, e3)),
    ]
    median = None
    for v in div:
        if div.count(v) >= 2:
            median = v
            break
    if median is None:
        median = sorted(div, key=len)[1]
    comp = _Component(t, median)
    oracle = MatchingOracle(t, lambda v: True, comp.partner, "many-end")
    return EndsOutput(BSet("empty"), oracle, len(ends))


def _canonical_end_order(t: AutomaticTree, ends: list) -> list:
    if len(ends) <= 1:
        return list(ends)
    bound = 1
    for a, b in itertools.combinations(ends, 2):
        bound = max(
            bound,
            len(a.preperiod) + len(b.preperiod) + 2 * _lcm(len(a.period), len(b.period)),
        )
    return sorted(ends, key=lambda e: e.prefix(bound))


def match_ends(
    t: AutomaticTree,
    ends: Sequence,
    budget: int = 100_000,
    check_depth: int = 6,
) -> EndsOutput:
    """Dispatch on the number of pairwise inequivalent ends, then verify the
    construction on a finite window.

    The end list is deduplicated up to equivalence and put in a canonical
    order (by ray words), so permuted or redundantly described lists yield
    identical oracles.
    """
    if not ends:
        raise ValueError("at least one end descriptor required")
    for e in ends:
        if not validate_end(t, e):
            raise ValueError(f"invalid end descriptor {e.render()}")
    reps: list = []
    for e in ends:
        if not any(ends_equivalent(t, e, r) for r in reps):
            reps.append(e)
    reps = _canonical_end_order(t, reps)
    if len(reps) == 1:
        out = one_end_matching(t, reps[0], budget)
    elif len(reps) == 2:
        out = two_end_matching(t, reps[0], reps[1], budget)
    else:
        out = many_end_matching(t, reps)
    out.n_ends = len(reps)
    verify_ends_output(t, out, check_depth)
    return out


def verify_ends_output(t: AutomaticTree, out: EndsOutput, depth: int) -> None:
    """Window check of the structural conclusions: the exceptional set is
    2-regular, spans at most one component, has no two degree->=3 vertices at
    odd distance, and the matching is a perfect matching off it. Raises
    InvariantViolationError on failure."""
    win = t.window(depth)
    flagged = {v for v in win.paths if out.b_set.contains(v)}
    for v in sorted(flagged, key=shortlex):
        inside = sum(1 for w in t.neighbors(v) if out.b_set.contains(w))
        if inside != 2:
            raise InvariantViolationError(
                f"exceptional vertex {render_path(v)} has {inside} exceptional neighbors"
            )
    if flagged:
        comp_count = 0
        seen = set()
        for v in flagged:
            if v in seen:
                continue
            comp_count += 1
            stack = [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                for w in t.neighbors(x):
                    if w in flagged and w not in seen:
                        seen.add(w)
                        stack.append(w)
        if comp_count > 1:
            raise InvariantViolationError(
                f"exceptional set spans {comp_count} window components"
            )
        branched = [v for v in sorted(flagged, key=shortlex) if t.degree(v) >= 3]
        for a, b in itertools.combinations(branched, 2):
            if t.tree_distance(a, b) % 2 == 1:
                raise InvariantViolationError(
                    f"exceptional vertices {render_path(a)}, {render_path(b)} "
                    "have degree >= 3 and odd distance"
                )
    for v in win.paths:
        if v in flagged:
            if out.oracle.in_domain(v):
                raise InvariantViolationError(
                    f"exceptional vertex {render_path(v)} is in the oracle domain"
                )
            continue
        if not out.oracle.in_domain(v):
            raise InvariantViolationError(
                f"vertex {render_path(v)} missing from the oracle domain"
            )
        p = out.oracle.partner(v)
        shorter, longer = (p, v) if len(p) < len(v) else (v, p)
        if len(longer) != len(shorter) + 1 or longer[: len(shorter)] != shorter:
            raise InvariantViolationError(
                f"partner of {render_path(v)} is not a tree neighbor: {render_path(p)}"
            )
        if out.b_set.contains(p):
            raise InvariantViolationError(
                f"partner of {render_path(v)} lies in the exceptional set"
            )
        if out.oracle.partner(p) != v:
            raise InvariantViolationError(
                f"partner map is not an involution at {render_path(v)}"
            )
    if not has_bad_ray(t) and out.b_set.kind != "empty":
        raise InvariantViolationError(
            "nonempty exceptional set on a tree with no bad ray"
        )

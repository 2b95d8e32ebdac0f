"""Closure, buffer, and sweep machinery for matching finitely presented
trees in finite certified bites.

A closure grows a finite set S around a seed until every outside vertex
keeps degree >= 2 in the complement, pairing forced vertices as it goes. A
buffer pads S to a set T thick enough that no path which alternates through
degree-2 complement vertices can cross from the edge of S out of T. A sweep
runs closures for a batch of seeds, keeps a disjoint subfamily, and verifies
the leftover graph on a window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, InvariantViolationError
from .graph_core import AutomaticTree, Matching, TreeVertex, render_path, shortlex


@dataclass(frozen=True)
class ClosurePair:
    seed: TreeVertex
    s_set: frozenset
    t_set: frozenset
    internal_matching: Matching
    frontier: tuple
    radius: int


@dataclass(frozen=True)
class RemainderReport:
    check_depth: int
    degree_violations: tuple
    crossing_witnesses: tuple
    checked_pairs: int
    window_size: int

    @property
    def clean(self) -> bool:
        return not self.degree_violations and not self.crossing_witnesses


@dataclass(frozen=True)
class SweepResult:
    kept: tuple
    dropped: tuple
    matching: Matching
    removed: frozenset
    remainder: RemainderReport


def _complement_degree(t: AutomaticTree, v: TreeVertex, removed) -> int:
    return sum(1 for w in t.neighbors(v) if w not in removed)


def closure(
    t: AutomaticTree, x: TreeVertex, budget: int = 10_000, removed: frozenset = frozenset()
) -> tuple:
    """Grow the matched set around x until the complement has minimum degree
    two, pairing each forced degree-one complement vertex with its unique
    complement neighbor. Returns (S, internal matching)."""
    if not t.is_valid_vertex(x):
        raise ValueError(f"invalid vertex {render_path(x)}")
    if x in removed:
        raise ValueError(f"seed {render_path(x)} was already removed")
    first = None
    for w in t.neighbors(x):
        if w not in removed:
            first = w
            break
    if first is None:
        raise InvariantViolationError(f"seed {render_path(x)} has no free neighbor")
    s: set = {x, first}
    pairs = [(x, first)]
    pending: set = set()
    for v in (x, first):
        for w in t.neighbors(v):
            if w not in s and w not in removed:
                pending.add(w)
    while True:
        forced = []
        for z in sorted(pending, key=shortlex):
            free = [w for w in t.neighbors(z) if w not in s and w not in removed]
            if not free:
                raise InvariantViolationError(
                    f"complement vertex {render_path(z)} was isolated by the closure"
                )
            if len(free) == 1:
                forced.append((z, free[0]))
        if not forced:
            break
        if len(s) + 2 > budget:
            frontier = tuple(z for z, _ in forced)
            raise BudgetExceededError(
                f"closure around {render_path(x)} exceeded {budget} vertices",
                frontier=frontier,
            )
        z, w = forced[0]
        pairs.append((z, w))
        s.add(z)
        s.add(w)
        pending.discard(z)
        pending.discard(w)
        for v in (z, w):
            for nb in t.neighbors(v):
                if nb not in s and nb not in removed:
                    pending.add(nb)
    return frozenset(s), Matching.of(pairs)


def _boundary(t: AutomaticTree, s_set, removed) -> list:
    out = set()
    for v in s_set:
        for w in t.neighbors(v):
            if w not in s_set and w not in removed:
                out.add(w)
    return sorted(out, key=shortlex)


def _longest_bad_path(
    t: AutomaticTree, start: TreeVertex, parity: int, blocked, cap: int
) -> int:
    """Length in vertices of the longest injective path of non-blocked
    vertices from start whose positions congruent to parity mod 2 have
    complement degree exactly two, truncated at cap. Prefix-closedness makes
    this the exact cutoff witness: paths of every shorter length exist."""

    def deg_ok(v, i):
        if i % 2 != parity:
            return True
        return _complement_degree(t, v, blocked) == 2

    if not deg_ok(start, 0):
        return 0
    best = 1
    on_path = {start}
    stack = [(start, iter(t.neighbors(start)))]
    while stack:
        if best >= cap:
            return cap
        tail, it = stack[-1]
        advanced = False
        for w in it:
            if w in on_path or w in blocked:
                continue
            if not deg_ok(w, len(stack)):
                continue
            on_path.add(w)
            stack.append((w, iter(t.neighbors(w))))
            best = max(best, len(stack))
            advanced = True
            break
        if not advanced:
            stack.pop()
            on_path.discard(tail)
    return best


def _buffer_info(
    t: AutomaticTree, s_set: frozenset, budget: int = 10_000, removed: frozenset = frozenset()
) -> tuple:
    """(T, radius, boundary): T is the complement ball around S of radius
    equal to the largest certified bad-path cutoff over the boundary."""
    blocked = frozenset(s_set) | frozenset(removed)
    boundary = _boundary(t, s_set, removed)
    max_n = 1
    for z in boundary:
        longest = max(
            _longest_bad_path(t, z, p, blocked, budget) for p in (0, 1)
        )
        if longest >= budget:
            raise BudgetExceededError(
                f"no bad-path cutoff below {budget} at {render_path(z)}; "
                "this is evidence of a bad ray",
                frontier=(z,),
            )
        max_n = max(max_n, longest + 1)
    t_set = set(s_set)
    layer = list(boundary)
    t_set.update(layer)
    for _ in range(max_n - 1):
        nxt = []
        for v in layer:
            for w in t.neighbors(v):
                if w not in t_set and w not in removed:
                    t_set.add(w)
                    nxt.append(w)
        layer = nxt
        if len(t_set) > budget:
            raise BudgetExceededError(
                f"buffer around a {len(s_set)}-vertex set exceeded {budget} vertices",
                frontier=tuple(sorted(layer, key=shortlex)[:8]),
            )
    return frozenset(t_set), max_n, tuple(boundary)


def buffer(
    t: AutomaticTree, s_set: frozenset, budget: int = 10_000, removed: frozenset = frozenset()
) -> frozenset:
    """Pad S so that no degree-alternating complement path can cross from
    the boundary of S out of the returned set."""
    t_set, _, _ = _buffer_info(t, s_set, budget, removed)
    return t_set


def _verify_remainder(
    t: AutomaticTree,
    kept: tuple,
    removed_all: frozenset,
    removed_prior: frozenset,
    check_depth: int,
    max_path: int = 12,
) -> RemainderReport:
    win = t.window(check_depth)
    degree_violations = []
    for v in win.paths:
        if v in removed_all:
            continue
        if _complement_degree(t, v, removed_all) < 2:
            degree_violations.append(v)
    crossing = []
    for pair in kept:
        for z in pair.frontier:
            if z in removed_all:
                continue
            witness = _crossing_path(t, z, pair.t_set, removed_all, max_path)
            if witness is not None:
                crossing.append((pair.seed, witness))
    return RemainderReport(
        check_depth=check_depth,
        degree_violations=tuple(degree_violations),
        crossing_witnesses=tuple(crossing),
        checked_pairs=len(kept),
        window_size=len(win.paths),
    )


def _crossing_path(t: AutomaticTree, start, t_set, removed, max_path) -> tuple | None:
    """Injective degree-alternating complement path from a boundary vertex of
    S that escapes T, if one exists within max_path vertices."""
    for parity in (0, 1):
        path = [start]
        on_path = {start}

        def deg_ok(v, i):
            if i % 2 != parity:
                return True
            return _complement_degree(t, v, removed) == 2

        if not deg_ok(start, 0):
            continue

        def extend(i):
            if path[-1] not in t_set:
                return True
            if i >= max_path:
                return False
            tail = path[-1]
            for w in t.neighbors(tail):
                if w in on_path or w in removed:
                    continue
                if not deg_ok(w, i):
                    continue
                path.append(w)
                on_path.add(w)
                if extend(i + 1):
                    return True
                path.pop()
                on_path.discard(w)
            return False

        if extend(1):
            return tuple(path)
    return None


def sweep_step(
    t: AutomaticTree,
    seeds,
    budget: int = 10_000,
    removed: frozenset = frozenset(),
    check_depth: int = 8,
    strict: bool = True,
) -> SweepResult:
    """Run closures for the seeds, keep a buffer-disjoint subfamily greedily
    in path order, and window-check the leftover graph.

    With strict=True a failed leftover check raises InvariantViolationError;
    otherwise the violations are returned in the remainder report.
    """
    uniq = sorted(set(seeds), key=shortlex)
    for x in uniq:
        if not t.is_valid_vertex(x):
            raise ValueError(f"invalid seed {render_path(x)}")
        if x in removed:
            raise ValueError(f"seed {render_path(x)} was already removed")
    pairs = []
    for x in uniq:
        s_set, internal = closure(t, x, budget, removed)
        t_set, radius, boundary = _buffer_info(t, s_set, budget, removed)
        pairs.append(
            ClosurePair(
                seed=x,
                s_set=s_set,
                t_set=t_set,
                internal_matching=internal,
                frontier=boundary,
                radius=radius,
            )
        )
    kept = []
    dropped = []
    taken: set = set()
    for pair in pairs:
        if pair.t_set & taken:
            dropped.append(pair.seed)
            continue
        kept.append(pair)
        taken.update(pair.t_set)
    removed_all = set(removed)
    all_pairs = []
    for pair in kept:
        removed_all.update(pair.s_set)
        all_pairs.extend(pair.internal_matching.sorted_pairs())
    removed_all = frozenset(removed_all)
    remainder = _verify_remainder(t, tuple(kept), removed_all, removed, check_depth)
    if strict and not remainder.clean:
        detail = []
        if remainder.degree_violations:
            v = remainder.degree_violations[0]
            detail.append(f"degree below two at {render_path(v)}")
        if remainder.crossing_witnesses:
            seed, path = remainder.crossing_witnesses[0]
            detail.append(
                f"bad path crossing the buffer of {render_path(seed)} "
                f"via {'/'.join(render_path(v) for v in path[:3])}..."
            )
        raise InvariantViolationError("; ".join(detail))
    return SweepResult(
        kept=tuple(kept),
        dropped=tuple(dropped),
        matching=Matching.of(all_pairs),
        removed=removed_all,
        remainder=remainder,
    )

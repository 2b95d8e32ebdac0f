"""Level-by-level recursion building a pair system R_n inside S_n over
length-n binary strings.

R grows by extending every pair with equal child bits, plus one scheduled
new pair per odd step. S starts as everything and shrinks only through
prune records: a record (m, u*, v*) means any pair whose first string starts
with u* must have a second string starting with v*. Storing the records
instead of S itself keeps levels cheap while membership stays exact.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass

from .errors import InvariantViolationError


@dataclass(frozen=True)
class LevelSystem:
    n: int
    pairs: tuple  # sorted (u, v) string pairs
    prunes: tuple  # (m, u_star, v_star) constraints defining S
    u_history: tuple  # (scheduled u_2k, chosen v_2k) per completed odd step
    v_history: tuple  # (scheduled v_2k+1, chosen u_2k+1) per completed even step

    def applicable_prunes(self, u: str) -> list:
        return sorted(
            (m, us, vs) for (m, us, vs) in self.prunes if u[:m] == us
        )

    def forced_prefix(self, u: str) -> str | None:
        """Longest second-string prefix forced for first string u, or None
        if the applicable constraints contradict each other."""
        forced = ""
        for m, _, vs in self.applicable_prunes(u):
            if vs[: len(forced)] != forced:
                return None
            forced = vs
        return forced

    def s_contains(self, u: str, v: str) -> bool:
        return all(
            v[:m] == vs for (m, us, vs) in self.prunes if u[:m] == us
        )

    def s_size(self) -> int:
        total = 0
        for i in range(1 << self.n):
            u = format(i, f"0{self.n}b") if self.n else ""
            forced = self.forced_prefix(u)
            if forced is not None:
                total += 1 << (self.n - len(forced))
        return total

    def s_pairs(self):
        """All of S in sorted order; exponential in the level, meant for
        small-level dumps."""
        for i in range(1 << self.n):
            u = format(i, f"0{self.n}b") if self.n else ""
            forced = self.forced_prefix(u)
            if forced is None:
                continue
            free = self.n - len(forced)
            for j in range(1 << free):
                tail = format(j, f"0{free}b") if free else ""
                yield (u, forced + tail)

    def first_projection(self) -> set:
        return {u for (u, _) in self.pairs}


def init_level() -> LevelSystem:
    return LevelSystem(0, (), (), (), ())


def dense_schedule(m: int) -> tuple:
    """m-th scheduled strings: the m-th binary string in length-lexicographic
    order, zero-padded to the step lengths 2m and 2m+1."""
    length = (m + 1).bit_length() - 1
    offset = m + 1 - (1 << length)
    w = format(offset, f"0{length}b") if length else ""
    return (w + "0" * (2 * m - length), w + "0" * (2 * m + 1 - length))


def _children(pairs) -> list:
    return [(u + b, v + b) for (u, v) in pairs for b in "01"]


def _odd_step(ls: LevelSystem) -> LevelSystem:
    """Level 2k -> 2k+1: schedule u_2k, pick the least v with (u,v) in S,
    and adjoin the unequal-bit child of that pair."""
    k = len(ls.u_history)
    u_sched = dense_schedule(k)[0]
    forced = ls.forced_prefix(u_sched)
    if forced is None:
        raise InvariantViolationError(
            f"no second string is compatible with {u_sched!r}"
        )
    v_pick = forced + "0" * (ls.n - len(forced))
    new_pairs = _children(ls.pairs)
    new_pairs.append((u_sched + "0", v_pick + "1"))
    return LevelSystem(
        ls.n + 1,
        tuple(sorted(new_pairs)),
        ls.prunes,
        ls.u_history + ((u_sched, v_pick),),
        ls.v_history,
    )


def _pick_u(ls: LevelSystem, v_sched: str) -> str:
    """Least first string outside the pair projection that S allows next to
    v_sched, found by jumping over whole excluded prefix blocks."""
    n = ls.n
    excluded = [
        (m, us) for (m, us, vs) in ls.prunes if v_sched[:m] != vs
    ]
    taken = ls.first_projection()
    c = 0
    top = 1 << n
    while c < top:
        s = format(c, f"0{n}b") if n else ""
        jumped = False
        for m, us in excluded:
            if s[:m] == us:
                c = ((c >> (n - m)) + 1) << (n - m)
                jumped = True
                break
        if jumped:
            continue
        if s in taken:
            c += 1
            continue
        return s
    raise InvariantViolationError(
        f"no first string available for {v_sched!r}"
    )


def _even_step(ls: LevelSystem) -> LevelSystem:
    """Level 2k+1 -> 2k+2: schedule v_2k+1, pick the least unused u next to
    it, and prune every future pair at (u·0, *) except toward v·1."""
    k = len(ls.v_history)
    v_sched = dense_schedule(k)[1]
    u_pick = _pick_u(ls, v_sched)
    prune = (ls.n + 1, u_pick + "0", v_sched + "1")
    return LevelSystem(
        ls.n + 1,
        tuple(sorted(_children(ls.pairs))),
        ls.prunes + (prune,),
        ls.u_history,
        ls.v_history + ((v_sched, u_pick),),
    )


def advance(ls: LevelSystem) -> LevelSystem:
    """One odd and one even step from an even level."""
    if ls.n % 2 != 0:
        raise ValueError("advance starts from an even level")
    return _even_step(_odd_step(ls))


def levels(max_n: int):
    """Yield every level 0..max_n in order."""
    ls = init_level()
    yield ls
    while ls.n < max_n:
        ls = _odd_step(ls) if ls.n % 2 == 0 else _even_step(ls)
        yield ls


def check_condition1(ls: LevelSystem) -> tuple:
    """Every first string admits a compatible second string; exhaustive.
    Returns (ok, failing first strings)."""
    failing = []
    for i in range(1 << ls.n):
        u = format(i, f"0{ls.n}b") if ls.n else ""
        if ls.forced_prefix(u) is None:
            failing.append(u)
    return (not failing, tuple(failing))


def check_condition2(ls: LevelSystem) -> tuple:
    """Every second string admits a compatible first string outside the pair
    projection; exhaustive via cylinder counting. Returns (ok, failing)."""
    n = ls.n
    proj = sorted(int(u, 2) for u in ls.first_projection()) if n else []
    proj_has_empty = "" in ls.first_projection()
    failing = []
    for i in range(1 << n):
        v = format(i, f"0{n}b") if n else ""
        if n == 0:
            if proj_has_empty:
                failing.append(v)
            continue
        cylinders = [
            (m, us) for (m, us, vs) in ls.prunes if v[:m] != vs
        ]
        cylinders.sort()
        kept = []
        for m, us in cylinders:
            if any(us[:mk] == uk for mk, uk in kept):
                continue
            kept.append((m, us))
        covered = 0
        outside_proj = len(proj)
        for m, us in kept:
            covered += 1 << (n - m)
            lo = int(us, 2) << (n - m)
            hi = lo + (1 << (n - m))
            outside_proj -= bisect_left(proj, hi) - bisect_left(proj, lo)
        covered += outside_proj
        if covered >= 1 << n:
            failing.append(v)
    return (not failing, tuple(failing))


def check_acyclic(ls: LevelSystem) -> tuple:
    """The bipartite graph with the pairs as edges is a forest. Returns
    (ok, witness cycle as alternating (side, string) nodes or None)."""
    parent: dict = {}

    def find(a):
        root = a
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(a, a) != a:
            parent[a], a = root, parent[a]
        return root

    adj: dict = {}
    for u, v in ls.pairs:
        a, b = ("u", u), ("v", v)
        ra, rb = find(a), find(b)
        if ra == rb and a in adj:
            # walk the existing forest path from a to b, then close it
            prev = {a: None}
            queue = [a]
            while queue:
                x = queue.pop(0)
                if x == b:
                    break
                for y in adj.get(x, ()):
                    if y not in prev:
                        prev[y] = x
                        queue.append(y)
            path = [b]
            while path[-1] != a:
                path.append(prev[path[-1]])
            path.reverse()
            return (False, tuple(path))
        parent[ra] = rb
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return (True, None)


@dataclass(frozen=True)
class SectionReport:
    n: int
    k: int
    max_passing_len: int  # -1 when even the empty prefix fails
    codimension: int
    failing: tuple  # (prefix, best row section, best column section)


def section_report(ls: LevelSystem, k: int) -> SectionReport:
    """For each prefix length, does every prefix extend to a first string
    with at least k partners (and symmetrically for second strings)?"""
    row_counts = Counter(u for (u, _) in ls.pairs)
    col_counts = Counter(v for (_, v) in ls.pairs)
    best_row: dict = {}
    best_col: dict = {}
    for counts, best in ((row_counts, best_row), (col_counts, best_col)):
        for s, c in counts.items():
            for ell in range(ls.n + 1):
                w = s[:ell]
                if best.get(w, 0) < c:
                    best[w] = c
    max_passing = -1
    first_failing = ()
    for ell in range(ls.n + 1):
        failing = []
        for i in range(1 << ell):
            w = format(i, f"0{ell}b") if ell else ""
            br = best_row.get(w, 0)
            bc = best_col.get(w, 0)
            if br < k or bc < k:
                failing.append((w, br, bc))
        if failing:
            first_failing = tuple(failing[:8])
            break
        max_passing = ell
    return SectionReport(
        n=ls.n,
        k=k,
        max_passing_len=max_passing,
        codimension=ls.n - max_passing,
        failing=first_failing,
    )

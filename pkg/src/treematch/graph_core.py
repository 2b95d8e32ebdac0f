"""Graph representations and decidable structural predicates.

Two carriers are used everywhere else: FiniteGraph (a simple undirected graph
on numbered vertices) and AutomaticTree (a rooted, locally finite, possibly
infinite tree presented by a finite-state branching machine). Tree vertices
are tuples of child indices; the root is the empty tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator

from .errors import BudgetExceededError, FormatError

TreeVertex = tuple  # tuple[int, ...]
ROOT: TreeVertex = ()


def shortlex(path: TreeVertex) -> tuple:
    """Sort key ordering paths by length, then lexicographically."""
    return (len(path), path)


def _vertex_key(v) -> tuple:
    # Works for both int vertex ids and tree paths.
    if isinstance(v, tuple):
        return (1, len(v), v)
    return (0, v, ())


def render_path(v: TreeVertex) -> str:
    """Render a tree vertex as a /-joined index path; the root is "/"."""
    if not v:
        return "/"
    return "/".join(str(i) for i in v)


def parse_path(text: str) -> TreeVertex:
    if text == "/":
        return ROOT
    parts = text.split("/")
    try:
        path = tuple(int(p) for p in parts)
    except ValueError:
        raise FormatError(f"bad vertex path {text!r}")
    if any(i < 0 for i in path):
        raise FormatError(f"negative index in path {text!r}")
    return path


@dataclass(frozen=True)
class Matching:
    """A finite partial involution, stored as canonical unordered pairs."""

    pairs: frozenset

    @classmethod
    def of(cls, pairs: Iterable) -> "Matching":
        canon = set()
        seen = {}
        for pair in pairs:
            a, b = pair
            if a == b:
                raise ValueError(f"loop pair {a!r}")
            if _vertex_key(b) < _vertex_key(a):
                a, b = b, a
            for end, other in ((a, b), (b, a)):
                if end in seen and seen[end] != other:
                    raise ValueError(f"vertex {end!r} matched twice")
                seen[end] = other
            canon.add((a, b))
        return cls(frozenset(canon))

    @cached_property
    def partner_map(self) -> dict:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def partner(self, v):
        return self.partner_map.get(v)

    def vertices(self) -> frozenset:
        return frozenset(self.partner_map)

    def sorted_pairs(self) -> list:
        return sorted(self.pairs, key=lambda p: (_vertex_key(p[0]), _vertex_key(p[1])))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    def validate_on(self, g: "FiniteGraph") -> None:
        for a, b in self.pairs:
            if not (0 <= a < g.vertex_count and 0 <= b < g.vertex_count):
                raise ValueError(f"pair ({a}, {b}) out of range")
            if (min(a, b), max(a, b)) not in g.edges:
                raise ValueError(f"pair ({a}, {b}) is not an edge")

    def is_perfect_on(self, g: "FiniteGraph") -> bool:
        self.validate_on(g)
        return len(self.partner_map) == g.vertex_count

    def validate_on_tree(self, t: "AutomaticTree") -> None:
        for a, b in self.pairs:
            if abs(len(a) - len(b)) != 1:
                raise ValueError(f"pair {render_path(a)} {render_path(b)} is not a tree edge")
            child = a if len(a) > len(b) else b
            parent = b if child is a else a
            if child[: len(parent)] != parent:
                raise ValueError(f"pair {render_path(a)} {render_path(b)} is not a tree edge")
            if not t.is_valid_vertex(child):
                raise ValueError(f"invalid vertex {render_path(child)}")


EMPTY_MATCHING = Matching(frozenset())


@dataclass(frozen=True)
class FiniteGraph:
    """Simple undirected graph: vertices 0..vertex_count-1, canonical edge pairs."""

    vertex_count: int
    edges: frozenset

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable) -> "FiniteGraph":
        if vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        canon = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"loop edge at {a}")
            if not (0 <= a < vertex_count and 0 <= b < vertex_count):
                raise ValueError(f"edge ({a}, {b}) out of range")
            canon.add((min(a, b), max(a, b)))
        return cls(vertex_count, frozenset(canon))

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: [] for v in range(self.vertex_count)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def vertices(self) -> range:
        return range(self.vertex_count)

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def components(self) -> tuple:
        seen = set()
        out = []
        for start in range(self.vertex_count):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            queue = [start]
            while queue:
                v = queue.pop()
                for w in self.adjacency[v]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            out.append(tuple(sorted(comp)))
        return tuple(sorted(out))

    def is_acyclic(self) -> bool:
        # A simple graph is a forest iff |E| = |V| - #components.
        return len(self.edges) == self.vertex_count - len(self.components())

    def induced(self, keep: Iterable) -> tuple:
        """Induced subgraph on `keep`; returns (graph, old-id table)."""
        old = tuple(sorted(set(keep)))
        index = {v: i for i, v in enumerate(old)}
        edges = [
            (index[a], index[b]) for a, b in self.edges if a in index and b in index
        ]
        return FiniteGraph.from_edges(len(old), edges), old


def degree(g, v):
    """Degree of v in a FiniteGraph or AutomaticTree."""
    if isinstance(g, FiniteGraph):
        if not (0 <= v < g.vertex_count):
            raise ValueError(f"vertex {v} out of range")
        return g.degree(v)
    return g.degree(v)


def components(g: FiniteGraph) -> tuple:
    return g.components()


def is_acyclic(g: FiniteGraph) -> bool:
    return g.is_acyclic()


class AutomaticTree:
    """Rooted tree presented by a finite-state branching machine.

    branch(q) is the number of children of any vertex in state q; the state of
    a child is step(q, i). The root has degree branch(root_state); every other
    vertex adds one for its parent. All states must be reachable and branch /
    step total on their declared domains; use build() for the lenient
    constructor that fills self-transitions and trims unreachable states.
    """

    def __init__(self, root_state: str, branch: dict, step: dict):
        if root_state not in branch:
            raise ValueError(f"root state {root_state!r} has no branch entry")
        for q, k in branch.items():
            if k < 0:
                raise ValueError(f"negative branch at state {q!r}")
            for i in range(k):
                if (q, i) not in step:
                    raise ValueError(f"missing transition ({q!r}, {i})")
                if step[(q, i)] not in branch:
                    raise ValueError(f"transition ({q!r}, {i}) leads to unknown state")
        for (q, i) in step:
            if q not in branch or not (0 <= i < branch[q]):
                raise ValueError(f"transition ({q!r}, {i}) outside declared domain")
        reachable = {root_state}
        todo = [root_state]
        while todo:
            q = todo.pop()
            for i in range(branch[q]):
                r = step[(q, i)]
                if r not in reachable:
                    reachable.add(r)
                    todo.append(r)
        unreachable = set(branch) - reachable
        if unreachable:
            raise ValueError(f"unreachable states: {sorted(unreachable)}")
        self.root_state = root_state
        self.states = tuple(sorted(branch))
        self._branch = dict(branch)
        self._step = dict(step)

    @classmethod
    def build(cls, root_state: str, branch: dict, step: dict | None = None) -> "AutomaticTree":
        """Lenient constructor: omitted transitions default to self-loops,
        states unreachable from the root are dropped."""
        step = dict(step or {})
        for q, k in branch.items():
            for i in range(k):
                step.setdefault((q, i), q)
        if root_state not in branch:
            raise ValueError(f"root state {root_state!r} has no branch entry")
        reachable = {root_state}
        todo = [root_state]
        while todo:
            q = todo.pop()
            for i in range(branch[q]):
                r = step[(q, i)]
                if r not in branch:
                    raise ValueError(f"transition ({q!r}, {i}) leads to unknown state")
                if r not in reachable:
                    reachable.add(r)
                    todo.append(r)
        branch = {q: k for q, k in branch.items() if q in reachable}
        step = {(q, i): r for (q, i), r in step.items() if q in reachable}
        return cls(root_state, branch, step)

    def branch_of(self, q: str) -> int:
        return self._branch[q]

    def step(self, q: str, i: int) -> str:
        return self._step[(q, i)]

    def state_of(self, v: TreeVertex) -> str:
        q = self.root_state
        for i in v:
            if not (0 <= i < self._branch[q]):
                raise ValueError(f"invalid vertex {render_path(v)}")
            q = self._step[(q, i)]
        return q

    def is_valid_vertex(self, v: TreeVertex) -> bool:
        q = self.root_state
        for i in v:
            if not (0 <= i < self._branch[q]):
                return False
            q = self._step[(q, i)]
        return True

    def degree(self, v: TreeVertex) -> int:
        k = self._branch[self.state_of(v)]
        return k if v == ROOT else k + 1

    def children(self, v: TreeVertex) -> list:
        return [v + (i,) for i in range(self._branch[self.state_of(v)])]

    def parent(self, v: TreeVertex) -> TreeVertex | None:
        return v[:-1] if v else None

    def neighbors(self, v: TreeVertex) -> list:
        """Children in ascending index order, then the parent."""
        out = self.children(v)
        if v != ROOT:
            out.append(v[:-1])
        return out

    def tree_distance(self, u: TreeVertex, v: TreeVertex) -> int:
        if not (self.is_valid_vertex(u) and self.is_valid_vertex(v)):
            raise ValueError("invalid vertex")
        k = 0
        for a, b in zip(u, v):
            if a != b:
                break
            k += 1
        return len(u) + len(v) - 2 * k

    def window(self, depth: int, max_vertices: int | None = 200_000) -> "Window":
        """Induced subgraph on all vertices of path length <= depth."""
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        paths = [ROOT]
        states = [self.root_state]
        edges = []
        index = {ROOT: 0}
        level_start = 0
        for _ in range(depth):
            level_end = len(paths)
            for pos in range(level_start, level_end):
                v = paths[pos]
                q = states[pos]
                for i in range(self._branch[q]):
                    w = v + (i,)
                    index[w] = len(paths)
                    edges.append((pos, index[w]))
                    paths.append(w)
                    states.append(self._step[(q, i)])
                    if max_vertices is not None and len(paths) > max_vertices:
                        raise BudgetExceededError(
                            f"window depth {depth} exceeds {max_vertices} vertices"
                        )
            level_start = level_end
        graph = FiniteGraph.from_edges(len(paths), edges)
        return Window(tree=self, depth=depth, graph=graph, paths=tuple(paths), index=index)


@dataclass(eq=False)
class Window:
    """A finite view of an AutomaticTree: depth-bounded induced subgraph plus
    the label table mapping graph ids back to tree vertices."""

    tree: AutomaticTree
    depth: int
    graph: FiniteGraph
    paths: tuple
    index: dict

    def contains(self, v: TreeVertex) -> bool:
        return v in self.index

    def id_of(self, v: TreeVertex) -> int:
        return self.index[v]

    def path_of(self, i: int) -> TreeVertex:
        return self.paths[i]

    def boundary_paths(self) -> list:
        return [v for v in self.paths if len(v) == self.depth]


def window(t: AutomaticTree, depth: int, max_vertices: int | None = 200_000) -> Window:
    return t.window(depth, max_vertices)


def tree_distance(t: AutomaticTree, u: TreeVertex, v: TreeVertex) -> int:
    return t.tree_distance(u, v)


@dataclass(frozen=True)
class EndDescriptor:
    """An end of an AutomaticTree, named by an eventually periodic child-index
    sequence preperiod . period^omega."""

    preperiod: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        for i in self.preperiod + self.period:
            if not isinstance(i, int) or i < 0:
                raise ValueError("indices must be nonnegative integers")

    def index(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> TreeVertex:
        """The ray vertex at depth n."""
        return tuple(self.index(i) for i in range(n))

    @classmethod
    def parse(cls, text: str) -> "EndDescriptor":
        if "|" not in text:
            raise FormatError(f"end descriptor {text!r} lacks '|'")
        pre_text, per_text = text.split("|", 1)

        def parse_side(side: str, what: str) -> tuple:
            side = side.strip()
            if not side:
                return ()
            try:
                return tuple(int(p) for p in side.split(","))
            except ValueError:
                raise FormatError(f"bad {what} in end descriptor {text!r}")

        pre = parse_side(pre_text, "preperiod")
        per = parse_side(per_text, "period")
        if not per:
            raise FormatError(f"end descriptor {text!r} has empty period")
        if any(i < 0 for i in pre + per):
            raise FormatError(f"negative index in end descriptor {text!r}")
        return cls(pre, per)

    def render(self) -> str:
        pre = ",".join(str(i) for i in self.preperiod)
        per = ",".join(str(i) for i in self.period)
        return f"{pre}|{per}"


def validate_end(t: AutomaticTree, e: EndDescriptor) -> bool:
    """True iff every prefix of the end's index sequence is a valid vertex."""
    q = t.root_state
    seen = set()
    i = 0
    pre_len = len(e.preperiod)
    per_len = len(e.period)
    while True:
        if i >= pre_len:
            key = (q, (i - pre_len) % per_len)
            if key in seen:
                return True
            seen.add(key)
        idx = e.index(i)
        if idx >= t.branch_of(q):
            return False
        q = t.step(q, idx)
        i += 1


def ends_equivalent(t: AutomaticTree, a: EndDescriptor, b: EndDescriptor) -> bool:
    """True iff the two descriptors name the same infinite index sequence."""
    for e in (a, b):
        if not validate_end(t, e):
            raise ValueError(f"invalid end descriptor {e.render()}")
    bound = (
        len(a.preperiod)
        + len(b.preperiod)
        + 2 * math.lcm(len(a.period), len(b.period))
    )
    return all(a.index(i) == b.index(i) for i in range(bound))


def _descend_ok(t: AutomaticTree) -> set:
    """Product nodes (state, parity) admitting an infinite descending path on
    which every even-parity vertex has total degree exactly two (as a
    non-root vertex: branch one)."""
    alive = set()
    for q in t.states:
        for p in (0, 1):
            if p == 1 or t.branch_of(q) == 1:
                alive.add((q, p))
    changed = True
    while changed:
        changed = False
        for node in sorted(alive):
            q, p = node
            if not any(
                (t.step(q, i), 1 - p) in alive for i in range(t.branch_of(q))
            ):
                alive.discard(node)
                changed = True
    return alive


def has_bad_ray(t: AutomaticTree) -> bool:
    """True iff some injective ray (any start, any direction) has degree
    exactly two at every even index.

    Any such ray eventually descends, so it has the shape: climb k steps from
    the start toward the root, bend, then descend forever. The descent is a
    lasso search on (state, parity); climbs are handled by a DP whose length
    is bounded by pigeonhole on (state, parity) pairs.
    """
    descend = _descend_ok(t)
    root = t.root_state
    non_root = {t.step(q, i) for q in t.states for i in range(t.branch_of(q))}

    # k = 0, ray starts at the root and descends.
    if t.branch_of(root) == 2 and any(
        (t.step(root, i), 1) in descend for i in range(2)
    ):
        return True
    # k = 0, ray starts at a non-root vertex of degree two and descends.
    for q in sorted(non_root):
        if t.branch_of(q) == 1 and (t.step(q, 0), 1) in descend:
            return True

    def bend_at(q: str, k: int, indices: range) -> bool:
        down_parity = (k + 1) % 2
        chain = [i for i in indices if a_prev[t.step(q, i)]]
        desc = [i for i in indices if (t.step(q, i), down_parity) in descend]
        if not chain or not desc:
            return False
        return not (len(chain) == 1 and chain == desc)

    # Climb DP: a_prev[q] says a valid climb chain of the current length can
    # hang below a vertex in state q (the chain's top is at ray index t).
    a_prev = {q: t.branch_of(q) == 1 for q in t.states}  # chains of length 1 (index 0)
    limit = 2 * len(t.states) + 2
    for k in range(1, limit + 1):
        # Bend at a non-root vertex: needs two distinct children (chain and
        # descent), impossible at even k where degree two allows one child.
        if k % 2 == 1:
            for q in sorted(non_root):
                if bend_at(q, k, range(t.branch_of(q))):
                    return True
        if k % 2 == 1 or t.branch_of(root) == 2:
            if bend_at(root, k, range(t.branch_of(root))):
                return True
        a_next = {}
        for q in t.states:
            ok = True
            if (k % 2) == 0 and t.branch_of(q) != 1:
                # Ray index k is even: the climb vertex needs degree two.
                ok = False
            a_next[q] = ok and any(
                a_prev[t.step(q, i)] for i in range(t.branch_of(q))
            )
        a_prev = a_next
    return False

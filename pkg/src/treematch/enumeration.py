"""Exhaustive and randomized generation of small trees and forests."""

from __future__ import annotations

from .graph_core import FiniteGraph


def level_sequences(n: int):
    """Canonical level sequences of all rooted trees on n vertices, in
    reverse lexicographic order (the successor rule trims the deepest vertex
    above level 2 and repeats the pattern before it)."""
    if n <= 0:
        return
    s = list(range(1, n + 1))
    while True:
        yield tuple(s)
        p = max((i for i in range(n) if s[i] > 2), default=None)
        if p is None:
            return
        q = next(i for i in range(p - 1, -1, -1) if s[i] == s[p] - 1)
        for i in range(p, n):
            s[i] = s[i - (p - q)]


def tree_from_level_sequence(seq) -> FiniteGraph:
    """Each vertex attaches to the nearest earlier vertex one level up."""
    edges = []
    for i in range(1, len(seq)):
        j = next(j for j in range(i - 1, -1, -1) if seq[j] == seq[i] - 1)
        edges.append((j, i))
    return FiniteGraph.from_edges(len(seq), edges)


def all_trees(n: int):
    """All rooted trees on n vertices as graphs (free trees appear at least
    once; duplicates across rootings are fine for exhaustive checks)."""
    for seq in level_sequences(n):
        yield tree_from_level_sequence(seq)


def forests(n: int):
    """All forests on exactly n vertices, one representative per multiset of
    canonical rooted components (sizes nonincreasing, tree index
    nondecreasing within a size)."""
    seqs = {k: list(level_sequences(k)) for k in range(1, n + 1)}

    def go(remaining: int, size_cap: int, idx_floor: int):
        if remaining == 0:
            yield []
            return
        for size in range(min(size_cap, remaining), 0, -1):
            lo = idx_floor if size == size_cap else 0
            for idx in range(lo, len(seqs[size])):
                for rest in go(remaining - size, size, idx):
                    yield [(size, idx)] + rest

    for combo in go(n, n, 0):
        edges = []
        offset = 0
        for size, idx in combo:
            seq = seqs[size][idx]
            for i in range(1, size):
                j = next(j for j in range(i - 1, -1, -1) if seq[j] == seq[i] - 1)
                edges.append((offset + j, offset + i))
            offset += size
        yield FiniteGraph.from_edges(n, edges)


def random_forest(rng, max_vertices: int = 16) -> FiniteGraph:
    """Random forest: each vertex after the first either attaches to an
    earlier vertex or starts a new component."""
    n = rng.randrange(1, max_vertices + 1)
    edges = []
    for i in range(1, n):
        if rng.random() < 0.85:
            edges.append((rng.randrange(i), i))
    return FiniteGraph.from_edges(n, edges)

"""Small finite graphs and the standing battery of branching machines used
by tests and the docs."""

from __future__ import annotations

import itertools

from .graph_core import AutomaticTree, EndDescriptor, FiniteGraph


def path_graph(n: int) -> FiniteGraph:
    return FiniteGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> FiniteGraph:
    if n < 3:
        raise ValueError("cycles need at least three vertices")
    return FiniteGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> FiniteGraph:
    return FiniteGraph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_graph(n: int) -> FiniteGraph:
    return FiniteGraph.from_edges(n, itertools.combinations(range(n), 2))


def line_tree() -> AutomaticTree:
    """Bi-infinite line: the root has two children, everyone else one."""
    return AutomaticTree.build(
        "root",
        {"root": 2, "l": 1},
        {("root", 0): "l", ("root", 1): "l"},
    )


def unary_tree() -> AutomaticTree:
    """One-way infinite ray from the root."""
    return AutomaticTree.build("root", {"root": 1, "u": 1}, {("root", 0): "u"})


def binary_tree() -> AutomaticTree:
    """Every vertex has two children."""
    return AutomaticTree.build("b", {"b": 2})


def three_regular_tree() -> AutomaticTree:
    """Ternary root, binary body: every vertex has degree three."""
    return AutomaticTree.build(
        "r", {"r": 3, "b": 2}, {("r", 0): "b", ("r", 1): "b", ("r", 2): "b"}
    )


def odd_comb_tree() -> AutomaticTree:
    """Line with a full binary tooth hanging at every line vertex."""
    return AutomaticTree.build(
        "root",
        {"root": 3, "Ll": 2, "Lr": 2, "B": 2},
        {
            ("root", 0): "Ll",
            ("root", 1): "Lr",
            ("root", 2): "B",
            ("Ll", 0): "Ll",
            ("Ll", 1): "B",
            ("Lr", 0): "Lr",
            ("Lr", 1): "B",
        },
    )


def even_comb_tree() -> AutomaticTree:
    """Line with binary teeth at every second line vertex."""
    return AutomaticTree.build(
        "C0",
        {"C0": 3, "Lo": 1, "Le": 2, "Ro": 1, "Re": 2, "B": 2},
        {
            ("C0", 0): "Lo",
            ("C0", 1): "Ro",
            ("C0", 2): "B",
            ("Lo", 0): "Le",
            ("Le", 0): "Lo",
            ("Le", 1): "B",
            ("Ro", 0): "Re",
            ("Re", 0): "Ro",
            ("Re", 1): "B",
        },
    )


def mixed_period_tree() -> AutomaticTree:
    """Ray alternating degree-3 and degree-4 vertices, binary teeth."""
    return AutomaticTree.build(
        "R",
        {"R": 2, "P": 2, "Q": 3, "B": 2},
        {
            ("R", 0): "P",
            ("R", 1): "B",
            ("P", 0): "Q",
            ("P", 1): "B",
            ("Q", 0): "P",
            ("Q", 1): "B",
            ("Q", 2): "B",
        },
    )


def ray_comb_tree() -> AutomaticTree:
    """One-way comb: degree-two root, a binary tooth at every ray vertex."""
    return AutomaticTree.build(
        "RC", {"RC": 2, "B": 2}, {("RC", 0): "RC", ("RC", 1): "B"}
    )


BATTERY: dict = {
    "line": line_tree,
    "unary": unary_tree,
    "binary": binary_tree,
    "three_regular": three_regular_tree,
    "odd_comb": odd_comb_tree,
    "even_comb": even_comb_tree,
    "mixed_period": mixed_period_tree,
    "ray_comb": ray_comb_tree,
}

# Expected bad-ray answers for the battery, frozen by hand analysis.
BAD_RAY_TRUTH: dict = {
    "line": True,
    "unary": True,
    "binary": False,
    "three_regular": False,
    "odd_comb": False,
    "even_comb": True,
    "mixed_period": False,
    "ray_comb": False,
}

# End descriptor strings per battery tree: lists of size 1, 2, and 3 where
# the tree has that many pairwise inequivalent ends to offer. The unary ray
# is absent: end matchings require degree >= 2 everywhere.
BATTERY_ENDS: dict = {
    "line": [["|0"], ["|0", "1|0"]],
    "binary": [["|0"], ["|0", "|1"], ["|0", "|1", "0,1|0"]],
    "three_regular": [["|0"], ["|0", "|1"], ["|0", "|1", "2|0"]],
    "odd_comb": [["|0"], ["|0", "1|0"], ["|0", "1|0", "2|0"]],
    "even_comb": [["|0"], ["|0", "1|0"]],
    "mixed_period": [["|0"], ["|0", "1|0"], ["|0", "1|0", "0,1|0"]],
    "ray_comb": [["|0"]],
}


def battery_ends(name: str) -> list:
    """Parsed end descriptor lists for a battery tree."""
    return [
        [EndDescriptor.parse(s) for s in group] for group in BATTERY_ENDS[name]
    ]

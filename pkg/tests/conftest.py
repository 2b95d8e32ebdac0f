"""Shared fixtures and checking helpers for the test suite."""

import contextlib
import io

import pytest

from treematch import AutomaticTree, FiniteGraph, shortlex
from treematch.cli import run as cli_run_raw
from treematch.presets import BATTERY


@pytest.fixture(scope="session")
def battery():
    """Name -> built battery tree, one instance per session."""
    return {name: build() for name, build in BATTERY.items()}


def cli_run(argv):
    """Run the CLI entry point capturing (exit code, stdout, stderr)."""
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli_run_raw(list(argv))
    return code, out.getvalue(), err.getvalue()


def induced_tree_graph(t: AutomaticTree, vertices):
    """FiniteGraph on the given tree vertices with the edges they induce.

    Returns (graph, ordered vertex list); ids follow shortlex order.
    """
    order = sorted(set(vertices), key=shortlex)
    index = {v: i for i, v in enumerate(order)}
    edges = set()
    for v in order:
        if v and v[:-1] in index:
            edges.add((index[v[:-1]], index[v]))
    return FiniteGraph.from_edges(len(order), edges), order


def check_window_matching(t: AutomaticTree, oracle, depth, excluded=None):
    """Assert the oracle is a total involution into tree edges on the window,
    skipping vertices for which `excluded` holds. Returns vertices checked."""
    skip = excluded or (lambda v: False)
    checked = 0
    for v in t.window(depth).paths:
        if skip(v):
            continue
        assert oracle.in_domain(v), f"{v} unexpectedly outside the domain"
        p = oracle.partner(v)
        assert abs(len(p) - len(v)) == 1, f"partner of {v} is {p}, not a neighbor"
        shorter, longer = (p, v) if len(p) < len(v) else (v, p)
        assert longer[: len(shorter)] == shorter, f"{v} paired across the tree with {p}"
        assert t.is_valid_vertex(p)
        assert not skip(p), f"{v} matched into the excluded set at {p}"
        assert oracle.partner(p) == v, f"not an involution at {v}"
        checked += 1
    return checked


def longest_window_bad_path(t: AutomaticTree, depth: int, cap: int) -> int:
    """Exhaustive search: the longest injective path inside window(depth)
    whose even-position vertices have full-tree degree exactly two,
    truncated at cap vertices."""
    win = t.window(depth)
    members = set(win.paths)
    best = 0

    def extend(path, on_path):
        nonlocal best
        best = max(best, len(path))
        if len(path) >= cap:
            return
        for w in t.neighbors(path[-1]):
            if w not in members or w in on_path:
                continue
            if len(path) % 2 == 0 and t.degree(w) != 2:
                continue
            path.append(w)
            on_path.add(w)
            extend(path, on_path)
            path.pop()
            on_path.discard(w)

    for start in win.paths:
        if t.degree(start) != 2:
            continue
        extend([start], {start})
        if best >= cap:
            break
    return best

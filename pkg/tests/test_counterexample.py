"""The pair-system recursion on binary strings and its level invariants."""

import itertools
import random

import pytest

from treematch.counterexample import (
    LevelSystem,
    advance,
    check_acyclic,
    check_condition1,
    check_condition2,
    dense_schedule,
    init_level,
    levels,
    section_report,
)


def length_lex_words():
    yield ""
    for length in itertools.count(1):
        for bits in itertools.product("01", repeat=length):
            yield "".join(bits)


def reference_levels(max_n):
    """Explicit-set reimplementation of the recursion, used as the oracle:
    materializes S instead of representing it by constraints."""
    words = list(itertools.islice(length_lex_words(), max_n + 2))
    r_set, s_set = set(), {("", "")}
    yield 0, frozenset(r_set), frozenset(s_set)
    for n in range(max_n):
        k = n // 2
        if n % 2 == 0:
            w = words[k]
            u_s = w + "0" * (2 * k - len(w))
            v_p = min(v for (u, v) in s_set if u == u_s)
            s_set = {(u + a, v + b) for (u, v) in s_set for a in "01" for b in "01"}
            r_set = {(u + a, v + a) for (u, v) in r_set for a in "01"}
            r_set.add((u_s + "0", v_p + "1"))
        else:
            w = words[k]
            v_s = w + "0" * (2 * k + 1 - len(w))
            first = {u for (u, _) in r_set}
            u_p = min(u for (u, v) in s_set if v == v_s and u not in first)
            r_set = {(u + a, v + a) for (u, v) in r_set for a in "01"}
            grown = {(u + a, v + b) for (u, v) in s_set for a in "01" for b in "01"}
            s_set = {
                (u, v) for (u, v) in grown if u != u_p + "0" or v == v_s + "1"
            }
        yield n + 1, frozenset(r_set), frozenset(s_set)


class TestFrozenLevels:
    def test_level_zero(self):
        ls = init_level()
        assert ls.n == 0
        assert ls.pairs == ()
        assert list(ls.s_pairs()) == [("", "")]
        assert ls.s_size() == 1

    def test_level_one(self):
        ls = list(levels(1))[1]
        assert set(ls.pairs) == {("0", "1")}
        assert ls.s_size() == 4
        assert ls.u_history == (("", ""),)

    def test_level_two(self):
        ls = list(levels(2))[2]
        assert sorted(ls.pairs) == [("00", "10"), ("01", "11")]
        assert ls.s_size() == 13
        assert ls.v_history == (("0", "1"),)
        assert ls.s_contains("10", "01")
        assert not ls.s_contains("10", "11")
        assert ls.s_contains("11", "00")

    def test_level_three_size(self):
        assert len(list(levels(3))[3].pairs) == 5

    def test_r_sizes_follow_the_recurrences(self):
        produced = list(levels(16))
        sizes = [len(ls.pairs) for ls in produced]
        assert sizes[:9] == [0, 1, 2, 5, 10, 21, 42, 85, 170]
        assert sizes[16] == 43690
        for n in range(0, 15, 2):
            assert sizes[n + 1] == 2 * sizes[n] + 1
            assert sizes[n + 2] == 2 * sizes[n + 1]


class TestAgainstExplicitSets:
    def test_full_agreement_to_level_eight(self):
        rng = random.Random(99)
        produced = list(levels(8))
        for (n, r_set, s_set), ls in zip(reference_levels(8), produced):
            assert ls.n == n
            assert set(ls.pairs) == r_set, n
            assert ls.s_size() == len(s_set), n
            assert set(ls.s_pairs()) == s_set, n
            if n == 0:
                continue
            for _ in range(200):
                u = format(rng.getrandbits(n), f"0{n}b")
                v = format(rng.getrandbits(n), f"0{n}b")
                assert ls.s_contains(u, v) == ((u, v) in s_set), (n, u, v)

    def test_r_inside_s_everywhere(self):
        for ls in levels(14):
            for u, v in ls.pairs:
                assert ls.s_contains(u, v), (ls.n, u, v)

    def test_odd_step_additions_come_from_s(self):
        produced = list(levels(12))
        for n in range(0, 12, 2):
            before, after = produced[n], produced[n + 1]
            grown = {
                (u + a, v + a) for (u, v) in before.pairs for a in "01"
            }
            added = set(after.pairs) - grown
            (u_new, v_new), = added
            assert u_new.endswith("0") and v_new.endswith("1")
            assert before.s_contains(u_new[:-1], v_new[:-1])


class TestConditionsAndAcyclicity:
    def test_conditions_hold_to_level_twelve(self):
        for ls in levels(12):
            ok1, witness1 = check_condition1(ls)
            ok2, witness2 = check_condition2(ls)
            assert ok1, (ls.n, witness1)
            assert ok2, (ls.n, witness2)

    def test_acyclic_to_level_twelve(self):
        for ls in levels(12):
            ok, cycle = check_acyclic(ls)
            assert ok, (ls.n, cycle)

    def test_acyclicity_checker_finds_cycles(self):
        fabricated = LevelSystem(
            n=1,
            pairs=(("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")),
            prunes=(),
            u_history=(),
            v_history=(),
        )
        ok, cycle = check_acyclic(fabricated)
        assert not ok
        assert cycle

    def test_advance_requires_an_even_level(self):
        odd = list(levels(1))[1]
        with pytest.raises(ValueError):
            advance(odd)


class TestSchedule:
    def test_first_entries(self):
        assert dense_schedule(0) == ("", "0")
        assert dense_schedule(1) == ("00", "000")
        assert dense_schedule(2) == ("1000", "10000")

    def test_lengths(self):
        for m in range(40):
            u, v = dense_schedule(m)
            assert len(u) == 2 * m
            assert len(v) == 2 * m + 1

    def test_matches_length_lex_enumeration(self):
        words = list(itertools.islice(length_lex_words(), 60))
        for m, w in enumerate(words):
            u, v = dense_schedule(m)
            assert u == w + "0" * (2 * m - len(w))
            assert v == w + "0" * (2 * m + 1 - len(w))

    def test_short_words_scheduled_quickly(self):
        # every word of length <= 4 appears as a prefix by step 30
        for length in range(5):
            for bits in itertools.product("01", repeat=length):
                w = "".join(bits)
                assert any(
                    dense_schedule(m)[0].startswith(w) for m in range(31)
                ), w
                assert any(
                    dense_schedule(m)[1].startswith(w) for m in range(31)
                ), w


class TestDeterminism:
    def test_two_runs_agree_exactly(self):
        assert list(levels(10)) == list(levels(10))


class TestSectionReport:
    def test_k_zero_trivially_passes(self):
        for ls in levels(6):
            rep = section_report(ls, 0)
            assert rep.max_passing_len == ls.n
            assert rep.codimension == 0
            assert rep.failing == ()

    def test_level_two_failures(self):
        ls = list(levels(2))[2]
        rep = section_report(ls, 1)
        assert rep.max_passing_len == 0
        assert rep.codimension == 2
        assert rep.failing == (("0", 1, 0), ("1", 0, 1))

    def test_threshold_for_singleton_sections(self):
        produced = list(levels(8))
        first = next(
            n for n in range(9) if section_report(produced[n], 1).max_passing_len >= 1
        )
        assert first == 5

    def test_passing_prefixes_persist_two_levels_later(self):
        produced = list(levels(12))

        def passing(ls, k, ell):
            rows = {}
            cols = {}
            for u, v in ls.pairs:
                rows[u] = rows.get(u, 0) + 1
                cols[v] = cols.get(v, 0) + 1
            out = set()
            for i in range(1 << ell):
                w = format(i, f"0{ell}b") if ell else ""
                row_ok = any(c >= k for s, c in rows.items() if s.startswith(w))
                col_ok = any(c >= k for s, c in cols.items() if s.startswith(w))
                if row_ok and col_ok:
                    out.add(w)
            return out

        for n in range(0, 10):
            for ell in range(0, min(n, 3) + 1):
                assert passing(produced[n], 1, ell) <= passing(produced[n + 2], 1, ell)

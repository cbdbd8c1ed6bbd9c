from __future__ import annotations


import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_words, star_values
from syncdelay.automata import equivalent, random_word, regex, syntactic_monoid
from syncdelay.codes import (
    CodeError,
    GammaPieces,
    count_factorizations,
    gamma_star_automaton,
    has_sync_delay,
    is_prefix_code,
    min_sync_delay,
)
from syncdelay.corpus import parity_dfa, s3_cayley_dfa, s3_tables
from syncdelay.groups import cyclic_group, trivial_group
from syncdelay.varieties import ABELIAN, SOLVABLE, TRIVIAL, group_in_variety, monoid_in_Hbar, solvable_q

AB = ("a", "b")
ABC = ("a", "b", "c")


def in_star(K, w):
    return count_factorizations(K, w) > 0


def check_counterexample(K, d, cx):
    u, v, w = cx
    assert in_star(K, u + v + w)
    assert not in_star(K, u + v)
    # v in K^d: exactly d blocks
    def cut(x, k):
        if k == 0:
            return len(x) == 0
        return any(K.accepts(x[:i]) and cut(x[i:], k - 1) for i in range(1, len(x) + 1))

    assert cut(tuple(v), d)


def brute_delay_ok(K, d, n):
    """No counterexample with |uvw| <= n, by direct enumeration."""
    A = K.alphabet
    for x in all_words(A, n):
        if not in_star(K, x):
            continue
        for i in range(len(x) + 1):
            for j in range(i, len(x) + 1):
                u, v = x[:i], x[i:j]
                if d == 0 and v:
                    continue
                if d and count_power(K, v, d) and not in_star(K, u + v):
                    return False
    return True


def count_power(K, v, d):
    if d == 0:
        return len(v) == 0
    return any(K.accepts(v[:i]) and count_power(K, v[i:], d - 1) for i in range(1, len(v) + 1))


def test_prefix_code_examples():
    assert is_prefix_code(regex("#", AB))
    assert is_prefix_code(regex("(a|b)*c", ABC))
    r = is_prefix_code(regex("a|ab", AB))
    assert not r and r.u == ("a",) and r.uv == ("a", "b")
    assert not is_prefix_code(regex("_|a", AB))


def test_delay_examples_exact():
    A = regex("a|b|c", ABC)
    assert has_sync_delay(A, 0)
    Bc = regex("(a|b)*c", ABC)
    assert has_sync_delay(Bc, 1)
    r0 = has_sync_delay(Bc, 0)
    assert not r0
    check_counterexample(Bc, 0, r0.counterexample)
    K = regex("abab", AB)
    for d in range(6):
        r = has_sync_delay(K, d)
        assert not r
        check_counterexample(K, d, r.counterexample)
        if d >= 1:
            assert r.counterexample == (tuple("ab"), tuple("abab") * d, tuple("ab"))
    # at d = 0 the least violation is already a (u = a, v = 1, w = bab)
    assert has_sync_delay(K, 0).counterexample == (("a",), (), tuple("bab"))


def test_min_sync_delay_examples():
    assert min_sync_delay(regex("a|b|c", ABC), 5).delay == 0
    r = min_sync_delay(regex("(a|b)*c", ABC), 5)
    assert r.delay == 1
    r = min_sync_delay(regex("ab", AB), 5)
    assert r.delay == 1 and r.counterexamples == ((("a",), (), ("b",)),)
    r = min_sync_delay(regex("abab", AB), 5)
    assert r.delay is None and r.searched_up_to == 5 and len(r.counterexamples) == 6
    r = min_sync_delay(regex("a|ab", AB), 5)
    assert not r.is_prefix_code and r.delay is None


def test_delay_requires_prefix_code():
    with pytest.raises(CodeError):
        has_sync_delay(regex("a|ab", AB), 1)


CODES = ["a|b", "ab", "a*b", "aa|ab|b", "abab", "ab|ba", "a|ba", "aab|b", "(aa)*b", "aba|b"]


@pytest.mark.parametrize("k", CODES)
def test_delay_monotone_and_brute(k):
    K = regex(k, AB)
    assert is_prefix_code(K)
    prev = False
    for d in range(4):
        ok = bool(has_sync_delay(K, d))
        if prev:
            assert ok
        prev = ok
        r = has_sync_delay(K, d)
        if not r:
            check_counterexample(K, d, r.counterexample)
        else:
            assert brute_delay_ok(K, d, 7)


@pytest.mark.parametrize("k", CODES)
def test_unique_factorization(k):
    K = regex(k, AB)
    rng = np.random.default_rng(5)
    blocks = [w for w in all_words(AB, 5) if K.accepts(w)]
    for _ in range(100):
        n = int(rng.integers(0, 6))
        word = sum((blocks[int(rng.integers(0, len(blocks)))] for _ in range(n)), ())
        assert count_factorizations(K, word) == 1


def test_gamma_examples():
    T = trivial_group()
    D = gamma_star_automaton(GammaPieces(T, {0: regex("a|b", AB)}), 0)
    assert equivalent(D, regex("(a|b)*", AB))
    Z2 = cyclic_group(2)
    P = GammaPieces(Z2, {1: regex("a", AB), 0: regex("b", AB)})
    assert equivalent(gamma_star_automaton(P, 0), parity_dfa())
    G, d, s = s3_tables()
    DS = ("d", "s")
    P = GammaPieces(G, {d: regex("d", DS), s: regex("s", DS)})
    for g in G.carrier:
        assert equivalent(gamma_star_automaton(P, g), s3_cayley_dfa(g))


def test_gamma_empty_pieces_and_errors():
    T = trivial_group()
    D = gamma_star_automaton(GammaPieces(T, {}), 0, AB)
    assert D.accepts("") and not D.accepts("a")
    with pytest.raises(CodeError, match="share"):
        gamma_star_automaton(GammaPieces(cyclic_group(2), {0: regex("a|b", AB), 1: regex("a", AB)}), 0)
    with pytest.raises(CodeError, match="empty word"):
        gamma_star_automaton(GammaPieces(T, {0: regex("a*", AB)}), 0)


PIECE_SETS = [
    (2, {0: "a*bb", 1: "ba"}),
    (2, {1: "ab|b", 0: "aa"}),
    (3, {1: "(aa)*b", 2: "ab"}),
    (2, {0: "(ab)*b", 1: "aa"}),
    (3, {1: "a", 2: "bb", 0: "ba"}),
]


@pytest.mark.parametrize("n,spec", PIECE_SETS)
def test_gamma_against_factorization_oracle(n, spec):
    G = cyclic_group(n)
    pieces = {g: regex(t, AB) for g, t in spec.items()}
    preds = {g: D.accepts for g, D in pieces.items()}
    from syncdelay.automata import union_all

    assert is_prefix_code(union_all(AB, pieces.values()))
    P = GammaPieces(G, pieces)
    for target in G.carrier:
        D = gamma_star_automaton(P, target)
        for w in all_words(AB, 7):
            vals = star_values(w, preds, G.mul, G.unit)
            assert D.accepts(w) == (target in vals), (spec, target, w)


DELAY_SETS = [
    (2, {1: "ab", 0: "b"}),
    (2, {0: "a", 1: "ba"}),
    (3, {1: "(aa)*b", 2: "ab"}),
    (3, {1: "b", 2: "ab", 0: "aab"}),
    (2, {1: "aab", 0: "b"}),
]


def _pieces_in(V, pieces):
    return all(monoid_in_Hbar(syntactic_monoid(D).monoid, V) for D in pieces.values())


@pytest.mark.parametrize("n,spec", DELAY_SETS)
def test_gamma_variety_property(n, spec):
    G = cyclic_group(n)
    pieces = {g: regex(t, AB) for g, t in spec.items()}
    from syncdelay.automata import union_all

    assert min_sync_delay(union_all(AB, pieces.values()), 5).delay is not None
    D = gamma_star_automaton(GammaPieces(G, pieces), 0)
    M = syntactic_monoid(D).monoid
    for V in (TRIVIAL, ABELIAN, SOLVABLE, solvable_q(n)):
        if group_in_variety(G, V) and _pieces_in(V, pieces):
            assert monoid_in_Hbar(M, V)


def test_gamma_variety_needs_bounded_delay():
    # {a, bb, ba} is a prefix code without bounded delay; the star over Z/3
    # then has a subgroup of order 6, outside every variety of 3-groups
    from syncdelay.automata import union_all

    pieces = {1: regex("a", AB), 2: regex("bb", AB), 0: regex("ba", AB)}
    assert min_sync_delay(union_all(AB, pieces.values()), 5).delay is None
    M = syntactic_monoid(gamma_star_automaton(GammaPieces(cyclic_group(3), pieces), 0)).monoid
    assert _pieces_in(solvable_q(3), pieces)
    assert not monoid_in_Hbar(M, solvable_q(3))


def test_gamma_variety_property_s3():
    G, d, s = s3_tables()
    DS = ("d", "s")
    pieces = {d: regex("d", DS), s: regex("s", DS)}
    M = syntactic_monoid(gamma_star_automaton(GammaPieces(G, pieces), 0)).monoid
    assert monoid_in_Hbar(M, SOLVABLE) and not monoid_in_Hbar(M, ABELIAN)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 50_000))
def test_prefix_check_brute(seed):
    rng = np.random.default_rng(seed)
    words = {random_word(rng, AB, 4, 1) for _ in range(int(rng.integers(1, 5)))}
    from syncdelay.automata import finite_language_dfa

    K = finite_language_dfa(AB, words)
    brute = not any(u != v and v[: len(u)] == u for u in words for v in words)
    assert bool(is_prefix_code(K)) == brute

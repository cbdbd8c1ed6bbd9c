from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_mul_check
from syncdelay.automata import regex, syntactic_monoid
from syncdelay.corpus import example14_dfa, flip_flop, small_monoids
from syncdelay.groups import Group, cyclic_group
from syncdelay.monoid import (
    DivisionWitness,
    Monoid,
    MonoidError,
    MonoidHom,
    SizeCapExceeded,
    compose_divisions,
    direct_product,
    format_monoid,
    generate,
    idempotents,
    identity_witness,
    is_aperiodic,
    is_isomorphic,
    is_unit,
    local_monoid_carrier,
    maximal_subgroups,
    mul,
    parse_monoid,
    submonoid_generated,
    units,
    verify_division,
)

TRIVIAL = Monoid([[0]])


def z(n):
    return cyclic_group(n).as_monoid()


def ex14():
    res = syntactic_monoid(example14_dfa())
    return res.monoid, res.hom


def test_mul_trivial_and_z2():
    assert mul(TRIVIAL, 0, 0) == 0
    assert mul(z(2), 1, 1) == 0


def test_mul_out_of_range():
    with pytest.raises(IndexError):
        mul(z(2), 2, 0)


def test_mul_example14_a_delta_is_a():
    M, phi = ex14()
    a, d = phi.images["a"], phi.images["d"]
    assert mul(M, a, d) == a


def test_construction_rejects_bad_tables():
    with pytest.raises(MonoidError, match="neutral"):
        Monoid([[0, 1], [0, 0]])
    # identity fine, but (1 1) 2 != 1 (1 2)
    bad = [[0, 1, 2], [1, 2, 0], [2, 2, 2]]
    with pytest.raises(MonoidError, match="not associative"):
        Monoid(bad)
    with pytest.raises(MonoidError):
        Monoid([[0, 5], [1, 0]])


def test_submonoid_generated():
    assert submonoid_generated(z(6), []) == (0,)
    assert submonoid_generated(z(6), [2]) == (0, 2, 4)
    M, phi = ex14()
    S = submonoid_generated(M, [phi.images["d"], phi.images["s"]])
    assert len(S) == 6
    assert all(is_unit(M, x) for x in S)


def test_units():
    assert is_unit(TRIVIAL, 0)
    assert units(z(5)) == tuple(range(5))
    M, phi = ex14()
    a = phi.images["a"]
    assert not is_unit(M, a)
    # brute force over all y
    assert not any(M.mul(a, y) == M.identity and M.mul(y, a) == M.identity for y in range(M.size))


def test_aperiodic():
    assert is_aperiodic(TRIVIAL)
    assert not is_aperiodic(z(2))
    M = syntactic_monoid(regex("(ab)*", ("a", "b"))).monoid
    assert is_aperiodic(M)
    # exponent check done by hand
    assert all(M.power(x, M.size) == M.power(x, M.size + 1) for x in range(M.size))


def test_idempotents_flip_flop():
    assert idempotents(flip_flop()) == (0, 1, 2)


def test_maximal_subgroups_examples():
    gs = maximal_subgroups(TRIVIAL)
    assert len(gs) == 1 and gs[0].carrier == (0,)
    gs = maximal_subgroups(z(6))
    assert len(gs) == 1 and gs[0].order == 6
    M, _ = ex14()
    orders = sorted(G.order for G in maximal_subgroups(M))
    assert orders.count(6) == 1
    assert set(orders) == {1, 6}


def _is_group_subset(M, S):
    S = set(S)
    r = M.rows
    if any(r[x][y] not in S for x in S for y in S):
        return None
    for e in S:
        if r[e][e] == e and all(r[e][x] == x == r[x][e] for x in S):
            if all(any(r[x][y] == e == r[y][x] for y in S) for x in S):
                return e
    return None


@pytest.mark.parametrize("idx", range(0, 45, 4))
def test_maximal_subgroups_complete_small(idx):
    M = small_monoids(4)[idx]
    subs = maximal_subgroups(M)
    by_unit = {G.unit: set(G.carrier) for G in subs}
    for k in range(1, M.size + 1):
        for S in combinations(range(M.size), k):
            e = _is_group_subset(M, S)
            if e is not None:
                assert set(S) <= by_unit[e]


def test_maximal_subgroups_are_groups():
    for M in small_monoids(3):
        for G in maximal_subgroups(M):
            r = M.rows
            cs = set(G.carrier)
            assert all(r[x][y] in cs for x in cs for y in cs)
            assert all(any(r[x][y] == G.unit == r[y][x] for y in cs) for x in cs)


def test_direct_product():
    assert is_isomorphic(direct_product(flip_flop(), TRIVIAL), flip_flop())
    P = direct_product(z(2), z(2))
    x = 1 * 2 + 1
    assert x != P.identity and P.mul(x, x) == P.identity
    assert is_isomorphic(direct_product(z(2), z(3)), z(6))
    with pytest.raises(SizeCapExceeded):
        direct_product(z(10), z(10), cap=50)


def test_verify_division_identity_and_corrupted():
    M, _ = ex14()
    assert verify_division(M, M, identity_witness(M))
    w = identity_witness(M)
    bad = dict(w.surjection)
    bad[3], bad[4] = bad[4], bad[3]
    v = verify_division(M, M, DivisionWitness(w.sub_carrier, bad))
    assert not v
    assert "hom law fails" in v.reason or "neutral" in v.reason


def test_verify_division_quotient():
    # Z/4 -> Z/2 by parity
    w = DivisionWitness((0, 1, 2, 3), {0: 0, 1: 1, 2: 0, 3: 1})
    assert verify_division(z(2), z(4), w)
    w2 = DivisionWitness((0, 1, 2, 3), {0: 0, 1: 1, 2: 1, 3: 0})
    v = verify_division(z(2), z(4), w2)
    assert not v and "f(" in v.reason


def test_verify_division_non_identity_neutral():
    # the subsemigroup {1} of the flip-flop, a monoid with neutral 1
    assert verify_division(TRIVIAL, flip_flop(), DivisionWitness((1,), {1: 0}))
    assert not verify_division(TRIVIAL, flip_flop(), DivisionWitness((1, 2), {1: 0}))


def test_compose_divisions():
    # local monoid of the flip-flop at 1 is {1}; trivial divides that
    M = flip_flop()
    inner = DivisionWitness((0,), {0: 0})
    outer = DivisionWitness((1,), {1: 0})
    w = compose_divisions(TRIVIAL, M, inner, outer)
    assert verify_division(TRIVIAL, M, w)
    # Z/2 <= Z/4 <= Z/4 x Z/2
    P = direct_product(z(4), z(2))
    outer = DivisionWitness(tuple(i * 2 for i in range(4)), {i * 2: i for i in range(4)})
    inner = DivisionWitness((0, 1, 2, 3), {0: 0, 1: 1, 2: 0, 3: 1})
    w = compose_divisions(z(4), P, inner, outer)
    assert verify_division(z(2), P, w)


def test_text_format_round_trip():
    M, _ = ex14()
    assert parse_monoid(format_monoid(M)) == M
    text = "monoid 2\nidentity 1\ntable\n0 0\n0 1\n"
    N = parse_monoid(text)
    assert N.identity == 0 and N.size == 2
    with pytest.raises(MonoidError, match="not associative"):
        parse_monoid("monoid 3\nidentity 0\ntable\n0 1 2\n1 2 0\n2 2 2\n")
    with pytest.raises(MonoidError):
        parse_monoid("monoid 2\nidentity 0\ntable\n0 1\n")


def test_generate_matches_brute_table():
    # transformations of 3 points generated by a cycle and a collapse
    gens = [(1, 2, 0), (0, 0, 2)]
    M, keys, gi = generate((0, 1, 2), [0, 1], lambda x, g: tuple(gens[g][q] for q in x))
    assert brute_mul_check(M.rows)
    for i, x in enumerate(keys):
        for j, y in enumerate(keys):
            xy = tuple(y[q] for q in x)  # x first, then y
            assert keys[M.mul(i, j)] == xy
    with pytest.raises(SizeCapExceeded):
        generate((0, 1, 2), [0, 1], lambda x, g: tuple(gens[g][q] for q in x), cap=5)


def test_hom_evaluation():
    phi = MonoidHom(("a", "b"), z(3), {"a": 1, "b": 2})
    assert phi(()) == 0
    assert phi("aab") == 1
    assert phi.image() == (0, 1, 2)
    with pytest.raises(MonoidError):
        MonoidHom(("a",), z(3), {})


def test_local_monoid_carrier():
    M = flip_flop()
    assert local_monoid_carrier(M, 1) == (1,)
    assert local_monoid_carrier(M, 0) == (0, 1, 2)


def test_sampled_associativity_for_large_tables():
    n = 300
    t = np.add.outer(np.arange(n), np.arange(n)) % n
    M = Monoid(t)
    assert M.size == n
    t2 = t.copy()
    t2[5, :] = np.arange(n)[::-1]  # breaks almost everything in row 5
    t2[5, 0] = 5
    t2[0, 5] = 5
    with pytest.raises(MonoidError):
        Monoid(t2)


@st.composite
def monoid_tables(draw):
    M = draw(st.sampled_from(small_monoids(3)))
    return M


@settings(max_examples=30, deadline=None)
@given(monoid_tables(), st.lists(st.integers(0, 2), max_size=3))
def test_submonoid_closure_property(M, gens):
    gens = [g % M.size for g in gens]
    S = set(submonoid_generated(M, gens))
    assert M.identity in S and set(gens) <= S
    assert all(M.mul(x, y) in S for x in S for y in S)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(small_monoids(3)), st.sampled_from(small_monoids(3)))
def test_direct_product_associative(M, N):
    P = direct_product(M, N)
    assert brute_mul_check(P.rows)
    assert P.size == M.size * N.size


def test_group_of_monoid_rejects_non_group():
    with pytest.raises(MonoidError):
        Group.of_monoid(flip_flop())

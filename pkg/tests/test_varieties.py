from __future__ import annotations

import pytest

from syncdelay.automata import regex, syntactic_monoid
from syncdelay.corpus import example14_dfa, small_monoids
from syncdelay.groups import cyclic_group, group_divides, symmetric_group, trivial_group
from syncdelay.monoid import is_aperiodic
from syncdelay.varieties import (
    ABELIAN,
    ALL_GROUPS,
    SOLVABLE,
    TRIVIAL,
    VarietySpec,
    derived_series,
    derived_subgroup,
    group_in_variety,
    is_solvable,
    monoid_in_Hbar,
    parse_variety,
    solvable_q,
)
from test_groups import prod_group, universe

VARIETIES = [TRIVIAL, ABELIAN, SOLVABLE, solvable_q(2), solvable_q(3), solvable_q(6), ALL_GROUPS]


def test_derived_subgroup():
    assert derived_subgroup(cyclic_group(6)).order == 1
    S3 = symmetric_group(3)
    D = derived_subgroup(S3)
    assert D.order == 3 and D.is_abelian()
    series = derived_series(S3)
    assert [g.order for g in series] == [6, 3, 1]  # two steps


def test_group_in_variety_examples():
    S3 = symmetric_group(3)
    assert group_in_variety(S3, SOLVABLE)
    assert not group_in_variety(S3, ABELIAN)
    assert group_in_variety(cyclic_group(6), solvable_q(6))
    assert not group_in_variety(cyclic_group(6), solvable_q(2))
    for V in VARIETIES:
        assert group_in_variety(trivial_group(), V)


def test_solvable_q_uses_divides_a_power():
    # |Z/4| = 4 divides 2^2; |Z/2| = 2 divides a power of 6 but 6 divides no power of 2
    assert group_in_variety(cyclic_group(4), solvable_q(2))
    assert group_in_variety(cyclic_group(2), solvable_q(6))
    assert not group_in_variety(cyclic_group(6), solvable_q(4))


def test_monoid_in_hbar_examples():
    M = syntactic_monoid(regex("(ab)*", ("a", "b"))).monoid
    assert is_aperiodic(M) and monoid_in_Hbar(M, TRIVIAL)
    E = syntactic_monoid(example14_dfa()).monoid
    assert monoid_in_Hbar(E, SOLVABLE).verdict
    rep = monoid_in_Hbar(E, ABELIAN)
    assert not rep.verdict
    assert [o for _, o, ok in rep.subgroups if not ok] == [6]
    assert monoid_in_Hbar(cyclic_group(4).as_monoid(), solvable_q(2))


def test_hbar_all_groups_always_true():
    for M in small_monoids(4):
        assert monoid_in_Hbar(M, ALL_GROUPS)


def test_hbar_trivial_iff_aperiodic():
    for M in small_monoids(4):
        assert bool(monoid_in_Hbar(M, TRIVIAL)) == is_aperiodic(M)


def test_division_monotone():
    U = universe(12) + [prod_group(cyclic_group(2), cyclic_group(6)), prod_group(cyclic_group(3), cyclic_group(3))]
    for H in U:
        for G in U:
            if G.order > 12 or not group_divides(H, G).verdict:
                continue
            for V in VARIETIES:
                if group_in_variety(G, V):
                    assert group_in_variety(H, V), (H, G, V)


def test_product_closed():
    U = universe(6)
    for G1 in U:
        for G2 in U:
            if G1.order * G2.order > 36:
                continue
            P = prod_group(G1, G2)
            for V in VARIETIES:
                if group_in_variety(G1, V) and group_in_variety(G2, V):
                    assert group_in_variety(P, V)


def test_parse_variety():
    assert parse_variety("abelian") == ABELIAN
    assert parse_variety("solvable-q=6") == solvable_q(6)
    assert str(solvable_q(6)) == "solvable-q=6"
    with pytest.raises(ValueError):
        parse_variety("nilpotent")
    with pytest.raises(ValueError):
        VarietySpec("solvable-q", 1)


def test_non_solvable_group():
    S5 = symmetric_group(5)
    assert not is_solvable(S5)
    assert derived_series(S5)[-1].order == 60
    assert group_in_variety(S5, ALL_GROUPS) and not group_in_variety(S5, SOLVABLE)
    assert is_solvable(symmetric_group(4))

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from syncdelay.automata import equivalent, regex
from syncdelay.corpus import parity_dfa, s3_cayley_dfa, s3_tables
from syncdelay.groups import cyclic_group, symmetric_group, trivial_group
from syncdelay.omega import LassoWord, lasso_in_buchi
from syncdelay.sdexpr import (
    EMPTY,
    EPS,
    Concat,
    ExprError,
    Omega,
    Star,
    Union,
    compile_finite,
    compile_finite_part,
    compile_omega,
    concat,
    format_expr,
    letter,
    omega,
    parse_expr,
    star,
    star_coset,
    union,
    validate,
)
from syncdelay.sdexpr.ast import dag_size, is_omega_free, letters_of, nodes, tree_size
from syncdelay.varieties import ABELIAN, ALL_GROUPS, SOLVABLE, TRIVIAL

AB = ("a", "b")
T1 = trivial_group()
Z2 = cyclic_group(2)
a, b = letter("a"), letter("b")


# -- smart constructors -----------------------------------------------------------


def test_union_flattens_and_dedups():
    e = union(a, union(b, a), EMPTY)
    assert isinstance(e, Union) and e.parts == (a, b)
    assert union() == EMPTY
    assert union(EMPTY, a) == a


def test_concat_units():
    assert concat(EMPTY, a) == EMPTY
    assert concat(a, EMPTY) == EMPTY
    assert concat(EPS, a) == a
    assert concat(a, EPS) == a
    assert isinstance(concat(a, b), Concat)


def test_star_constructors():
    assert star(T1, {}) == EPS
    assert omega(T1, {}) == EMPTY
    s = star(Z2, {1: a, 0: b})
    assert isinstance(s, Star) and s.pieces == ((0, b), (1, a))
    assert star(Z2, {0: b, 1: EMPTY}).pieces == ((0, b),)
    with pytest.raises(ExprError):
        star(Z2, {2: a})
    with pytest.raises(ExprError):
        star(Z2, [(0, a), (0, b)])
    assert star_coset(Z2, {}, 0) == EPS
    assert star_coset(Z2, {}, 1) == EMPTY
    with pytest.raises(ExprError):
        star_coset(Z2, {0: a}, 3)


def test_hash_by_value_and_sharing():
    x = star(Z2, {0: b, 1: a})
    y = star(cyclic_group(2), {1: a, 0: b})
    assert x == y and hash(x) == hash(y)
    e = concat(x, concat(x, x))
    assert dag_size(e) < tree_size(e)
    assert letters_of(e) == {"a", "b"}
    assert nodes(e)[-1] == e


def test_omega_free():
    o = omega(T1, {0: a})
    assert is_omega_free(star(T1, {0: a}))
    assert not is_omega_free(concat(b, o))
    assert isinstance(o, Omega) and o.star() == star(T1, {0: a})


# -- s-expressions ---------------------------------------------------------------


SAMPLES = [
    "(empty)",
    "(letter a)",
    "(union (letter a) (letter b))",
    "(concat (letter a) (letter b))",
    "(star (trivial) (piece 0 (letter a)))",
    "(star (cyclic 2) (piece 0 (letter b)) (piece 1 (letter a)))",
    "(omega (trivial) (piece 0 (letter a)))",
    "(starcoset (sym 3) 1 (piece 1 (letter d)) (piece 3 (letter s)))",
    "(concat (star (trivial) (piece 0 (letter b))) (omega (trivial) (piece 0 (letter a))))",
]


@pytest.mark.parametrize("text", SAMPLES)
def test_sexp_roundtrip(text):
    e = parse_expr(text)
    assert format_expr(e) == text
    assert parse_expr(format_expr(e)) == e


def test_sexp_whitespace_and_groups():
    e = parse_expr("  (star\n (cyclic 3)\t(piece 2 (letter x)) )\n")
    assert e.group == cyclic_group(3)
    assert parse_expr("(star (sym 3) (piece 0 (letter a)))").group == symmetric_group(3)


def test_sexp_file_group(tmp_path):
    from syncdelay.monoid import direct_product, format_monoid

    p = tmp_path / "z3.mon"
    p.write_text(format_monoid(cyclic_group(3).parent))
    e = parse_expr(f'(star (file "{p}") (piece 1 (letter a)))')
    # a recognized builtin prints in builtin form
    assert e.group == cyclic_group(3)
    assert format_expr(e) == "(star (cyclic 3) (piece 1 (letter a)))"
    q = tmp_path / "klein.mon"
    q.write_text(format_monoid(direct_product(Z2.parent, Z2.parent)))
    e = parse_expr(f'(star (file "{q}") (piece 1 (letter a)))')
    assert e.group.order == 4
    assert f'(file "{q}")' in format_expr(e)
    assert parse_expr(format_expr(e)) == e


@pytest.mark.parametrize(
    "text",
    [
        "",
        "(",
        "(letter a",
        "(letter a))",
        "(bogus)",
        "(union)",
        "(concat (letter a))",
        "(star (cyclic x) (piece 0 (letter a)))",
        "(star (cyclic 0) (piece 0 (letter a)))",
        "(star (sym 4) (piece 0 (letter a)))",
        "(star (cyclic 2) (piece 5 (letter a)))",
        "(star (cyclic 2) (pieces 0 (letter a)))",
        '(star (file "/nonexistent/g.mon") (piece 0 (letter a)))',
        "(letter (a))",
    ],
)
def test_sexp_errors(text):
    with pytest.raises(ExprError):
        parse_expr(text)


def _exprs(depth):
    leaf = st.sampled_from([EMPTY, a, b, EPS])
    if depth == 0:
        return leaf
    sub = _exprs(depth - 1)
    return st.one_of(
        leaf,
        st.builds(lambda x, y: union(x, y), sub, sub),
        st.builds(concat, sub, sub),
        st.builds(lambda x, y: star(Z2, {0: x, 1: y}), sub, sub),
        st.builds(lambda x, t: star_coset(Z2, {1: x}, t), sub, st.sampled_from([0, 1])),
    )


@settings(max_examples=150, deadline=None)
@given(_exprs(3))
def test_sexp_roundtrip_property(e):
    assert parse_expr(format_expr(e)) == e


# -- compilation -------------------------------------------------------------------


def test_compile_finite_examples():
    assert equivalent(compile_finite(EMPTY, AB), regex("#", AB))
    assert equivalent(compile_finite(star(T1, {0: a}), AB), regex("a*", AB))
    assert equivalent(compile_finite(star(Z2, {0: b, 1: a})), parity_dfa())
    assert equivalent(compile_finite(star_coset(Z2, {0: b, 1: a}, 1)), regex("b*a(b*ab*a)*b*", AB))
    assert equivalent(compile_finite(concat(a, union(b, EPS)), AB), regex("a|ab", AB))


def test_compile_s3_coset():
    G, d, s = s3_tables()
    e = star_coset(G, {d: letter("d"), s: letter("s")}, d)
    assert equivalent(compile_finite(e), s3_cayley_dfa(d))


def test_compile_omega_examples():
    B = compile_omega(omega(T1, {0: a}))
    assert lasso_in_buchi(LassoWord((), ("a",)), B)
    B = compile_omega(omega(T1, {0: a}), AB)
    assert not lasso_in_buchi(LassoWord((), ("a", "b")), B)
    e = concat(star(T1, {0: b}), omega(T1, {0: a}))
    B = compile_omega(e)
    assert lasso_in_buchi(LassoWord(("b", "b"), ("a",)), B)
    assert lasso_in_buchi(LassoWord((), ("a",)), B)
    assert not lasso_in_buchi(LassoWord(("a",), ("b",)), B)
    assert not lasso_in_buchi(LassoWord(("a", "b"), ("a",)), B)
    empty = compile_omega(union(a, star(T1, {0: b})), AB)
    assert not empty.initials or not any(
        lasso_in_buchi(LassoWord(u, v), empty) for u, v in [((), ("a",)), ((), ("b",)), (("a",), ("b",))]
    )


def test_compile_omega_parity_blocks():
    # blocks with an even number of a's
    o = omega(Z2, {0: b, 1: a})
    B = compile_omega(o)
    assert lasso_in_buchi(LassoWord((), ("a", "a")), B)
    assert lasso_in_buchi(LassoWord(("a",), ("b",)), B) is False
    assert lasso_in_buchi(LassoWord(("a", "a"), ("b",)), B)


def test_compile_finite_rejects_omega_and_letters():
    with pytest.raises(ExprError):
        compile_finite(omega(T1, {0: a}))
    with pytest.raises(ExprError):
        compile_finite(letter("z"), AB)
    assert equivalent(compile_finite_part(union(a, omega(T1, {0: b}))), regex("a", AB))


def test_concat_left_must_be_omega_free():
    with pytest.raises(ExprError):
        compile_omega(Concat(omega(T1, {0: a}), b))


# -- validation ------------------------------------------------------------------------


def test_validate_letters_delay_zero():
    r = validate(star(T1, {0: a}), TRIVIAL, 8)
    assert r.ok and r.max_delay == 0
    assert [n.kind for n in r.nodes] == ["star"]


def test_validate_abab_no_delay():
    abab = concat(a, concat(b, concat(a, b)))
    r = validate(star(T1, {0: abab}), TRIVIAL, 8)
    assert not r.ok
    assert any("no synchronization delay" in p for n in r.nodes for p in n.problems)


def test_validate_group_variety():
    G, d, s = s3_tables()
    e = star(G, {d: letter("d"), s: letter("s")})
    assert validate(e, SOLVABLE, 4).ok
    r = validate(e, ABELIAN, 4)
    assert not r.ok and any("not in variety" in p for n in r.nodes for p in n.problems)
    assert validate(e, ALL_GROUPS, 4).ok


def test_validate_overlap_and_prefix():
    r = validate(star(Z2, {0: a, 1: union(a, b)}), ABELIAN, 4)
    assert any("overlap" in p for n in r.nodes for p in n.problems)
    r = validate(star(T1, {0: union(a, concat(a, b))}), TRIVIAL, 4)
    assert any("prefix code" in p for n in r.nodes for p in n.problems)


def test_validate_omega_concat():
    r = validate(Concat(omega(T1, {0: a}), b), TRIVIAL, 4)
    assert not r.ok and r.problems


def test_validate_b_star_c():
    bc = concat(star(T1, {0: union(a, b)}), letter("c"))
    r = validate(star(T1, {0: bc}), TRIVIAL, 4)
    assert r.ok
    assert [n.delay for n in r.nodes] == [0, 1]

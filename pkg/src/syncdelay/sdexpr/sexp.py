"""S-expression syntax for expressions.

::

    expr  := (empty) | (letter a) | (union expr+) | (concat expr expr)
           | (star group (piece g expr)*) | (omega group (piece g expr)*)
           | (starcoset group g (piece g expr)*)
    group := (trivial) | (cyclic n) | (sym 3) | (file "path")
"""
from __future__ import annotations

import re

from ..groups import Group, cyclic_group, parse_group_name, symmetric_group, trivial_group
from .ast import (
    Concat,
    Empty,
    ExprError,
    Letter,
    Omega,
    SdExpr,
    Star,
    StarCoset,
    Union,
    concat,
    letter,
    omega,
    star,
    star_coset,
    union,
)

_TOKEN = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()"]+))')


def _tokens(text: str) -> list:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"bad character at offset {pos}")
        if m.group(1):
            out.append("(")
        elif m.group(2):
            out.append(")")
        elif m.group(3) is not None:
            out.append(("str", bytes(m.group(3), "utf-8").decode("unicode_escape")))
        else:
            out.append(("atom", m.group(4)))
        pos = m.end()
    return out


def _read(tokens: list, i: int):
    if i >= len(tokens):
        raise ExprError("unexpected end of input")
    t = tokens[i]
    if t == ")":
        raise ExprError("unexpected ')'")
    if t != "(":
        return t, i + 1
    items = []
    i += 1
    while True:
        if i >= len(tokens):
            raise ExprError("missing ')'")
        if tokens[i] == ")":
            return items, i + 1
        x, i = _read(tokens, i)
        items.append(x)


def _atom(x, what: str) -> str:
    if not isinstance(x, tuple) or x[0] != "atom":
        raise ExprError(f"expected {what}")
    return x[1]


def _int(x, what: str) -> int:
    s = _atom(x, what)
    try:
        return int(s)
    except ValueError:
        raise ExprError(f"expected integer {what}, got {s!r}") from None


def _group(x) -> Group:
    if not isinstance(x, list) or not x:
        raise ExprError("expected a group form")
    head = _atom(x[0], "group kind")
    if head == "trivial" and len(x) == 1:
        return trivial_group()
    if head == "cyclic" and len(x) == 2:
        n = _int(x[1], "group order")
        if n < 1:
            raise ExprError("cyclic group order must be positive")
        return cyclic_group(n)
    if head == "sym" and len(x) == 2:
        k = _int(x[1], "degree")
        if k != 3:
            raise ExprError("only (sym 3) is supported")
        return symmetric_group(3)
    if head == "file" and len(x) == 2:
        if not (isinstance(x[1], tuple) and x[1][0] == "str"):
            raise ExprError("file group needs a quoted path")
        try:
            return parse_group_name("file:" + x[1][1])
        except (OSError, ValueError) as exc:
            raise ExprError(str(exc)) from None
    raise ExprError(f"bad group form ({head} ...)")


def _pieces(items) -> list:
    out = []
    for p in items:
        if not isinstance(p, list) or len(p) != 3 or _atom(p[0], "piece") != "piece":
            raise ExprError("expected (piece g expr)")
        out.append((_int(p[1], "group element"), _expr(p[2])))
    return out


def _expr(x) -> SdExpr:
    if not isinstance(x, list) or not x:
        raise ExprError("expected an expression form")
    head = _atom(x[0], "expression kind")
    args = x[1:]
    if head == "empty" and not args:
        return Empty()
    if head == "letter" and len(args) == 1:
        a = args[0]
        if not isinstance(a, tuple):
            raise ExprError("letter must be an atom")
        return letter(a[1])
    if head == "union" and args:
        return union(*(_expr(a) for a in args))
    if head == "concat" and len(args) == 2:
        return concat(_expr(args[0]), _expr(args[1]))
    if head in ("star", "omega") and args:
        G = _group(args[0])
        ps = _pieces(args[1:])
        return star(G, ps) if head == "star" else omega(G, ps)
    if head == "starcoset" and len(args) >= 2:
        G = _group(args[0])
        return star_coset(G, _pieces(args[2:]), _int(args[1], "target"))
    raise ExprError(f"bad expression form ({head} ...)")


def parse_expr(text: str) -> SdExpr:
    tokens = _tokens(text)
    x, i = _read(tokens, 0)
    if i != len(tokens):
        raise ExprError("trailing input after expression")
    return _expr(x)


def format_group(G: Group) -> str:
    if G.order == 1:
        return "(trivial)"
    if G == cyclic_group(G.order):
        return f"(cyclic {G.order})"
    if G.order == 6 and G == symmetric_group(3):
        return "(sym 3)"
    if G.label and G.label.startswith("file:"):
        path = G.label[5:].replace("\\", "\\\\").replace('"', '\\"')
        return f'(file "{path}")'
    raise ExprError(f"group {G!r} has no textual form")


def format_expr(e: SdExpr) -> str:
    """Single-line rendering; shared subtrees are written out in full."""
    parts: list[str] = []

    def go(x: SdExpr) -> None:
        if isinstance(x, Empty):
            parts.append("(empty)")
        elif isinstance(x, Letter):
            parts.append(f"(letter {x.a})")
        elif isinstance(x, Union):
            parts.append("(union")
            for p in x.parts:
                parts.append(" ")
                go(p)
            parts.append(")")
        elif isinstance(x, Concat):
            parts.append("(concat ")
            go(x.left)
            parts.append(" ")
            go(x.right)
            parts.append(")")
        else:
            kind = {Star: "star", Omega: "omega", StarCoset: "starcoset"}[type(x)]
            head = f"({kind} {format_group(x.group)}"
            if isinstance(x, StarCoset):
                head += f" {x.target}"
            parts.append(head)
            for g, p in x.pieces:
                parts.append(f" (piece {g} ")
                go(p)
                parts.append(")")
            parts.append(")")

    go(e)
    return "".join(parts)

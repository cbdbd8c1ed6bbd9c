"""Expression trees for group-labelled star languages over prefix codes.

Nodes are immutable and hash by value (the hash is cached, since synthesized
trees share large subtrees).  ``Star(G, pieces)`` denotes the words of
``K*`` whose factorization evaluates to the group identity, where ``K`` is the
union of the pieces and piece ``g`` contributes the group element ``g``.
``Omega`` is the infinite-word analogue, ``StarCoset`` targets any element.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from ..groups import Group, trivial_group


class ExprError(ValueError):
    pass


class SdExpr:
    __slots__ = ()

    def children(self) -> tuple:
        return ()


def _cached_hash(self) -> int:
    h = self.__dict__.get("_h")
    if h is None:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_h", h)
    return h


@dataclass(frozen=True, eq=True)
class Empty(SdExpr):
    def __repr__(self) -> str:
        return "Empty()"


@dataclass(frozen=True, eq=True)
class Letter(SdExpr):
    a: object


@dataclass(frozen=True, eq=True)
class Union(SdExpr):
    parts: tuple

    def children(self) -> tuple:
        return self.parts


@dataclass(frozen=True, eq=True)
class Concat(SdExpr):
    left: SdExpr
    right: SdExpr

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Star(SdExpr):
    group: Group
    pieces: tuple  # ((g, expr), ...) sorted by g

    def children(self) -> tuple:
        return tuple(e for _, e in self.pieces)

    @property
    def piece_map(self) -> dict:
        return dict(self.pieces)


@dataclass(frozen=True, eq=True)
class Omega(SdExpr):
    group: Group
    pieces: tuple

    def children(self) -> tuple:
        return tuple(e for _, e in self.pieces)

    @property
    def piece_map(self) -> dict:
        return dict(self.pieces)

    def star(self) -> Star:
        return Star(self.group, self.pieces)


@dataclass(frozen=True, eq=True)
class StarCoset(SdExpr):
    group: Group
    pieces: tuple
    target: int

    def children(self) -> tuple:
        return tuple(e for _, e in self.pieces)

    @property
    def piece_map(self) -> dict:
        return dict(self.pieces)


for _cls in (Empty, Letter, Union, Concat, Star, Omega, StarCoset):
    _cls.__hash__ = _cached_hash

EMPTY = Empty()
TRIVIAL = trivial_group()
EPS = Star(TRIVIAL, ())  # K = ∅, so K* = {1}


# -- smart constructors -----------------------------------------------------------


def letter(a) -> SdExpr:
    return Letter(a)


def union(*parts: SdExpr) -> SdExpr:
    flat: list[SdExpr] = []
    seen = set()
    stack = list(reversed(parts))
    while stack:
        p = stack.pop()
        if isinstance(p, Union):
            stack.extend(reversed(p.parts))
        elif isinstance(p, Empty):
            continue
        elif p not in seen:
            seen.add(p)
            flat.append(p)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(flat))


def union_all(parts: Iterable[SdExpr]) -> SdExpr:
    return union(*list(parts))


def concat(left: SdExpr, right: SdExpr) -> SdExpr:
    if isinstance(left, Empty) or isinstance(right, Empty):
        return EMPTY
    if left == EPS:
        return right
    if right == EPS:
        return left
    return Concat(left, right)


def concat_all(parts: Iterable[SdExpr]) -> SdExpr:
    parts = list(parts)
    if not parts:
        return EPS
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = concat(p, acc)
    return acc


def _pieces(group: Group, pieces: Mapping | Iterable) -> tuple:
    items = pieces.items() if isinstance(pieces, Mapping) else pieces
    carrier = set(group.carrier)
    out = {}
    for g, e in items:
        if g not in carrier:
            raise ExprError(f"piece label {g} is not an element of the group")
        if g in out:
            raise ExprError(f"duplicate piece label {g}")
        if not isinstance(e, Empty):
            out[g] = e
    return tuple(sorted(out.items(), key=lambda kv: kv[0]))


def star(group: Group, pieces) -> SdExpr:
    ps = _pieces(group, pieces)
    if not ps:
        return EPS
    return Star(group, ps)


def omega(group: Group, pieces) -> SdExpr:
    ps = _pieces(group, pieces)
    if not ps:
        return EMPTY  # no infinite word factors over the empty code
    return Omega(group, ps)


def star_coset(group: Group, pieces, target: int) -> SdExpr:
    if target not in set(group.carrier):
        raise ExprError(f"target {target} is not an element of the group")
    ps = _pieces(group, pieces)
    if not ps:
        return EPS if target == group.unit else EMPTY
    return StarCoset(group, ps, target)


# -- traversal --------------------------------------------------------------------


def nodes(e: SdExpr) -> list[SdExpr]:
    """Distinct nodes in post-order."""
    out: list[SdExpr] = []
    seen = set()

    def walk(x):
        if x in seen:
            return
        seen.add(x)
        for c in x.children():
            walk(c)
        out.append(x)

    walk(e)
    return out


def letters_of(e: SdExpr) -> set:
    return {x.a for x in nodes(e) if isinstance(x, Letter)}


def is_omega_free(e: SdExpr) -> bool:
    return not any(isinstance(x, Omega) for x in nodes(e))


def tree_size(e: SdExpr) -> int:
    """Node count of the expression as a tree (shared subtrees counted once per use)."""
    memo: dict = {}

    def size(x):
        if x in memo:
            return memo[x]
        s = 1 + sum(size(c) for c in x.children())
        memo[x] = s
        return s

    return size(e)


def dag_size(e: SdExpr) -> int:
    return len(nodes(e))

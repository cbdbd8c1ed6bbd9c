"""Decomposition of a finite monoid into a binary tree of local Rees products
whose leaves are groups dividing it."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .constructions import (
    TABLE_CAP,
    LocalDivisorResult,
    LocalRees,
    ReesResult,
    check_local_rees,
    local_rees,
    rees_divisor_lift,
)
from .groups import Group, check_group_axioms, group_name
from .monoid import (
    DivisionWitness,
    Monoid,
    Verdict,
    compose_divisions,
    greedy_generating_set,
    identity_witness,
    is_unit,
    restrict,
    submonoid_generated,
    units,
    verify_division,
)
from .varieties import is_solvable


def minimal_generating_set(M: Monoid) -> tuple[int, ...]:
    """Removal-minimal generating set; larger indices are dropped first."""
    return greedy_generating_set(M)


def is_group(M: Monoid) -> bool:
    return len(units(M)) == M.size


@dataclass(frozen=True, eq=False)
class Leaf:
    monoid: Monoid
    group: Group
    to_parent: DivisionWitness  # this monoid divides the parent's monoid
    to_root: DivisionWitness  # this monoid divides the root monoid

    @property
    def size(self) -> int:
        return 1


@dataclass(frozen=True, eq=False)
class Node:
    monoid: Monoid
    c: int
    N_carrier: tuple[int, ...]
    left: "DecompTree"  # tree for N
    right: "DecompTree"  # tree for M_c
    local_rees: LocalRees
    to_parent: DivisionWitness
    to_root: DivisionWitness

    @property
    def rees(self) -> ReesResult:
        return self.local_rees.rees

    @property
    def local(self) -> LocalDivisorResult:
        return self.local_rees.local

    @property
    def size(self) -> int:
        return 1 + self.left.size + self.right.size


DecompTree = Union[Leaf, Node]


def decompose(M: Monoid) -> DecompTree:
    w = identity_witness(M)
    return _decompose(M, w, w, M)


def _decompose(M: Monoid, to_parent: DivisionWitness, to_root: DivisionWitness, root: Monoid) -> DecompTree:
    if is_group(M):
        return Leaf(M, Group.of_monoid(M, group_name(Group.of_monoid(M))), to_parent, to_root)
    gens = minimal_generating_set(M)
    c = min(g for g in gens if not is_unit(M, g))
    N_carrier = submonoid_generated(M, [g for g in gens if g != c])
    LR = local_rees(M, N_carrier, c, cap=float("inf"))
    N, emb = restrict(M, N_carrier, M.identity)
    wN = DivisionWitness(N_carrier, {x: i for i, x in enumerate(emb)})
    wC = LR.local.witness(M)
    left = _decompose(N, wN, compose_divisions(M, root, wN, to_root), root)
    right = _decompose(LR.local.monoid, wC, compose_divisions(M, root, wC, to_root), root)
    return Node(M, c, N_carrier, left, right, LR, to_parent, to_root)


def leaves(t: DecompTree) -> list[Leaf]:
    if isinstance(t, Leaf):
        return [t]
    return leaves(t.left) + leaves(t.right)


def node_count(t: DecompTree) -> int:
    return t.size


def leaf_names(t: DecompTree) -> list[str]:
    return [lf.group.label for lf in leaves(t)]


def verify_tree(t: DecompTree, M: Monoid | None = None) -> Verdict:
    """Check every witness in the tree, leaf group axioms and the size bound."""
    root = t.monoid if M is None else M
    if M is not None and t.monoid != M:
        return Verdict(False, "tree root is not the given monoid")
    bound = 2 ** root.size - 1
    if t.size > bound:
        return Verdict(False, f"node count {t.size} exceeds 2^|M| - 1 = {bound}")
    return _verify(t, root, None, "root")


def _verify(t: DecompTree, root: Monoid, parent: Monoid | None, path: str) -> Verdict:
    if parent is not None:
        v = verify_division(t.monoid, parent, t.to_parent)
        if not v:
            return Verdict(False, f"{path}: division into parent fails: {v.reason}")
    v = verify_division(t.monoid, root, t.to_root)
    if not v:
        return Verdict(False, f"{path}: division into root fails: {v.reason}")
    if isinstance(t, Leaf):
        if not check_group_axioms(t.group) or not is_group(t.monoid):
            return Verdict(False, f"{path}: leaf is not a group")
        return Verdict(True)
    if is_unit(t.monoid, t.c):
        return Verdict(False, f"{path}: c = {t.c} is a unit")
    M = t.monoid
    LR = t.local_rees
    if LR.rees.size <= TABLE_CAP:
        v = verify_division(M, LR.rees.monoid, LR.witness(M))
        if not v:
            return Verdict(False, f"{path}: local Rees product does not cover M: {v.reason}")
    else:
        ok, why = check_local_rees(LR, M)
        if not ok:
            return Verdict(False, f"{path}: local Rees product does not cover M: {why}")
    if t.left.size + t.right.size + 1 != t.size:
        return Verdict(False, f"{path}: inconsistent node count")
    for child, tag in ((t.left, "N"), (t.right, "M_c")):
        v = _verify(child, root, M, f"{path}/{tag}")
        if not v:
            return v
    return Verdict(True)


# -- flattening ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Flattened:
    monoid: Monoid | None  # None when capped
    witness: DivisionWitness | None
    capped: bool = False
    reason: str = ""


def flatten_to_rees(t: DecompTree, cap: int = TABLE_CAP) -> Flattened:
    """Replace every node bottom-up by an explicit Rees extension of its flattened children."""
    if isinstance(t, Leaf):
        return Flattened(t.monoid, identity_witness(t.monoid))
    fl = flatten_to_rees(t.left, cap)
    if fl.capped:
        return fl
    fr = flatten_to_rees(t.right, cap)
    if fr.capped:
        return fr
    R = t.rees
    big = fl.monoid.size + fl.monoid.size**2 * fr.monoid.size
    if big > cap or R.size > cap:
        return Flattened(None, None, True, f"Rees extension of size {max(big, R.size)} exceeds cap {cap}")
    N = R.N
    L = R.L
    R2, w = rees_divisor_lift(N, fl.monoid, fl.witness, L, fr.monoid, fr.witness, R.rho, cap)
    R2m = R2.monoid
    B = R.monoid
    inner = t.local_rees.witness(t.monoid)
    return Flattened(R2m, compose_divisions(B, R2m, inner, w))


# -- display -------------------------------------------------------------------------


def describe_group(G: Group) -> str:
    name = group_name(G)
    if name.startswith("G"):
        flags = []
        flags.append("abelian" if G.is_abelian() else "non-abelian")
        flags.append("solvable" if is_solvable(G) else "non-solvable")
        return f"group of order {G.order} ({', '.join(flags)})"
    return name


def to_dot(t: DecompTree) -> str:
    lines = ["digraph decomposition {", "  node [shape=box];"]
    counter = [0]

    def walk(s: DecompTree) -> str:
        nid = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(s, Leaf):
            lines.append(f'  {nid} [label="{describe_group(s.group)}"];')
            return nid
        lines.append(f'  {nid} [label="LocRees |M|={s.monoid.size} c={s.c}"];')
        a = walk(s.left)
        b = walk(s.right)
        lines.append(f'  {nid} -> {a} [label="N"];')
        lines.append(f'  {nid} -> {b} [label="M_c"];')
        return nid

    walk(t)
    lines.append("}")
    return "\n".join(lines) + "\n"

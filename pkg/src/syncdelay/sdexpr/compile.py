"""Compilation of expressions to automata, and validation of their side conditions."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..automata import (
    Dfa,
    concat as dfa_concat,
    empty_dfa,
    example_word,
    intersect,
    letter_dfa,
    minimize,
    union_all as dfa_union_all,
)
from ..codes import GammaPieces, gamma_star_automaton, is_prefix_code, min_sync_delay
from ..omega import (
    BuchiAutomaton,
    buchi_concat,
    buchi_of_omega_power,
    buchi_union,
    empty_buchi,
)
from ..varieties import VarietySpec, group_in_variety
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
    is_omega_free,
    letters_of,
    nodes,
)


class Compiler:
    """Compiles expressions over a fixed alphabet, memoizing every node."""

    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        self.fin: dict = {}
        self.inf: dict = {}

    def finite(self, e: SdExpr, *, finite_part: bool = False) -> Dfa:
        """DFA of the language of ``e``; with ``finite_part`` Omega nodes count as empty."""
        key = (e, finite_part)
        if key in self.fin:
            return self.fin[key]
        for x in nodes(e):
            k = (x, finite_part)
            if k not in self.fin:
                self.fin[k] = self._finite_node(x, finite_part)
        return self.fin[key]

    def _finite_node(self, x: SdExpr, finite_part: bool) -> Dfa:
        A = self.alphabet
        sub = lambda y: self.fin[(y, finite_part)]  # noqa: E731
        if isinstance(x, Empty):
            return empty_dfa(A)
        if isinstance(x, Letter):
            if x.a not in A:
                raise ExprError(f"letter {x.a!r} not in alphabet")
            return letter_dfa(A, x.a)
        if isinstance(x, Union):
            return dfa_union_all(A, (sub(p) for p in x.parts))
        if isinstance(x, Concat):
            return dfa_concat(sub(x.left), sub(x.right))
        if isinstance(x, (Star, StarCoset)):
            target = x.target if isinstance(x, StarCoset) else x.group.unit
            P = GammaPieces(x.group, {g: sub(p) for g, p in x.pieces})
            return gamma_star_automaton(P, target, A)
        if isinstance(x, Omega):
            if finite_part:
                return empty_dfa(A)
            raise ExprError("omega node in a finite-word context")
        raise TypeError(f"unknown expression node {x!r}")

    def omega(self, e: SdExpr) -> BuchiAutomaton:
        """Büchi automaton of the infinite-word part of ``e``."""
        if e in self.inf:
            return self.inf[e]
        A = self.alphabet
        if isinstance(e, (Empty, Letter, Star, StarCoset)):
            B = empty_buchi(A)
        elif isinstance(e, Union):
            B = empty_buchi(A)
            for p in e.parts:
                B = buchi_union(B, self.omega(p))
        elif isinstance(e, Concat):
            if not is_omega_free(e.left):
                raise ExprError("left factor of a concatenation must be omega-free")
            B = buchi_concat(self.finite(e.left), self.omega(e.right))
        elif isinstance(e, Omega):
            B = buchi_of_omega_power(self.finite(e.star()))
        else:
            raise TypeError(f"unknown expression node {e!r}")
        self.inf[e] = B
        return B


def _alphabet(e: SdExpr, alphabet) -> tuple:
    return tuple(alphabet) if alphabet is not None else tuple(sorted(letters_of(e), key=str))


def compile_finite(e: SdExpr, alphabet=None) -> Dfa:
    return Compiler(_alphabet(e, alphabet)).finite(e)


def compile_finite_part(e: SdExpr, alphabet=None) -> Dfa:
    return Compiler(_alphabet(e, alphabet)).finite(e, finite_part=True)


def compile_omega(e: SdExpr, alphabet=None) -> BuchiAutomaton:
    return Compiler(_alphabet(e, alphabet)).omega(e)


# -- validation ---------------------------------------------------------------------


@dataclass
class NodeReport:
    kind: str
    group: str
    order: int
    delay: int | None = None
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass
class ValidationReport:
    nodes: list = field(default_factory=list)
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems and all(n.ok for n in self.nodes)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def max_delay(self) -> int | None:
        ds = [n.delay for n in self.nodes if n.delay is not None]
        return max(ds) if ds else None


def validate(e: SdExpr, V: VarietySpec, dmax: int, alphabet=None, compiler: Compiler | None = None) -> ValidationReport:
    """Check every side condition of every star, omega and coset node.

    Pieces must be pairwise disjoint, their union a prefix code with a
    synchronization delay at most ``dmax``, and the group must lie in V.
    The left factor of every concatenation must be omega-free.
    """
    from ..groups import group_name

    C = compiler or Compiler(_alphabet(e, alphabet))
    rep = ValidationReport()
    for x in nodes(e):
        if isinstance(x, Concat) and not is_omega_free(x.left):
            rep.problems.append("concatenation with an omega left factor")
        if not isinstance(x, (Star, Omega, StarCoset)):
            continue
        G = x.group
        nr = NodeReport(type(x).__name__.lower(), group_name(G), G.order)
        if not group_in_variety(G, V):
            nr.problems.append(f"group {group_name(G)} not in variety {V}")
        try:
            dfas = {g: C.finite(p) for g, p in x.pieces}
        except ExprError as exc:
            nr.problems.append(str(exc))
            rep.nodes.append(nr)
            continue
        labels = sorted(dfas)
        for i, g in enumerate(labels):
            for h in labels[i + 1 :]:
                w = example_word(intersect(dfas[g], dfas[h]))
                if w is not None:
                    nr.problems.append(f"pieces {g} and {h} overlap")
        K = dfa_union_all(C.alphabet, dfas.values())
        if not labels:
            nr.delay = 0
        elif not is_prefix_code(K):
            nr.problems.append("pieces do not form a prefix code")
        else:
            report = min_sync_delay(minimize(K), dmax)
            if report.delay is None:
                nr.problems.append(f"no synchronization delay <= {dmax}")
            nr.delay = report.delay
        rep.nodes.append(nr)
    return rep


"""Prefix codes, synchronization delay, and group-labelled star automata."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .automata import (
    Dfa,
    accepts_empty_word,
    concat,
    difference,
    example_word,
    intersect,
    letters_dfa,
    minimize,
    power,
    shortest_completion,
    star,
    universal_dfa,
    with_alphabet,
)
from .groups import Group


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class PrefixReport:
    ok: bool
    u: tuple | None = None
    uv: tuple | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_prefix_code(K: Dfa) -> PrefixReport:
    """No empty word, and no word of K is a proper prefix of another."""
    if accepts_empty_word(K):
        return PrefixReport(False, (), (), "contains the empty word")
    nonempty = concat(letters_dfa(K.alphabet, K.alphabet), universal_dfa(K.alphabet))
    bad = intersect(K, concat(K, nonempty))
    x = example_word(bad)
    if x is None:
        return PrefixReport(True)
    for i in range(1, len(x)):
        if K.accepts(x[:i]):
            return PrefixReport(False, x[:i], x, "proper prefix")
    raise AssertionError("unreachable: witness without a proper prefix in K")


@dataclass(frozen=True)
class DelayCheck:
    ok: bool
    counterexample: tuple | None = None  # (u, v, w)

    def __bool__(self) -> bool:
        return self.ok


@lru_cache(maxsize=256)
def _star_data(K: Dfa) -> tuple[Dfa, Dfa]:
    Ks = star(K)
    lf = Dfa(Ks.alphabet, Ks.delta, Ks.initial, Ks.co_reachable)
    return Ks, lf


@lru_cache(maxsize=1024)
def _power(K: Dfa, d: int) -> Dfa:
    return power(K, d)


def has_sync_delay(K: Dfa, d: int, *, check_prefix: bool = True) -> DelayCheck:
    """Does ``uvw in K*`` with ``v in K^d`` force ``uv in K*``?

    Decided as the inclusion of ``A* K^d`` intersected with the left factors of
    ``K*`` in ``K*``.  The counterexample is built from the
    length-lexicographically least violating ``uv``, split at the earliest
    position whose suffix lies in ``K^d``, completed by the least ``w``.
    """
    if d < 0:
        raise ValueError("delay must be non-negative")
    if check_prefix and not is_prefix_code(K):
        raise CodeError("not a prefix code")
    Ks, lf = _star_data(K)
    Kd = _power(K, d)
    tail = concat(universal_dfa(K.alphabet), Kd)
    x = example_word(difference(intersect(tail, lf), Ks))
    if x is None:
        return DelayCheck(True)
    for i in range(len(x) + 1):
        if Kd.accepts(x[i:]):
            u, v = x[:i], x[i:]
            break
    else:
        raise AssertionError("unreachable: no K^d suffix")
    w = shortest_completion(Ks, Ks.run(x))
    return DelayCheck(False, (u, v, w))


@dataclass(frozen=True)
class CodeReport:
    is_prefix_code: bool
    delay: int | None
    counterexample: tuple | None
    searched_up_to: int
    counterexamples: tuple = field(default=())  # one (u, v, w) per failing d, ascending
    prefix_witness: tuple | None = None


def min_sync_delay(K: Dfa, dmax: int) -> CodeReport:
    pre = is_prefix_code(K)
    if not pre:
        return CodeReport(False, None, None, -1, (), (pre.u, pre.uv))
    found = []
    for d in range(dmax + 1):
        r = has_sync_delay(K, d, check_prefix=False)
        if r:
            return CodeReport(True, d, found[-1] if found else None, d, tuple(found))
        found.append(r.counterexample)
    return CodeReport(True, None, found[-1], dmax, tuple(found))


def count_factorizations(K: Dfa, word) -> int:
    """Number of ways to cut ``word`` into non-empty blocks from K."""
    w = tuple(word)
    n = len(w)
    ways = [0] * (n + 1)
    ways[0] = 1
    for i in range(n):
        if not ways[i]:
            continue
        q = K.initial
        for j in range(i, n):
            q = K.step(q, w[j])
            if q in K.finals:
                ways[j + 1] += ways[i]
    return ways[n]


# -- group-labelled stars ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GammaPieces:
    """A code ``K`` split into pieces ``K_g`` labelled by elements of ``group``."""

    group: Group
    pieces: Mapping[int, Dfa]

    def __post_init__(self):
        for g in self.pieces:
            if g not in set(self.group.carrier):
                raise CodeError(f"piece label {g} is not a group element")

    def alphabet(self) -> tuple:
        alphas = [D.alphabet for D in self.pieces.values()]
        if not alphas:
            raise CodeError("no pieces: alphabet unknown")
        if any(set(a) != set(alphas[0]) for a in alphas):
            raise CodeError("pieces over different alphabets")
        return alphas[0]


def check_pieces(P: GammaPieces) -> None:
    labels = sorted(P.pieces)
    for g in labels:
        if accepts_empty_word(P.pieces[g]):
            raise CodeError(f"piece {g} contains the empty word")
    for i, g in enumerate(labels):
        for h in labels[i + 1 :]:
            w = example_word(intersect(P.pieces[g], P.pieces[h]))
            if w is not None:
                raise CodeError(f"pieces {g} and {h} share the word {''.join(map(str, w))!r}")


def gamma_star_automaton(P: GammaPieces, target: int, alphabet=None) -> Dfa:
    """DFA for the words ``u1...uk`` with ``ui in K`` and ``γ(u1)...γ(uk) = target``.

    States are triples (group element, non-final state of the product of the
    pieces, at-boundary flag) plus one sink that absorbs all dead product states.  Reaching a
    final state of piece ``h`` multiplies the group component by ``h`` and
    restarts the product automaton.  The flag separates a block boundary from
    a return to the product's start state in the middle of a block.  The factorization is read greedily, which
    is exact for prefix codes.
    """
    G = P.group
    if target not in set(G.carrier):
        raise CodeError(f"target {target} is not a group element")
    check_pieces(P)
    labels = sorted(P.pieces)
    if alphabet is None:
        alphabet = P.alphabet() if labels else ()
    A = tuple(alphabet)
    dfas = [with_alphabet(minimize(P.pieces[g]), A) for g in labels]
    if not dfas:
        # K is empty, so K* = {1}
        from .automata import empty_dfa, epsilon_dfa

        return epsilon_dfa(A) if target == G.unit else empty_dfa(A)
    live = [D.co_reachable for D in dfas]
    start = tuple(D.initial for D in dfas)
    r = G.parent.rows

    def classify(q: tuple):
        """'dead', a piece label, or None for a live non-final state."""
        if all(p not in lv for p, lv in zip(q, live)):
            return "dead"
        for g, p, D in zip(labels, q, dfas):
            if p in D.finals:
                return g
        return None

    init = (G.unit, start, True)
    idx = {init: 0, "sink": 1}
    states: list = [init, "sink"]
    delta: list = []
    i = 0
    k = len(A)
    while i < len(states):
        s = states[i]
        if s == "sink":
            delta.append((1,) * k)
            i += 1
            continue
        g, q, _ = s
        row = []
        for j in range(k):
            q2 = tuple(D.delta[p][j] for D, p in zip(dfas, q))
            c = classify(q2)
            if c == "dead":
                t = "sink"
            elif c is None:
                t = (g, q2, False)
            else:
                t = (r[g][c], start, True)
            n = idx.get(t)
            if n is None:
                n = idx[t] = len(states)
                states.append(t)
            row.append(n)
        delta.append(tuple(row))
        i += 1
    finals = frozenset(n for t, n in idx.items() if t == (target, start, True))
    return minimize(Dfa(A, tuple(delta), 0, finals))

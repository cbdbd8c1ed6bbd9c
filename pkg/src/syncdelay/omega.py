"""Infinite words at desk scale: lasso words and Büchi automata.

Languages of infinite words are only ever compared on lasso words ``u v^ω``;
there is no complementation here.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator

import numpy as np

from .automata import AutomatonError, Dfa, example_word, word_str, without_empty_word
from .monoid import DEFAULT_SIZE_CAP, MonoidHom, generate


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``u v v v ...``."""

    u: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if not self.v:
            raise ValueError("lasso cycle must be non-empty")

    def prefix(self, n: int) -> tuple:
        out = list(self.u[:n])
        while len(out) < n:
            out.extend(self.v[: n - len(out)])
        return tuple(out)

    def __str__(self) -> str:
        return f"{word_str(self.u) or '_'}:{word_str(self.v)}"


def parse_lasso(text: str) -> LassoWord:
    """``u:v`` with ``_`` for an empty prefix; letters are single characters."""
    u, sep, v = text.strip().partition(":")
    if not sep:
        raise ValueError(f"lasso {text!r} lacks ':'")
    if u == "_":
        u = ""
    if not v:
        raise ValueError(f"lasso {text!r} has an empty cycle")
    return LassoWord(tuple(u), tuple(v))


@dataclass(frozen=True, eq=False)
class BuchiAutomaton:
    """Nondeterministic Büchi automaton.

    ``trans[q][i]`` is the frozenset of successors of ``q`` on ``alphabet[i]``.
    """

    alphabet: tuple
    trans: tuple[tuple[frozenset, ...], ...]
    initials: frozenset
    accepting: frozenset

    def __post_init__(self):
        n = len(self.trans)
        for q, row in enumerate(self.trans):
            if len(row) != len(self.alphabet):
                raise AutomatonError(f"state {q}: row length differs from alphabet")
            for S in row:
                if any(not 0 <= p < n for p in S):
                    raise AutomatonError(f"state {q}: successor out of range")
        if any(not 0 <= q < n for q in self.initials | self.accepting):
            raise AutomatonError("initial or accepting state out of range")

    @property
    def n_states(self) -> int:
        return len(self.trans)

    @cached_property
    def letter_index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def _matrices(self) -> np.ndarray:
        n = self.n_states
        m = np.zeros((len(self.alphabet), n, n), dtype=bool)
        for q, row in enumerate(self.trans):
            for i, S in enumerate(row):
                for p in S:
                    m[i, q, p] = True
        return m

    @cached_property
    def _acc_mask(self) -> np.ndarray:
        v = np.zeros(self.n_states, dtype=bool)
        v[list(self.accepting)] = True
        return v

    def accepts(self, w: LassoWord) -> bool:
        return lasso_in_buchi(w, self)


def _bmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return (X.astype(np.uint16) @ Y.astype(np.uint16)) > 0


def lasso_in_buchi(w: LassoWord, B: BuchiAutomaton) -> bool:
    """Is ``u v^ω`` accepted?

    Reading one copy of ``v`` defines a relation on states, with a flag for
    runs that pass an accepting state.  The word is accepted iff a state
    reachable after ``u v^*`` lies on a cycle of that relation through a
    flagged edge.
    """
    n = B.n_states
    if n == 0 or not B.initials:
        return False
    mats = B._matrices
    acc = B._acc_mask
    li = B.letter_index
    try:
        ui = [li[a] for a in w.u]
        vi = [li[a] for a in w.v]
    except KeyError as exc:
        raise AutomatonError(f"letter {exc.args[0]!r} not in alphabet") from None
    cur = np.zeros(n, dtype=bool)
    cur[list(B.initials)] = True
    for i in ui:
        cur = _bmul(cur[None, :], mats[i])[0]
    if not cur.any():
        return False
    R = np.eye(n, dtype=bool)
    F = np.zeros((n, n), dtype=bool)
    for i in vi:
        step = mats[i]
        Rn = _bmul(R, step)
        F = _bmul(F, step) | (Rn & acc[None, :])
        R = Rn
    # states reachable at block boundaries
    seen = cur.copy()
    frontier = cur
    while frontier.any():
        nxt = _bmul(frontier[None, :], R)[0] & ~seen
        seen |= nxt
        frontier = nxt
    # reflexive-transitive closure of R
    C = R | np.eye(n, dtype=bool)
    while True:
        C2 = _bmul(C, C)
        if np.array_equal(C2, C):
            break
        C = C2
    # flagged edge p -> q with q leading back to p
    hits = F & C.T
    return bool(hits[seen].any())


# -- constructions ---------------------------------------------------------------


def empty_buchi(alphabet) -> BuchiAutomaton:
    A = tuple(alphabet)
    return BuchiAutomaton(A, (), frozenset(), frozenset())


def buchi_of_dba(D: Dfa) -> BuchiAutomaton:
    """A DFA read as a deterministic Büchi automaton (final states visited infinitely often)."""
    trans = tuple(tuple(frozenset({p}) for p in row) for row in D.delta)
    return BuchiAutomaton(D.alphabet, trans, frozenset({D.initial}), D.finals)


def buchi_of_omega_power(K: Dfa) -> BuchiAutomaton:
    """Büchi automaton for ``(K minus the empty word)^ω``.

    A fresh accepting state marks block boundaries; it behaves like the
    initial state of K, and every transition into a final state of K may
    also jump to it.
    """
    K = without_empty_word(K)
    n = K.n_states
    r = n
    F = K.finals

    def targets(p: int) -> frozenset:
        return frozenset({p, r}) if p in F else frozenset({p})

    rows = [tuple(targets(p) for p in K.delta[q]) for q in range(n)]
    rows.append(tuple(targets(p) for p in K.delta[K.initial]))
    return _trim(BuchiAutomaton(K.alphabet, tuple(rows), frozenset({r}), frozenset({r})))


def buchi_union(B1: BuchiAutomaton, B2: BuchiAutomaton) -> BuchiAutomaton:
    if set(B1.alphabet) != set(B2.alphabet):
        raise AutomatonError("alphabet mismatch")
    B2 = _reorder(B2, B1.alphabet)
    off = B1.n_states
    shifted = tuple(tuple(frozenset(p + off for p in S) for S in row) for row in B2.trans)
    return BuchiAutomaton(
        B1.alphabet,
        B1.trans + shifted,
        B1.initials | {q + off for q in B2.initials},
        B1.accepting | {q + off for q in B2.accepting},
    )


def buchi_union_all(alphabet, parts: Iterable[BuchiAutomaton]) -> BuchiAutomaton:
    acc = empty_buchi(alphabet)
    for B in parts:
        acc = buchi_union(acc, B)
    return acc


def buchi_concat(L: Dfa, B: BuchiAutomaton) -> BuchiAutomaton:
    """Büchi automaton for ``L(L) · L(B)``."""
    if set(L.alphabet) != set(B.alphabet):
        raise AutomatonError("alphabet mismatch")
    B = _reorder(B, L.alphabet)
    n = L.n_states
    k = len(L.alphabet)
    start_rows = [frozenset().union(*(B.trans[i][j] for i in B.initials)) for j in range(k)]
    rows = []
    for q in range(n):
        row = []
        for j in range(k):
            S = {L.delta[q][j]}
            if q in L.finals:
                S |= {p + n for p in start_rows[j]}
            row.append(frozenset(S))
        rows.append(tuple(row))
    for row in B.trans:
        rows.append(tuple(frozenset(p + n for p in S) for S in row))
    initials = {L.initial}
    return _trim(BuchiAutomaton(L.alphabet, tuple(rows), frozenset(initials), frozenset(p + n for p in B.accepting)))


def _reorder(B: BuchiAutomaton, alphabet: tuple) -> BuchiAutomaton:
    if B.alphabet == tuple(alphabet):
        return B
    li = B.letter_index
    trans = tuple(tuple(row[li[a]] for a in alphabet) for row in B.trans)
    return BuchiAutomaton(tuple(alphabet), trans, B.initials, B.accepting)


def _trim(B: BuchiAutomaton) -> BuchiAutomaton:
    """Drop states unreachable from the initial states."""
    seen = set(B.initials)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for S in B.trans[q]:
            for p in S:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
    order = sorted(seen)
    if len(order) == B.n_states:
        return B
    idx = {q: i for i, q in enumerate(order)}
    trans = tuple(tuple(frozenset(idx[p] for p in S) for S in B.trans[q]) for q in order)
    return BuchiAutomaton(
        B.alphabet,
        trans,
        frozenset(idx[q] for q in B.initials),
        frozenset(idx[q] for q in B.accepting if q in idx),
    )


# -- arrow languages -----------------------------------------------------------


def arrow_membership(L: Dfa, w: LassoWord) -> bool:
    """Does ``u v^ω`` have infinitely many prefixes in L?"""
    q = L.run(w.u)
    first_seen: dict[int, int] = {}
    block_finals: list[bool] = []
    while q not in first_seen:
        first_seen[q] = len(block_finals)
        hit = False
        for a in w.v:
            q = L.step(q, a)
            hit = hit or q in L.finals
        block_finals.append(hit)
    return any(block_finals[first_seen[q]:])


# -- lasso enumeration -----------------------------------------------------------


def all_lassos(alphabet, bound: int) -> Iterator[LassoWord]:
    """Every lasso with ``|u| + |v| <= bound`` (``v`` non-empty)."""
    A = tuple(alphabet)
    for total in range(1, bound + 1):
        for lu in range(total):
            for u in product(A, repeat=lu):
                for v in product(A, repeat=total - lu):
                    yield LassoWord(u, v)


def random_lassos(rng: np.random.Generator, alphabet, count: int, max_u: int = 10, max_v: int = 10) -> list[LassoWord]:
    A = tuple(alphabet)
    out = []
    for _ in range(count):
        lu = int(rng.integers(0, max_u + 1))
        lv = int(rng.integers(1, max_v + 1))
        u = tuple(A[i] for i in rng.integers(0, len(A), size=lu))
        v = tuple(A[i] for i in rng.integers(0, len(A), size=lv))
        out.append(LassoWord(u, v))
    return out


def lasso_sample(alphabet, bound: int, n_random: int, seed: int) -> list[LassoWord]:
    rng = np.random.default_rng(seed)
    return list(all_lassos(alphabet, bound)) + random_lassos(rng, alphabet, n_random)


def compare_on_lassos(X, Y, lassos: Iterable[LassoWord]) -> LassoWord | None:
    """First lasso on which the two membership predicates disagree."""
    for w in lassos:
        if X(w) != Y(w):
            return w
    return None


def omega_example(prefix: Dfa, block: Dfa) -> LassoWord | None:
    """A lasso in ``L(prefix) · (L(block) minus empty)^ω`` when ``L(block)`` is closed under products."""
    u = example_word(prefix)
    v = example_word(without_empty_word(block))
    if u is None or v is None:
        return None
    return LassoWord(u, v)


# -- recognizing monoid of a deterministic Büchi automaton ---------------------


def dba_monoid(D: Dfa, cap: int = DEFAULT_SIZE_CAP) -> tuple[MonoidHom, tuple]:
    """Hom recording, for each start state, the end state and whether a final state was passed.

    It recognizes the language of ``D`` read as a deterministic Büchi automaton.
    """
    n = D.n_states
    F = D.finals
    cols = [[D.delta[q][i] for q in range(n)] for i in range(len(D.alphabet))]

    def right(x, g):
        c = cols[g]
        return tuple((c[q], f or c[q] in F) for q, f in x)

    M, keys, gi = generate(tuple((q, False) for q in range(n)), list(range(len(cols))), right, cap, "Büchi monoid")
    return MonoidHom(D.alphabet, M, dict(zip(D.alphabet, gi))), tuple(keys)

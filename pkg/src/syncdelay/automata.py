"""Deterministic finite automata over ordered alphabets.

Words are sequences of letters (a plain string works when letters are single
characters).  Letters may be any hashable, orderable values; the synthesizer
uses monoid element indices as letters.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .monoid import DEFAULT_SIZE_CAP, Monoid, MonoidHom, generate


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Dfa:
    """Complete DFA.  ``delta[q][i]`` is the successor of ``q`` on ``alphabet[i]``."""

    alphabet: tuple
    delta: tuple[tuple[int, ...], ...]
    initial: int
    finals: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        k = len(self.delta)
        if k == 0:
            raise AutomatonError("a DFA needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("repeated letter in alphabet")
        if not 0 <= self.initial < k:
            raise AutomatonError(f"initial state {self.initial} out of range")
        for q, row in enumerate(self.delta):
            if len(row) != len(self.alphabet):
                raise AutomatonError(f"state {q}: transition function not total")
            for p in row:
                if not 0 <= p < k:
                    raise AutomatonError(f"state {q}: target {p} out of range")
        for f in self.finals:
            if not 0 <= f < k:
                raise AutomatonError(f"final state {f} out of range")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @cached_property
    def letter_index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    def step(self, q: int, a) -> int:
        try:
            return self.delta[q][self.letter_index[a]]
        except KeyError:
            raise AutomatonError(f"letter {a!r} not in alphabet") from None

    def run(self, word: Iterable, q: int | None = None) -> int:
        q = self.initial if q is None else q
        li = self.letter_index
        d = self.delta
        for a in word:
            try:
                q = d[q][li[a]]
            except KeyError:
                raise AutomatonError(f"letter {a!r} not in alphabet") from None
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.run(word) in self.finals

    def __contains__(self, word) -> bool:
        return self.accepts(word)

    @cached_property
    def co_reachable(self) -> frozenset:
        """States from which some final state is reachable."""
        back: list[list[int]] = [[] for _ in range(self.n_states)]
        for q, row in enumerate(self.delta):
            for p in row:
                back[p].append(q)
        seen = set(self.finals)
        stack = list(self.finals)
        while stack:
            p = stack.pop()
            for q in back[p]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)


# -- elementary automata ------------------------------------------------------


def _alpha(alphabet) -> tuple:
    return tuple(alphabet)


def empty_dfa(alphabet) -> Dfa:
    A = _alpha(alphabet)
    return Dfa(A, ((0,) * len(A),), 0, frozenset())


def universal_dfa(alphabet) -> Dfa:
    A = _alpha(alphabet)
    return Dfa(A, ((0,) * len(A),), 0, frozenset({0}))


def epsilon_dfa(alphabet) -> Dfa:
    A = _alpha(alphabet)
    return Dfa(A, ((1,) * len(A), (1,) * len(A)), 0, frozenset({0}))


def word_dfa(alphabet, word: Sequence) -> Dfa:
    A = _alpha(alphabet)
    word = tuple(word)
    n = len(word)
    dead = n + 1
    delta = []
    for i in range(n + 2):
        if i < n:
            delta.append(tuple(i + 1 if a == word[i] else dead for a in A))
        else:
            delta.append((dead,) * len(A))
    for a in word:
        if a not in A:
            raise AutomatonError(f"letter {a!r} not in alphabet")
    return Dfa(A, tuple(delta), 0, frozenset({n}))


def letter_dfa(alphabet, a) -> Dfa:
    return word_dfa(alphabet, (a,))


def letters_dfa(alphabet, letters: Iterable) -> Dfa:
    """The language ``B`` of one-letter words with letters in ``letters``."""
    A = _alpha(alphabet)
    B = set(letters)
    return Dfa(A, (tuple(1 if a in B else 2 for a in A), (2,) * len(A), (2,) * len(A)), 0, frozenset({1}))


def finite_language_dfa(alphabet, words: Iterable[Sequence]) -> Dfa:
    A = _alpha(alphabet)
    trie: list[dict] = [{}]
    finals = set()
    for w in words:
        q = 0
        for a in w:
            if a not in A:
                raise AutomatonError(f"letter {a!r} not in alphabet")
            nxt = trie[q].get(a)
            if nxt is None:
                nxt = len(trie)
                trie[q][a] = nxt
                trie.append({})
            q = nxt
        finals.add(q)
    dead = len(trie)
    delta = [tuple(t.get(a, dead) for a in A) for t in trie]
    delta.append((dead,) * len(A))
    return minimize(Dfa(A, tuple(delta), 0, frozenset(finals)))


def from_function(alphabet, n_states: int, step, initial: int, finals) -> Dfa:
    A = _alpha(alphabet)
    delta = tuple(tuple(step(q, a) for a in A) for q in range(n_states))
    return Dfa(A, delta, initial, frozenset(finals))


# -- reachability and minimization ------------------------------------------


def reachable_states(D: Dfa) -> list[int]:
    """Reachable states in BFS order over the ordered alphabet."""
    order = [D.initial]
    seen = {D.initial}
    i = 0
    while i < len(order):
        for p in D.delta[order[i]]:
            if p not in seen:
                seen.add(p)
                order.append(p)
        i += 1
    return order


def _renumber(D: Dfa, order: list[int], cls=None) -> Dfa:
    """Restrict to the states in ``order`` (closed under delta), renumbered."""
    idx = {q: i for i, q in enumerate(order)}
    delta = tuple(tuple(idx[p] for p in D.delta[q]) for q in order)
    finals = frozenset(idx[q] for q in order if q in D.finals)
    return Dfa(D.alphabet, delta, idx[D.initial], finals)


def minimize(D: Dfa) -> Dfa:
    """Moore partition refinement, states renumbered by BFS from the initial state."""
    order = reachable_states(D)
    R = _renumber(D, order)
    n, k = R.n_states, len(R.alphabet)
    delta = np.asarray(R.delta, dtype=np.int64).reshape(n, k)
    cls = np.zeros(n, dtype=np.int64)
    for f in R.finals:
        cls[f] = 1
    _, cls = np.unique(cls, return_inverse=True)
    n_cls = int(cls.max()) + 1
    while True:
        sig = np.column_stack([cls, cls[delta]]) if k else cls[:, None]
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1)
        m = int(new.max()) + 1
        cls = new
        if m == n_cls:
            break
        n_cls = m
    # one representative per class, then BFS renumbering
    rep = {}
    for q in range(n):
        rep.setdefault(int(cls[q]), q)
    qdelta = tuple(tuple(int(cls[p]) for p in delta[rep[c]]) for c in range(n_cls))
    Q = Dfa(R.alphabet, qdelta, int(cls[R.initial]), frozenset(int(cls[f]) for f in R.finals))
    return _renumber(Q, reachable_states(Q))


# -- products and boolean operations ----------------------------------------


def _check_alphabets(D1: Dfa, D2: Dfa) -> None:
    if set(D1.alphabet) != set(D2.alphabet):
        raise AutomatonError(f"alphabet mismatch: {D1.alphabet} vs {D2.alphabet}")


def with_alphabet(D: Dfa, alphabet) -> Dfa:
    """The same language over a larger (or reordered) alphabet."""
    A = _alpha(alphabet)
    missing = set(D.alphabet) - set(A)
    if missing:
        raise AutomatonError(f"alphabet lacks letters {sorted(missing, key=repr)}")
    if A == D.alphabet:
        return D
    dead = D.n_states
    li = D.letter_index
    delta = [tuple(D.delta[q][li[a]] if a in li else dead for a in A) for q in range(D.n_states)]
    delta.append((dead,) * len(A))
    return Dfa(A, tuple(delta), D.initial, D.finals)


def product_dfa(D1: Dfa, D2: Dfa, accept) -> Dfa:
    """Reachable product; ``accept(f1, f2)`` decides finality from both flags."""
    _check_alphabets(D1, D2)
    D2 = with_alphabet(D2, D1.alphabet)
    start = (D1.initial, D2.initial)
    idx = {start: 0}
    pairs = [start]
    delta = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        row = []
        for r1, r2 in zip(D1.delta[p], D2.delta[q]):
            j = idx.get((r1, r2))
            if j is None:
                j = idx[(r1, r2)] = len(pairs)
                pairs.append((r1, r2))
            row.append(j)
        delta.append(tuple(row))
        i += 1
    finals = frozenset(i for i, (p, q) in enumerate(pairs) if accept(p in D1.finals, q in D2.finals))
    return Dfa(D1.alphabet, tuple(delta), 0, finals)


def union(D1: Dfa, D2: Dfa) -> Dfa:
    return product_dfa(D1, D2, lambda a, b: a or b)


def intersect(D1: Dfa, D2: Dfa) -> Dfa:
    return product_dfa(D1, D2, lambda a, b: a and b)


def difference(D1: Dfa, D2: Dfa) -> Dfa:
    return product_dfa(D1, D2, lambda a, b: a and not b)


def symmetric_difference(D1: Dfa, D2: Dfa) -> Dfa:
    return product_dfa(D1, D2, lambda a, b: a != b)


def complement(D: Dfa) -> Dfa:
    return Dfa(D.alphabet, D.delta, D.initial, frozenset(range(D.n_states)) - D.finals)


def union_all(alphabet, dfas: Iterable[Dfa]) -> Dfa:
    acc = empty_dfa(alphabet)
    for D in dfas:
        acc = minimize(union(acc, D))
    return acc


def example_word(D: Dfa) -> tuple | None:
    """Length-lexicographically least accepted word, or None if the language is empty."""
    if D.initial in D.finals:
        return ()
    prev: dict[int, tuple[int, int]] = {D.initial: (-1, -1)}
    queue = deque([D.initial])
    while queue:
        q = queue.popleft()
        for i, p in enumerate(D.delta[q]):
            if p in prev:
                continue
            prev[p] = (q, i)
            if p in D.finals:
                word = []
                while p != D.initial:
                    p, i = prev[p]
                    word.append(D.alphabet[i])
                return tuple(reversed(word))
            queue.append(p)
    return None


def shortest_completion(D: Dfa, q: int) -> tuple | None:
    """Least word leading from ``q`` to a final state."""
    return example_word(Dfa(D.alphabet, D.delta, q, D.finals))


def is_empty(D: Dfa) -> bool:
    return example_word(D) is None


def equivalence_counterexample(D1: Dfa, D2: Dfa) -> tuple | None:
    return example_word(symmetric_difference(D1, D2))


def equivalent(D1: Dfa, D2: Dfa) -> bool:
    return equivalence_counterexample(D1, D2) is None


def is_subset(D1: Dfa, D2: Dfa) -> bool:
    return is_empty(difference(D1, D2))


def accepts_empty_word(D: Dfa) -> bool:
    return D.initial in D.finals


def without_empty_word(D: Dfa) -> Dfa:
    return difference(D, epsilon_dfa(D.alphabet)) if accepts_empty_word(D) else D


# -- nondeterministic constructions ------------------------------------------


@dataclass
class Nfa:
    alphabet: tuple
    n_states: int = 0
    trans: dict = field(default_factory=dict)  # (q, letter index) -> set
    eps: dict = field(default_factory=dict)  # q -> set
    initials: set = field(default_factory=set)
    finals: set = field(default_factory=set)

    def add_state(self) -> int:
        self.n_states += 1
        return self.n_states - 1

    def add_dfa(self, D: Dfa) -> int:
        """Copy ``D`` in; returns the offset of its state 0."""
        off = self.n_states
        self.n_states += D.n_states
        li = {a: i for i, a in enumerate(self.alphabet)}
        for q, row in enumerate(D.delta):
            for a, p in zip(D.alphabet, row):
                self.trans.setdefault((off + q, li[a]), set()).add(off + p)
        return off

    def add_eps(self, q: int, p: int) -> None:
        self.eps.setdefault(q, set()).add(p)

    def closure(self, states: Iterable[int]) -> frozenset:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for p in self.eps.get(q, ()):
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    def determinize(self, cap: int = DEFAULT_SIZE_CAP) -> Dfa:
        start = self.closure(self.initials)
        idx = {start: 0}
        subsets = [start]
        delta = []
        i = 0
        k = len(self.alphabet)
        while i < len(subsets):
            S = subsets[i]
            row = []
            for a in range(k):
                T = set()
                for q in S:
                    T |= self.trans.get((q, a), set())
                T = self.closure(T)
                j = idx.get(T)
                if j is None:
                    if len(subsets) >= cap:
                        raise AutomatonError(f"subset construction exceeded {cap} states")
                    j = idx[T] = len(subsets)
                    subsets.append(T)
                row.append(j)
            delta.append(tuple(row))
            i += 1
        finals = frozenset(i for i, S in enumerate(subsets) if S & self.finals)
        return minimize(Dfa(self.alphabet, tuple(delta), 0, finals))


def concat(D1: Dfa, D2: Dfa) -> Dfa:
    """DFA for the concatenation L(D1)·L(D2)."""
    _check_alphabets(D1, D2)
    N = Nfa(D1.alphabet)
    o1 = N.add_dfa(D1)
    o2 = N.add_dfa(D2)
    N.initials = {o1 + D1.initial}
    for f in D1.finals:
        N.add_eps(o1 + f, o2 + D2.initial)
    N.finals = {o2 + f for f in D2.finals}
    return N.determinize()


def concat_all(alphabet, dfas: Sequence[Dfa]) -> Dfa:
    acc = epsilon_dfa(alphabet)
    for D in dfas:
        acc = concat(acc, D)
    return acc


def star(D: Dfa) -> Dfa:
    N = Nfa(D.alphabet)
    s = N.add_state()
    o = N.add_dfa(D)
    N.initials = {s}
    N.add_eps(s, o + D.initial)
    for f in D.finals:
        N.add_eps(o + f, s)
    N.finals = {s}
    return N.determinize()


def plus(D: Dfa) -> Dfa:
    return concat(D, star(D))


def power(D: Dfa, d: int) -> Dfa:
    """L(D)^d, with L^0 = {empty word}."""
    acc = epsilon_dfa(D.alphabet)
    for _ in range(d):
        acc = concat(acc, D)
    return acc


# -- tiny regular expression syntax (for tests and CLI examples) ------------


def regex(text: str, alphabet=None) -> Dfa:
    """Parse ``|``, ``*``, ``+``, ``?``, parentheses, ``_`` (empty word), ``#`` (empty set).

    Every other non-space character is a letter.  The alphabet defaults to the
    letters occurring in ``text``, sorted.
    """
    toks = [c for c in text if not c.isspace()]
    if alphabet is None:
        alphabet = sorted({c for c in toks if c not in "|*+?()_#"})
    A = _alpha(alphabet)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def eat(c):
        nonlocal pos
        if peek() != c:
            raise AutomatonError(f"regex: expected {c!r} at {pos}")
        pos += 1

    def alt() -> Dfa:
        d = seq()
        while peek() == "|":
            eat("|")
            d = minimize(union(d, seq()))
        return d

    def seq() -> Dfa:
        d = epsilon_dfa(A)
        while peek() is not None and peek() not in "|)":
            d = concat(d, post())
        return d

    def post() -> Dfa:
        d = atom()
        while peek() in ("*", "+", "?"):
            op = toks[pos]
            eat(op)
            if op == "*":
                d = star(d)
            elif op == "+":
                d = plus(d)
            else:
                d = minimize(union(d, epsilon_dfa(A)))
        return d

    def atom() -> Dfa:
        nonlocal pos
        c = peek()
        if c == "(":
            eat("(")
            d = alt()
            eat(")")
            return d
        if c is None or c in "|)*+?":
            raise AutomatonError(f"regex: unexpected {c!r} at {pos}")
        pos += 1
        if c == "_":
            return epsilon_dfa(A)
        if c == "#":
            return empty_dfa(A)
        if c not in A:
            raise AutomatonError(f"regex: letter {c!r} not in alphabet")
        return letter_dfa(A, c)

    d = alt()
    if pos != len(toks):
        raise AutomatonError(f"regex: trailing input at {pos}")
    return minimize(d)


# -- text format --------------------------------------------------------------


def format_dfa(D: Dfa) -> str:
    lines = [
        "dfa",
        "alphabet " + " ".join(str(a) for a in D.alphabet),
        f"states {D.n_states}",
        f"initial {D.initial}",
        "finals " + " ".join(str(f) for f in sorted(D.finals)),
    ]
    for q, row in enumerate(D.delta):
        for a, p in zip(D.alphabet, row):
            lines.append(f"trans {q} {a} {p}")
    return "\n".join(lines) + "\n"


def parse_dfa(text: str) -> Dfa:
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith("#")]
    if not lines or lines[0] != ["dfa"]:
        raise AutomatonError("DFA file must start with 'dfa'")
    header: dict[str, list[str]] = {}
    trans = {}
    for ln in lines[1:]:
        key = ln[0]
        if key == "trans":
            if len(ln) != 4:
                raise AutomatonError(f"bad trans line: {' '.join(ln)}")
            try:
                q, p = int(ln[1]), int(ln[3])
            except ValueError:
                raise AutomatonError(f"bad trans line: {' '.join(ln)}") from None
            if (q, ln[2]) in trans:
                raise AutomatonError(f"duplicate transition for ({q}, {ln[2]})")
            trans[(q, ln[2])] = p
        elif key in ("alphabet", "states", "initial", "finals"):
            header[key] = ln[1:]
        else:
            raise AutomatonError(f"unknown DFA line {key!r}")
    for key in ("alphabet", "states", "initial"):
        if key not in header:
            raise AutomatonError(f"DFA file lacks '{key}'")
    try:
        k = int(header["states"][0])
        init = int(header["initial"][0])
        finals = frozenset(int(f) for f in header.get("finals", []))
    except (ValueError, IndexError):
        raise AutomatonError("malformed DFA header") from None
    A = tuple(header["alphabet"])
    delta = []
    for q in range(k):
        row = []
        for a in A:
            if (q, a) not in trans:
                raise AutomatonError(f"transition function not total: missing ({q}, {a})")
            row.append(trans[(q, a)])
        delta.append(tuple(row))
    extra = [key for key in trans if key[0] >= k or key[1] not in A]
    if extra:
        raise AutomatonError(f"transition outside the automaton: {extra[0]}")
    return Dfa(A, tuple(delta), init, finals)


# -- transition and syntactic monoids ---------------------------------------


@dataclass(frozen=True, eq=False)
class TransitionMonoidResult:
    """``transformations[m][q]`` is the state reached from ``q`` by element ``m``."""

    monoid: Monoid
    hom: MonoidHom
    transformations: tuple[tuple[int, ...], ...]


def transition_monoid(D: Dfa, cap: int = DEFAULT_SIZE_CAP) -> TransitionMonoidResult:
    cols = [tuple(D.delta[q][i] for q in range(D.n_states)) for i in range(len(D.alphabet))]

    def right(x, g):
        c = cols[g]
        return tuple(c[q] for q in x)

    M, keys, gi = generate(tuple(range(D.n_states)), list(range(len(cols))), right, cap, "transition monoid")
    hom = MonoidHom(D.alphabet, M, dict(zip(D.alphabet, gi)))
    return TransitionMonoidResult(M, hom, tuple(keys))


def syntactic_monoid(D: Dfa, cap: int = DEFAULT_SIZE_CAP) -> TransitionMonoidResult:
    return transition_monoid(minimize(D), cap)


def recognizing_set(D: Dfa, res: TransitionMonoidResult) -> frozenset:
    """Elements whose action sends the initial state to a final state."""
    return frozenset(m for m, t in enumerate(res.transformations) if t[D.initial] in D.finals)


def preimage_dfa(phi: MonoidHom, targets: Iterable[int]) -> Dfa:
    """Minimal DFA for the words mapped into ``targets`` (Cayley graph of the image)."""
    M = phi.target
    r = M.rows
    gens = [phi.images[a] for a in phi.alphabet]
    D = Dfa(
        tuple(phi.alphabet),
        tuple(tuple(r[m][g] for g in gens) for m in range(M.size)),
        M.identity,
        frozenset(targets),
    )
    return minimize(D)


# -- word enumeration ---------------------------------------------------------


def words_up_to(alphabet, n: int) -> Iterator[tuple]:
    """All words of length <= n in length-lexicographic order."""
    A = _alpha(alphabet)
    for k in range(n + 1):
        yield from product(A, repeat=k)


def random_word(rng: np.random.Generator, alphabet, max_len: int, min_len: int = 0) -> tuple:
    A = _alpha(alphabet)
    k = int(rng.integers(min_len, max_len + 1))
    return tuple(A[i] for i in rng.integers(0, len(A), size=k))


def random_dfa(rng: np.random.Generator, alphabet, n_states: int) -> Dfa:
    A = _alpha(alphabet)
    delta = tuple(tuple(int(p) for p in rng.integers(0, n_states, size=len(A))) for _ in range(n_states))
    finals = frozenset(int(q) for q in np.nonzero(rng.random(n_states) < 0.5)[0])
    return Dfa(A, delta, 0, finals)


def word_str(word: Iterable) -> str:
    return "".join(str(a) for a in word)

"""Named test languages and monoids used by the CLI demo and the test-suite."""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

import numpy as np

from .automata import Dfa, from_function, minimize, random_dfa, regex
from .groups import Group, cyclic_group, s3_generators, symmetric_group, trivial_group
from .monoid import Monoid, MonoidHom
from .omega import BuchiAutomaton, buchi_of_dba, dba_monoid

EX14_ALPHABET = ("a", "b", "d", "s")


def s3_tables():
    G = symmetric_group(3)
    d, s = s3_generators()
    return G, d, s


def sign(G, p: int) -> int:
    """Sign of a permutation in ``symmetric_group(3)`` (computed from its tuple form)."""
    perm = sorted(permutations(range(3)))[p]
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def example14_dfa() -> Dfa:
    """Words with exactly one marker letter ``a`` or ``b`` among letters ``d``, ``s``.

    With one ``a`` the remaining letters must evaluate to an odd permutation;
    with one ``b`` they must evaluate to the 3-cycle ``d``.  States track the
    permutation value and the marker seen so far (none, a, b), plus a dead state.
    """
    G, d, s = s3_tables()
    r = G.parent.rows
    markers = ("none", "a", "b")
    states = [(p, m) for m in markers for p in range(6)]
    idx = {st: i for i, st in enumerate(states)}
    dead = len(states)

    def step(q, letter):
        if q == dead:
            return dead
        p, m = states[q]
        if letter == "d":
            return idx[(r[p][d], m)]
        if letter == "s":
            return idx[(r[p][s], m)]
        return idx[(p, letter)] if m == "none" else dead

    finals = [idx[(p, "a")] for p in range(6) if sign(G, p) == -1] + [idx[(d, "b")]]
    return minimize(from_function(EX14_ALPHABET, dead + 1, step, idx[(0, "none")], finals))


def parity_dfa() -> Dfa:
    """Even number of ``a`` over {a, b}."""
    return from_function(("a", "b"), 2, lambda q, x: 1 - q if x == "a" else q, 0, [0])


def ab_star_dfa() -> Dfa:
    return regex("(ab)*", ("a", "b"))


def s3_cayley_dfa(target: int | None = None) -> Dfa:
    """Words over {d, s} evaluating to ``target`` (default: the 3-cycle) in S3."""
    G, d, s = s3_tables()
    r = G.parent.rows
    if target is None:
        target = d
    return from_function(("d", "s"), 6, lambda q, x: r[q][d if x == "d" else s], 0, [target])


def s3_hom() -> MonoidHom:
    G, d, s = s3_tables()
    return MonoidHom(("d", "s"), G.parent, {"d": d, "s": s})


def flip_flop() -> Monoid:
    """{1, set0, set1} with ``x y = y`` for non-identity y (right zeros)."""
    return Monoid([[0, 1, 2], [1, 1, 2], [2, 1, 2]])


def random_dfa_corpus(seed: int, count: int, n_states: int = 4, alphabet=("a", "b")) -> list[Dfa]:
    rng = np.random.default_rng(seed)
    return [random_dfa(rng, alphabet, n_states) for _ in range(count)]


# -- all small monoids -------------------------------------------------------------


def _canonical(t: np.ndarray) -> bytes:
    n = t.shape[0]
    best = None
    for rest in permutations(range(1, n)):
        order = (0,) + rest
        inv = np.empty(n, dtype=np.int64)
        inv[list(order)] = np.arange(n)
        u = inv[t[np.ix_(order, order)]]
        b = u.astype(np.int8).tobytes()
        if best is None or b < best:
            best = b
    return best


@lru_cache(maxsize=None)
def small_monoids(max_order: int = 4) -> tuple[Monoid, ...]:
    """All monoids of order <= max_order up to isomorphism, identity at 0.

    Enumerates every table with a two-sided identity at 0, keeps the
    associative ones, and keeps one table per isomorphism class.
    """
    out = []
    for n in range(1, max_order + 1):
        free = [(x, y) for x in range(1, n) for y in range(1, n)]
        k = len(free)
        count = n**k
        base = np.zeros((n, n), dtype=np.int64)
        base[0, :] = np.arange(n)
        base[:, 0] = np.arange(n)
        digits = (np.arange(count)[:, None] // n ** np.arange(k)[None, :]) % n
        T = np.broadcast_to(base, (count, n, n)).copy()
        for i, (x, y) in enumerate(free):
            T[:, x, y] = digits[:, i]
        ok = np.ones(count, dtype=bool)
        rows = np.arange(count)
        for x, y, z in product(range(n), repeat=3):
            lhs = T[rows, T[:, x, y], z]
            rhs = T[rows, x, T[:, y, z]]
            ok &= lhs == rhs
        seen = set()
        for t in T[ok]:
            key = _canonical(t)
            if key not in seen:
                seen.add(key)
                out.append(Monoid(np.frombuffer(key, dtype=np.int8).reshape(n, n).astype(np.int64), 0))
    return tuple(out)


# -- infinite-word languages -----------------------------------------------------------


def _nba(alphabet, edges, initials, accepting, n) -> BuchiAutomaton:
    """NBA from ``edges[(q, letter)] = successors``."""
    rows = tuple(tuple(frozenset(edges.get((q, a), ())) for a in alphabet) for q in range(n))
    return BuchiAutomaton(tuple(alphabet), rows, frozenset(initials), frozenset(accepting))


def omega_corpus() -> list[tuple[str, BuchiAutomaton, MonoidHom, Group]]:
    """(name, reference Büchi automaton, recognizing hom, target group)."""
    out = []
    a_only = from_function(("a",), 1, lambda q, x: 0, 0, [0])
    out.append(("a^omega", buchi_of_dba(a_only), MonoidHom(("a",), Monoid([[0]]), {"a": 0}), trivial_group()))

    AB = ("a", "b")
    fin_b = _nba(AB, {(0, "a"): {0, 1}, (0, "b"): {0}, (1, "a"): {1}}, {0}, {1}, 2)
    u1 = Monoid([[0, 1], [1, 1]])
    out.append(("finitely-many-b", fin_b, MonoidHom(AB, u1, {"a": 0, "b": 1}), trivial_group()))

    bstar_a = from_function(AB, 3, lambda q, x: {(0, "b"): 0, (0, "a"): 1, (1, "a"): 1}.get((q, x), 2), 0, [1])
    out.append(("b*a^omega", buchi_of_dba(bstar_a), dba_monoid(bstar_a)[0], trivial_group()))

    # finitely many a, and an even number of them: parity track plus a guessed a-free tail
    par = _nba(AB, {(0, "a"): {1}, (0, "b"): {0, 2}, (1, "a"): {0}, (1, "b"): {1}, (2, "b"): {2}}, {0}, {2}, 3)
    x3 = Monoid([[0, 1, 2], [1, 2, 1], [2, 1, 2]])
    out.append(("even-finite-a", par, MonoidHom(AB, x3, {"a": 1, "b": 0}), cyclic_group(2)))

    ab = ab_star_dfa()
    out.append(("(ab)^omega", buchi_of_dba(ab), dba_monoid(ab)[0], trivial_group()))
    return out

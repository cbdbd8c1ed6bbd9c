"""Independent brute-force reference computations used by the tests.

These deliberately avoid the package's own algorithms (no hash-consed
generation, no product automata) so that agreement is meaningful.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product


def transformations_by_words(delta, alphabet, n_states):
    """All state transformations induced by words, found by growing word length.

    Stops at the first length that adds no new transformation (lengths beyond
    it cannot add any either, since each longer word extends a shorter one).
    """
    ident = tuple(range(n_states))
    seen = {ident}
    frontier = {ident}
    while frontier:
        nxt = set()
        for t in frontier:
            for i in range(len(alphabet)):
                u = tuple(delta[t[q]][i] for q in range(n_states))
                if u not in seen:
                    nxt.add(u)
        seen |= nxt
        frontier = nxt
    return seen


def brute_mul_check(table):
    n = len(table)
    return all(table[table[x][y]][z] == table[x][table[y][z]] for x in range(n) for y in range(n) for z in range(n))


def star_values(word, pieces, mul, unit):
    """Set of group values over *all* factorizations of ``word`` into pieces.

    ``pieces`` maps a group element to a predicate on words.
    """
    word = tuple(word)

    @lru_cache(maxsize=None)
    def values(i):
        if i == len(word):
            return frozenset({unit})
        out = set()
        for j in range(i + 1, len(word) + 1):
            chunk = word[i:j]
            for g, member in pieces.items():
                if member(chunk):
                    out |= {mul(g, v) for v in values(j)}
        return frozenset(out)

    return values(0)


def count_splits(word, left, right):
    """Number of ways to write ``word = xy`` with ``left(x)`` and ``right(y)``."""
    word = tuple(word)
    return sum(1 for i in range(len(word) + 1) if left(word[:i]) and right(word[i:]))


def all_words(alphabet, n):
    for k in range(n + 1):
        yield from product(alphabet, repeat=k)


def perm_compose(p, q):
    """Apply p first, then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def lasso_in_omega_power(K, u, v):
    """Is ``u v^ω`` in ``(K minus {1})^ω``? Direct search over block boundaries.

    Positions at or after ``|u|`` with equal offset modulo ``|v|`` see the same
    suffix, so they are merged.  Blocks longer than ``|u| + (s + 1)|v|`` can be
    shortened to an equivalent position (pigeonhole on the K-state at aligned
    positions), so longer blocks are not needed.
    """
    u, v = tuple(u), tuple(v)
    s = K.n_states
    limit = len(u) + (s + 1) * len(v)
    word = u + v * (2 * (s + 2) + 2 * len(u) + 2)

    def norm(p):
        return p if p < len(u) else len(u) + (p - len(u)) % len(v)

    nodes = list(range(len(u) + len(v)))
    succ = {}
    for p in nodes:
        out = set()
        for q in range(p + 1, p + limit + 1):
            if K.accepts(word[p:q]):
                out.add(norm(q))
        succ[p] = out
    # reachable from 0, then look for a cycle among reachable nodes
    reach = {0}
    stack = [0]
    while stack:
        p = stack.pop()
        for q in succ[p]:
            if q not in reach:
                reach.add(q)
                stack.append(q)
    for p in reach:
        seen = set()
        stack = list(succ[p])
        while stack:
            q = stack.pop()
            if q == p:
                return True
            if q in seen or q not in reach:
                continue
            seen.add(q)
            stack.extend(succ[q])
    return False


def arrow_by_prefixes(L, u, v):
    """Infinitely many prefixes of ``u v^ω`` in L, by scanning one full period window."""
    s = L.n_states
    start = len(u) + s * len(v)
    word = tuple(u) + tuple(v) * (2 * s + 2)
    return any(L.accepts(word[:n]) for n in range(start, start + s * len(v)))

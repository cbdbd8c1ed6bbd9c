"""Finite monoids as multiplication tables.

Elements are the integers ``0 .. n-1``.  Monoids built by this package put the
identity at index 0 and enumerate the remaining elements in breadth-first
order over their generators, so every derived structure is reproducible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

ASSOC_EXHAUSTIVE_CAP = 256
ASSOC_SAMPLE_LIMIT = 1_000_000
DEFAULT_SIZE_CAP = 20_000


class MonoidError(ValueError):
    pass


class SizeCapExceeded(RuntimeError):
    pass


def check_size(n: int, cap: int, what: str = "monoid") -> None:
    if n > cap:
        raise SizeCapExceeded(f"{what} would have {n} elements (cap {cap})")


def _dtype_for(n: int):
    return np.int16 if n < 2**15 else np.int32


class Monoid:
    """A finite monoid given by its full multiplication table.

    ``table[x, y]`` is the product ``x * y``.  Construction validates the
    identity law and associativity (exhaustively up to
    ``ASSOC_EXHAUSTIVE_CAP`` elements, by seeded sampling above that).
    Instances are immutable and hash by value.
    """

    __slots__ = ("table", "identity", "_hash", "__dict__")

    def __init__(self, table, identity: int = 0, *, check: bool = True, seed: int = 0):
        t = np.asarray(table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise MonoidError("table must be a non-empty square array")
        n = t.shape[0]
        if not np.issubdtype(t.dtype, np.integer):
            raise MonoidError("table entries must be integers")
        if t.min() < 0 or t.max() >= n:
            raise MonoidError("table entry out of range")
        if not 0 <= identity < n:
            raise MonoidError(f"identity {identity} out of range")
        t = np.array(t, dtype=_dtype_for(n))
        t.setflags(write=False)
        self.table = t
        self.identity = int(identity)
        self._hash = None
        if check:
            self._check_identity()
            self._check_associativity(seed)

    # -- validation -------------------------------------------------------

    def _check_identity(self) -> None:
        ar = np.arange(self.size)
        e = self.identity
        bad = np.nonzero((self.table[e] != ar) | (self.table[:, e] != ar))[0]
        if len(bad):
            raise MonoidError(f"element {e} is not neutral for {int(bad[0])}")

    def _check_associativity(self, seed: int) -> None:
        t = self.table.astype(np.int64)
        n = self.size
        if n <= ASSOC_EXHAUSTIVE_CAP:
            for x in range(n):
                lhs = t[t[x]]  # lhs[y, z] = (x y) z
                rhs = t[x][t]  # rhs[y, z] = x (y z)
                bad = np.argwhere(lhs != rhs)
                if len(bad):
                    y, z = (int(v) for v in bad[0])
                    raise MonoidError(f"not associative at ({x}, {y}, {z})")
            return
        rng = np.random.default_rng(seed)
        total = min(10 * n * n, ASSOC_SAMPLE_LIMIT)
        for start in range(0, total, 100_000):
            k = min(100_000, total - start)
            x, y, z = rng.integers(0, n, size=(3, k))
            lhs = t[t[x, y], z]
            rhs = t[x, t[y, z]]
            bad = np.nonzero(lhs != rhs)[0]
            if len(bad):
                i = bad[0]
                raise MonoidError(f"not associative at ({x[i]}, {y[i]}, {z[i]})")

    # -- basic interface ---------------------------------------------------

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.size

    @cached_property
    def rows(self) -> list[list[int]]:
        """The table as nested Python lists (fast scalar access)."""
        return self.table.tolist()

    def mul(self, x: int, y: int) -> int:
        return self.rows[x][y]

    def prod(self, elements: Iterable[int]) -> int:
        r = self.rows
        acc = self.identity
        for x in elements:
            acc = r[acc][x]
        return acc

    def power(self, x: int, k: int) -> int:
        acc = self.identity
        for _ in range(k):
            acc = self.rows[acc][x]
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Monoid):
            return NotImplemented
        return (
            self is other
            or (
                self.identity == other.identity
                and self.size == other.size
                and np.array_equal(self.table, other.table)
            )
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.identity, self.size, self.table.astype(np.int32).tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"Monoid(size={self.size}, identity={self.identity})"


def mul(M: Monoid, x: int, y: int) -> int:
    if not (0 <= x < M.size and 0 <= y < M.size):
        raise IndexError(f"element index out of range for monoid of size {M.size}")
    return M.rows[x][y]


def element_set(elements: Iterable[int]) -> tuple[int, ...]:
    """Canonical ElementSet: sorted tuple of distinct indices."""
    return tuple(sorted(set(int(x) for x in elements)))


# -- text format ------------------------------------------------------------


def format_monoid(M: Monoid) -> str:
    lines = [f"monoid {M.size}", f"identity {M.identity}", "table"]
    lines += [" ".join(str(v) for v in row) for row in M.rows]
    return "\n".join(lines) + "\n"


def parse_monoid(text: str, *, normalize: bool = True) -> Monoid:
    """Parse the ``monoid / identity / table`` text format.

    With ``normalize`` the identity is swapped to index 0.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    try:
        head, n = lines[0].split()
        idl, ident = lines[1].split()
        if head != "monoid" or idl != "identity" or lines[2] != "table":
            raise ValueError
        n, ident = int(n), int(ident)
        rows = [[int(v) for v in ln.split()] for ln in lines[3:]]
    except (ValueError, IndexError):
        raise MonoidError("malformed monoid file") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise MonoidError(f"expected {n} rows of {n} integers")
    M = Monoid(rows, ident)
    if normalize and M.identity != 0:
        perm = list(range(n))
        perm[0], perm[M.identity] = M.identity, 0
        M = relabel(M, perm)
    return M


def relabel(M: Monoid, order: Sequence[int]) -> Monoid:
    """Monoid isomorphic to ``M`` whose element ``i`` is ``order[i]`` of ``M``."""
    order = np.asarray(order, dtype=np.int64)
    inv = np.empty(M.size, dtype=np.int64)
    inv[order] = np.arange(M.size)
    t = inv[M.table[np.ix_(order, order)]]
    return Monoid(t, int(inv[M.identity]), check=False)


# -- generation -------------------------------------------------------------


def submonoid_generated(M: Monoid, gens: Iterable[int]) -> tuple[int, ...]:
    gens = element_set(gens)
    seen = {M.identity}
    queue = deque([M.identity])
    r = M.rows
    while queue:
        x = queue.popleft()
        for g in gens:
            y = r[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return element_set(seen)


def is_submonoid(M: Monoid, carrier: Iterable[int]) -> bool:
    c = np.asarray(element_set(carrier))
    if M.identity not in set(c.tolist()):
        return False
    return bool(np.isin(M.table[np.ix_(c, c)], c).all())


def restrict(M: Monoid, carrier: Iterable[int], neutral: int | None = None) -> tuple[Monoid, list[int]]:
    """Standalone copy of a subsemigroup of ``M`` that is a monoid.

    Returns ``(N, embedding)`` where ``embedding[i]`` is the element of ``M``
    represented by ``i``.  The neutral element goes to index 0, the rest keep
    ascending order.
    """
    carrier = element_set(carrier)
    if neutral is None:
        neutral = find_neutral(M, carrier)
        if neutral is None:
            raise MonoidError("subset has no neutral element")
    order = [neutral] + [x for x in carrier if x != neutral]
    idx = {x: i for i, x in enumerate(order)}
    sub = M.table[np.ix_(order, order)]
    try:
        t = np.vectorize(idx.__getitem__, otypes=[np.int64])(sub)
    except KeyError:
        raise MonoidError("subset is not closed under multiplication") from None
    return Monoid(t, 0, check=False), order


def find_neutral(M: Monoid, carrier: Sequence[int]) -> int | None:
    c = np.asarray(carrier)
    for e in carrier:
        if np.array_equal(M.table[e, c], c) and np.array_equal(M.table[c, e], c):
            return e
    return None


def generate(
    identity: Hashable,
    generators: Sequence[Hashable],
    right_mul: Callable[[Hashable, int], Hashable],
    cap: int = DEFAULT_SIZE_CAP,
    what: str = "monoid",
) -> tuple[Monoid, list, list[int]]:
    """Hash-consed breadth-first closure of a monoid given by generators.

    ``right_mul(x, i)`` returns the key of ``x * generators[i]``.  Returns the
    monoid, the list of element keys (identity first) and the index of each
    generator.  The table is filled column by column: if ``y = p * g`` then
    ``x * y = (x * p) * g``.
    """
    index = {identity: 0}
    keys = [identity]
    parent: list[tuple[int, int]] = [(-1, -1)]
    right: list[list[int]] = []
    k = len(generators)
    i = 0
    while i < len(keys):
        x = keys[i]
        row = []
        for g in range(k):
            y = right_mul(x, g)
            j = index.get(y)
            if j is None:
                j = len(keys)
                check_size(j + 1, cap, what)
                index[y] = j
                keys.append(y)
                parent.append((i, g))
            row.append(j)
        right.append(row)
        i += 1
    n = len(keys)
    R = np.asarray(right, dtype=np.int64).reshape(n, k)
    T = np.empty((n, n), dtype=np.int64)
    T[:, 0] = np.arange(n)
    for y in range(1, n):
        p, g = parent[y]
        T[:, y] = R[T[:, p], g]
    gen_index = [index[right_mul(identity, g)] for g in range(k)]
    return Monoid(T, 0, check=n <= ASSOC_EXHAUSTIVE_CAP), keys, gen_index


# -- units, idempotents, groups --------------------------------------------


def is_unit(M: Monoid, x: int) -> bool:
    e = M.identity
    return bool(np.any((M.table[x] == e) & (M.table[:, x] == e)))


def units(M: Monoid) -> tuple[int, ...]:
    e = M.identity
    both = (M.table == e) & (M.table.T == e)
    return element_set(np.nonzero(both.any(axis=1))[0].tolist())


def idempotents(M: Monoid) -> tuple[int, ...]:
    d = np.diagonal(M.table)
    return element_set(np.nonzero(d == np.arange(M.size))[0].tolist())


def is_aperiodic(M: Monoid) -> bool:
    n = M.size
    ar = np.arange(n)
    t = M.table
    cur = ar.copy()  # x^1
    for _ in range(n + 1):
        nxt = t[cur, ar]
        if np.array_equal(cur, nxt):
            return True
        cur = nxt
    return False


def local_monoid_carrier(M: Monoid, e: int) -> tuple[int, ...]:
    return element_set(M.table[M.table[e], e].tolist())


def maximal_subgroups(M: Monoid) -> list:
    """The maximal subgroup at every idempotent, in ascending idempotent order."""
    from .groups import Group

    out = []
    for e in idempotents(M):
        eme = np.asarray(local_monoid_carrier(M, e))
        sub = M.table[np.ix_(eme, eme)]
        hit = (sub == e) & (sub.T == e)
        carrier = eme[hit.any(axis=1)]
        out.append(Group(M, element_set(carrier.tolist()), e))
    return out


# -- products ---------------------------------------------------------------


def direct_product(M: Monoid, N: Monoid, cap: int = DEFAULT_SIZE_CAP) -> Monoid:
    """Componentwise product; the pair ``(i, j)`` has index ``i * |N| + j``."""
    m, n = M.size, N.size
    check_size(m * n, cap, "direct product")
    a = M.table.astype(np.int64)
    b = N.table.astype(np.int64)
    t = a[:, None, :, None] * n + b[None, :, None, :]
    return Monoid(t.reshape(m * n, m * n), M.identity * n + N.identity, check=False)


# -- homomorphisms ----------------------------------------------------------


@dataclass(frozen=True)
class MonoidHom:
    """Homomorphism from the free monoid over ``alphabet`` into ``target``."""

    alphabet: tuple
    target: Monoid
    images: Mapping = field(hash=False)

    def __post_init__(self):
        missing = [a for a in self.alphabet if a not in self.images]
        if missing:
            raise MonoidError(f"no image for letters {missing}")
        for a in self.alphabet:
            if not 0 <= self.images[a] < self.target.size:
                raise MonoidError(f"image of {a!r} out of range")

    def __call__(self, word: Iterable) -> int:
        return self.target.prod(self.images[a] for a in word)

    def image(self) -> tuple[int, ...]:
        return submonoid_generated(self.target, self.images.values())


# -- division ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DivisionWitness:
    """Evidence that a monoid N divides M.

    ``sub_carrier`` is a subsemigroup of M that is a monoid in its own right;
    ``surjection`` maps it onto N homomorphically, neutral to identity.
    """

    sub_carrier: tuple[int, ...]
    surjection: Mapping[int, int]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def identity_witness(M: Monoid) -> DivisionWitness:
    return DivisionWitness(tuple(range(M.size)), {x: x for x in range(M.size)})


def verify_division(N: Monoid, M: Monoid, w: DivisionWitness) -> Verdict:
    """Check every invariant of ``w`` as a witness of N dividing M."""
    S = list(w.sub_carrier)
    if not S:
        return Verdict(False, "empty sub_carrier")
    if S != sorted(set(S)) or S[0] < 0 or S[-1] >= M.size:
        return Verdict(False, "sub_carrier is not a sorted set of valid indices")
    Sa = np.asarray(S)
    sub = M.table[np.ix_(Sa, Sa)].astype(np.int64)
    inside = np.isin(sub, Sa)
    if not inside.all():
        i, j = np.argwhere(~inside)[0]
        return Verdict(False, f"not closed: {S[i]} * {S[j]} = {sub[i, j]} outside sub_carrier")
    f = np.full(M.size, -1, dtype=np.int64)
    for x in S:
        if x not in w.surjection:
            return Verdict(False, f"surjection undefined at {x}")
        v = w.surjection[x]
        if not 0 <= v < N.size:
            return Verdict(False, f"surjection({x}) = {v} out of range")
        f[x] = v
    image = set(f[Sa].tolist())
    if len(image) != N.size:
        missing = min(set(range(N.size)) - image)
        return Verdict(False, f"surjection misses element {missing}")
    fs = f[Sa]
    lhs = f[sub]
    rhs = N.table.astype(np.int64)[np.ix_(fs, fs)]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        i, j = bad[0]
        x, y = S[i], S[j]
        return Verdict(
            False,
            f"hom law fails: f({x}*{y}) = f({sub[i, j]}) = {lhs[i, j]} "
            f"but f({x})*f({y}) = {fs[i]}*{fs[j]} = {rhs[i, j]}",
        )
    e = find_neutral(M, S)
    if e is None:
        return Verdict(False, "sub_carrier has no neutral element")
    if f[e] != N.identity:
        return Verdict(False, f"neutral element {e} maps to {f[e]}, not identity {N.identity}")
    return Verdict(True)


def compose_divisions(
    B: Monoid, M: Monoid, inner: DivisionWitness, outer: DivisionWitness
) -> DivisionWitness:
    """Compose ``A <= B`` (``inner``, carrier in B) with ``B <= M`` (``outer``).

    The preimage of the inner carrier is a subsemigroup of M.  Cutting it down
    to ``e S e``, for an idempotent ``e`` lying over the inner neutral element,
    makes it a monoid without changing the images.
    """
    e1 = find_neutral(B, inner.sub_carrier)
    if e1 is None:
        raise MonoidError("inner carrier has no neutral element")
    inner_set = set(inner.sub_carrier)
    pre = [x for x in outer.sub_carrier if outer.surjection[x] in inner_set]
    fibre = [x for x in pre if outer.surjection[x] == e1]
    r = M.rows
    e = _idempotent_power(r, fibre[0])
    S = element_set(r[r[e][x]][e] for x in pre)
    return DivisionWitness(S, {x: inner.surjection[outer.surjection[x]] for x in S})


def _idempotent_power(r, x: int) -> int:
    seen = []
    y = x
    while y not in seen:
        seen.append(y)
        y = r[y][x]
    for p in seen:
        if r[p][p] == p:
            return p
    raise MonoidError("no idempotent power found")


# -- isomorphism ------------------------------------------------------------


def greedy_generating_set(M: Monoid) -> tuple[int, ...]:
    """Removal-minimal generating set, keeping the smallest indices.

    Starts from all non-identity elements and tries to drop them from the
    largest index down, so the survivors are as small as possible.
    """
    gens = [x for x in range(M.size) if x != M.identity]
    for x in sorted(gens, reverse=True):
        rest = [g for g in gens if g != x]
        if x in set(submonoid_generated(M, rest)):
            gens = rest
    return tuple(gens)


def extend_hom(src: Monoid, gens: Sequence[int], images: Sequence[int], dst: Monoid) -> list[int] | None:
    """Extend ``gens[i] -> images[i]`` to a homomorphism on ``<gens>``.

    Returns the map as a list (``-1`` outside ``<gens>``) or ``None`` when
    the assignment is inconsistent.
    """
    f = [-1] * src.size
    f[src.identity] = dst.identity
    queue = deque([src.identity])
    rs, rd = src.rows, dst.rows
    while queue:
        x = queue.popleft()
        fx = f[x]
        for g, gi in zip(gens, images):
            y = rs[x][g]
            fy = rd[fx][gi]
            if f[y] == -1:
                f[y] = fy
                queue.append(y)
            elif f[y] != fy:
                return None
    return f


def _signature(M: Monoid, x: int) -> tuple[int, int]:
    """(index, period) of the cyclic subsemigroup generated by x."""
    seen = {}
    y, k = x, 1
    r = M.rows
    while y not in seen:
        seen[y] = k
        y = r[y][x]
        k += 1
    return seen[y], k - seen[y]


def find_isomorphism(M: Monoid, N: Monoid) -> list[int] | None:
    """Brute-force isomorphism search (small monoids only)."""
    if M.size != N.size:
        return None
    gens = greedy_generating_set(M)
    sigN = {}
    for y in range(N.size):
        sigN.setdefault(_signature(N, y), []).append(y)
    cands = [sigN.get(_signature(M, g), []) for g in gens]
    if sorted(_signature(M, x) for x in range(M.size)) != sorted(_signature(N, y) for y in range(N.size)):
        return None
    for images in product(*cands):
        f = extend_hom(M, gens, images, N)
        if f is not None and -1 not in f and len(set(f)) == N.size:
            return f
    return None


def is_isomorphic(M: Monoid, N: Monoid) -> bool:
    return find_isomorphism(M, N) is not None

"""Groups living inside finite monoids, and brute-force division between them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from typing import Mapping

from .monoid import (
    DivisionWitness,
    Monoid,
    MonoidError,
    extend_hom,
    find_isomorphism,
    greedy_generating_set,
    restrict,
)

DEFAULT_GROUP_CAP = 60


@dataclass(frozen=True)
class Group:
    """A subgroup of ``parent`` with neutral element ``unit``.

    ``unit`` is an idempotent of the parent, not necessarily its identity.
    ``label`` is a display name only and takes no part in equality.
    """

    parent: Monoid
    carrier: tuple[int, ...]
    unit: int
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        cs = set(self.carrier)
        if self.unit not in cs:
            raise MonoidError("unit not in carrier")
        r = self.parent.rows
        for x in self.carrier:
            if r[self.unit][x] != x or r[x][self.unit] != x:
                raise MonoidError(f"{self.unit} is not neutral for {x}")
            for y in self.carrier:
                if r[x][y] not in cs:
                    raise MonoidError(f"carrier not closed: {x}*{y}")
        for x in self.carrier:
            if not any(r[x][y] == self.unit for y in self.carrier):
                raise MonoidError(f"{x} has no inverse in carrier")

    @classmethod
    def of_monoid(cls, M: Monoid, label: str | None = None) -> Group:
        return cls(M, tuple(range(M.size)), M.identity, label)

    @property
    def order(self) -> int:
        return len(self.carrier)

    def mul(self, x: int, y: int) -> int:
        return self.parent.rows[x][y]

    @cached_property
    def _inverses(self) -> dict[int, int]:
        r = self.parent.rows
        return {x: next(y for y in self.carrier if r[x][y] == self.unit) for x in self.carrier}

    def inverse(self, x: int) -> int:
        return self._inverses[x]

    @cached_property
    def _standalone(self) -> tuple[Monoid, list[int]]:
        return restrict(self.parent, self.carrier, self.unit)

    def as_monoid(self) -> Monoid:
        """The group as a standalone monoid, unit at index 0."""
        return self._standalone[0]

    @property
    def embedding(self) -> list[int]:
        """``embedding[i]`` is the parent element for standalone index ``i``."""
        return self._standalone[1]

    @cached_property
    def local_index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.embedding)}

    def is_abelian(self) -> bool:
        r = self.parent.rows
        return all(r[x][y] == r[y][x] for x in self.carrier for y in self.carrier)

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.unit:
            y = self.parent.rows[y][x]
            k += 1
        return k

    def generated(self, gens) -> tuple[int, ...]:
        seen = {self.unit}
        frontier = [self.unit]
        r = self.parent.rows
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = r[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def subgroup(self, carrier) -> Group:
        return Group(self.parent, tuple(sorted(carrier)), self.unit)

    def __repr__(self) -> str:
        name = self.label or f"order {self.order}"
        return f"Group({name}, unit={self.unit})"


# -- builtin groups -----------------------------------------------------------


def trivial_group() -> Group:
    return Group.of_monoid(Monoid([[0]]), "trivial")


def cyclic_group(n: int) -> Group:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    t = [[(i + j) % n for j in range(n)] for i in range(n)]
    return Group.of_monoid(Monoid(t), f"Z/{n}Z")


def symmetric_group(k: int) -> Group:
    """S_k on permutations in lexicographic order; ``x*y`` applies x first."""
    if not 1 <= k <= 5:
        raise ValueError("symmetric groups are built for k <= 5 only")
    perms = sorted(permutations(range(k)))
    idx = {p: i for i, p in enumerate(perms)}
    t = [[idx[tuple(q[p[i]] for i in range(k))] for q in perms] for p in perms]
    name = "S3" if k == 3 else f"S{k}"
    return Group.of_monoid(Monoid(t), name)


def s3_generators() -> tuple[int, int]:
    """Indices of a 3-cycle (delta) and a transposition (sigma) in ``symmetric_group(3)``."""
    perms = sorted(permutations(range(3)))
    return perms.index((1, 2, 0)), perms.index((1, 0, 2))


def parse_group_name(spec: str) -> Group:
    """``trivial``, ``cyclic:n``, ``sym:3`` or ``file:<path>``."""
    from .monoid import parse_monoid

    spec = spec.strip()
    if spec == "trivial":
        return trivial_group()
    kind, _, arg = spec.partition(":")
    if kind == "cyclic":
        return cyclic_group(int(arg))
    if kind == "sym":
        return symmetric_group(int(arg))
    if kind == "file":
        with open(arg) as fh:
            M = parse_monoid(fh.read())
        try:
            return Group.of_monoid(M, f"file:{arg}")
        except MonoidError as exc:
            raise MonoidError(f"{arg}: not a group ({exc})") from None
    raise ValueError(f"unknown group {spec!r}")


def group_name(G: Group) -> str:
    """Recognise trivial, cyclic and S3 groups up to isomorphism (order <= 12)."""
    n = G.order
    if n == 1:
        return "1"
    if n > 12:
        return f"G{n}"
    M = G.as_monoid()
    if find_isomorphism(M, cyclic_group(n).as_monoid()) is not None:
        return f"Z/{n}Z"
    if n == 6 and find_isomorphism(M, symmetric_group(3).as_monoid()) is not None:
        return "S3"
    return f"G{n}"


# -- subgroups, quotients, homomorphisms ------------------------------------


def all_subgroups(G: Group) -> list[tuple[int, ...]]:
    """Every subgroup carrier, by closure of single-element extensions.

    Sorted by (order, carrier) for canonical iteration.
    """
    found = {(G.unit,)}
    frontier = [(G.unit,)]
    while frontier:
        nxt = []
        for S in frontier:
            Sset = set(S)
            for x in G.carrier:
                if x in Sset:
                    continue
                T = G.generated(S + (x,))
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda c: (len(c), c))


def is_normal(G: Group, N: tuple[int, ...]) -> bool:
    r = G.parent.rows
    Ns = set(N)
    return all(r[r[g][n]][G.inverse(g)] in Ns for g in G.carrier for n in N)


def quotient(G: Group, N: tuple[int, ...]) -> tuple[Monoid, dict[int, int]]:
    """G/N as a standalone monoid and the projection from G's carrier."""
    r = G.parent.rows
    coset_of: dict[int, int] = {}
    reps = []
    for g in G.carrier:
        if g in coset_of:
            continue
        k = len(reps)
        reps.append(g)
        for n in N:
            coset_of[r[g][n]] = k
    t = [[coset_of[r[a][b]] for b in reps] for a in reps]
    return Monoid(t, coset_of[G.unit], check=False), coset_of


def find_embedding(H: Monoid, G: Monoid) -> list[int] | None:
    """Injective homomorphism H -> G (monoid identities matched), brute force."""
    if H.size > G.size:
        return None
    gens = greedy_generating_set(H)
    from .monoid import _signature

    sigG: dict = {}
    for y in range(G.size):
        sigG.setdefault(_signature(G, y), []).append(y)
    cands = [sigG.get(_signature(H, g), []) for g in gens]
    for images in product(*cands):
        f = extend_hom(H, gens, images, G)
        if f is not None and len(set(f)) == H.size:
            return f
    return None


def group_embeds_in_monoid(G: Group, M: Monoid) -> bool:
    """Whether G is isomorphic to a group contained in M.

    Every group in M lies in a maximal subgroup, so it suffices to search those.
    """
    from .monoid import maximal_subgroups

    H = G.as_monoid()
    for K in maximal_subgroups(M):
        if K.order >= G.order and K.order % G.order == 0:
            if find_embedding(H, K.as_monoid()) is not None:
                return True
    return False


@dataclass(frozen=True, eq=False)
class GroupDivision:
    """Outcome of :func:`group_divides`.

    ``verdict`` is ``None`` when the search was not attempted (cap exceeded).
    ``witness`` is stated for the standalone monoids ``H.as_monoid()`` and
    ``G.as_monoid()``; ``parent_map`` carries the same surjection in parent
    coordinates (G's parent elements to H's parent elements).
    """

    verdict: bool | None
    witness: DivisionWitness | None = None
    parent_map: Mapping[int, int] | None = None

    def __bool__(self) -> bool:
        if self.verdict is None:
            raise ValueError("group division undecided at this cap")
        return self.verdict


_division_cache: dict = {}


def group_divides(H: Group, G: Group, cap: int = DEFAULT_GROUP_CAP) -> GroupDivision:
    """Is H a homomorphic image of a subgroup of G?

    Subgroups of G are tried by ascending order, each with every normal
    subgroup of the right index; the quotient is compared with H by brute-force
    isomorphism.
    """
    if G.order > cap:
        return GroupDivision(None)
    key = (H.as_monoid(), G.as_monoid(), cap)
    if key in _division_cache:
        local = _division_cache[key]
    else:
        local = _divides_standalone(H.as_monoid(), G.as_monoid())
        _division_cache[key] = local
    if local is None:
        return GroupDivision(False)
    witness = local
    pm = {G.embedding[x]: H.embedding[y] for x, y in witness.surjection.items()}
    return GroupDivision(True, witness, pm)


def _divides_standalone(H: Monoid, G: Monoid) -> DivisionWitness | None:
    h = H.size
    if G.size % h:
        return None
    Gg = Group.of_monoid(G)
    subs = all_subgroups(Gg)
    for S in subs:
        if len(S) % h:
            continue
        Sg = Gg.subgroup(S)
        for N in subs:
            if len(N) * h != len(S) or not set(N) <= set(S) or not is_normal(Sg, N):
                continue
            Q, proj = quotient(Sg, N)
            iso = find_isomorphism(Q, H)
            if iso is None:
                continue
            return DivisionWitness(tuple(S), {x: iso[proj[x]] for x in S})
    return None


def check_group_axioms(G: Group) -> bool:
    try:
        Group(G.parent, G.carrier, G.unit)
    except MonoidError:
        return False
    return True

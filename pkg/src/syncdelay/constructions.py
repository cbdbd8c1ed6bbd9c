"""Local divisors, Rees extensions, the Birget-Rhodes expansion and the
Schützenberger-style product of a homomorphism."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .monoid import (
    DEFAULT_SIZE_CAP,
    DivisionWitness,
    Monoid,
    MonoidHom,
    check_size,
    element_set,
    generate,
    is_submonoid,
    is_unit,
    restrict,
    submonoid_generated,
    verify_division,
)

# Explicit multiplication tables are only built up to this many elements.
TABLE_CAP = 4096


class ConstructionError(ValueError):
    pass


# -- local divisors -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LocalDivisorResult:
    """``M_c`` on the carrier ``cM ∩ Mc``; index 0 is ``c``.

    ``carrier_map[i]`` is the element of M represented by ``i``;
    ``lambda_domain`` is the submonoid ``{x : cx in cM ∩ Mc}`` on which
    ``x -> cx`` is a surjective homomorphism onto ``M_c``.
    """

    monoid: Monoid
    c: int
    carrier_map: tuple[int, ...]
    lambda_domain: tuple[int, ...]

    @cached_property
    def index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.carrier_map)}

    def lam(self, x: int, M: Monoid) -> int:
        return self.index[M.rows[self.c][x]]

    def witness(self, M: Monoid) -> DivisionWitness:
        """``M_c`` divides ``M`` through ``x -> cx`` on ``lambda_domain``."""
        r = M.rows
        return DivisionWitness(self.lambda_domain, {x: self.index[r[self.c][x]] for x in self.lambda_domain})


def local_divisor(M: Monoid, c: int) -> LocalDivisorResult:
    t = M.table.astype(np.int64)
    cM = set(t[c].tolist())
    Mc = set(t[:, c].tolist())
    carrier = [c] + sorted((cM & Mc) - {c})
    idx = np.full(M.size, -1, dtype=np.int64)
    idx[carrier] = np.arange(len(carrier))
    # m_x: least m with m c = x
    col = t[:, c]
    mx = np.array([int(np.nonzero(col == x)[0][0]) for x in carrier])
    prod = t[np.ix_(mx, carrier)]
    table = idx[prod]
    if (table < 0).any():
        raise ConstructionError("local divisor carrier not closed (non-associative input?)")
    Mc_monoid = Monoid(table, 0)
    inside = np.isin(t[c], carrier)
    dom = element_set(np.nonzero(inside)[0].tolist())
    return LocalDivisorResult(Mc_monoid, c, tuple(carrier), dom)


# -- Rees extensions --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ReesResult:
    """``Rees(N, L, rho)`` on ``N ∪ N×L×N``.

    Plain ``n`` has index ``n``; the triple ``(n1, l, n2)`` has index
    ``|N| + (n1 |L| + l) |N| + n2``.  The multiplication table is built on
    demand (see :data:`TABLE_CAP`); :meth:`mul` works at any size.
    """

    N: Monoid
    L: Monoid
    rho: tuple[int, ...]

    def __post_init__(self):
        if len(self.rho) != self.N.size:
            raise ConstructionError("rho must be total on N")
        if any(not 0 <= v < self.L.size for v in self.rho):
            raise ConstructionError("rho value out of range")

    @property
    def size(self) -> int:
        n, l = self.N.size, self.L.size
        return n + n * n * l

    def triple(self, n1: int, l: int, n2: int) -> int:
        n = self.N.size
        return n + (n1 * self.L.size + l) * n + n2

    def tag(self, x: int):
        n = self.N.size
        if x < n:
            return ("plain", x)
        k = x - n
        n2 = k % n
        n1, l = divmod(k // n, self.L.size)
        return ("triple", n1, l, n2)

    def mul(self, x: int, y: int) -> int:
        N, L = self.N.rows, self.L.rows
        tx, ty = self.tag(x), self.tag(y)
        if tx[0] == "plain" and ty[0] == "plain":
            return N[x][y]
        if tx[0] == "plain":
            _, n1, l, n2 = ty
            return self.triple(N[x][n1], l, n2)
        if ty[0] == "plain":
            _, n1, l, n2 = tx
            return self.triple(n1, l, N[n2][y])
        _, a1, l1, a2 = tx
        _, b1, l2, b2 = ty
        mid = self.rho[N[a2][b1]]
        return self.triple(a1, L[L[l1][mid]][l2], b2)

    @cached_property
    def monoid(self) -> Monoid:
        check_size(self.size, TABLE_CAP, "Rees extension table")
        n, l = self.N.size, self.L.size
        S = self.size
        NT = self.N.table.astype(np.int64)
        LT = self.L.table.astype(np.int64)
        rho = np.asarray(self.rho, dtype=np.int64)
        ar = np.arange(S)
        plain = ar < n
        k = np.maximum(ar - n, 0)
        a = np.where(plain, ar, (k // n) // l)  # n or n1
        lab = (k // n) % l
        b = k % n  # n2
        P = plain[:, None]
        Q = plain[None, :]
        # plain * plain
        pp = NT[a[:, None], a[None, :]]
        # plain * triple
        pt = n + (NT[a[:, None], a[None, :]] * l + lab[None, :]) * n + b[None, :]
        # triple * plain
        tp = n + (a[:, None] * l + lab[:, None]) * n + NT[b[:, None], a[None, :]]
        # triple * triple
        mid = rho[NT[b[:, None], a[None, :]]]
        ll = LT[LT[lab[:, None], mid], lab[None, :]]
        tt = n + (a[:, None] * l + ll) * n + b[None, :]
        T = np.where(P & Q, pp, np.where(P, pt, np.where(Q, tp, tt)))
        return Monoid(T, 0)


def rees_extension(N: Monoid, L: Monoid, rho: Sequence[int], cap: int = DEFAULT_SIZE_CAP) -> ReesResult:
    R = ReesResult(N, L, tuple(int(v) for v in rho))
    check_size(R.size, cap, "Rees extension")
    return R


# -- local Rees products -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LocalRees:
    """``Rees(N, M_c, rho_c)`` with the surjection ``n -> n``, ``(u, x, v) -> u x v`` onto M."""

    rees: ReesResult
    local: LocalDivisorResult
    N_embedding: tuple[int, ...]  # N index -> element of M

    def phi(self, x: int, M: Monoid) -> int:
        t = self.rees.tag(x)
        e = self.N_embedding
        if t[0] == "plain":
            return e[t[1]]
        _, n1, l, n2 = t
        r = M.rows
        return r[r[e[n1]][self.local.carrier_map[l]]][e[n2]]

    def phi_array(self, M: Monoid) -> np.ndarray:
        """The surjection as an array over all Rees indices."""
        R = self.rees
        n, l = R.N.size, R.L.size
        e = np.asarray(self.N_embedding, dtype=np.int64)
        cm = np.asarray(self.local.carrier_map, dtype=np.int64)
        t = M.table.astype(np.int64)
        n1, lab, n2 = np.meshgrid(np.arange(n), np.arange(l), np.arange(n), indexing="ij")
        trip = t[t[e[n1], cm[lab]], e[n2]].reshape(-1)
        return np.concatenate([e, trip])

    def witness(self, M: Monoid) -> DivisionWitness:
        f = self.phi_array(M)
        return DivisionWitness(tuple(range(self.rees.size)), dict(enumerate(f.tolist())))


def local_rees(M: Monoid, N_carrier: Sequence[int], c: int, cap: int = DEFAULT_SIZE_CAP) -> LocalRees:
    N_carrier = element_set(N_carrier)
    if is_unit(M, c):
        raise ConstructionError(f"c = {c} is a unit")
    if not is_submonoid(M, N_carrier):
        raise ConstructionError("N is not a submonoid of M")
    if len(submonoid_generated(M, list(N_carrier) + [c])) != M.size:
        raise ConstructionError("N together with c does not generate M")
    N, emb = restrict(M, N_carrier, M.identity)
    loc = local_divisor(M, c)
    r = M.rows
    rho = [loc.index[r[r[c][x]][c]] for x in emb]
    R = rees_extension(N, loc.monoid, rho, cap)
    return LocalRees(R, loc, tuple(emb))


def check_local_rees(LR: LocalRees, M: Monoid) -> tuple[bool, str]:
    """Verify the surjection onto M without building the Rees table.

    Products involving a plain element hold by associativity of M, so it
    remains to check ``l ∘ rho(m) ∘ l' = l m l'`` for all ``l, l'`` in ``M_c``
    and ``m`` in N, plus surjectivity and the neutral element.
    """
    loc = LR.local
    Lt = loc.monoid.table.astype(np.int64)
    cm = np.asarray(loc.carrier_map, dtype=np.int64)
    t = M.table.astype(np.int64)
    rho = np.asarray(LR.rees.rho, dtype=np.int64)
    e = np.asarray(LR.N_embedding, dtype=np.int64)
    if e[0] != M.identity:
        return False, "neutral element of N is not the identity of M"
    for m in range(LR.rees.N.size):
        lhs = cm[Lt[Lt[:, rho[m]][:, None], np.arange(len(cm))[None, :]]]
        rhs = t[t[cm, e[m]][:, None], cm[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j = bad[0]
            return False, (
                f"sandwich law fails: {cm[i]} * rho({e[m]}) * {cm[j]} gives {lhs[i, j]}, "
                f"expected {rhs[i, j]}"
            )
    image = set(LR.phi_array(M).tolist())
    if len(image) != M.size:
        return False, f"surjection misses element {min(set(range(M.size)) - image)}"
    return True, ""


# -- lifting divisions through Rees extensions ----------------------------------------


def rees_divisor_lift(
    N: Monoid,
    N2: Monoid,
    wN: DivisionWitness,
    L: Monoid,
    L2: Monoid,
    wL: DivisionWitness,
    rho: Sequence[int],
    cap: int = DEFAULT_SIZE_CAP,
) -> tuple[ReesResult, DivisionWitness]:
    """From ``N <= N2`` and ``L <= L2`` build ``rho2`` with ``Rees(N, L, rho) <= Rees(N2, L2, rho2)``.

    On the sub-carrier of ``wN``, ``rho2(n)`` is the least element of the
    carrier of ``wL`` over ``rho(wN(n))``; elsewhere it is the identity of L2.
    """
    for name, (A, B, w) in {"N": (N, N2, wN), "L": (L, L2, wL)}.items():
        v = verify_division(A, B, w)
        if not v:
            raise ConstructionError(f"{name} witness does not verify: {v.reason}")
    sec: dict[int, int] = {}
    for y in sorted(wL.sub_carrier):
        sec.setdefault(wL.surjection[y], y)
    SN = set(wN.sub_carrier)
    rho2 = [sec[rho[wN.surjection[x]]] if x in SN else L2.identity for x in range(N2.size)]
    R2 = rees_extension(N2, L2, rho2, cap)
    R1 = ReesResult(N, L, tuple(rho))
    SNl = sorted(SN)
    SLl = sorted(wL.sub_carrier)
    carrier = list(SNl)
    f = {x: wN.surjection[x] for x in SNl}
    for n1 in SNl:
        for l in SLl:
            for n2 in SNl:
                z = R2.triple(n1, l, n2)
                carrier.append(z)
                f[z] = R1.triple(wN.surjection[n1], wL.surjection[l], wN.surjection[n2])
    return R2, DivisionWitness(element_set(carrier), f)


# -- Birget-Rhodes expansion ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Expansion:
    """Elements are ``(X, m)`` with X a frozenset containing 1 and m."""

    base: Monoid
    monoid: Monoid
    elements: tuple[tuple[frozenset, int], ...]
    hom: MonoidHom | None = None


def _mask_images(M: Monoid) -> np.ndarray:
    """``img[m, X]`` is the bitmask of ``m·X``."""
    n = M.size
    masks = np.arange(1 << n, dtype=np.int64)
    img = np.zeros((n, 1 << n), dtype=np.int64)
    t = M.table.astype(np.int64)
    for y in range(n):
        has = (masks >> y) & 1
        img |= has[None, :] * (np.int64(1) << t[:, y])[:, None]
    return img


def _mask_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


FULL_EXPANSION_CAP = 12


def birget_rhodes(
    M: Monoid, mode: str = "reachable", hom: MonoidHom | None = None, cap: int = DEFAULT_SIZE_CAP
) -> Expansion:
    """Exp(M) in full, or the submonoid generated by ``({1, φ(a)}, φ(a))``."""
    n = M.size
    one = M.identity
    if mode == "full":
        if n > FULL_EXPANSION_CAP:
            raise ConstructionError(f"full expansion only for |M| <= {FULL_EXPANSION_CAP}")
        elems = [
            (X, m)
            for m in range(n)
            for X in range(1 << n)
            if X >> one & 1 and X >> m & 1
        ]
        elems.sort(key=lambda e: (e != (1 << one, one), e[0], e[1]))
        check_size(len(elems), min(cap, TABLE_CAP), "full expansion table")
        img = _mask_images(M)
        Xs = np.array([e[0] for e in elems], dtype=np.int64)
        ms = np.array([e[1] for e in elems], dtype=np.int64)
        key = np.full((1 << n) * n, -1, dtype=np.int64)
        key[Xs * n + ms] = np.arange(len(elems))
        t = M.table.astype(np.int64)
        newX = Xs[:, None] | img[ms[:, None], Xs[None, :]]
        newm = t[ms[:, None], ms[None, :]]
        T = key[newX * n + newm]
        E = Monoid(T, 0, check=len(elems) <= 256)
        return Expansion(M, E, tuple((_mask_set(X), m) for X, m in elems))
    if mode != "reachable":
        raise ValueError(f"unknown expansion mode {mode!r}")
    if hom is None:
        hom = MonoidHom(tuple(range(n)), M, {x: x for x in range(n)})
    r = M.rows
    gens = [((1 << one) | (1 << hom.images[a]), hom.images[a]) for a in hom.alphabet]

    def right(x, g):
        X, m = x
        Y, k = gens[g]
        mY = 0
        for y in range(n):
            if Y >> y & 1:
                mY |= 1 << r[m][y]
        return (X | mY, r[m][k])

    E, keys, gi = generate((1 << one, one), list(range(len(gens))), right, cap, "expansion")
    psi = MonoidHom(hom.alphabet, E, dict(zip(hom.alphabet, gi)))
    return Expansion(M, E, tuple((_mask_set(X), m) for X, m in keys), psi)


# -- Schützenberger-style product ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class SchutzenbergerResult:
    """Elements are the sets ``[w]`` of pairs ``(φ(w1), φ(w2))`` over all splits ``w = w1 w2``."""

    base: MonoidHom
    monoid: Monoid
    hom: MonoidHom
    elements: tuple[tuple[tuple[int, int], ...], ...]

    def value(self, x: int) -> int:
        """φ(w) for any w with ψ(w) = x."""
        a, b = self.elements[x][0]
        return self.base.target.rows[a][b]

    def recognizes_concat(self, left: set, right: set) -> frozenset:
        """Elements ``[w]`` with a pair in ``left × right``: ψ-preimage is φ⁻¹(left)·φ⁻¹(right)."""
        return frozenset(
            i for i, S in enumerate(self.elements) if any(x in left and y in right for x, y in S)
        )


def schutzenberger_product(phi: MonoidHom, cap: int = DEFAULT_SIZE_CAP) -> SchutzenbergerResult:
    M = phi.target
    r = M.rows
    one = M.identity
    letters = [phi.images[a] for a in phi.alphabet]

    def right(S, g):
        p = letters[g]
        w = r[S[0][0]][S[0][1]]
        out = {(x, r[y][p]) for x, y in S}
        out.add((r[w][p], one))
        return tuple(sorted(out))

    E, keys, gi = generate(((one, one),), list(range(len(letters))), right, cap, "Schützenberger product")
    psi = MonoidHom(phi.alphabet, E, dict(zip(phi.alphabet, gi)))
    return SchutzenbergerResult(phi, E, psi, tuple(keys))


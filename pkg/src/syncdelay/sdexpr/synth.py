"""Synthesis of expressions for the languages recognized by a homomorphism.

The recursion works on pairs (monoid, alphabet).  With no letters the only
language is {1}.  When every letter maps to a unit, the image is a group H
and the preimages are cosets of a group-labelled star over the letters,
transported from H to the target group G along a division of G onto H.
Otherwise one letter c with non-unit image is split off: words are read as
``B*`` parts separated by c, and the blocks between two c's are handled by
recursion on the local divisor at c over the alphabet of values of ``B*``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..automata import Dfa, example_word
from ..constructions import local_divisor
from ..groups import Group, group_divides, group_name
from ..monoid import MonoidHom, is_unit, maximal_subgroups, restrict, submonoid_generated
from ..omega import (
    BuchiAutomaton,
    LassoWord,
    buchi_concat,
    buchi_of_omega_power,
    buchi_union,
    empty_buchi,
    lasso_in_buchi,
    lasso_sample,
)
from .ast import (
    EMPTY,
    EPS,
    Concat,
    Empty,
    ExprError,
    Letter,
    Omega,
    SdExpr,
    Star,
    StarCoset,
    Union,
    concat,
    concat_all,
    letter,
    omega,
    star,
    union,
    union_all,
)
from .compile import Compiler


class SynthesisError(ValueError):
    pass


class NotRecognizable(SynthesisError):
    pass


# -- cosets -----------------------------------------------------------------------------


def coset_expr(group: Group, pieces, target: int) -> SdExpr:
    """Expression for the words of ``K*`` evaluating to ``target``, without coset nodes.

    A word evaluating to g factors as ``x0 u1 x1 ... uk xk`` where each ``xi``
    evaluates to the identity and the values ``h1``, ``h1 h2``, ... after the
    blocks ``ui`` are pairwise distinct and different from the identity (cut
    the word at the last visit of each value).  ``chain(g, S)`` enumerates
    such chains with values drawn from S, in the frame of the current value.
    """
    S0 = star(group, pieces)
    pm = dict(S0.pieces) if isinstance(S0, Star) else {}
    if target not in set(group.carrier):
        raise ExprError(f"target {target} is not an element of the group")
    if target == group.unit:
        return S0
    reach = group.generated(sorted(pm))
    if target not in reach:
        return EMPTY
    r = group.parent.rows
    inv = group.inverse
    memo: dict = {}

    def chain(g: int, S: frozenset) -> SdExpr:
        if g == group.unit:
            return EPS
        if g not in S:
            return EMPTY
        key = (g, S)
        if key in memo:
            return memo[key]
        parts = []
        for h in sorted(S):
            if h not in pm:
                continue
            hi = inv(h)
            S2 = frozenset(r[hi][s] for s in S if s != h)
            rest = chain(r[hi][g], S2)
            if not isinstance(rest, Empty):
                parts.append(concat(pm[h], concat(S0, rest)))
        out = union_all(parts)
        memo[key] = out
        return out

    return concat(S0, chain(target, frozenset(reach) - {group.unit}))


def eliminate_cosets(e: SdExpr) -> SdExpr:
    """Rewrite every coset node through :func:`coset_expr`."""
    return _rewrite(e, lambda x, kids: coset_expr(x.group, dict(kids), x.target) if isinstance(x, StarCoset) else None)


def _rewrite(e: SdExpr, hook) -> SdExpr:
    """Bottom-up rebuild; ``hook(node, rebuilt_pieces)`` may replace star-like nodes."""
    memo: dict = {}

    def go(x: SdExpr) -> SdExpr:
        if x in memo:
            return memo[x]
        if isinstance(x, (Empty, Letter)):
            out = x
        elif isinstance(x, Union):
            out = union_all(go(p) for p in x.parts)
        elif isinstance(x, Concat):
            out = concat(go(x.left), go(x.right))
        else:
            kids = tuple((g, go(p)) for g, p in x.pieces)
            out = hook(x, kids)
            if out is None:
                if isinstance(x, Star):
                    out = star(x.group, kids)
                elif isinstance(x, Omega):
                    out = omega(x.group, kids)
                else:
                    from .ast import star_coset

                    out = star_coset(x.group, kids, x.target)
        memo[x] = out
        return out

    return go(e)


# -- changing the group -------------------------------------------------------------


def lift_group(e: SdExpr, H: Group, G: Group, sub_carrier, pi: Mapping[int, int]) -> SdExpr:
    """Rewrite every star over H as an expression over G.

    ``pi`` maps the subgroup ``sub_carrier`` of G onto H.  Piece h moves to
    the least preimage of h; when ``pi`` is not injective the identity of H is
    covered by the union of the cosets over its preimages.
    """
    S = sorted(sub_carrier)
    if set(pi) != set(S):
        raise SynthesisError("pi must be defined exactly on the subgroup")
    image = {pi[g] for g in S}
    if image != set(H.carrier):
        raise SynthesisError("pi is not surjective")
    section: dict[int, int] = {}
    for g in S:
        section.setdefault(pi[g], g)
    fibres: dict[int, list[int]] = {}
    for g in S:
        fibres.setdefault(pi[g], []).append(g)
    injective = len(S) == len(image)

    def hook(x, kids):
        if x.group != H:
            return None
        moved = {section[h]: p for h, p in kids}
        if injective:
            if isinstance(x, Star):
                return star(G, moved)
            if isinstance(x, Omega):
                return omega(G, moved)
            return coset_expr(G, moved, section[x.target])
        if isinstance(x, Star):
            return union_all(coset_expr(G, moved, g) for g in fibres[H.unit])
        if isinstance(x, Omega):
            loop = omega(G, moved)
            return union_all(concat(coset_expr(G, moved, g), loop) for g in fibres[H.unit])
        return union_all(coset_expr(G, moved, g) for g in fibres[x.target])

    return _rewrite(e, hook)


# -- block substitution ---------------------------------------------------------------


def sigma_preimage(e: SdExpr, expansion: Mapping) -> SdExpr:
    """Replace every letter t by ``expansion[t]``, keeping the tree shape."""
    memo: dict = {}

    def go(x: SdExpr) -> SdExpr:
        if x in memo:
            return memo[x]
        if isinstance(x, Empty):
            out = x
        elif isinstance(x, Letter):
            if x.a not in expansion:
                raise SynthesisError(f"no expansion for letter {x.a!r}")
            out = expansion[x.a]
        elif isinstance(x, Union):
            out = union_all(go(p) for p in x.parts)
        elif isinstance(x, Concat):
            out = concat(go(x.left), go(x.right))
        elif isinstance(x, Star):
            out = star(x.group, [(g, go(p)) for g, p in x.pieces])
        elif isinstance(x, Omega):
            out = omega(x.group, [(g, go(p)) for g, p in x.pieces])
        else:
            from .ast import star_coset

            out = star_coset(x.group, [(g, go(p)) for g, p in x.pieces], x.target)
        memo[x] = out
        return out

    return go(e)


# -- the synthesizer ----------------------------------------------------------------------


def _normalize(phi: MonoidHom) -> tuple[MonoidHom, list[int]]:
    """Restrict the target to the image of phi; returns the new hom and the embedding."""
    img = submonoid_generated(phi.target, phi.images.values())
    M, emb = restrict(phi.target, img, phi.target.identity)
    idx = {x: i for i, x in enumerate(emb)}
    return MonoidHom(tuple(phi.alphabet), M, {a: idx[phi.images[a]] for a in phi.alphabet}), emb


def _standalone(G: Group) -> Group:
    if G.parent.size == G.order and G.unit == G.parent.identity:
        return G
    return Group.of_monoid(G.as_monoid(), G.label)


@dataclass
class Synthesizer:
    """Memoized synthesis for one target group G."""

    G: Group
    cap: int = 60
    memo: dict = field(default_factory=dict)
    omemo: dict = field(default_factory=dict)
    # (alphabet, concatenation) pairs assembled around a split letter, for unambiguity checks
    marked: list = field(default_factory=list)

    def __post_init__(self):
        self.G = _standalone(self.G)

    # .. preconditions ..

    def check_precondition(self, phi: MonoidHom) -> None:
        nphi, _ = _normalize(phi)
        for K in maximal_subgroups(nphi.target):
            res = group_divides(K, self.G, self.cap)
            if res.verdict is None:
                raise SynthesisError(f"group division undecided at cap {self.cap}")
            if not res.verdict:
                raise SynthesisError(
                    f"subgroup of order {K.order} ({group_name(K)}) at idempotent {K.unit} "
                    f"does not divide {group_name(self.G)}"
                )

    # .. finite words ..

    def all_preimages(self, phi: MonoidHom) -> dict[int, SdExpr]:
        """Expression for ``phi^-1(m)`` for every m in the image of phi (keys in phi's target)."""
        nphi, emb = _normalize(phi)
        inner = self._syn(nphi)
        return {emb[m]: e for m, e in inner.items()}

    def _key(self, phi: MonoidHom):
        return (phi.target, tuple((a, phi.images[a]) for a in phi.alphabet))

    def _syn(self, phi: MonoidHom) -> dict[int, SdExpr]:
        """``phi`` is normalized (onto its target)."""
        key = self._key(phi)
        if key in self.memo:
            return self.memo[key]
        M = phi.target
        A = phi.alphabet
        if not A:
            out = {M.identity: EPS}
        elif all(is_unit(M, phi.images[a]) for a in A):
            out = self._group_case(phi)
        else:
            out = self._split_case(phi)
        self.memo[key] = out
        return out

    def _group_hom(self, phi: MonoidHom):
        """The image as a standalone group H, pieces over it, and its lift data to G."""
        M = phi.target
        H = Group.of_monoid(M)
        pieces: dict[int, list] = {}
        for a in phi.alphabet:
            pieces.setdefault(phi.images[a], []).append(letter(a))
        pieces = {h: union_all(ls) for h, ls in pieces.items()}
        res = group_divides(H, self.G, self.cap)
        if res.verdict is None:
            raise SynthesisError(f"group division undecided at cap {self.cap}")
        if not res.verdict:
            raise SynthesisError(f"group of order {H.order} does not divide {group_name(self.G)}")
        return H, pieces, res.witness

    def _group_case(self, phi: MonoidHom) -> dict[int, SdExpr]:
        H, pieces, w = self._group_hom(phi)
        out = {}
        for m in H.carrier:
            e = coset_expr(H, pieces, m)
            out[m] = lift_group(e, H, self.G, w.sub_carrier, w.surjection)
        return out

    def _split(self, phi: MonoidHom):
        M = phi.target
        A = phi.alphabet
        r = M.rows
        c = next(a for a in A if not is_unit(M, phi.images[a]))
        cv = phi.images[c]
        B = tuple(a for a in A if a != c)
        phiB = MonoidHom(B, M, {a: phi.images[a] for a in B})
        nB, embB = _normalize(phiB)
        fbn = self._syn(nB)
        fb = {embB[m]: e for m, e in fbn.items()}
        T = tuple(sorted(fb))
        loc = local_divisor(M, cv)
        psi = MonoidHom(T, loc.monoid, {t: loc.index[r[r[cv][t]][cv]] for t in T})
        expansion = {t: concat(fb[t], letter(c)) for t in T}
        return c, cv, fb, T, loc, psi, expansion

    def _split_case(self, phi: MonoidHom) -> dict[int, SdExpr]:
        M = phi.target
        r = M.rows
        c, cv, fb, T, loc, psi, expansion = self._split(phi)
        npsi, embT = _normalize(psi)
        ftn = self._syn(npsi)
        blocks = {embT[x]: sigma_preimage(e, expansion) for x, e in ftn.items()}
        parts: dict[int, list] = {m: [e] for m, e in fb.items()}
        for m0 in T:
            for x, bx in blocks.items():
                head = r[m0][loc.carrier_map[x]]
                for mk in T:
                    m = r[head][mk]
                    e = Concat(fb[m0], Concat(Letter(c), Concat(bx, fb[mk])))
                    self.marked.append((phi.alphabet, e))
                    parts.setdefault(m, []).append(concat(fb[m0], concat(letter(c), concat(bx, fb[mk]))))
        return {m: union_all(ps) for m, ps in parts.items()}

    # .. infinite words ..

    def omega_summands(self, phi: MonoidHom) -> list[tuple[SdExpr, Omega]]:
        """Pairs (prefix language, omega node) covering all infinite words.

        Each product lies inside a single class of words with matching
        factorizations.
        """
        nphi, _ = _normalize(phi)
        return self._osyn(nphi)

    def _osyn(self, phi: MonoidHom) -> list:
        key = self._key(phi)
        if key in self.omemo:
            return self.omemo[key]
        M = phi.target
        A = phi.alphabet
        if not A:
            out: list = []
        elif all(is_unit(M, phi.images[a]) for a in A):
            H, pieces, w = self._group_hom(phi)
            loop = lift_group(omega(H, pieces), H, self.G, w.sub_carrier, w.surjection)
            out = []
            for m in H.carrier:
                # coset(1) · omega = omega
                h = EPS if m == H.unit else coset_expr(H, pieces, m)
                pre = lift_group(h, H, self.G, w.sub_carrier, w.surjection)
                out.extend(_as_summands(concat(pre, loop)))
        else:
            c, cv, fb, T, loc, psi, expansion = self._split(phi)
            npsi, embT = _normalize(psi)
            ftn = self._syn(npsi)
            blocks = {embT[x]: sigma_preimage(e, expansion) for x, e in ftn.items()}
            phiB = MonoidHom(tuple(a for a in A if a != c), M, {a: phi.images[a] for a in A if a != c})
            nB, _ = _normalize(phiB)
            tailB = self._osyn(nB)
            heads = [
                concat(fb[m0], concat(letter(c), bx)) for m0 in T for x, bx in blocks.items()
            ]
            out = list(tailB)
            for h in heads:
                for pre, loop in tailB:
                    out.append((concat(h, pre), loop))
            for pre, loop in self._osyn(npsi):
                pre_a = sigma_preimage(pre, expansion)
                loop_a = sigma_preimage(loop, expansion)
                for m0 in T:
                    out.append((concat(fb[m0], concat(letter(c), pre_a)), loop_a))
        out = [(p, l) for p, l in out if not isinstance(p, Empty) and isinstance(l, Omega)]
        self.omemo[key] = out
        return out


def _as_summands(e: SdExpr) -> list:
    """Split a union of ``prefix · omega`` terms into pairs."""
    parts = e.parts if isinstance(e, Union) else (e,)
    out = []
    for p in parts:
        if isinstance(p, Omega):
            out.append((EPS, p))
        elif isinstance(p, Concat):
            pre, loop = _split_omega_concat(p)
            out.append((pre, loop))
        elif isinstance(p, Empty):
            continue
        else:
            raise SynthesisError("unexpected term in an omega union")
    return out


def _split_omega_concat(e: Concat):
    """``l1 · (l2 · (... · Omega))`` as (prefix, Omega)."""
    lefts = []
    x: SdExpr = e
    while isinstance(x, Concat):
        lefts.append(x.left)
        x = x.right
    if isinstance(x, Union):
        raise SynthesisError("union inside an omega concatenation")
    if not isinstance(x, Omega):
        raise SynthesisError("omega concatenation does not end in an omega node")
    return concat_all(lefts), x


# -- public entry points ------------------------------------------------------------------


def synthesize_all(phi: MonoidHom, G: Group, *, cap: int = 60, check: bool = True) -> dict[int, SdExpr]:
    S = Synthesizer(G, cap)
    if check:
        S.check_precondition(phi)
    return S.all_preimages(phi)


def synthesize_finite(phi: MonoidHom, G: Group, m: int, *, cap: int = 60) -> SdExpr:
    """Expression for ``phi^-1(m)`` with all star groups equal to G (or trivial)."""
    if not 0 <= m < phi.target.size:
        raise SynthesisError(f"element {m} out of range")
    return synthesize_all(phi, G, cap=cap).get(m, EMPTY)


def synthesize_language(phi: MonoidHom, G: Group, targets, *, cap: int = 60) -> SdExpr:
    pre = synthesize_all(phi, G, cap=cap)
    return union_all(pre[m] for m in sorted(set(targets)) if m in pre)


@dataclass(frozen=True, eq=False)
class OmegaNormalForm:
    """``L0 ∪ ⋃ Li · Omega_i``."""

    alphabet: tuple
    L0: SdExpr
    summands: tuple  # ((prefix, Omega), ...)

    def expr(self) -> SdExpr:
        return union(self.L0, *(concat(p, o) for p, o in self.summands))

    def buchi(self, compiler: Compiler | None = None) -> BuchiAutomaton:
        C = compiler or Compiler(self.alphabet)
        B = empty_buchi(self.alphabet)
        for pre, loop in self.summands:
            B = buchi_union(B, buchi_concat(C.finite(pre), buchi_of_omega_power(C.finite(loop.star()))))
        return B


def synthesize_omega(
    phi: MonoidHom,
    G: Group,
    reference: BuchiAutomaton,
    *,
    finite_targets=None,
    bound: int = 8,
    n_random: int = 1000,
    seed: int = 0,
    cap: int = 60,
) -> OmegaNormalForm:
    """Normal form for the infinite-word language of ``reference``, assumed recognized by phi.

    ``finite_targets`` optionally selects the finite-word part ``L0`` as a
    union of preimages.  Summands are kept when a representative lasso of the summand is accepted
    by ``reference``.  Recognizability is not decided: the result is compared
    with ``reference`` on all lassos up to ``bound`` plus ``n_random`` seeded
    random ones, and any disagreement raises :class:`NotRecognizable`.
    """
    S = Synthesizer(G, cap)
    S.check_precondition(phi)
    A = tuple(phi.alphabet)
    C = Compiler(A)
    grouped: dict[Omega, list[SdExpr]] = {}
    for pre, loop in S.omega_summands(phi):
        dp = C.finite(pre)
        u = example_word(dp)
        v = example_word(_nonempty(C.finite(loop.star())))
        if u is None or v is None:
            continue
        if lasso_in_buchi(LassoWord(u, v), reference):
            grouped.setdefault(loop, []).append(pre)
    summands = tuple((union_all(ps), loop) for loop, ps in grouped.items())
    L0 = EMPTY
    if finite_targets is not None:
        pre = S.all_preimages(phi)
        L0 = union_all(pre[m] for m in sorted(set(finite_targets)) if m in pre)
    nf = OmegaNormalForm(A, L0, summands)
    B = nf.buchi(C)
    for w in lasso_sample(A, bound, n_random, seed):
        if lasso_in_buchi(w, B) != lasso_in_buchi(w, reference):
            raise NotRecognizable(f"normal form disagrees with the reference on lasso {w}")
    return nf


def _nonempty(D: Dfa) -> Dfa:
    from ..automata import without_empty_word

    return without_empty_word(D)

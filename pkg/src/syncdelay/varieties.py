"""Group varieties and membership of monoids in H-bar."""
from __future__ import annotations

from dataclasses import dataclass

from sympy import primefactors

from .groups import Group
from .monoid import Monoid, maximal_subgroups

KINDS = ("trivial", "abelian", "solvable", "solvable-q", "all")


@dataclass(frozen=True)
class VarietySpec:
    kind: str
    q: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown variety {self.kind!r}")
        if self.kind == "solvable-q":
            if self.q is None or self.q < 2:
                raise ValueError("solvable-q needs q >= 2")
        elif self.q is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    def __str__(self) -> str:
        return f"solvable-q={self.q}" if self.kind == "solvable-q" else self.kind


TRIVIAL = VarietySpec("trivial")
ABELIAN = VarietySpec("abelian")
SOLVABLE = VarietySpec("solvable")
ALL_GROUPS = VarietySpec("all")


def solvable_q(q: int) -> VarietySpec:
    return VarietySpec("solvable-q", q)


def parse_variety(text: str) -> VarietySpec:
    text = text.strip()
    if text.startswith("solvable-q="):
        return solvable_q(int(text.split("=", 1)[1]))
    return VarietySpec(text)


def derived_subgroup(G: Group) -> Group:
    """The subgroup generated by all commutators x y x^-1 y^-1."""
    r = G.parent.rows
    comms = {
        r[r[r[x][y]][G.inverse(x)]][G.inverse(y)] for x in G.carrier for y in G.carrier
    }
    return G.subgroup(G.generated(sorted(comms)))


def derived_series(G: Group) -> list[Group]:
    series = [G]
    while True:
        D = derived_subgroup(series[-1])
        if D.carrier == series[-1].carrier:
            return series
        series.append(D)


def is_solvable(G: Group) -> bool:
    return derived_series(G)[-1].order == 1


def group_in_variety(G: Group, V: VarietySpec) -> bool:
    if V.kind == "trivial":
        return G.order == 1
    if V.kind == "abelian":
        return G.is_abelian()
    if V.kind == "solvable":
        return is_solvable(G)
    if V.kind == "solvable-q":
        # solvable with |G| dividing a power of q
        qp = set(primefactors(V.q))
        return is_solvable(G) and set(primefactors(G.order)) <= qp
    return True


@dataclass(frozen=True)
class HbarReport:
    verdict: bool
    subgroups: tuple[tuple[int, int, bool], ...]  # (idempotent, order, in V)

    def __bool__(self) -> bool:
        return self.verdict


def monoid_in_Hbar(M: Monoid, V: VarietySpec) -> HbarReport:
    """All maximal subgroups of M lie in V (every group of M sits in one)."""
    rows = tuple((G.unit, G.order, group_in_variety(G, V)) for G in maximal_subgroups(M))
    return HbarReport(all(ok for _, _, ok in rows), rows)

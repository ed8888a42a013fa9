"""Mod-2 line bundles as edge-sign cocycles, and their Euler classes."""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    Gf2Cochain,
    QuotientMap,
    SimplicialComplex,
    coboundary,
    cup_product,
    is_coboundary,
)

__all__ = [
    "LineBundleCocycle",
    "CohomologyClass",
    "EulerClassReport",
    "hopf_cocycle",
    "w1",
    "euler_class_product",
]


@dataclass(frozen=True)
class LineBundleCocycle:
    """A line bundle presented by transition signs on the edges.

    The sign cochain must be a cocycle: around every triangle the signs
    multiply to +1 (sum to 0 mod 2).
    """

    complex: SimplicialComplex
    edge_signs: Gf2Cochain

    def __post_init__(self):
        if self.edge_signs.degree != 1:
            raise ValueError("edge signs must form a degree-1 cochain")
        if not coboundary(self.complex, self.edge_signs).is_zero():
            raise ValueError("edge signs do not form a cocycle")


@dataclass(frozen=True)
class CohomologyClass:
    """A cocycle together with its bounding status."""

    cochain: Gf2Cochain
    is_zero: bool
    primitive: Gf2Cochain | None


@dataclass(frozen=True)
class EulerClassReport:
    """Cup-product Euler class of a sum of line bundles."""

    cochain: Gf2Cochain
    degree: int
    exponents: tuple[int, ...]
    nonzero: bool
    primitive: Gf2Cochain | None


def hopf_cocycle(cover: QuotientMap) -> LineBundleCocycle:
    """Transition cocycle of the double cover, i.e. the tautological
    line bundle of the quotient.

    One lift per target vertex is fixed (the smaller preimage); an edge
    gets sign 1 exactly when the chosen endpoint lifts are not joined
    upstairs.
    """
    fibers: dict = {}
    for v in cover.source.vertices:
        fibers.setdefault(cover.vertex_map[v], []).append(v)
    lift = {}
    for w, pre in fibers.items():
        if len(pre) != 2:
            raise ValueError(f"vertex {w} is not doubly covered")
        lift[w] = min(pre)
    support = set()
    for e in cover.target.simplices(1):
        a, b = lift[e[0]], lift[e[1]]
        if not cover.source.has_simplex(tuple(sorted((a, b)))):
            support.add(e)
    return LineBundleCocycle(cover.target, Gf2Cochain(1, frozenset(support)))


def w1(bundle: LineBundleCocycle) -> CohomologyClass:
    """First obstruction class of the bundle (orientability class)."""
    flag, prim = is_coboundary(bundle.complex, bundle.edge_signs)
    return CohomologyClass(bundle.edge_signs, flag, prim)


def euler_class_product(factors: list[tuple[LineBundleCocycle, int]]) -> EulerClassReport:
    """Euler class of a direct sum of line-bundle powers, as an iterated
    cup product of the edge cocycles.

    factors lists (bundle, exponent) pairs; all bundles must live on one
    complex.  The report carries the resulting cochain, whether its class
    is nonzero, and a primitive when it bounds.
    """
    if not factors:
        raise ValueError("empty factor list")
    K = factors[0][0].complex
    for bundle, d in factors:
        if bundle.complex is not K:
            raise ValueError("factors live on mismatched complexes")
        if d < 0:
            raise ValueError("exponent must be nonnegative")
    acc = Gf2Cochain(0, frozenset((v,) for v in K.vertices))
    degree = 0
    for bundle, d in factors:
        for _ in range(d):
            acc = cup_product(K, acc, bundle.edge_signs)
            degree += 1
    if degree > K.dim:
        return EulerClassReport(acc, degree, tuple(d for _, d in factors),
                                False, None)
    flag, prim = is_coboundary(K, acc)
    return EulerClassReport(acc, degree, tuple(d for _, d in factors),
                            not flag, prim)

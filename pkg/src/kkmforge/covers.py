"""Checkers for closed cell covers: multiplicity fattening, covering
witnesses on simplices and products, and cohomological vanishing.

"Meets" always means exact rational intersection: a labelled cell union
meets the hull of a weight family iff a small feasibility LP over convex
weights has a solution.  Reports carry the probes tested and the data of
the witness or the first failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .complexes import (
    Gf2Cochain,
    SimplicialComplex,
    coboundary,
    cup_product,
    is_cocycle,
    restrict_cochain,
    solve_coboundary,
)
from .grids import GridCover, ProductGrid, SimplexGrid
from .ratlp import LinearSystem, lp_feasible, lp_optimize
from .sections import DisjointFamily


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a covering checker."""

    verdict: str  # "witness" | "counterexample" | "inconclusive"
    witness: dict | None
    params: dict

    def __post_init__(self):
        if self.verdict not in ("witness", "counterexample", "inconclusive"):
            raise ValueError("unknown verdict")


def _probe_summary(probes: Sequence[DisjointFamily]) -> list:
    return [[m.weights for m in fam.members] for fam in probes]


def _is_vertex_family(fam: DisjointFamily) -> bool:
    return all(len(m.support()) == 1 for m in fam.members)


def _cell_meets_hull(grid, cid, points: Sequence[tuple[Fraction, ...]]) -> bool:
    """Whether a closed cell intersects the convex hull of the points."""
    box = grid.bounding_box(cid)
    dim = len(points[0])
    for v in range(dim):
        lo = min(p[v] for p in points)
        hi = max(p[v] for p in points)
        if box[v][1] < lo or box[v][0] > hi:
            return False
    verts = grid.cell_vertices(cid)
    nl, nm = len(verts), len(points)
    rows = []
    for v in range(dim):
        coeffs = [w[v] for w in verts] + [-p[v] for p in points]
        rows.append((coeffs, "==", 0))
    rows.append(([1] * nl + [0] * nm, "==", 1))
    rows.append(([0] * nl + [1] * nm, "==", 1))
    system = LinearSystem.build(nl + nm, rows, nonneg=[True] * (nl + nm))
    return lp_feasible(system)[0]


class _Prober:
    """Cached probe intersection tests for one grid."""

    def __init__(self, grid):
        self.grid = grid
        self._face_cache: dict[frozenset, frozenset] = {}

    def meets(self, cells: frozenset, fam: DisjointFamily):
        """First cell of the union meeting the family hull, or None."""
        if isinstance(self.grid, SimplexGrid) and _is_vertex_family(fam):
            support = fam.union_support()
            if support not in self._face_cache:
                self._face_cache[support] = \
                    self.grid.cells_meeting_face(support)
            hits = cells & self._face_cache[support]
            return min(hits) if hits else None
        points = fam.member_points()
        for cid in sorted(cells):
            if _cell_meets_hull(self.grid, cid, points):
                return cid
        return None


def _validate_probes(size: int, codim: int,
                     probes: Sequence[DisjointFamily]) -> None:
    if not probes:
        raise ValueError("need at least one probe family")
    for fam in probes:
        if fam.size != size or fam.codim != codim:
            raise ValueError("probe family has wrong size or codimension")


def kkm_check(cover: GridCover, d: int, n: int,
              probes: Sequence[DisjointFamily]) -> CheckReport:
    """Search for a labelled set meeting the hull of every probe family.

    On a simplex with d*n+1 vertices, a closed cover of multiplicity at
    most n must contain such a set."""
    grid = cover.base
    if not isinstance(grid, SimplexGrid):
        raise ValueError("base must be a simplex grid")
    if d < 1 or n < 1 or grid.size != d * n + 1:
        raise ValueError("need a simplex on d*n+1 vertices")
    _validate_probes(grid.size, d, probes)
    if not cover.covers_base():
        raise ValueError("sets do not cover the simplex")
    mult = cover.multiplicity()
    prober = _Prober(grid)
    params = {
        "d": d, "n": n, "resolution": grid.resolution,
        "multiplicity": mult, "probes": _probe_summary(probes),
    }
    misses = {}
    for label in cover.labels:
        cells = cover.sets[label]
        meets = []
        for idx, fam in enumerate(probes):
            cid = prober.meets(cells, fam)
            if cid is None:
                misses[label] = idx
                break
            meets.append((idx, cid))
        else:
            return CheckReport("witness",
                               {"label": label, "meets": meets}, params)
    params["hypothesis_holds"] = mult <= n
    return CheckReport("counterexample", {"missed_probe": misses}, params)


def lebesgue_check(cover: GridCover, factor_params: Sequence[tuple[int, int]],
                   probes: Sequence[Sequence[DisjointFamily]]) -> CheckReport:
    """Search for a labelled set and a factor such that the set's
    projection to that factor meets every probe hull of the factor.

    On a product of simplices with d_l*n_l+1 vertices in factor l, a
    closed cover of multiplicity at most sum(n_l) must admit one."""
    grid = cover.base
    if not isinstance(grid, ProductGrid):
        raise ValueError("base must be a product grid")
    if len(factor_params) != len(grid.factors) or len(probes) != len(grid.factors):
        raise ValueError("need parameters and probes for every factor")
    for l, (dl, nl) in enumerate(factor_params):
        if dl < 1 or nl < 1 or grid.factors[l].size != dl * nl + 1:
            raise ValueError(f"factor {l} must have d*n+1 vertices")
        _validate_probes(grid.factors[l].size, dl, probes[l])
    if not cover.covers_base():
        raise ValueError("sets do not cover the product")
    n_total = sum(nl for _, nl in factor_params)
    mult = cover.multiplicity()
    probers = [_Prober(g) for g in grid.factors]
    params = {
        "factor_params": list(factor_params),
        "resolutions": [g.resolution for g in grid.factors],
        "multiplicity": mult, "bound": n_total,
        "probes": [_probe_summary(p) for p in probes],
    }
    misses = {}
    for label in cover.labels:
        for l in range(len(grid.factors)):
            shadow = frozenset(cid[l] for cid in cover.sets[label])
            meets = []
            for idx, fam in enumerate(probes[l]):
                cid = probers[l].meets(shadow, fam)
                if cid is None:
                    misses[(label, l)] = idx
                    break
                meets.append((idx, cid))
            else:
                return CheckReport(
                    "witness",
                    {"label": label, "factor": l, "meets": meets}, params)
    params["hypothesis_holds"] = mult <= n_total
    return CheckReport("counterexample",
                       {"missed_probe": {f"{lab}|{l}": idx
                                         for (lab, l), idx in misses.items()}},
                       params)


def _components(grid, cells: frozenset) -> list[frozenset]:
    adjacency = grid.adjacency()
    remaining = set(cells)
    out = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        queue = [seed]
        while queue:
            cur = queue.pop()
            for nb in adjacency[cur]:
                if nb in remaining and nb not in comp:
                    comp.add(nb)
                    queue.append(nb)
        remaining -= comp
        out.append(frozenset(comp))
    return sorted(out, key=sorted)


def strengthened_kkm_check(cover: GridCover, d: int, n: int, r: int,
                           probes_sets: Sequence[DisjointFamily],
                           probes_complement: Sequence[DisjointFamily]
                           ) -> CheckReport:
    """Either some labelled set meets every codimension-d probe hull, or
    some facet-connected component of the uncovered region meets every
    codimension-r probe hull.

    The labelled sets need not cover; the simplex has d*n+r+1 vertices
    and the sets have multiplicity at most n over their union."""
    grid = cover.base
    if not isinstance(grid, SimplexGrid):
        raise ValueError("base must be a simplex grid")
    if d < 1 or n < 1 or r < 0 or grid.size != d * n + r + 1:
        raise ValueError("need a simplex on d*n+r+1 vertices")
    _validate_probes(grid.size, d, probes_sets)
    if r > 0:
        _validate_probes(grid.size, r, probes_complement)
    mult = cover.multiplicity()
    prober = _Prober(grid)
    params = {
        "d": d, "n": n, "r": r, "resolution": grid.resolution,
        "multiplicity": mult,
        "probes_sets": _probe_summary(probes_sets),
        "probes_complement": _probe_summary(probes_complement)
        if r > 0 else [],
    }
    misses = {}
    for label in cover.labels:
        cells = cover.sets[label]
        meets = []
        for idx, fam in enumerate(probes_sets):
            cid = prober.meets(cells, fam)
            if cid is None:
                misses[label] = idx
                break
            meets.append((idx, cid))
        else:
            return CheckReport(
                "witness",
                {"branch": "set", "label": label, "meets": meets}, params)
    if r > 0:
        for comp_id, comp in enumerate(_components(grid,
                                                   cover.uncovered_cells())):
            meets = []
            for idx, fam in enumerate(probes_complement):
                cid = prober.meets(comp, fam)
                if cid is None:
                    misses[f"component {comp_id}"] = idx
                    break
                meets.append((idx, cid))
            else:
                return CheckReport(
                    "witness",
                    {"branch": "complement", "component": comp_id,
                     "cells": sorted(comp), "meets": meets}, params)
    params["hypothesis_holds"] = mult <= n
    return CheckReport("counterexample", {"missed_probe": misses}, params)


class FattenedCover:
    """Open fattening of a closed cell cover with a certified multiplicity
    bound.

    Each open set is a strict sublevel set {chi < eps} of the piecewise
    linear function chi interpolating the 0/1 indicator of "vertex not in
    the closed set".  It contains the closed set, and eps is chosen below
    half the exact minimum, over all (n+1)-subsets of labels, of
    min over the base of the largest chi in the subset, so no point lies
    in more than n of the fattened sets."""

    def __init__(self, base, labels, tables, epsilon, certificates):
        self.base = base
        self.labels = tuple(labels)
        self.tables = tables
        self.epsilon = epsilon
        self.certificates = certificates

    def chi(self, label, x) -> Fraction:
        table = self.tables[label]
        if hasattr(self.base, "piecewise_linear"):
            return self.base.piecewise_linear(table, x)
        carriers = [cid for cid in self.base.cell_ids
                    if self.base.contains(cid, x)]
        if not carriers:
            raise ValueError("point outside the base")
        cid = carriers[0]
        verts = self.base.cell_vertices(cid)
        weights = _barycentric(verts, x)
        return sum(w * table[v] for v, w in zip(verts, weights))

    def contains(self, label, x) -> bool:
        return self.chi(label, x) < self.epsilon

    def membership_count(self, x) -> int:
        return sum(1 for label in self.labels if self.contains(label, x))


def _barycentric(verts, x) -> list[Fraction]:
    """Exact convex weights of x in an affinely independent vertex list."""
    dim = len(x)
    rows = [([w[v] for w in verts], "==", Fraction(x[v]))
            for v in range(dim)]
    rows.append(([1] * len(verts), "==", 1))
    system = LinearSystem.build(len(verts), rows,
                                nonneg=[True] * len(verts))
    ok, point = lp_feasible(system)
    if not ok:
        raise ValueError("point not in cell")
    return list(point)


def fatten_cover(cover: GridCover, n: int) -> FattenedCover:
    """Fatten a closed cover of multiplicity at most n into open sets with
    the same multiplicity bound, each containing its closed set."""
    mult = cover.multiplicity()
    if mult > n:
        raise ValueError(f"closed multiplicity {mult} exceeds bound {n}")
    grid = cover.base
    if isinstance(grid, ProductGrid):
        raise ValueError("fattening needs simplicial cells")
    circle = hasattr(grid, "piecewise_linear")
    if circle:
        vertex_sets = {}
        for label in cover.labels:
            members = set()
            for cid in cover.sets[label]:
                members.add(cid)
                members.add((cid + 1) % grid.resolution)
            vertex_sets[label] = members
        tables = {label: [Fraction(int(j not in vertex_sets[label]))
                          for j in range(grid.resolution)]
                  for label in cover.labels}

        def cell_values(label, cid):
            t = tables[label]
            return (t[cid], t[(cid + 1) % grid.resolution])
    else:
        vertex_sets = {}
        for label in cover.labels:
            members = set()
            for cid in cover.sets[label]:
                members.update(grid.cell_vertices(cid))
            vertex_sets[label] = members
        tables = {label: {w: Fraction(int(w not in vertex_sets[label]))
                          for w in grid.grid_vertices()}
                  for label in cover.labels}

        def cell_values(label, cid):
            return tuple(tables[label][w] for w in grid.cell_vertices(cid))

    certificates = []
    epsilon = Fraction(1)
    for subset in combinations(cover.labels, n + 1):
        best = None
        for cid in grid.cell_ids:
            value_rows = [cell_values(label, cid) for label in subset]
            width = len(value_rows[0])
            rows = [([1] * width + [0], "==", 1)]
            for vals in value_rows:
                rows.append((list(vals) + [-1], "<=", 0))
            system = LinearSystem.build(width + 1, rows,
                                        nonneg=[True] * width + [False])
            status, _, value = lp_optimize(
                system, [0] * width + [1], "min")
            assert status == "optimal"
            if best is None or value < best:
                best = value
        # best > 0: a point where every chi in the subset vanishes would
        # put all its carrier vertices in n+1 closed sets at once,
        # contradicting the multiplicity precheck
        assert best > 0
        certificates.append((subset, best))
        epsilon = min(epsilon, Fraction(best, 2))
    return FattenedCover(grid, cover.labels, tables, epsilon, certificates)


@dataclass(frozen=True)
class CupVanishingReport:
    """Certificate-backed outcome of the cover-forced vanishing check."""

    vanishes: bool
    primitive: Gf2Cochain | None
    failing: tuple | None          # (label index, class index)
    obstruction: frozenset | None  # non-solvability certificate
    product: Gf2Cochain


def cup_vanishing_check(K: SimplicialComplex,
                        subcomplexes: Sequence[SimplicialComplex],
                        classes: Sequence[Gf2Cochain]) -> CupVanishingReport:
    """Check the cover-forced vanishing of an n-fold cup product.

    If every class restricts to a coboundary on every subcomplex of a
    covering family with multiplicity at most n = len(classes), the full
    product cobounds; the report carries a primitive.  Otherwise it names
    the first (subcomplex, class) pair whose restriction is obstructed,
    with the exact certificate."""
    n = len(classes)
    if n < 1:
        raise ValueError("need at least one class")
    for c in classes:
        if not is_cocycle(K, c):
            raise ValueError("classes must be cocycles")
    covered = set()
    for A in subcomplexes:
        for k in range(A.dim + 1):
            covered.update(A.simplices(k))
    all_simplices = {s for k in range(K.dim + 1)
                     for s in K.simplices(k)}
    if covered != all_simplices:
        raise ValueError("subcomplexes do not cover the complex")
    mult = 0
    for s in all_simplices:
        mult = max(mult, sum(1 for A in subcomplexes if A.has_simplex(s)))
    if mult > n:
        raise ValueError(f"cover multiplicity {mult} exceeds {n}")
    product = classes[0]
    for c in classes[1:]:
        product = cup_product(K, product, c)
    for i, A in enumerate(subcomplexes):
        for k, c in enumerate(classes):
            local = restrict_cochain(K, A, c)
            _, obstruction = solve_coboundary(A, local)
            if obstruction is not None:
                return CupVanishingReport(False, None, (i, k),
                                          obstruction, product)
    primitive, obstruction = solve_coboundary(K, product)
    assert obstruction is None, "vanishing hypothesis verified but failed"
    if primitive.degree >= 0:
        assert coboundary(K, primitive) == product
    else:
        assert product.is_zero()
    return CupVanishingReport(True, primitive, None, None, product)

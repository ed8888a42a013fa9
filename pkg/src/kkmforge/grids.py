"""Exact cell subdivisions of simplices, their products, and the circle.

All vertex coordinates are rational.  An edgewise subdivision at resolution
N keeps every coordinate of every cell inside a single slab [c/N, (c+1)/N],
so any set of the form {w : w(v) >= c/N} is a union of closed cells.
Covers are stored as labelled unions of closed cells.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product as iproduct
from typing import Mapping, Sequence

from .ratlp import in_hull


class SimplexGrid:
    """Edgewise subdivision of the standard simplex on ``size`` vertices
    into ``resolution**(size-1)`` simplicial cells.

    Internally a weight vector ``w`` is encoded by the scaled cumulative
    chart ``z_j = resolution * (w_{j+1} + ... + w_{size-1})``, which turns
    the simplex into the region ``resolution >= z_0 >= ... >= z_{m-1} >= 0``.
    Cells are the standard simplices of the unit-cube tilings of that
    region, one per (weakly decreasing integer base, compatible order).
    """

    def __init__(self, size: int, resolution: int):
        if size < 1:
            raise ValueError("simplex needs at least one vertex")
        if resolution < 1:
            raise ValueError("resolution must be positive")
        self.size = size
        self.resolution = resolution
        self._cells: list[tuple[tuple[Fraction, ...], ...]] = []
        m = size - 1
        if m == 0:
            self._cells.append(((Fraction(1),),))
        else:
            for base in self._bases(m, resolution):
                for order in self._orders(base):
                    z = list(base)
                    verts = [self._weights(z)]
                    for j in order:
                        z[j] += 1
                        verts.append(self._weights(z))
                    self._cells.append(tuple(verts))
        self._adjacency: dict[int, tuple[int, ...]] | None = None
        self._vertex_cells: dict[tuple[Fraction, ...], list[int]] | None = None

    @staticmethod
    def _bases(m: int, n: int):
        for cand in iproduct(range(n), repeat=m):
            if all(cand[j] >= cand[j + 1] for j in range(m - 1)):
                yield cand

    @staticmethod
    def _orders(base):
        m = len(base)
        ties = [j for j in range(m - 1) if base[j] == base[j + 1]]
        for perm in permutations(range(m)):
            pos = {j: r for r, j in enumerate(perm)}
            if all(pos[j] < pos[j + 1] for j in ties):
                yield perm

    def _weights(self, z: Sequence[int]) -> tuple[Fraction, ...]:
        n = self.resolution
        chain = [n, *z, 0]
        return tuple(Fraction(chain[v] - chain[v + 1], n)
                     for v in range(self.size))

    def __len__(self) -> int:
        return len(self._cells)

    @property
    def cell_ids(self) -> range:
        return range(len(self._cells))

    def cell_vertices(self, cid: int) -> tuple[tuple[Fraction, ...], ...]:
        return self._cells[cid]

    def _vertex_map(self) -> dict[tuple[Fraction, ...], list[int]]:
        if self._vertex_cells is None:
            table: dict[tuple[Fraction, ...], list[int]] = {}
            for cid, verts in enumerate(self._cells):
                for w in verts:
                    table.setdefault(w, []).append(cid)
            self._vertex_cells = table
        return self._vertex_cells

    def grid_vertices(self) -> list[tuple[Fraction, ...]]:
        return sorted(self._vertex_map())

    def vertex_star(self, vertex: tuple[Fraction, ...]) -> frozenset[int]:
        """Closed cells containing the given grid vertex."""
        table = self._vertex_map()
        if vertex not in table:
            raise ValueError("not a grid vertex")
        return frozenset(table[vertex])

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Cells sharing a facet (all but one vertex)."""
        if self._adjacency is None:
            facets: dict[frozenset, list[int]] = {}
            for cid, verts in enumerate(self._cells):
                for skip in range(len(verts)):
                    key = frozenset(verts[:skip] + verts[skip + 1:])
                    facets.setdefault(key, []).append(cid)
            nbrs: dict[int, set[int]] = {cid: set() for cid in self.cell_ids}
            for group in facets.values():
                for a in group:
                    for b in group:
                        if a != b:
                            nbrs[a].add(b)
            self._adjacency = {cid: tuple(sorted(s))
                               for cid, s in nbrs.items()}
        return self._adjacency

    def cells_meeting_face(self, support: frozenset[int]) -> frozenset[int]:
        """Closed cells intersecting the face {w : w(v) = 0 for v not in
        ``support``}.  The total weight outside ``support`` is linear, so a
        cell meets the face exactly when one of its vertices lies on it."""
        out = set()
        for cid, verts in enumerate(self._cells):
            if any(all(v in support or w[v] == 0 for v in range(self.size))
                   for w in verts):
                out.add(cid)
        return frozenset(out)

    def contains(self, cid: int, point: Sequence[Fraction]) -> bool:
        """Exact membership of a weight vector in a closed cell."""
        if len(point) != self.size:
            raise ValueError("dimension mismatch")
        return in_hull(tuple(point), list(self._cells[cid]))[0]

    def bounding_box(self, cid: int) -> tuple[tuple[Fraction, Fraction], ...]:
        verts = self._cells[cid]
        return tuple((min(w[v] for w in verts), max(w[v] for w in verts))
                     for v in range(self.size))


class ProductGrid:
    """Product of simplex grids.  A cell is a tuple of factor cells; its
    vertices are concatenations of factor cell vertices."""

    def __init__(self, factors: Sequence[SimplexGrid]):
        if not factors:
            raise ValueError("need at least one factor")
        self.factors = tuple(factors)
        self.offsets = []
        pos = 0
        for g in self.factors:
            self.offsets.append(pos)
            pos += g.size
        self.size = pos
        self._ids = [tuple(c) for c in
                     iproduct(*(g.cell_ids for g in self.factors))]
        self._index = {cid: k for k, cid in enumerate(self._ids)}

    def __len__(self) -> int:
        return len(self._ids)

    @property
    def cell_ids(self) -> list[tuple[int, ...]]:
        return list(self._ids)

    def project(self, cid: tuple[int, ...], factor: int) -> int:
        return cid[factor]

    def cell_vertices(self, cid) -> tuple[tuple[Fraction, ...], ...]:
        parts = [self.factors[l].cell_vertices(c) for l, c in enumerate(cid)]
        return tuple(sum(combo, ())
                     for combo in iproduct(*parts))

    def adjacency(self) -> dict[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        factor_adj = [g.adjacency() for g in self.factors]
        out = {}
        for cid in self._ids:
            nbrs = []
            for l in range(len(self.factors)):
                for c in factor_adj[l][cid[l]]:
                    nbrs.append(cid[:l] + (c,) + cid[l + 1:])
            out[cid] = tuple(sorted(nbrs))
        return out

    def contains(self, cid, point: Sequence[Fraction]) -> bool:
        if len(point) != self.size:
            raise ValueError("dimension mismatch")
        for l, g in enumerate(self.factors):
            block = tuple(point[self.offsets[l]:self.offsets[l] + g.size])
            if not g.contains(cid[l], block):
                return False
        return True

    def bounding_box(self, cid):
        out = []
        for l, g in enumerate(self.factors):
            out.extend(g.bounding_box(cid[l]))
        return tuple(out)


class CircleGrid:
    """Cyclic subdivision of the unit-perimeter circle into N arcs.
    Points are fractions taken modulo 1; cell j covers [j/N, (j+1)/N]."""

    def __init__(self, resolution: int):
        if resolution < 3:
            raise ValueError("need at least three arcs")
        self.resolution = resolution

    def __len__(self) -> int:
        return self.resolution

    @property
    def cell_ids(self) -> range:
        return range(self.resolution)

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        n = self.resolution
        return {j: tuple(sorted(((j - 1) % n, (j + 1) % n)))
                for j in range(n)}

    def cell_vertices(self, cid: int) -> tuple[int, int]:
        """Endpoints of an arc cell, as vertex indices (vertex j sits at
        j/N)."""
        return (cid, (cid + 1) % self.resolution)

    def cells_containing(self, u: Fraction) -> tuple[int, ...]:
        n = self.resolution
        u = Fraction(u) % 1
        scaled = u * n
        j = scaled.numerator // scaled.denominator
        if scaled == j:
            return tuple(sorted({(j - 1) % n, j % n}))
        return (j % n,)

    def contains(self, cid: int, u: Fraction) -> bool:
        return cid in self.cells_containing(u)

    def piecewise_linear(self, values: Sequence[Fraction], u: Fraction
                         ) -> Fraction:
        """Evaluate the PL function with the given vertex values (vertex j
        at j/N) at the point u, exactly."""
        n = self.resolution
        if len(values) != n:
            raise ValueError("need one value per grid vertex")
        u = Fraction(u) % 1
        scaled = u * n
        j = scaled.numerator // scaled.denominator
        lam = scaled - j
        a = Fraction(values[j % n])
        b = Fraction(values[(j + 1) % n])
        return a + lam * (b - a)


class GridCover:
    """Labelled closed cover (or partial cover) by unions of closed cells."""

    def __init__(self, base, sets: Mapping[object, Sequence]):
        if not sets:
            raise ValueError("cover needs at least one set")
        valid = set(base.cell_ids)
        self.base = base
        self.sets = {}
        for label in sorted(sets, key=repr):
            cells = frozenset(sets[label])
            if not cells <= valid:
                raise ValueError(f"unknown cell in set {label!r}")
            self.sets[label] = cells
        self.labels = tuple(self.sets)

    def label_counts(self) -> dict[object, int]:
        """Number of labelled sets containing each cell."""
        counts: dict[object, int] = {}
        for cells in self.sets.values():
            for c in cells:
                counts[c] = counts.get(c, 0) + 1
        return counts

    def multiplicity(self) -> int:
        """Largest number of labelled closed sets meeting at one point.

        For closed cell unions the maximum is attained at a subdivision
        vertex, so it is evaluated exactly by counting labels per vertex."""
        counts: dict[object, int] = {}
        for cells in self.sets.values():
            seen = set()
            for c in cells:
                seen.update(self.base.cell_vertices(c))
            for w in seen:
                counts[w] = counts.get(w, 0) + 1
        return max(counts.values()) if counts else 0

    def covers_base(self) -> bool:
        covered = set()
        for cells in self.sets.values():
            covered |= cells
        return covered == set(self.base.cell_ids)

    def uncovered_cells(self) -> frozenset:
        covered = set()
        for cells in self.sets.values():
            covered |= cells
        return frozenset(set(self.base.cell_ids) - covered)

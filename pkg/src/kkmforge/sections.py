"""Weight vectors, square lifts to the sphere, family sections, and gluing.

The simplex side (weights, supports, hull data, argmax refinement) is exact
rational arithmetic.  Sphere-side section values are floats, but every
zero/nonzero decision is routed through an exact predicate: a point is
declared a zero of a family section only when its squared coordinates match
the family weights exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from random import Random
from typing import Callable, Mapping, Sequence


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("exact rational expected, got float")
    return Fraction(x)


@dataclass(frozen=True)
class WeightVector:
    """Exact point of the standard simplex: nonnegative rational weights
    summing to one."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(_as_fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if not ws:
            raise ValueError("empty weight vector")
        if any(w < 0 for w in ws):
            raise ValueError("negative weight")
        if sum(ws) != 1:
            raise ValueError("weights must sum to one")

    @property
    def size(self) -> int:
        return len(self.weights)

    def support(self) -> frozenset[int]:
        return frozenset(v for v, w in enumerate(self.weights) if w)

    @staticmethod
    def indicator(size: int, vertex: int) -> "WeightVector":
        if not 0 <= vertex < size:
            raise ValueError("vertex out of range")
        return WeightVector(tuple(Fraction(int(v == vertex))
                                  for v in range(size)))

    @staticmethod
    def uniform(size: int, support: Sequence[int]) -> "WeightVector":
        supp = sorted(set(support))
        if not supp or supp[0] < 0 or supp[-1] >= size:
            raise ValueError("bad support")
        share = Fraction(1, len(supp))
        return WeightVector(tuple(share if v in set(supp) else Fraction(0)
                                  for v in range(size)))


@dataclass(frozen=True)
class ProjectivePoint:
    """A line through the origin, stored by its canonical representative:
    integer coordinates, not all zero, gcd one, first nonzero positive."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not self.coords or not any(self.coords):
            raise ValueError("zero vector has no projective class")
        if any(not isinstance(c, int) for c in self.coords):
            raise ValueError("canonical coordinates must be integers")
        g = 0
        for c in self.coords:
            g = gcd(g, abs(c))
        first = next(c for c in self.coords if c)
        if g != 1 or first < 0:
            raise ValueError("coordinates not in canonical form; use build()")

    @staticmethod
    def build(coords: Sequence) -> "ProjectivePoint":
        fracs = [_as_fraction(c) for c in coords]
        if not any(fracs):
            raise ValueError("zero vector has no projective class")
        scale = 1
        for f in fracs:
            scale = scale * f.denominator // gcd(scale, f.denominator)
        ints = [int(f * scale) for f in fracs]
        g = 0
        for c in ints:
            g = gcd(g, abs(c))
        ints = [c // g for c in ints]
        if next(c for c in ints if c) < 0:
            ints = [-c for c in ints]
        return ProjectivePoint(tuple(ints))

    @property
    def size(self) -> int:
        return len(self.coords)

    def squares(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c * c) for c in self.coords)

    def signs(self) -> tuple[int, ...]:
        return tuple((c > 0) - (c < 0) for c in self.coords)

    def float_coords(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coords)


@dataclass(frozen=True)
class SignedSquarePoint:
    """Exact unit-sphere point stored by coordinate signs and squares, so
    that square-root coordinates never need to be rounded."""

    signs: tuple[int, ...]
    sq: tuple[Fraction, ...]

    def __post_init__(self):
        sq = tuple(_as_fraction(s) for s in self.sq)
        object.__setattr__(self, "sq", sq)
        if len(self.signs) != len(sq):
            raise ValueError("length mismatch")
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise ValueError("signs must be -1, 0, or 1")
        if any((s == 0) != (q == 0) for s, q in zip(self.signs, sq)):
            raise ValueError("sign must be zero exactly on zero squares")
        if any(q < 0 for q in sq):
            raise ValueError("negative square")
        if sum(sq) != 1:
            raise ValueError("squares must sum to one")

    @property
    def size(self) -> int:
        return len(self.sq)

    def squares(self) -> tuple[Fraction, ...]:
        return self.sq

    def negate(self) -> "SignedSquarePoint":
        return SignedSquarePoint(tuple(-s for s in self.signs), self.sq)

    def float_coords(self) -> tuple[float, ...]:
        return tuple(s * math.sqrt(q) for s, q in zip(self.signs, self.sq))


@dataclass(frozen=True)
class DisjointFamily:
    """Weight vectors with pairwise disjoint supports on a common simplex.
    The family spans a sub-simplex of codimension size - len(members)."""

    size: int
    members: tuple[WeightVector, ...]

    def __post_init__(self):
        members = tuple(sorted(self.members,
                               key=lambda m: min(m.support())))
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("family needs at least one member")
        if any(m.size != self.size for m in members):
            raise ValueError("member size mismatch")
        seen: set[int] = set()
        for m in members:
            supp = m.support()
            if supp & seen:
                raise ValueError("supports are not disjoint")
            seen |= supp

    @property
    def codim(self) -> int:
        return self.size - len(self.members)

    def union_support(self) -> frozenset[int]:
        out: set[int] = set()
        for m in self.members:
            out |= m.support()
        return frozenset(out)

    def member_points(self) -> list[tuple[Fraction, ...]]:
        return [m.weights for m in self.members]

    @staticmethod
    def from_vertices(size: int, vertices: Sequence[int]) -> "DisjointFamily":
        return DisjointFamily(size, tuple(WeightVector.indicator(size, v)
                                          for v in sorted(set(vertices))))


def line_to_weights(p) -> WeightVector:
    """Send a line to the simplex point of its normalized squared
    coordinates.  Representative-independent."""
    sq = p.squares()
    total = sum(sq)
    return WeightVector(tuple(q / total for q in sq))


def weights_to_sphere(t: WeightVector) -> SignedSquarePoint:
    """Nonnegative square-root lift of a simplex point to the unit sphere.
    Following with line_to_weights returns the input exactly."""
    return SignedSquarePoint(tuple(int(w > 0) for w in t.weights), t.weights)


def _complement_basis(family: DisjointFamily) -> list[tuple[float, ...]]:
    """Orthonormal float basis of the orthogonal complement of the span of
    the family's square-root lifts.  Deterministic for a given family."""
    n = family.size
    basis: list = []
    used: set[int] = set()
    for m in family.members:
        supp = sorted(m.support())
        used |= set(supp)
        lift = [0.0] * n
        for v in supp:
            lift[v] = math.sqrt(float(m.weights[v]))
        block: list[list[float]] = []
        for v in supp[1:]:
            unit = [0.0] * n
            unit[v] = 1.0
            dot = lift[v]
            vec = [u - dot * l for u, l in zip(unit, lift)]
            for b in block:
                d = sum(x * y for x, y in zip(vec, b))
                vec = [x - d * y for x, y in zip(vec, b)]
            norm = math.sqrt(sum(x * x for x in vec))
            vec = [x / norm for x in vec]
            block.append(vec)
        basis.extend(block)
    for v in range(n):
        if v not in used:
            unit = [0.0] * n
            unit[v] = 1.0
            basis.append(unit)
    assert len(basis) == family.codim
    return [tuple(b) for b in basis]


def section_value(family: DisjointFamily, coords: Sequence[float]
                  ) -> tuple[float, ...]:
    """Components of a representative in a fixed orthonormal basis of the
    complement of the family span.  Linear, hence odd, in the
    representative."""
    if len(coords) != family.size:
        raise ValueError("dimension mismatch")
    basis = _complement_basis(family)
    return tuple(sum(b[v] * coords[v] for v in range(family.size))
                 for b in basis)


def family_section(family: DisjointFamily, point) -> tuple[tuple[float, ...], bool]:
    """Evaluate the family section at a projective or signed-square point.

    Returns (value, is_zero).  is_zero is exact: the point lies in the span
    of the square-root lifts iff its squares vanish off the union support
    and, on each member support, are proportional to the member weights
    with a consistent sign pattern.
    """
    if point.size != family.size:
        raise ValueError("dimension mismatch")
    sq = point.squares()
    signs = point.signs() if isinstance(point, ProjectivePoint) else point.signs
    union = family.union_support()
    is_zero = all(sq[v] == 0 for v in range(family.size) if v not in union)
    if is_zero:
        for m in family.members:
            supp = sorted(m.support())
            if all(sq[v] == 0 for v in supp):
                continue
            if any(sq[v] == 0 for v in supp):
                is_zero = False
                break
            block_signs = {signs[v] for v in supp}
            if len(block_signs) != 1:
                is_zero = False
                break
            v0 = supp[0]
            if any(sq[v] * m.weights[v0] != sq[v0] * m.weights[v]
                   for v in supp):
                is_zero = False
                break
    value = section_value(family, point.float_coords())
    return value, is_zero


def sample_disjoint_families(size: int, codim: int, count: int, seed: int
                             ) -> list[DisjointFamily]:
    """All vertex families of the given codimension plus ``count`` seeded
    random families with rational interior weights."""
    if not 0 <= codim <= size - 1:
        raise ValueError("codimension out of range")
    if count < 1:
        raise ValueError("count must be positive")
    k = size - codim
    out = [DisjointFamily.from_vertices(size, vs)
           for vs in combinations(range(size), k)]
    rng = Random(seed)
    for _ in range(count):
        span = rng.randint(k, size)
        support = rng.sample(range(size), span)
        rng.shuffle(support)
        cuts = sorted(rng.sample(range(1, span), k - 1)) if k > 1 else []
        blocks = []
        prev = 0
        for c in [*cuts, span]:
            blocks.append(support[prev:c])
            prev = c
        members = []
        for block in blocks:
            raw = {v: rng.randint(1, 9) for v in block}
            total = sum(raw.values())
            members.append(WeightVector(tuple(
                Fraction(raw.get(v, 0), total) for v in range(size))))
        out.append(DisjointFamily(size, tuple(members)))
    return out


@dataclass(frozen=True)
class ArgmaxRefinement:
    """Exact argmax set of a probability vector together with membership
    predicates for the refinement pieces."""

    values: tuple[Fraction, ...]
    argmax: frozenset[int]

    def contains(self, subset) -> bool:
        """Whether the evaluated point belongs to the piece of ``subset``:
        every index inside has positive value strictly larger than every
        value outside."""
        inside = frozenset(subset)
        if not inside or not inside <= frozenset(range(len(self.values))):
            raise ValueError("bad index subset")
        low = min(self.values[j] for j in inside)
        if low <= 0:
            return False
        outside = [self.values[i] for i in range(len(self.values))
                   if i not in inside]
        return all(v < low for v in outside)

    @property
    def positive_count(self) -> int:
        return sum(1 for v in self.values if v > 0)


def refine_by_argmax(phis: Sequence[Fraction], bound: int | None = None
                     ) -> ArgmaxRefinement:
    """Exact argmax refinement of a probability vector.  When at most
    ``bound`` entries are positive the argmax set has size at most
    ``bound``; a larger positive count is rejected."""
    values = tuple(_as_fraction(p) for p in phis)
    if not values or any(v < 0 for v in values) or sum(values) != 1:
        raise ValueError("not a probability vector")
    top = max(values)
    argmax = frozenset(i for i, v in enumerate(values) if v == top)
    result = ArgmaxRefinement(values, argmax)
    if bound is not None and result.positive_count > bound:
        raise ValueError("more positive entries than the stated bound")
    return result


@dataclass(frozen=True)
class PartitionOfUnity:
    """Labelled evaluator returning exact nonnegative rationals summing to
    one at every query point."""

    labels: tuple
    evaluator: Callable

    def values(self, x) -> tuple[Fraction, ...]:
        vals = tuple(_as_fraction(v) for v in self.evaluator(x))
        if len(vals) != len(self.labels):
            raise ValueError("wrong number of values")
        if any(v < 0 for v in vals) or sum(vals) != 1:
            raise ValueError("not a partition of unity at this point")
        return vals


class GluingError(ValueError):
    """A gluing hypothesis failed at a query point."""


def _threshold_pieces(values: Sequence[Fraction]
                      ) -> list[tuple[frozenset[int], Fraction]]:
    """Nonzero bump weights h_J = max(0, min_J - max_outside) over index
    subsets.  Only threshold prefixes of the sorted value list can be
    positive, and their sizes are pairwise distinct."""
    positive = sorted({v for v in values if v > 0}, reverse=True)
    out = []
    for r, v in enumerate(positive):
        nxt = positive[r + 1] if r + 1 < len(positive) else Fraction(0)
        piece = frozenset(i for i, w in enumerate(values) if w >= v)
        out.append((piece, v - nxt))
    return out


def glue_sections(cover, local: Mapping, pou: PartitionOfUnity, x,
                  n: int, dims: Sequence[int], tol: float = 1e-9
                  ) -> tuple[tuple[float, ...], ...]:
    """Combine local nowhere-zero sections into n glued components.

    ``local`` maps (label, k) to an evaluator for the k-th bundle on that
    labelled set; ``dims[k-1]`` is the fiber dimension of the k-th bundle.
    At every point at least one returned component is nonzero: bump
    weights are supported on pieces where the corresponding local section
    is nonvanishing, and pieces of equal size never overlap.
    """
    if n < 1 or len(dims) != n:
        raise ValueError("need one fiber dimension per component")
    mult = cover.multiplicity()
    if mult > n:
        raise ValueError(f"cover multiplicity {mult} exceeds bound {n}")
    if tuple(pou.labels) != tuple(cover.labels):
        raise ValueError("partition labels must match cover labels")
    phis = pou.values(x)
    for i, phi in enumerate(phis):
        if phi > 0:
            label = cover.labels[i]
            if not any(cover.base.contains(c, x) for c in cover.sets[label]):
                raise GluingError(
                    f"weight of {label!r} is positive outside its set")
    pieces = _threshold_pieces(phis)
    total = sum(h for _, h in pieces)
    components = [tuple(0.0 for _ in range(dims[k])) for k in range(n)]
    for piece, h in pieces:
        k = len(piece)
        if k > n:
            raise GluingError("more than n sets active at one point")
        label = cover.labels[min(piece)]
        if (label, k) not in local:
            raise GluingError(f"no local section for {(label, k)!r}")
        value = tuple(float(c) for c in local[(label, k)](x))
        if len(value) != dims[k - 1]:
            raise GluingError("local section has wrong fiber dimension")
        if max(abs(c) for c in value) <= tol:
            raise GluingError(
                f"local section {(label, k)!r} vanished at a point where "
                "its bump weight is positive")
        psi = float(Fraction(h, total))
        components[k - 1] = tuple(
            s + psi * c for s, c in zip(components[k - 1], value))
    return tuple(components)


@dataclass(frozen=True)
class CircleDemo:
    """Two-arc gluing demo on the circle: two line-bundle sections glued
    over a two-arc cover, jointly nonvanishing."""

    grid: object
    cover: object
    pou: PartitionOfUnity
    local: Mapping
    n: int
    dims: tuple[int, ...]

    def components(self, u) -> tuple[tuple[float, ...], ...]:
        return glue_sections(self.cover, self.local, self.pou,
                             Fraction(u) % 1, self.n, self.dims)

    def max_norm(self, u) -> float:
        comps = self.components(u)
        return max(max(abs(c) for c in comp) for comp in comps)

    def refinement(self, u) -> ArgmaxRefinement:
        return refine_by_argmax(self.pou.values(Fraction(u) % 1), self.n)


def two_arc_circle_demo(resolution: int = 20) -> CircleDemo:
    """Glue two local sections of the twisted line bundle over the circle
    of lines, covered by the arcs (9/10, 3/5) and (2/5, 11/10) in the
    half-turn coordinate.

    Each local section is u -> cos(pi*u - c) with c at the arc midpoint;
    it is odd under a half turn and vanishes only at the antipode of the
    midpoint, outside the closed arc.
    """
    from .grids import CircleGrid, GridCover

    if resolution % 10 or resolution < 20:
        raise ValueError("resolution must be a multiple of 10, at least 20")
    nres = resolution
    grid = CircleGrid(nres)

    def arc_cells(start: int, stop: int) -> frozenset[int]:
        out = set()
        j = start
        while j % nres != stop % nres:
            out.add(j % nres)
            j += 1
        return frozenset(out)

    cells_a = arc_cells(9 * nres // 10, 6 * nres // 10)
    cells_b = arc_cells(4 * nres // 10, 11 * nres // 10)
    cover = GridCover(grid, {"a": cells_a, "b": cells_b})

    def interior_values(cells: frozenset[int]) -> list[Fraction]:
        vals = []
        for j in range(nres):
            incident = {(j - 1) % nres, j}
            vals.append(Fraction(int(incident <= cells)))
        return vals

    vals = {"a": interior_values(cells_a), "b": interior_values(cells_b)}

    def evaluator(u):
        raw = [grid.piecewise_linear(vals[label], u) for label in ("a", "b")]
        total = sum(raw)
        return tuple(r / total for r in raw)

    pou = PartitionOfUnity(("a", "b"), evaluator)
    centers = {"a": 0.25, "b": 0.75}
    local = {}
    for label, c in centers.items():
        for k in (1, 2):
            local[(label, k)] = (
                lambda u, c=c: (math.cos(math.pi * float(u) - math.pi * c),))
    return CircleDemo(grid, cover, pou, local, 2, (1, 1))

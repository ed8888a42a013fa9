"""Finite simplicial complexes with mod-2 cochain operations.

Simplices are sorted tuples of comparable vertex ids.  Cochains are stored
by their support set; all linear algebra runs over GF(2) on bit-packed
vectors (see gf2.py).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .gf2 import gf2_nullspace, gf2_rref, gf2_solve, parity

__all__ = [
    "SimplicialComplex",
    "Gf2Cochain",
    "QuotientMap",
    "ProductComplex",
    "build_complex",
    "coboundary",
    "cohomology_basis",
    "cup_product",
    "is_coboundary",
    "solve_coboundary",
    "restrict_cochain",
    "pullback_cochain",
    "product_complex",
    "projective_space",
    "complex_to_dict",
    "complex_from_dict",
    "cochain_to_dict",
    "cochain_from_dict",
]


class SimplicialComplex:
    """A finite abstract simplicial complex, closed under taking faces."""

    def __init__(self, simplices_by_dim: dict[int, list[tuple]]):
        self._by_dim = {k: sorted(v) for k, v in simplices_by_dim.items() if v}
        self.dim = max(self._by_dim) if self._by_dim else -1
        self.vertices = tuple(s[0] for s in self._by_dim.get(0, []))
        self._index: dict[int, dict[tuple, int]] = {}
        self._sets = {k: set(v) for k, v in self._by_dim.items()}

    def simplices(self, k: int) -> list[tuple]:
        """Sorted list of k-simplices."""
        return self._by_dim.get(k, [])

    def index(self, k: int) -> dict[tuple, int]:
        if k not in self._index:
            self._index[k] = {s: i for i, s in enumerate(self.simplices(k))}
        return self._index[k]

    def has_simplex(self, s: tuple) -> bool:
        return s in self._sets.get(len(s) - 1, ())

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.simplices(k)) for k in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(v) for k, v in self._by_dim.items())

    def facets(self) -> list[tuple]:
        """Maximal simplices."""
        return _maximal(self)

    def coboundary_matrix(self, k: int) -> list[int]:
        """Rows over (k+1)-simplices as bitmasks over k-simplices."""
        col = self.index(k)
        rows = []
        for s in self.simplices(k + 1):
            bits = 0
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                bits |= 1 << col[face]
            rows.append(bits)
        return rows


@dataclass(frozen=True)
class Gf2Cochain:
    """A mod-2 cochain given by its degree and support."""

    degree: int
    support: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for s in self.support:
            if len(s) != self.degree + 1:
                raise ValueError(f"support simplex {s} has wrong degree")

    def value(self, simplex: tuple) -> int:
        return 1 if simplex in self.support else 0

    def is_zero(self) -> bool:
        return not self.support

    def __xor__(self, other: "Gf2Cochain") -> "Gf2Cochain":
        if other.degree != self.degree:
            raise ValueError("cochain degrees differ")
        return Gf2Cochain(self.degree, self.support ^ other.support)


@dataclass(frozen=True)
class QuotientMap:
    """A 2-to-1 simplicial covering with its deck involution."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: dict
    deck: dict


@dataclass(frozen=True)
class ProductComplex:
    """Staircase triangulation of a product with its two projections."""

    complex: SimplicialComplex
    left: dict
    right: dict


def build_complex(facets) -> SimplicialComplex:
    """Close the given facets downward into a simplicial complex."""
    facets = list(facets)
    if not facets:
        raise ValueError("empty facet list")
    by_dim: dict[int, set] = {}
    for f in facets:
        if len(set(f)) != len(f):
            raise ValueError(f"facet {f} repeats a vertex")
        s = tuple(sorted(f))
        for r in range(1, len(s) + 1):
            for face in itertools.combinations(s, r):
                by_dim.setdefault(r - 1, set()).add(face)
    return SimplicialComplex({k: sorted(v) for k, v in by_dim.items()})


def _bits(K: SimplicialComplex, c: Gf2Cochain) -> int:
    idx = K.index(c.degree)
    out = 0
    for s in c.support:
        if s not in idx:
            raise ValueError(f"simplex {s} not in complex")
        out |= 1 << idx[s]
    return out


def _cochain(K: SimplicialComplex, k: int, bits: int) -> Gf2Cochain:
    simp = K.simplices(k)
    return Gf2Cochain(k, frozenset(simp[i] for i in range(len(simp))
                                   if (bits >> i) & 1))


def coboundary(K: SimplicialComplex, c: Gf2Cochain) -> Gf2Cochain:
    """Mod-2 coboundary of c."""
    rows = K.coboundary_matrix(c.degree)
    cb = _bits(K, c)
    out = 0
    for i, r in enumerate(rows):
        if parity(r & cb):
            out |= 1 << i
    return _cochain(K, c.degree + 1, out)


def is_cocycle(K: SimplicialComplex, c: Gf2Cochain) -> bool:
    return coboundary(K, c).is_zero()


def cohomology_basis(K: SimplicialComplex, k: int):
    """Mod-2 cohomology in degree k.

    Returns (betti, representatives): the dimension of H^k and a list of
    representative cocycles whose classes form a basis.
    """
    if k < 0 or k > K.dim:
        return 0, []
    nk = len(K.simplices(k))
    cocycles = gf2_nullspace(K.coboundary_matrix(k), nk)
    if k == 0:
        cob: list[int] = []
    else:
        # image of the previous coboundary: columns of its matrix
        below = K.coboundary_matrix(k - 1)
        nprev = len(K.simplices(k - 1))
        cob = [0] * nprev
        for t_i, r in enumerate(below):
            for s_i in range(nprev):
                if (r >> s_i) & 1:
                    cob[s_i] |= 1 << t_i
    pivots, _ = gf2_rref(cob)
    reps = []
    span = dict(pivots)
    for z in cocycles:
        v = z
        changed = True
        while changed:
            changed = False
            for p, r in span.items():
                if (v >> p) & 1:
                    v ^= r
                    changed = True
        if v:
            span[v.bit_length() - 1] = v
            reps.append(_cochain(K, k, z))
    return len(reps), reps


def cup_product(K: SimplicialComplex, a: Gf2Cochain, b: Gf2Cochain) -> Gf2Cochain:
    """Cochain-level cup product in the fixed vertex order.

    On a (p+q)-simplex the value is a(front p-face) * b(back q-face).
    If p+q exceeds dim K the result is the zero cochain of that degree.
    """
    p, q = a.degree, b.degree
    support = set()
    for s in K.simplices(p + q):
        if a.value(s[:p + 1]) and b.value(s[p:]):
            support.add(s)
    return Gf2Cochain(p + q, frozenset(support))


def solve_coboundary(K: SimplicialComplex, c: Gf2Cochain):
    """Find u with delta(u) = c, or an exact obstruction.

    Returns (primitive, None) when solvable.  Otherwise returns
    (None, obstruction) where obstruction is a set of degree-k simplices:
    the corresponding sum of coboundary rows vanishes while the sum of
    c-values over it is 1, so no primitive can exist.
    """
    k = c.degree
    if k == 0:
        if c.is_zero():
            return Gf2Cochain(-1, frozenset()), None
        # a single support vertex certifies: 0-coboundaries vanish there
        return None, frozenset([next(iter(sorted(c.support)))])
    nvars = len(K.simplices(k - 1))
    u, cert = gf2_solve(K.coboundary_matrix(k - 1), _bits(K, c), nvars)
    if u is None:
        simp = K.simplices(k)
        return None, frozenset(simp[i] for i in range(len(simp)) if (cert >> i) & 1)
    return _cochain(K, k - 1, u), None


def is_coboundary(K: SimplicialComplex, c: Gf2Cochain):
    """Whether c bounds; returns (flag, primitive-or-None)."""
    if not is_cocycle(K, c):
        raise ValueError("cochain is not a cocycle")
    if c.degree == 0:
        return (True, None) if c.is_zero() else (False, None)
    u, _ = solve_coboundary(K, c)
    return (u is not None), u


def restrict_cochain(K: SimplicialComplex, A: SimplicialComplex,
                     c: Gf2Cochain) -> Gf2Cochain:
    """Restriction of c to the subcomplex A of K."""
    for k in range(A.dim + 1):
        for s in A.simplices(k):
            if not K.has_simplex(s):
                raise ValueError(f"{s} not a simplex of the ambient complex")
    keep = frozenset(s for s in c.support if A.has_simplex(s))
    return Gf2Cochain(c.degree, keep)


def pullback_cochain(vertex_map: dict, source: SimplicialComplex,
                     c: Gf2Cochain) -> Gf2Cochain:
    """Pullback along a simplicial map given on vertices.

    Simplices collapsed by the map contribute zero; this is a chain map
    over GF(2) for any simplicial map.
    """
    k = c.degree
    support = set()
    for s in source.simplices(k):
        img = tuple(sorted(vertex_map[v] for v in s))
        if len(set(img)) == k + 1 and c.value(img):
            support.add(s)
    return Gf2Cochain(k, frozenset(support))


def product_complex(K: SimplicialComplex, L: SimplicialComplex) -> ProductComplex:
    """Staircase triangulation of |K| x |L| on the product vertex order."""
    facets = []
    for kf in _maximal(K):
        for lf in _maximal(L):
            p, q = len(kf) - 1, len(lf) - 1
            for rights in itertools.combinations(range(p + q), p):
                path = [(kf[0], lf[0])]
                i = j = 0
                for step in range(p + q):
                    if step in rights:
                        i += 1
                    else:
                        j += 1
                    path.append((kf[i], lf[j]))
                facets.append(tuple(path))
    prod = build_complex(facets)
    left = {v: v[0] for v in prod.vertices}
    right = {v: v[1] for v in prod.vertices}
    return ProductComplex(prod, left, right)


def _maximal(K: SimplicialComplex) -> list[tuple]:
    top = []
    seen: set = set()
    for k in range(K.dim, -1, -1):
        for s in K.simplices(k):
            if not any(frozenset(s) < t for t in seen):
                top.append(s)
                seen.add(frozenset(s))
    return sorted(top, key=lambda s: (len(s), s))


def projective_space(n: int):
    """Triangulated RP^n with its double cover by a sphere.

    The sphere is the barycentric subdivision of the boundary of the
    (n+1)-cross-polytope; the quotient identifies antipodes.  Returns
    (rpn, QuotientMap).  Desk scale: n at most 4.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > 4:
        raise ValueError(f"n={n} exceeds the configured resource budget (max 4)")
    axes = list(range(1, n + 2))
    # vertices of the subdivision: signed nonempty subsets of the axes
    cells = []
    for r in range(1, n + 2):
        for sub in itertools.combinations(axes, r):
            for signs in itertools.product((1, -1), repeat=r):
                cells.append(tuple(sorted(s * a for s, a in zip(signs, sub))))
    cells.sort(key=lambda c: (len(c), c))
    cell_id = {c: i for i, c in enumerate(cells)}

    def negate(c: tuple) -> tuple:
        return tuple(sorted(-x for x in c))

    sphere_facets = []
    for signs in itertools.product((1, -1), repeat=n + 1):
        top = [s * a for s, a in zip(signs, axes)]
        for order in itertools.permutations(top):
            chain = [tuple(sorted(order[:r])) for r in range(1, n + 2)]
            sphere_facets.append(tuple(sorted(cell_id[c] for c in chain)))
    sphere = build_complex(sphere_facets)

    deck = {cell_id[c]: cell_id[negate(c)] for c in cells}
    reps = sorted({min(c, negate(c)) for c in cells}, key=lambda c: (len(c), c))
    rep_id = {c: i for i, c in enumerate(reps)}
    vmap = {cell_id[c]: rep_id[min(c, negate(c))] for c in cells}
    rp_facets = {tuple(sorted(vmap[v] for v in f)) for f in sphere_facets}
    for f in rp_facets:
        if len(set(f)) != n + 1:
            raise AssertionError("quotient collapsed a facet")
    rpn = build_complex(sorted(rp_facets))
    return rpn, QuotientMap(sphere, rpn, vmap, deck)


def complex_to_dict(K: SimplicialComplex) -> dict:
    return {"facets": [list(f) for f in _maximal(K)]}


def complex_from_dict(d: dict) -> SimplicialComplex:
    if "facets" not in d:
        raise ValueError("complex JSON needs a 'facets' key")
    return build_complex([tuple(f) for f in d["facets"]])


def cochain_to_dict(c: Gf2Cochain) -> dict:
    return {"degree": c.degree, "support": sorted(list(s) for s in c.support)}


def cochain_from_dict(d: dict) -> Gf2Cochain:
    return Gf2Cochain(d["degree"], frozenset(tuple(s) for s in d["support"]))

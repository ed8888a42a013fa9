"""Exact rational linear programming with verifiable certificates.

All arithmetic is over fractions.Fraction.  Feasibility and optimization
use a dense tableau simplex with Bland's anti-cycling rule, so identical
inputs always produce identical certificates.  Infeasible systems come
with Farkas multipliers that can be re-checked by substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "LinearSystem",
    "SeparationError",
    "lp_feasible",
    "lp_optimize",
    "verify_feasible_point",
    "verify_infeasibility",
    "in_hull",
    "separate",
    "halfspace_depth",
]

REL_LE, REL_GE, REL_EQ = "<=", ">=", "=="
_RELS = (REL_LE, REL_GE, REL_EQ)


@dataclass(frozen=True)
class LinearSystem:
    """Rows a.x REL b over n_vars variables.

    rows: list of (coeffs, rel, rhs) with rel one of "<=", ">=", "==".
    nonneg: per-variable flags; True restricts that variable to >= 0.
    """

    n_vars: int
    rows: tuple
    nonneg: tuple

    @staticmethod
    def build(n_vars, rows, nonneg=None):
        if nonneg is None:
            nonneg = (False,) * n_vars
        nonneg = tuple(bool(f) for f in nonneg)
        if len(nonneg) != n_vars:
            raise ValueError("nonneg flags do not match variable count")
        norm = []
        for coeffs, rel, rhs in rows:
            if rel not in _RELS:
                raise ValueError(f"unknown relation {rel!r}")
            coeffs = tuple(Fraction(c) for c in coeffs)
            if len(coeffs) != n_vars:
                raise ValueError("row length does not match variable count")
            norm.append((coeffs, rel, Fraction(rhs)))
        return LinearSystem(n_vars, tuple(norm), nonneg)


class SeparationError(ValueError):
    """Hulls overlap; .point carries an exact common point."""

    def __init__(self, point):
        super().__init__("hulls intersect")
        self.point = tuple(point)


def _standardize(system: LinearSystem):
    """Equality form A z = b with z >= 0; returns (A, b, signs, colmap).

    colmap[j] = (plus_col, minus_col_or_None) for original variable j.
    signs[i] is the factor applied to row i to make b nonnegative.
    """
    colmap = []
    ncols = 0
    for j in range(system.n_vars):
        if system.nonneg[j]:
            colmap.append((ncols, None))
            ncols += 1
        else:
            colmap.append((ncols, ncols + 1))
            ncols += 2
    slack_of_row = {}
    for i, (_, rel, _) in enumerate(system.rows):
        if rel != REL_EQ:
            slack_of_row[i] = ncols
            ncols += 1
    A, b, signs = [], [], []
    for i, (coeffs, rel, rhs) in enumerate(system.rows):
        row = [Fraction(0)] * ncols
        for j, c in enumerate(coeffs):
            p, m = colmap[j]
            row[p] += c
            if m is not None:
                row[m] -= c
        if rel == REL_LE:
            row[slack_of_row[i]] = Fraction(1)
        elif rel == REL_GE:
            row[slack_of_row[i]] = Fraction(-1)
        s = 1
        if rhs < 0:
            s = -1
            row = [-c for c in row]
            rhs = -rhs
        A.append(row)
        b.append(Fraction(rhs))
        signs.append(s)
    return A, b, signs, colmap, ncols


def _pivot(tab, cost, basis, r, j):
    piv = tab[r][j]
    tab[r] = [c / piv for c in tab[r]]
    for i in range(len(tab)):
        if i != r and tab[i][j]:
            f = tab[i][j]
            tab[i] = [a - f * b for a, b in zip(tab[i], tab[r])]
    if cost[j]:
        f = cost[j]
        for k in range(len(cost)):
            cost[k] -= f * tab[r][k]
    basis[r] = j


def _simplex(tab, cost, basis):
    """Minimize; Bland's rule.  Returns 'optimal' or 'unbounded'."""
    ncols = len(cost) - 1
    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(tab):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(tab, cost, basis, best[1], enter)


def _phase_one(system: LinearSystem):
    A, b, signs, colmap, ncols = _standardize(system)
    m = len(A)
    tab = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(A[i] + art + [b[i]])
    total = ncols + m + 1
    cost = [Fraction(0)] * total
    for i in range(m):
        for k in range(total):
            cost[k] -= tab[i][k]
        cost[ncols + i] += Fraction(1)
    basis = [ncols + i for i in range(m)]
    _simplex(tab, cost, basis)
    obj = -cost[-1]
    return tab, cost, basis, obj, ncols, m, signs, colmap


def _read_point(system, tab, basis, colmap):
    vals = {}
    for i, bcol in enumerate(basis):
        vals[bcol] = tab[i][-1]
    point = []
    for j in range(system.n_vars):
        p, mcol = colmap[j]
        x = vals.get(p, Fraction(0))
        if mcol is not None:
            x -= vals.get(mcol, Fraction(0))
        point.append(x)
    return tuple(point)


def lp_feasible(system: LinearSystem):
    """Exact feasibility test.

    Returns (True, point) or (False, multipliers).  The multipliers u
    satisfy: u_i >= 0 on "<=" rows, u_i <= 0 on ">=" rows, the combined
    coefficient sum(u_i * a_i) vanishes on free variables and is >= 0 on
    nonnegative ones, while sum(u_i * b_i) < 0 -- an exact contradiction.
    """
    tab, cost, basis, obj, ncols, m, signs, colmap = _phase_one(system)
    if obj == 0:
        # drive leftover artificials out where possible
        for i in range(m):
            if basis[i] >= ncols:
                j = next((j for j in range(ncols) if tab[i][j]), None)
                if j is not None:
                    _pivot(tab, cost, basis, i, j)
        point = _read_point(system, tab, basis, colmap)
        assert verify_feasible_point(system, point)
        return True, point
    mult = []
    for i in range(m):
        y_i = Fraction(1) - cost[ncols + i]
        mult.append(-y_i * signs[i])
    mult = tuple(mult)
    assert verify_infeasibility(system, mult)
    return False, mult


def verify_feasible_point(system: LinearSystem, point) -> bool:
    """Substitute a point into every row; exact."""
    if len(point) != system.n_vars:
        return False
    for j in range(system.n_vars):
        if system.nonneg[j] and point[j] < 0:
            return False
    for coeffs, rel, rhs in system.rows:
        lhs = sum(c * x for c, x in zip(coeffs, point))
        if rel == REL_LE and lhs > rhs:
            return False
        if rel == REL_GE and lhs < rhs:
            return False
        if rel == REL_EQ and lhs != rhs:
            return False
    return True


def verify_infeasibility(system: LinearSystem, mult) -> bool:
    """Check Farkas multipliers by substitution; exact."""
    if len(mult) != len(system.rows):
        return False
    for u, (_, rel, _) in zip(mult, system.rows):
        if rel == REL_LE and u < 0:
            return False
        if rel == REL_GE and u > 0:
            return False
    combo = [Fraction(0)] * system.n_vars
    beta = Fraction(0)
    for u, (coeffs, _, rhs) in zip(mult, system.rows):
        for j, c in enumerate(coeffs):
            combo[j] += u * c
        beta += u * rhs
    for j in range(system.n_vars):
        if system.nonneg[j]:
            if combo[j] < 0:
                return False
        elif combo[j] != 0:
            return False
    return beta < 0


def lp_optimize(system: LinearSystem, objective, sense="max"):
    """Optimize a linear objective over the system.

    Returns (status, point, value) with status in {"optimal",
    "infeasible", "unbounded"}; point/value are None unless optimal.
    """
    objective = [Fraction(c) for c in objective]
    if len(objective) != system.n_vars:
        raise ValueError("objective length does not match variable count")
    tab, cost, basis, obj, ncols, m, signs, colmap = _phase_one(system)
    if obj != 0:
        return "infeasible", None, None
    for i in range(m):
        if basis[i] >= ncols:
            j = next((j for j in range(ncols) if tab[i][j]), None)
            if j is not None:
                _pivot(tab, cost, basis, i, j)
    # freeze artificials at zero by removing their columns
    keep = list(range(ncols)) + [ncols + m]
    tab = [[row[k] for k in keep] for row in tab]
    drop = [i for i in range(m) if basis[i] >= ncols]
    for i in reversed(drop):
        # redundant all-zero row
        del tab[i]
        del basis[i]
    sign = -1 if sense == "max" else 1
    cost2 = [Fraction(0)] * (ncols + 1)
    for j in range(system.n_vars):
        p, mcol = colmap[j]
        cost2[p] += sign * objective[j]
        if mcol is not None:
            cost2[mcol] -= sign * objective[j]
    for i, bcol in enumerate(basis):
        if cost2[bcol]:
            f = cost2[bcol]
            for k in range(ncols + 1):
                cost2[k] -= f * tab[i][k]
    status = _simplex(tab, cost2, basis)
    if status == "unbounded":
        return "unbounded", None, None
    point = _read_point(system, tab, basis, colmap)
    value = sum(c * x for c, x in zip(objective, point))
    return "optimal", point, value


def in_hull(q, points):
    """Exact convex-hull membership.

    Returns (True, weights) giving q as a convex combination, or
    (False, functional) with functional = (coeffs, offset) defining
    f(x) = coeffs.x + offset, strictly negative on hull(points) and
    strictly positive at q.
    """
    q = tuple(Fraction(c) for c in q)
    points = [tuple(Fraction(c) for c in p) for p in points]
    if not points:
        raise ValueError("empty point list")
    d = len(q)
    for p in points:
        if len(p) != d:
            raise ValueError("dimension mismatch")
    n = len(points)
    rows = []
    for t in range(d):
        rows.append(([p[t] for p in points], REL_EQ, q[t]))
    rows.append(([1] * n, REL_EQ, 1))
    system = LinearSystem.build(n, rows, nonneg=[True] * n)
    ok, cert = lp_feasible(system)
    if ok:
        return True, cert
    a = list(cert[:d])
    off = cert[d]
    # Farkas gives a.p + off >= 0 on points, a.q + off < 0; flip and
    # re-center so both sides are strict
    coeffs = [-c for c in a]
    offset = -off
    fq = sum(c * x for c, x in zip(coeffs, q)) + offset
    offset -= fq / 2
    for p in points:
        assert sum(c * x for c, x in zip(coeffs, p)) + offset < 0
    assert sum(c * x for c, x in zip(coeffs, q)) + offset > 0
    return False, (tuple(coeffs), offset)


def separate(k_points, q_points, basepoint=None):
    """Affine functional z with z < 0 on hull(K), z > 0 on hull(Q),
    normalized to z(basepoint) = -1 at a designated point of K.

    Returns (coeffs, offset, margin) with margin > 0.  Raises
    SeparationError carrying a common point when the hulls intersect.
    """
    k_points = [tuple(Fraction(c) for c in p) for p in k_points]
    q_points = [tuple(Fraction(c) for c in p) for p in q_points]
    if not k_points or not q_points:
        raise ValueError("empty point list")
    d = len(k_points[0])
    if basepoint is None:
        basepoint = k_points[0]
    basepoint = tuple(Fraction(c) for c in basepoint)
    if basepoint not in k_points:
        raise ValueError("basepoint must be one of the K points")
    # variables: a (d), b, margin
    nv = d + 2
    rows = []
    for p in k_points:
        rows.append((list(p) + [1, 1], REL_LE, 0))
    for p in q_points:
        rows.append((list(p) + [1, -1], REL_GE, 0))
    rows.append((list(basepoint) + [1, 0], REL_EQ, -1))
    system = LinearSystem.build(nv, rows)
    status, point, value = lp_optimize(system, [0] * (nv - 1) + [1], "max")
    if status == "optimal" and value > 0:
        coeffs = point[:d]
        offset = point[d]
        return tuple(coeffs), offset, value
    # hulls must intersect: exhibit a common point
    nk, nq = len(k_points), len(q_points)
    rows = []
    for t in range(d):
        rows.append(([p[t] for p in k_points] + [-p[t] for p in q_points],
                     REL_EQ, 0))
    rows.append(([1] * nk + [0] * nq, REL_EQ, 1))
    rows.append(([0] * nk + [1] * nq, REL_EQ, 1))
    ok, cert = lp_feasible(LinearSystem.build(nk + nq, rows,
                                              nonneg=[True] * (nk + nq)))
    if not ok:
        raise AssertionError("separation failed but hulls appear disjoint")
    common = tuple(sum(w * p[t] for w, p in zip(cert[:nk], k_points))
                   for t in range(d))
    raise SeparationError(common)


def _primitive(vec):
    """Scale a rational vector to a primitive integer vector."""
    from math import gcd
    denom = 1
    for c in vec:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in vec]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    if g:
        ints = [c // g for c in ints]
    return tuple(ints)


def _angle_sort(dirs):
    """Sort primitive 2D integer directions counterclockwise from +x."""
    import functools

    def half(e):
        return 0 if (e[1] > 0 or (e[1] == 0 and e[0] > 0)) else 1

    def cmp(e1, e2):
        h1, h2 = half(e1), half(e2)
        if h1 != h2:
            return -1 if h1 < h2 else 1
        cross = e1[0] * e2[1] - e1[1] * e2[0]
        return 0 if cross == 0 else (-1 if cross > 0 else 1)

    return sorted(dirs, key=functools.cmp_to_key(cmp))


def _open_cell_dirs_2d(vecs):
    """One direction inside each open cell of the line arrangement
    normal to the given nonzero 2D vectors."""
    events = set()
    for v in vecs:
        e = _primitive((-v[1], v[0]))
        events.add(e)
        events.add((-e[0], -e[1]))
    events = _angle_sort(events)
    if len(events) == 2:
        e = events[0]
        return [(-e[1], e[0]), (e[1], -e[0])]
    out = []
    for i in range(len(events)):
        e1 = events[i]
        e2 = events[(i + 1) % len(events)]
        out.append((e1[0] + e2[0], e1[1] + e2[1]))
    return out


def halfspace_depth(q, points) -> int:
    """Minimum number of the points in a closed halfspace containing q.

    Exact enumeration over the critical direction arrangement; supports
    dimension 1 to 3 and at most 16 points.
    """
    q = tuple(Fraction(c) for c in q)
    points = [tuple(Fraction(c) for c in p) for p in points]
    if len(points) > 16:
        raise ValueError("at most 16 points supported")
    d = len(q)
    if d < 1 or d > 3:
        raise ValueError("dimension must be 1, 2, or 3")
    vecs = [tuple(a - b for a, b in zip(p, q)) for p in points]
    zeros = sum(1 for v in vecs if not any(v))
    live = [v for v in vecs if any(v)]
    if not live:
        return len(points)

    def count(sign_of):
        return zeros + sum(1 for v in live if sign_of(v) > 0)

    if d == 1:
        return min(count(lambda v: v[0]), count(lambda v: -v[0]))
    if d == 2:
        best = None
        for u in _open_cell_dirs_2d(live):
            c = count(lambda v: u[0] * v[0] + u[1] * v[1])
            best = c if best is None else min(best, c)
        return best

    def cross(a, b):
        return (a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0])

    def dot(a, b):
        return sum(x * y for x, y in zip(a, b))

    vertices = set()
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            u0 = cross(live[i], live[j])
            if any(u0):
                p = _primitive(tuple(Fraction(c) for c in u0))
                vertices.add(p)
                vertices.add(tuple(-c for c in p))
    if not vertices:
        # all normals parallel: two halfspace cells
        v = live[0]
        return min(count(lambda w, v=v: dot(v, w)),
                   count(lambda w, v=v: -dot(v, w)))
    best = None
    for u0 in sorted(vertices):
        ortho = [v for v in live if dot(u0, v) == 0]
        axis = next(e for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
                    if any(cross(u0, e)))
        b1 = cross(u0, axis)
        b2 = cross(u0, b1)
        if not ortho:
            planar = [(Fraction(1), Fraction(0))]
        else:
            planar = [(dot(b1, v), dot(b2, v)) for v in ortho]
        for w in _open_cell_dirs_2d(planar) if ortho else [(1, 0), (-1, 0), (0, 1), (0, -1)]:
            def sign_of(v, u0=u0, w=w, b1=b1, b2=b2):
                s = dot(u0, v)
                if s:
                    return s
                return w[0] * dot(b1, v) + w[1] * dot(b2, v)
            c = count(sign_of)
            best = c if best is None else min(best, c)
    return best

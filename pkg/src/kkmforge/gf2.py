"""GF(2) linear algebra on bit-packed vectors (Python ints as bitsets)."""

from __future__ import annotations

__all__ = [
    "gf2_rank",
    "gf2_rref",
    "gf2_solve",
    "gf2_nullspace",
    "gf2_in_span",
    "parity",
]


def parity(x: int) -> int:
    """Parity of the popcount of x."""
    return bin(x).count("1") & 1


def gf2_rank(vectors: list[int]) -> int:
    """Rank of the span of the given bit vectors."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def gf2_rref(rows: list[int], tags: list[int] | None = None):
    """Full row reduction.

    Returns (pivot_rows, pivot_tags) where pivot_rows is a dict
    pivot_bit -> reduced row and pivot_tags the matching combination
    of input rows (bitmask over input row indices) for each pivot.
    If tags is None, input row i gets tag 1 << i.
    """
    if tags is None:
        tags = [1 << i for i in range(len(rows))]
    pivot_rows: dict[int, int] = {}
    pivot_tags: dict[int, int] = {}
    for r, t in zip(rows, tags):
        for p, pr in pivot_rows.items():
            if (r >> p) & 1:
                r ^= pr
                t ^= pivot_tags[p]
        if r == 0:
            continue
        p = r.bit_length() - 1
        for q in list(pivot_rows):
            if (pivot_rows[q] >> p) & 1:
                pivot_rows[q] ^= r
                pivot_tags[q] ^= t
        pivot_rows[p] = r
        pivot_tags[p] = t
    return pivot_rows, pivot_tags


def gf2_solve(rows: list[int], rhs: int, ncols: int):
    """Solve M u = c for u over GF(2).

    rows are bitmasks over ncols columns; rhs is a bitmask over rows.
    Returns (u, None) on success, with free coordinates set to zero,
    or (None, y) where y is a bitmask over row indices certifying
    inconsistency: the y-combination of rows is zero but hits rhs oddly.
    """
    pivot_rows: dict[int, int] = {}
    pivot_rhs: dict[int, int] = {}
    pivot_tags: dict[int, int] = {}
    for i, r in enumerate(rows):
        b = (rhs >> i) & 1
        t = 1 << i
        for p, pr in pivot_rows.items():
            if (r >> p) & 1:
                r ^= pr
                b ^= pivot_rhs[p]
                t ^= pivot_tags[p]
        if r == 0:
            if b:
                return None, t
            continue
        p = r.bit_length() - 1
        for q in list(pivot_rows):
            if (pivot_rows[q] >> p) & 1:
                pivot_rows[q] ^= r
                pivot_rhs[q] ^= b
                pivot_tags[q] ^= t
        pivot_rows[p] = r
        pivot_rhs[p] = b
        pivot_tags[p] = t
    u = 0
    for p, b in pivot_rhs.items():
        if b:
            u |= 1 << p
    return u, None


def gf2_nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of {u : M u = 0}, M given by row bitmasks over ncols columns."""
    pivot_rows, _ = gf2_rref(rows)
    free = [j for j in range(ncols) if j not in pivot_rows]
    basis = []
    for f in free:
        u = 1 << f
        for p, r in pivot_rows.items():
            if (r >> f) & 1:
                u |= 1 << p
        basis.append(u)
    return basis


def gf2_in_span(vectors: list[int], v: int) -> bool:
    """Whether v lies in the span of the given vectors."""
    basis: list[int] = []
    for w in vectors:
        for b in basis:
            w = min(w, w ^ b)
        if w:
            basis.append(w)
            basis.sort(reverse=True)
    for b in basis:
        v = min(v, v ^ b)
    return v == 0

"""Cover checkers: multiplicity, fattening, covering witnesses, vanishing."""

from __future__ import annotations

from fractions import Fraction

import pytest

from kkmforge.bundles import hopf_cocycle
from kkmforge.complexes import (
    Gf2Cochain,
    build_complex,
    coboundary,
    cup_product,
    projective_space,
    restrict_cochain,
)
from kkmforge.covers import (
    CheckReport,
    cup_vanishing_check,
    fatten_cover,
    kkm_check,
    lebesgue_check,
    strengthened_kkm_check,
)
from kkmforge.grids import CircleGrid, GridCover, ProductGrid, SimplexGrid
from kkmforge.sections import DisjointFamily, sample_disjoint_families


def _slab_cells(grid: SimplexGrid, coord: int, lo, hi) -> set[int]:
    out = set()
    for cid in grid.cell_ids:
        box = grid.bounding_box(cid)
        if box[coord][0] >= lo and box[coord][1] <= hi:
            out.add(cid)
    return out


def _brick_cover(n: int = 4) -> GridCover:
    """Two rows of bricks on the square, offset half a brick."""
    seg = SimplexGrid(2, n)
    square = ProductGrid([seg, seg])
    half = n // 2
    rows = {
        "a1": (range(0, half), range(0, half)),
        "a2": (range(half, n), range(0, half)),
        "b1": (range(0, n // 4), range(half, n)),
        "b2": (range(n // 4, 3 * n // 4), range(half, n)),
        "b3": (range(3 * n // 4, n), range(half, n)),
    }
    sets = {label: {(i, j) for i in xs for j in ys}
            for label, (xs, ys) in rows.items()}
    return GridCover(square, sets)


def test_brick_corner_multiplicity_is_three():
    cover = _brick_cover()
    assert cover.covers_base()
    # bricks partition the cells, yet three closed bricks meet at corners
    assert max(cover.label_counts().values()) == 1
    assert cover.multiplicity() == 3


def test_vertex_star_multiplicity_at_barycenter():
    grid = SimplexGrid(3, 3)
    stars = {v: {cid for cid in grid.cell_ids
                 if grid.bounding_box(cid)[v][0] >= Fraction(1, 3)}
             for v in range(3)}
    cover = GridCover(grid, stars)
    assert cover.covers_base()
    assert cover.multiplicity() == 3


def test_fatten_two_arcs():
    grid = CircleGrid(12)
    cover = GridCover(grid, {"a": set(range(0, 7)), "b": set(range(5, 12))})
    assert cover.multiplicity() == 2
    fat = fatten_cover(cover, 2)
    assert fat.epsilon == 1
    # contains its closed set and dilates by at most one cell
    assert fat.contains("a", Fraction(1, 24))
    assert fat.contains("a", Fraction(23, 24))      # half a cell before 0
    assert not fat.contains("a", Fraction(21, 24))  # more than one cell away
    for j in range(48):
        u = Fraction(j, 48)
        count = fat.membership_count(u)
        assert 1 <= count <= 2


def test_fatten_single_set_whole_base():
    grid = SimplexGrid(2, 4)
    cover = GridCover(grid, {"all": set(grid.cell_ids)})
    fat = fatten_cover(cover, 1)
    for j in range(5):
        assert fat.contains("all", (Fraction(j, 4), Fraction(4 - j, 4)))
    assert fat.membership_count((Fraction(1, 3), Fraction(2, 3))) == 1


def test_fatten_three_arcs_without_triple_point():
    grid = CircleGrid(12)
    cover = GridCover(grid, {"a": set(range(0, 4)), "b": set(range(4, 8)),
                             "c": set(range(8, 12))})
    assert cover.multiplicity() == 2
    fat = fatten_cover(cover, 2)
    assert fat.certificates and all(eps > 0 for _, eps in fat.certificates)
    assert fat.epsilon == Fraction(1, 2)
    for j in range(60):
        u = Fraction(j, 60)
        assert 1 <= fat.membership_count(u) <= 2
    for label, cells in cover.sets.items():
        for cid in cells:
            mid = Fraction(2 * cid + 1, 24)
            assert fat.contains(label, mid)


def test_fatten_rejects_multiplicity_violation():
    grid = CircleGrid(6)
    cover = GridCover(grid, {lab: set(grid.cell_ids) for lab in "abc"})
    with pytest.raises(ValueError):
        fatten_cover(cover, 2)


def _half_cover(n: int = 4) -> GridCover:
    grid = SimplexGrid(3, n)
    left = _slab_cells(grid, 0, Fraction(1, 2), Fraction(1))
    right = _slab_cells(grid, 0, Fraction(0), Fraction(1, 2))
    return GridCover(grid, {"left": left, "right": right})


def test_kkm_halves_witness():
    cover = _half_cover()
    probes = sample_disjoint_families(3, 1, 5, seed=13)
    report = kkm_check(cover, d=1, n=2, probes=probes)
    assert report.verdict == "witness"
    assert report.witness["label"] == "right"
    assert len(report.witness["meets"]) == len(probes)
    assert report.params["multiplicity"] == 2


def test_kkm_vertex_stars_counterexample():
    grid = SimplexGrid(3, 3)
    stars = {v: {cid for cid in grid.cell_ids
                 if grid.bounding_box(cid)[v][0] >= Fraction(1, 3)}
             for v in range(3)}
    cover = GridCover(grid, stars)
    probes = [DisjointFamily.from_vertices(3, pair)
              for pair in [(0, 1), (0, 2), (1, 2)]]
    report = kkm_check(cover, d=1, n=2, probes=probes)
    assert report.verdict == "counterexample"
    assert report.params["hypothesis_holds"] is False
    # each star misses the opposite closed edge
    assert len(report.witness["missed_probe"]) == 3


def test_kkm_trivial_cover():
    grid = SimplexGrid(3, 2)
    cover = GridCover(grid, {"all": set(grid.cell_ids)})
    probes = sample_disjoint_families(3, 1, 2, seed=3)
    report = kkm_check(cover, d=1, n=2, probes=probes)
    assert report.verdict == "witness"


def test_kkm_validation():
    cover = _half_cover()
    probes = sample_disjoint_families(3, 1, 2, seed=1)
    with pytest.raises(ValueError):
        kkm_check(cover, d=2, n=2, probes=probes)
    with pytest.raises(ValueError):
        kkm_check(cover, d=1, n=2, probes=[])
    grid = cover.base
    partial = GridCover(grid, {"left": cover.sets["left"]})
    with pytest.raises(ValueError):
        kkm_check(partial, d=1, n=2, probes=probes)


def _factor_probes(seed: int):
    return [sample_disjoint_families(2, 1, 2, seed=seed),
            sample_disjoint_families(2, 1, 2, seed=seed + 1)]


def test_lebesgue_slab_witness():
    seg = SimplexGrid(2, 4)
    square = ProductGrid([seg, seg])
    bottom = {(i, j) for i in range(4) for j in range(2)}
    top = {(i, j) for i in range(4) for j in range(2, 4)}
    cover = GridCover(square, {"bottom": bottom, "top": top})
    assert cover.multiplicity() == 2
    report = lebesgue_check(cover, [(1, 1), (1, 1)], _factor_probes(21))
    assert report.verdict == "witness"
    assert report.witness["factor"] == 0  # full-width projection wins
    assert report.params["bound"] == 2


def test_lebesgue_brick_counterexample():
    cover = _brick_cover()
    report = lebesgue_check(cover, [(1, 1), (1, 1)], _factor_probes(33))
    assert report.verdict == "counterexample"
    assert report.params["hypothesis_holds"] is False
    assert report.params["multiplicity"] == 3


def test_lebesgue_single_set():
    seg = SimplexGrid(2, 2)
    square = ProductGrid([seg, seg])
    cover = GridCover(square, {"all": set(square.cell_ids)})
    report = lebesgue_check(cover, [(1, 1), (1, 1)], _factor_probes(5))
    assert report.verdict == "witness"


def test_strengthened_reduces_to_plain_at_r_zero():
    cover = _half_cover()
    probes = sample_disjoint_families(3, 1, 3, seed=17)
    report = strengthened_kkm_check(cover, d=1, n=2, r=0,
                                    probes_sets=probes,
                                    probes_complement=[])
    assert report.verdict == "witness"
    assert report.witness["branch"] == "set"


def test_strengthened_complement_branch():
    grid = SimplexGrid(3, 4)
    strip = _slab_cells(grid, 0, Fraction(1, 4), Fraction(3, 4))
    cover = GridCover(grid, {"strip": strip})
    probes = sample_disjoint_families(3, 1, 4, seed=29)
    report = strengthened_kkm_check(cover, d=1, n=1, r=1,
                                    probes_sets=probes,
                                    probes_complement=probes)
    assert report.verdict == "witness"
    assert report.witness["branch"] == "complement"
    cells = set(report.witness["cells"])
    # the witnessing component is the low side of the strip
    assert cells == _slab_cells(grid, 0, Fraction(0), Fraction(1, 4))


def test_strengthened_whole_simplex():
    grid = SimplexGrid(3, 2)
    cover = GridCover(grid, {"all": set(grid.cell_ids)})
    probes = sample_disjoint_families(3, 1, 2, seed=2)
    report = strengthened_kkm_check(cover, d=1, n=1, r=1,
                                    probes_sets=probes,
                                    probes_complement=probes)
    assert report.verdict == "witness"
    assert report.witness["branch"] == "set"


def _hexagon():
    return build_complex([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])


def test_cup_vanishing_positive_on_circle():
    K = _hexagon()
    arc1 = build_complex([(0, 1), (1, 2), (2, 3)])
    arc2 = build_complex([(3, 4), (4, 5), (0, 5)])
    gen = Gf2Cochain(1, frozenset([(0, 1)]))
    report = cup_vanishing_check(K, [arc1, arc2], [gen, gen])
    assert report.vanishes
    assert report.product.is_zero()
    assert report.primitive is not None
    assert coboundary(K, report.primitive) == report.product


def test_cup_vanishing_single_class():
    K = build_complex([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    u = Gf2Cochain(0, frozenset([(0,)]))
    e = coboundary(K, u)
    report = cup_vanishing_check(K, [K], [e])
    assert report.vanishes
    assert coboundary(K, report.primitive) == e


def test_cup_vanishing_detects_obstructed_restriction():
    rp2, cover = projective_space(2)
    e = hopf_cocycle(cover).edge_signs
    facets = rp2.facets()
    half1 = build_complex(facets[:len(facets) // 2])
    half2 = build_complex(facets[len(facets) // 2:])
    report = cup_vanishing_check(rp2, [half1, half2], [e, e])
    assert not report.vanishes
    i, k = report.failing
    assert report.obstruction is not None
    # re-verify the certificate: the obstruction is a set of k-simplices
    # whose coboundary rows cancel while the restricted class sums to 1
    A = (half1, half2)[i]
    local = restrict_cochain(rp2, A, (e, e)[k])
    total = frozenset()
    for s in report.obstruction:
        faces = frozenset(s[:i2] + s[i2 + 1:] for i2 in range(len(s)))
        total ^= faces
    # degree-1 simplices: their vertex-sum rows cancel mod 2
    assert not total
    assert sum(local.value(s) for s in report.obstruction) % 2 == 1


def test_cup_vanishing_validation():
    K = _hexagon()
    arc = build_complex([(0, 1), (1, 2)])
    gen = Gf2Cochain(1, frozenset([(0, 1)]))
    with pytest.raises(ValueError):
        cup_vanishing_check(K, [arc], [gen])
    filled = build_complex([(0, 1, 2)])
    with pytest.raises(ValueError):
        cup_vanishing_check(filled, [filled],
                            [Gf2Cochain(1, frozenset([(0, 1)]))])
    with pytest.raises(ValueError):
        cup_vanishing_check(K, [K, K, K], [gen, gen])


def test_check_report_validation():
    with pytest.raises(ValueError):
        CheckReport("maybe", None, {})

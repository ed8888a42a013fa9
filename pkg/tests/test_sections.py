"""Weight geometry, exact zero predicates, argmax refinement, gluing."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from kkmforge.grids import CircleGrid, GridCover
from kkmforge.ratlp import in_hull
from kkmforge.sections import (
    ArgmaxRefinement,
    DisjointFamily,
    GluingError,
    PartitionOfUnity,
    ProjectivePoint,
    SignedSquarePoint,
    WeightVector,
    family_section,
    glue_sections,
    line_to_weights,
    refine_by_argmax,
    sample_disjoint_families,
    section_value,
    two_arc_circle_demo,
    weights_to_sphere,
)


def test_weight_vector_validation():
    WeightVector((Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(ValueError):
        WeightVector((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        WeightVector((Fraction(3, 2), Fraction(-1, 2)))
    with pytest.raises(TypeError):
        WeightVector((0.5, 0.5))
    assert WeightVector.indicator(3, 1).support() == frozenset({1})
    assert WeightVector.uniform(4, [0, 2]).weights[2] == Fraction(1, 2)


def test_projective_canonical_form():
    assert ProjectivePoint.build((2, 4)).coords == (1, 2)
    assert ProjectivePoint.build((-1, 2, -3)).coords == (1, -2, 3)
    assert ProjectivePoint.build((Fraction(1, 2), Fraction(1, 3))).coords == (3, 2)
    assert ProjectivePoint.build((0, -5, 10)).coords == (0, 1, -2)
    assert ProjectivePoint.build((2, 4, 4)) == ProjectivePoint.build((1, 2, 2))
    with pytest.raises(ValueError):
        ProjectivePoint.build((0, 0))
    with pytest.raises(ValueError):
        ProjectivePoint((2, 4))


def test_line_to_weights():
    assert line_to_weights(ProjectivePoint.build((0, 1, 0))).weights == (
        Fraction(0), Fraction(1), Fraction(0))
    assert line_to_weights(ProjectivePoint.build((1, 1, 1))).weights == (
        Fraction(1, 3),) * 3
    assert line_to_weights(ProjectivePoint.build((1, 2, 2))).weights == (
        Fraction(1, 9), Fraction(4, 9), Fraction(4, 9))
    # representative independence comes from canonicalization
    assert line_to_weights(ProjectivePoint.build((-3, -6, -6))).weights == (
        Fraction(1, 9), Fraction(4, 9), Fraction(4, 9))


def test_sphere_lift_and_roundtrip():
    basis = weights_to_sphere(WeightVector.indicator(3, 2))
    assert basis.float_coords() == (0.0, 0.0, 1.0)
    lift = weights_to_sphere(WeightVector((Fraction(1, 4), Fraction(3, 4))))
    x, y = lift.float_coords()
    assert abs(x - 0.5) < 1e-12 and abs(y - math.sqrt(3) / 2) < 1e-12
    rng = random.Random(3)
    for _ in range(10):
        raw = [rng.randint(0, 5) for _ in range(4)]
        if not any(raw):
            continue
        t = WeightVector(tuple(Fraction(r, sum(raw)) for r in raw))
        assert line_to_weights(weights_to_sphere(t)) == t


def test_family_sorting_and_validation():
    fam = DisjointFamily(3, (WeightVector.uniform(3, [1, 2]),
                             WeightVector.indicator(3, 0)))
    assert fam.members[0].support() == frozenset({0})
    assert fam.codim == 1
    with pytest.raises(ValueError):
        DisjointFamily(3, (WeightVector.uniform(3, [0, 1]),
                           WeightVector.uniform(3, [1, 2])))
    with pytest.raises(ValueError):
        DisjointFamily(3, ())


def test_section_zero_predicate_examples():
    fam = DisjointFamily(3, (WeightVector.indicator(3, 0),
                             WeightVector.uniform(3, [1, 2])))
    # the uniform all-plus sphere point is a combination of the two lifts
    p = SignedSquarePoint((1, 1, 1), (Fraction(1, 3),) * 3)
    value, is_zero = family_section(fam, p)
    assert is_zero
    assert max(abs(v) for v in value) < 1e-9
    # flipping one sign inside the second support breaks membership
    q = SignedSquarePoint((1, 1, -1), (Fraction(1, 3),) * 3)
    value, is_zero = family_section(fam, q)
    assert not is_zero
    assert max(abs(v) for v in value) > 1e-6


def test_section_off_support_norm():
    fam = DisjointFamily(3, (WeightVector.indicator(3, 0),))
    value, is_zero = family_section(fam, ProjectivePoint.build((0, 1, 1)))
    assert not is_zero
    assert abs(sum(v * v for v in value) - 2.0) < 1e-9
    value, is_zero = family_section(fam, ProjectivePoint.build((1, 0, 0)))
    assert is_zero
    assert max(abs(v) for v in value) < 1e-12


def test_section_oddness():
    fam = DisjointFamily(4, (WeightVector.uniform(4, [0, 3]),
                             WeightVector.indicator(4, 1)))
    p = SignedSquarePoint((1, -1, 1, 0),
                          (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4),
                           Fraction(0)))
    plus = section_value(fam, p.float_coords())
    minus = section_value(fam, p.negate().float_coords())
    assert all(a == -b for a, b in zip(plus, minus))


def test_zero_set_scan_matches_hull():
    # squared-coordinate zero predicate against exact hull membership
    for fam in sample_disjoint_families(3, 1, 3, seed=5):
        hull = fam.member_points()
        n = 8
        for a in range(n + 1):
            for b in range(n + 1 - a):
                t = WeightVector((Fraction(a, n), Fraction(b, n),
                                  Fraction(n - a - b, n)))
                _, is_zero = family_section(fam, weights_to_sphere(t))
                assert is_zero == in_hull(t.weights, hull)[0]


def test_zero_set_scan_is_dense_on_segment():
    fam = DisjointFamily(3, (WeightVector.indicator(3, 0),
                             WeightVector.uniform(3, [1, 2])))
    hull = fam.member_points()
    n = 64
    zero_first_coords = []
    for a in range(n + 1):
        for b in range(n + 1 - a):
            t = WeightVector((Fraction(a, n), Fraction(b, n),
                              Fraction(n - a - b, n)))
            _, is_zero = family_section(fam, weights_to_sphere(t))
            if is_zero:
                assert in_hull(t.weights, hull)[0]
                zero_first_coords.append(a)
    # zeros run along the segment with gaps of one grid step in the
    # parametrizing coordinate, so no hull point is farther than 2/64
    zero_first_coords.sort()
    assert zero_first_coords[0] == 0 and zero_first_coords[-1] == n
    assert max(b - a for a, b in
               zip(zero_first_coords, zero_first_coords[1:])) <= 2


def test_sample_families_deterministic_and_complete():
    fams = sample_disjoint_families(3, 1, 4, seed=9)
    again = sample_disjoint_families(3, 1, 4, seed=9)
    assert fams == again
    vertex = [f for f in fams if all(len(m.support()) == 1
                                     for m in f.members)]
    supports = {frozenset(v for m in f.members for v in m.support())
                for f in vertex[:3]}
    assert supports == {frozenset({0, 1}), frozenset({0, 2}),
                        frozenset({1, 2})}
    assert all(f.codim == 1 for f in fams)
    singles = sample_disjoint_families(3, 2, 1, seed=0)
    assert [m.support() for f in singles[:3] for m in f.members] == [
        frozenset({0}), frozenset({1}), frozenset({2})]
    with pytest.raises(ValueError):
        sample_disjoint_families(3, 3, 1, seed=0)


def test_argmax_refinement_examples():
    r = refine_by_argmax((Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)))
    assert r.argmax == frozenset({0})
    assert r.contains({0}) and not r.contains({1})
    # pieces of different sizes may nest; only equal sizes are exclusive
    assert r.contains({0, 1}) and not r.contains({0, 2})
    r = refine_by_argmax((Fraction(2, 5), Fraction(2, 5), Fraction(1, 5)))
    assert r.argmax == frozenset({0, 1})
    assert r.contains({0, 1}) and not r.contains({0})
    with pytest.raises(ValueError):
        refine_by_argmax((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        refine_by_argmax((Fraction(1, 3),) * 3, bound=2)


def test_argmax_pieces_of_equal_size_are_disjoint():
    rng = random.Random(19)
    for _ in range(25):
        raw = [rng.randint(0, 6) for _ in range(4)]
        if not any(raw):
            continue
        vals = tuple(Fraction(r, sum(raw)) for r in raw)
        ref = refine_by_argmax(vals)
        assert ref.contains(ref.argmax)
        for k in range(1, 5):
            hits = [s for s in combinations(range(4), k) if ref.contains(s)]
            assert len(hits) <= 1


def test_partition_of_unity_validation():
    pou = PartitionOfUnity(("a",), lambda x: (Fraction(1),))
    assert pou.values(0) == (Fraction(1),)
    bad = PartitionOfUnity(("a", "b"),
                           lambda x: (Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        bad.values(0)


def test_glue_single_set_returns_local_value():
    grid = CircleGrid(4)
    cover = GridCover(grid, {"all": set(grid.cell_ids)})
    pou = PartitionOfUnity(("all",), lambda u: (Fraction(1),))
    local = {("all", 1): lambda u: (0.25,)}
    out = glue_sections(cover, local, pou, Fraction(1, 3), 1, (1,))
    assert out == ((0.25,),)


def test_glue_demo_collapse_points():
    demo = two_arc_circle_demo()
    only_a = demo.components(Fraction(1, 4))
    assert abs(only_a[0][0] - 1.0) < 1e-12 and only_a[1][0] == 0.0
    tie = demo.components(Fraction(1, 2))
    assert tie[0][0] == 0.0
    assert abs(tie[1][0] - math.cos(math.pi / 4)) < 1e-12


def test_glue_demo_nowhere_zero_sample():
    demo = two_arc_circle_demo()
    worst = min(demo.max_norm(Fraction(j, 500)) for j in range(500))
    assert worst > 1e-9


def test_glue_demo_piece_disjointness():
    demo = two_arc_circle_demo()
    for j in range(100):
        ref = demo.refinement(Fraction(j, 100))
        for k in (1, 2):
            hits = [s for s in combinations(range(2), k) if ref.contains(s)]
            assert len(hits) <= 1
        assert ref.contains(ref.argmax)


def test_glue_refuses_bad_hypotheses():
    grid = CircleGrid(4)
    triple = GridCover(grid, {lab: set(grid.cell_ids) for lab in "abc"})
    pou3 = PartitionOfUnity(("a", "b", "c"), lambda u: (Fraction(1, 3),) * 3)
    with pytest.raises(ValueError):
        glue_sections(triple, {}, pou3, Fraction(0), 2, (1, 1))
    # positive weight outside the labelled set
    half = GridCover(grid, {"s": {0, 1}})
    pou1 = PartitionOfUnity(("s",), lambda u: (Fraction(1),))
    local = {("s", 1): lambda u: (1.0,)}
    with pytest.raises(GluingError):
        glue_sections(half, local, pou1, Fraction(7, 8), 1, (1,))
    # local section vanishing where its bump weight is positive
    whole = GridCover(grid, {"s": set(grid.cell_ids)})
    vanishing = {("s", 1): lambda u: (math.sin(2 * math.pi * float(u)),)}
    with pytest.raises(GluingError):
        glue_sections(whole, vanishing, pou1, Fraction(0), 1, (1,))


def test_refinement_type_reexports():
    assert isinstance(refine_by_argmax((Fraction(1),)), ArgmaxRefinement)
